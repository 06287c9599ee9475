#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uhsec/bits.hpp"

namespace uhsec {

// Binary linear block codes with a syndrome -> minimum-weight coset leader
// table, covering both the reconciliation step (syndrome as the public
// message) and the wiretap transmission encoder.

namespace detail {

/// Reduced row echelon form over GF(2); returns the pivot columns.
inline std::vector<std::uint32_t> rref(std::vector<BitVec>& rows) {
  std::vector<std::uint32_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t ncols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && !rows[pivot].get(c)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
    pivots.push_back(std::uint32_t(c));
    ++r;
  }
  rows.resize(r);
  return pivots;
}

}  // namespace detail

class LinearCode {
public:
  std::uint32_t n = 0;       // block length
  std::uint32_t k = 0;       // dimension
  std::vector<BitVec> G;     // k rows of length n
  std::vector<BitVec> H;     // n-k rows of length n
  std::string name;

  static constexpr std::uint32_t kMaxTableBits = 24;

  LinearCode() = default;

  LinearCode(std::vector<BitVec> g, std::vector<BitVec> h, std::string label = "")
      : G(std::move(g)), H(std::move(h)), name(std::move(label)) {
    if (G.empty()) throw std::invalid_argument("LinearCode: empty generator");
    n = std::uint32_t(G[0].size());
    k = std::uint32_t(G.size());
    for (const auto& row : G)
      if (row.size() != n) throw std::invalid_argument("LinearCode: ragged generator");
    if (H.size() != n - k) throw std::invalid_argument("LinearCode: H must have n-k rows");
    for (const auto& row : H)
      if (row.size() != n) throw std::invalid_argument("LinearCode: ragged parity check");
    for (const auto& g_row : G)
      for (const auto& h_row : H)
        if (dot(g_row, h_row))
          throw std::invalid_argument("LinearCode: G H^T != 0");
    build_unencoder();
    if (n <= kMaxTableBits) build_coset_table();
  }

  static LinearCode repetition(std::uint32_t n) {
    if (n < 1) throw std::invalid_argument("repetition: n >= 1");
    std::vector<BitVec> g(1, BitVec(n));
    for (std::uint32_t j = 0; j < n; ++j) g[0].set(j, true);
    std::vector<BitVec> h;
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
      BitVec row(n);
      row.set(0, true);
      row.set(i + 1, true);
      h.push_back(row);
    }
    return LinearCode(std::move(g), std::move(h), "repetition" + std::to_string(n));
  }

  static LinearCode hamming74() {
    // systematic [I | P] with H = [P^T | I]
    const int P[4][3] = {{1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    std::vector<BitVec> g(4, BitVec(7)), h(3, BitVec(7));
    for (std::size_t i = 0; i < 4; ++i) {
      g[i].set(i, true);
      for (std::size_t j = 0; j < 3; ++j) g[i].set(4 + j, P[i][j]);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 4; ++j) h[i].set(j, P[j][i]);
      h[i].set(4 + i, true);
    }
    return LinearCode(std::move(g), std::move(h), "hamming74");
  }

  /// Each of `bits` message bits repeated `copies` times: the (bits*copies,
  /// bits) code obtained by interleaving repetition blocks.
  static LinearCode bitwise_repetition(std::uint32_t bits, std::uint32_t copies) {
    if (bits < 1 || copies < 1) throw std::invalid_argument("bitwise_repetition: bad shape");
    const std::uint32_t n = bits * copies;
    std::vector<BitVec> g(bits, BitVec(n)), h;
    for (std::uint32_t i = 0; i < bits; ++i)
      for (std::uint32_t c = 0; c < copies; ++c) g[i].set(i * copies + c, true);
    for (std::uint32_t i = 0; i < bits; ++i)
      for (std::uint32_t c = 0; c + 1 < copies; ++c) {
        BitVec row(n);
        row.set(i * copies, true);
        row.set(i * copies + c + 1, true);
        h.push_back(row);
      }
    return LinearCode(std::move(g), std::move(h),
                      "bitrep" + std::to_string(bits) + "x" + std::to_string(copies));
  }

  /// The trivial rate-1 code (no redundancy, empty syndrome).
  static LinearCode identity(std::uint32_t n) {
    LinearCode c = bitwise_repetition(n, 1);
    c.name = "identity" + std::to_string(n);
    return c;
  }

  /// Extended binary Golay (24,12): the cyclic (23,12) code generated by
  /// g(x) = x^11+x^10+x^6+x^5+x^4+x^2+1, systematized and extended by an
  /// overall parity bit.
  static LinearCode golay24() {
    const std::uint32_t gpoly = 0b110001110101;  // degree 11, weight 7
    std::vector<BitVec> rows(12, BitVec(23));
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = 0; j <= 11; ++j)
        if ((gpoly >> (11 - j)) & 1) rows[i].set(i + j, true);
    const auto pivots = detail::rref(rows);
    if (rows.size() != 12 || pivots.size() != 12)
      throw std::logic_error("golay24: construction lost rank");
    std::vector<BitVec> g(12, BitVec(24)), h(12, BitVec(24));
    for (std::size_t i = 0; i < 12; ++i) {
      bool parity = false;
      for (std::size_t j = 0; j < 23; ++j) {
        const bool b = rows[i].get(j);
        g[i].set(j, b);
        parity ^= b;
      }
      g[i].set(23, parity);
    }
    // g is [I | B] with B 12x12; h = [B^T | I]
    for (std::size_t i = 0; i < 12; ++i) {
      for (std::size_t j = 0; j < 12; ++j) h[i].set(j, g[j].get(12 + i));
      h[i].set(12 + i, true);
    }
    return LinearCode(std::move(g), std::move(h), "golay24");
  }

  static LinearCode from_files(const std::string& g_path, const std::string& h_path) {
    return LinearCode(load_bit_matrix(g_path), load_bit_matrix(h_path), "file");
  }

  /// Plain-text matrix: one row per line of 0/1 characters.
  static std::vector<BitVec> load_bit_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    std::vector<BitVec> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (line.empty()) continue;
      try {
        rows.push_back(BitVec::from_string(line));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": rows must be 0/1 strings");
      }
      if (rows.size() > 1 && rows.back().size() != rows.front().size())
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ragged row");
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty matrix");
    return rows;
  }

  static void save_bit_matrix(const std::string& path, const std::vector<BitVec>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path);
    for (const auto& r : rows) out << r.to_string() << "\n";
  }

  std::uint32_t redundancy() const { return n - k; }

  BitVec encode(const BitVec& u) const {
    if (u.size() != k) throw std::invalid_argument("encode: message must have k bits");
    BitVec c(n);
    for (std::uint32_t i = 0; i < k; ++i)
      if (u.get(i)) c ^= G[i];
    return c;
  }

  BitVec syndrome(const BitVec& y) const {
    if (y.size() != n) throw std::invalid_argument("syndrome: word must have n bits");
    BitVec s(n - k);
    for (std::uint32_t i = 0; i < n - k; ++i) s.set(i, dot(H[i], y));
    return s;
  }

  bool is_codeword(const BitVec& y) const { return !syndrome(y).any(); }

  const BitVec& leader_for_syndrome(const BitVec& s) const {
    require_table();
    return coset_table_[s.to_uint()];
  }

  /// Minimum-weight coset leader of y's coset: e_y = y + decode_nearest(y).
  BitVec coset_leader(const BitVec& y) const {
    require_table();
    return coset_table_[syndrome(y).to_uint()];
  }

  /// Nearest-codeword decoding via the coset leader table; ties are broken by
  /// the fixed table construction order.
  BitVec decode_nearest(const BitVec& y) const { return y ^ coset_leader(y); }

  /// Message recovery from a codeword.
  BitVec message_of(const BitVec& c) const {
    if (c.size() != n) throw std::invalid_argument("message_of: word must have n bits");
    BitVec sel(k);
    for (std::uint32_t i = 0; i < k; ++i) sel.set(i, c.get(info_cols_[i]));
    BitVec u(k);
    for (std::uint32_t i = 0; i < k; ++i) u.set(i, dot(unencode_[i], sel));
    return u;
  }

  bool has_table() const { return !coset_table_.empty(); }

  const std::vector<BitVec>& coset_table() const {
    require_table();
    return coset_table_;
  }

private:
  void require_table() const {
    if (coset_table_.empty())
      throw std::logic_error("LinearCode: no coset table (block length above " +
                             std::to_string(kMaxTableBits) + ")");
  }

  // Columns where G restricted to them is invertible, plus that inverse, so
  // that u = c[info_cols] * M solves u G = c for codewords c.
  void build_unencoder() {
    std::vector<BitVec> rows = G;
    std::vector<BitVec> ident(k, BitVec(k));
    for (std::uint32_t i = 0; i < k; ++i) ident[i].set(i, true);

    info_cols_.clear();
    std::size_t r = 0;
    for (std::uint32_t c = 0; c < n && r < k; ++c) {
      std::size_t pivot = r;
      while (pivot < rows.size() && !rows[pivot].get(c)) ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[r], rows[pivot]);
      std::swap(ident[r], ident[pivot]);
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (i != r && rows[i].get(c)) {
          rows[i] ^= rows[r];
          ident[i] ^= ident[r];
        }
      info_cols_.push_back(c);
      ++r;
    }
    if (r != k) throw std::invalid_argument("LinearCode: generator rows are dependent");
    // rows[:, info_cols] is now I, so ident holds (G[:, info_cols])^-1 by row;
    // transpose it so message_of can use dot products.
    unencode_.assign(k, BitVec(k));
    for (std::uint32_t i = 0; i < k; ++i)
      for (std::uint32_t j = 0; j < k; ++j)
        if (ident[j].get(i)) unencode_[i].set(j, true);
  }

  // Enumerates error patterns in increasing weight (lexicographic position
  // order within a weight class) and records the first pattern per syndrome.
  void build_coset_table() {
    const std::size_t count = std::size_t(1) << (n - k);
    coset_table_.assign(count, BitVec());
    std::vector<bool> seen(count, false);
    std::size_t filled = 0;

    for (std::uint32_t w = 0; w <= n && filled < count; ++w) {
      std::vector<std::uint32_t> pos(w);
      for (std::uint32_t i = 0; i < w; ++i) pos[i] = i;
      for (;;) {
        BitVec e(n);
        for (std::uint32_t p : pos) e.set(p, true);
        const std::uint64_t s = syndrome(e).to_uint();
        if (!seen[s]) {
          seen[s] = true;
          coset_table_[s] = e;
          if (++filled == count) break;
        }
        if (w == 0) break;
        // next combination
        int i = int(w) - 1;
        while (i >= 0 && pos[i] == n - w + i) --i;
        if (i < 0) break;
        ++pos[i];
        for (std::uint32_t j = std::uint32_t(i) + 1; j < w; ++j) pos[j] = pos[j - 1] + 1;
      }
    }
    if (filled != count) throw std::logic_error("LinearCode: coset table incomplete");
  }

  std::vector<BitVec> coset_table_;
  std::vector<std::uint32_t> info_cols_;
  std::vector<BitVec> unencode_;
};

}  // namespace uhsec
