#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uhsec {

/// Fixed-length vector over GF(2). Index 0 is the leftmost bit as written,
/// which for field elements is the most significant coefficient. Bits are
/// stored in significance order (word bit j carries weight 2^j) so arithmetic
/// can run on whole words.
class BitVec {
public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_(word_count(n), 0) {}

  static BitVec from_string(std::string_view s) {
    BitVec v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') {
        v.set(i, true);
      } else if (s[i] != '0') {
        throw std::invalid_argument("BitVec: expected a 0/1 string");
      }
    }
    return v;
  }

  static BitVec from_bits(std::initializer_list<int> bits) {
    BitVec v(bits.size());
    std::size_t i = 0;
    for (int b : bits) v.set(i++, b != 0);
    return v;
  }

  /// n-bit vector whose integer value (MSB first) is `value`.
  static BitVec from_uint(std::uint64_t value, std::size_t n) {
    if (n < 64 && n > 0 && (value >> n) != 0)
      throw std::invalid_argument("BitVec: value does not fit in n bits");
    if (n == 0 && value != 0)
      throw std::invalid_argument("BitVec: value does not fit in n bits");
    BitVec v(n);
    if (n > 0) v.w_[0] = value;
    return v;
  }

  /// Parses ceil(n/4) hex digits, MSB first.
  static BitVec from_hex(std::string_view hex, std::size_t n) {
    const std::size_t digits = (n + 3) / 4;
    if (hex.size() != digits)
      throw std::invalid_argument("BitVec: expected " + std::to_string(digits) +
                                  " hex digits");
    BitVec v(n);
    for (std::size_t d = 0; d < digits; ++d) {
      const char c = hex[d];
      std::uint64_t nib;
      if (c >= '0' && c <= '9') nib = std::uint64_t(c - '0');
      else if (c >= 'a' && c <= 'f') nib = std::uint64_t(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') nib = std::uint64_t(c - 'A' + 10);
      else throw std::invalid_argument("BitVec: bad hex digit");
      const std::size_t shift = 4 * (digits - 1 - d);
      for (int b = 0; b < 4; ++b) {
        if (!((nib >> b) & 1)) continue;
        const std::size_t j = shift + std::size_t(b);
        if (j >= n) throw std::invalid_argument("BitVec: hex value too large");
        v.sig_set(j, true);
      }
    }
    return v;
  }

  static BitVec from_words(std::vector<std::uint64_t> w, std::size_t n) {
    BitVec v(n);
    for (std::size_t i = 0; i < v.w_.size() && i < w.size(); ++i) v.w_[i] = w[i];
    v.trim();
    return v;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(std::size_t i) const {
    check_index(i);
    return sig_get(n_ - 1 - i);
  }
  void set(std::size_t i, bool v) {
    check_index(i);
    sig_set(n_ - 1 - i, v);
  }

  /// Significance-order access: bit j weighs 2^j (coefficient of X^j).
  bool sig_get(std::size_t j) const { return (w_[j >> 6] >> (j & 63)) & 1u; }
  void sig_set(std::size_t j, bool v) {
    const std::uint64_t m = std::uint64_t(1) << (j & 63);
    if (v) w_[j >> 6] |= m;
    else w_[j >> 6] &= ~m;
  }

  const std::vector<std::uint64_t>& words() const { return w_; }

  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += std::size_t(std::popcount(w));
    return c;
  }

  BitVec& operator^=(const BitVec& o) {
    require_same_size(o, "xor");
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  BitVec operator^(const BitVec& o) const {
    BitVec r = *this;
    r ^= o;
    return r;
  }
  BitVec& operator&=(const BitVec& o) {
    require_same_size(o, "and");
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  BitVec operator&(const BitVec& o) const {
    BitVec r = *this;
    r &= o;
    return r;
  }

  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  /// The k most significant bits (a prefix in written order).
  BitVec prefix(std::size_t k) const {
    if (k > n_) throw std::invalid_argument("BitVec::prefix: k > size");
    BitVec r(k);
    const std::size_t off = n_ - k;
    for (std::size_t j = 0; j < k; ++j)
      if (sig_get(off + j)) r.sig_set(j, true);
    return r;
  }

  /// The k least significant bits.
  BitVec suffix(std::size_t k) const {
    if (k > n_) throw std::invalid_argument("BitVec::suffix: k > size");
    BitVec r(k);
    for (std::size_t j = 0; j < k; ++j)
      if (sig_get(j)) r.sig_set(j, true);
    return r;
  }

  /// hi becomes the most significant part: concat(m, r) == m || r.
  static BitVec concat(const BitVec& hi, const BitVec& lo) {
    BitVec r(hi.n_ + lo.n_);
    for (std::size_t j = 0; j < lo.n_; ++j)
      if (lo.sig_get(j)) r.sig_set(j, true);
    for (std::size_t j = 0; j < hi.n_; ++j)
      if (hi.sig_get(j)) r.sig_set(lo.n_ + j, true);
    return r;
  }

  std::uint64_t to_uint() const {
    if (n_ > 64) throw std::invalid_argument("BitVec::to_uint: size > 64");
    return n_ == 0 ? 0 : w_[0];
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  /// MSB-first hex, zero padded to ceil(n/4) digits.
  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    const std::size_t nd = (n_ + 3) / 4;
    std::string s(nd, '0');
    for (std::size_t d = 0; d < nd; ++d) {
      const std::size_t shift = 4 * (nd - 1 - d);
      unsigned nib = 0;
      for (int b = 0; b < 4; ++b) {
        const std::size_t j = shift + std::size_t(b);
        if (j < n_ && sig_get(j)) nib |= 1u << b;
      }
      s[d] = digits[nib];
    }
    return s;
  }

private:
  static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }
  void check_index(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("BitVec: index out of range");
  }
  void require_same_size(const BitVec& o, const char* op) const {
    if (n_ != o.n_)
      throw std::invalid_argument(std::string("BitVec: size mismatch in ") + op);
  }
  void trim() {
    if (n_ == 0 || w_.empty()) return;
    const std::size_t used = n_ & 63;
    if (used) w_.back() &= (~std::uint64_t(0)) >> (64 - used);
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

/// Inner product over GF(2).
inline bool dot(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: size mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i)
    acc ^= a.words()[i] & b.words()[i];
  return std::popcount(acc) & 1;
}

}  // namespace uhsec
