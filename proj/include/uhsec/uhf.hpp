#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uhsec/bits.hpp"
#include "uhsec/gf2.hpp"
#include "uhsec/rng.hpp"

namespace uhsec {

/// Thrown when an exhaustive enumeration would exceed the configured budget;
/// the message names the offending enumeration.
struct BudgetExceeded : std::runtime_error {
  BudgetExceeded(const std::string& what_enum, std::uint64_t need, std::uint64_t budget)
      : std::runtime_error("budget exceeded: " + what_enum + " needs " +
                           std::to_string(need) + " evaluations, budget " +
                           std::to_string(budget)) {}
};

constexpr std::uint64_t kDefaultBudget = std::uint64_t(1) << 24;

enum class UhfKind { Field, Toeplitz, ModifiedToeplitz };

inline const char* to_string(UhfKind k) {
  switch (k) {
    case UhfKind::Field: return "field";
    case UhfKind::Toeplitz: return "toeplitz";
    case UhfKind::ModifiedToeplitz: return "modified-toeplitz";
  }
  return "?";
}

inline UhfKind uhf_kind_from_string(const std::string& s) {
  if (s == "field") return UhfKind::Field;
  if (s == "toeplitz") return UhfKind::Toeplitz;
  if (s == "modified-toeplitz") return UhfKind::ModifiedToeplitz;
  throw std::invalid_argument("unknown UHF kind: " + s);
}

using Seed = BitVec;

/// One hash family: l input bits hashed to k output bits.
struct UhfDescriptor {
  UhfKind kind = UhfKind::Field;
  std::uint32_t l = 0;
  std::uint32_t k = 0;

  std::uint32_t seed_bits() const {
    switch (kind) {
      case UhfKind::Field: return l;
      case UhfKind::Toeplitz: return l + k - 1;
      case UhfKind::ModifiedToeplitz: return l - 1;
    }
    return 0;
  }

  std::uint64_t seed_count() const {
    const std::uint32_t sb = seed_bits();
    if (sb >= 63) throw std::invalid_argument("UhfDescriptor: seed space too large to enumerate");
    const std::uint64_t space = std::uint64_t(1) << sb;
    return kind == UhfKind::Field ? space - 1 : space;  // field excludes zero
  }

  /// Preimage size exponent when the family is balanced by construction.
  std::optional<std::uint32_t> balanced_b() const {
    if (kind == UhfKind::Field) return l - k;
    return std::nullopt;
  }

  void validate() const {
    if (k > l) throw std::invalid_argument("UhfDescriptor: k > l");
    if (kind == UhfKind::Field) require_valid_length(l);
    if (kind == UhfKind::Toeplitz && l + k < 1)
      throw std::invalid_argument("UhfDescriptor: empty toeplitz family");
    if (kind == UhfKind::ModifiedToeplitz && l == 0)
      throw std::invalid_argument("UhfDescriptor: modified-toeplitz needs l >= 1");
  }
};

/// f(s,x) = (s*x)_k, the k most significant bits of the field product.
inline BitVec field_uhf_eval(const Seed& seed, const BitVec& x, std::uint32_t k) {
  const std::size_t l = x.size();
  if (seed.size() != l) throw std::invalid_argument("field_uhf_eval: seed length != l");
  if (!seed.any()) throw std::invalid_argument("field_uhf_eval: zero seed");
  if (k > l) throw std::invalid_argument("field_uhf_eval: k > l");
  return gf_mul(seed, x).prefix(k);
}

/// phi(s,m,r) = s^-1 * (m || r). Uniform r yields the uniform distribution on
/// the preimage f_s^-1(m).
inline BitVec field_uhf_invert(const Seed& seed, const BitVec& m, const BitVec& r) {
  const std::size_t l = m.size() + r.size();
  if (seed.size() != l) throw std::invalid_argument("field_uhf_invert: seed length != l");
  if (!seed.any()) throw std::invalid_argument("field_uhf_invert: zero seed");
  return gf_mul(gf_inv(seed), BitVec::concat(m, r));
}

namespace detail {

// Toeplitz entry A[i][j] (0-based): the first row is s_0..s_{cols-1}, the
// first column continues s_cols..s_{cols+rows-2}, and diagonals are constant.
inline bool toeplitz_entry(const BitVec& seed, std::size_t cols, std::size_t i, std::size_t j) {
  return j >= i ? seed.get(j - i) : seed.get(cols + (i - j) - 1);
}

inline std::vector<BitVec> toeplitz_rows(const BitVec& seed, std::size_t rows, std::size_t cols) {
  std::vector<BitVec> out(rows, BitVec(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (toeplitz_entry(seed, cols, i, j)) out[i].set(j, true);
  return out;
}

}  // namespace detail

/// f_s(x) = A x for the k x l Toeplitz matrix A built from the (l+k-1)-bit seed.
inline BitVec toeplitz_eval(const Seed& seed, const BitVec& x, std::uint32_t k) {
  const std::size_t l = x.size();
  if (seed.size() != l + k - 1)
    throw std::invalid_argument("toeplitz_eval: seed must have l+k-1 bits");
  const auto rows = detail::toeplitz_rows(seed, k, l);
  BitVec out(k);
  for (std::size_t i = 0; i < k; ++i) out.set(i, dot(rows[i], x));
  return out;
}

/// f_s(x) = [A, I] x with A the k x (l-k) Toeplitz matrix from the (l-1)-bit
/// seed: A applied to the leading l-k bits, xored with the trailing k bits.
inline BitVec modified_toeplitz_eval(const Seed& seed, const BitVec& x, std::uint32_t k) {
  const std::size_t l = x.size();
  if (k > l) throw std::invalid_argument("modified_toeplitz_eval: k > l");
  if (seed.size() + 1 != l)
    throw std::invalid_argument("modified_toeplitz_eval: seed must have l-1 bits");
  const BitVec front = x.prefix(l - k);
  BitVec out = x.suffix(k);
  if (l - k > 0 && k > 0) {
    const auto rows = detail::toeplitz_rows(seed, k, l - k);
    for (std::size_t i = 0; i < k; ++i)
      if (dot(rows[i], front)) out.set(i, !out.get(i));
  }
  return out;
}

/// phi(s,m,r) = (r, m + A r); always a member of f_s^-1(m).
inline BitVec modified_toeplitz_invert(const Seed& seed, const BitVec& m, const BitVec& r) {
  const std::size_t l = m.size() + r.size();
  const std::size_t k = m.size();
  if (seed.size() + 1 != l)
    throw std::invalid_argument("modified_toeplitz_invert: seed must have l-1 bits");
  BitVec back = m;
  if (l - k > 0 && k > 0) {
    const auto rows = detail::toeplitz_rows(seed, k, l - k);
    for (std::size_t i = 0; i < k; ++i)
      if (dot(rows[i], r)) back.set(i, !back.get(i));
  }
  return BitVec::concat(r, back);
}

/// Seed at a given enumeration index; for the field kind index i maps to the
/// nonzero value i+1.
inline Seed seed_at(const UhfDescriptor& d, std::uint64_t index) {
  const std::uint64_t value = d.kind == UhfKind::Field ? index + 1 : index;
  return BitVec::from_uint(value, d.seed_bits());
}

inline BitVec uhf_eval(const UhfDescriptor& d, const Seed& seed, const BitVec& x) {
  switch (d.kind) {
    case UhfKind::Field: return field_uhf_eval(seed, x, d.k);
    case UhfKind::Toeplitz: return toeplitz_eval(seed, x, d.k);
    case UhfKind::ModifiedToeplitz: return modified_toeplitz_eval(seed, x, d.k);
  }
  throw std::logic_error("uhf_eval: bad kind");
}

inline BitVec uhf_invert(const UhfDescriptor& d, const Seed& seed, const BitVec& m,
                         const BitVec& r) {
  switch (d.kind) {
    case UhfKind::Field: return field_uhf_invert(seed, m, r);
    case UhfKind::ModifiedToeplitz: return modified_toeplitz_invert(seed, m, r);
    default: throw std::invalid_argument("uhf_invert: family has no inverse sampler");
  }
}

/// Uniform nonzero field seed via rejection.
inline Seed sample_field_seed(std::uint32_t l, CounterRng& rng) {
  for (;;) {
    BitVec s = random_bits(l, rng);
    if (s.any()) return s;
  }
}

inline Seed sample_seed(const UhfDescriptor& d, CounterRng& rng) {
  if (d.kind == UhfKind::Field) return sample_field_seed(d.l, rng);
  return random_bits(d.seed_bits(), rng);
}

/// A family exposed as (seed count, eval) for the exhaustive verifiers; lets
/// tests plug in ad-hoc families next to the shipped constructions.
struct FamilyView {
  std::uint64_t seed_count = 0;
  std::uint32_t l = 0;
  std::uint32_t k = 0;
  std::function<std::uint64_t(std::uint64_t seed_index, std::uint64_t x)> eval;
};

inline FamilyView make_family_view(const UhfDescriptor& d) {
  d.validate();
  FamilyView v;
  v.seed_count = d.seed_count();
  v.l = d.l;
  v.k = d.k;
  v.eval = [d](std::uint64_t si, std::uint64_t x) {
    return uhf_eval(d, seed_at(d, si), BitVec::from_uint(x, d.l)).to_uint();
  };
  return v;
}

struct UhfVerifyResult {
  std::uint64_t worst_collisions = 0;  // over the worst pair x != x'
  std::uint64_t seed_count = 0;
  double fraction = 0.0;
  std::uint64_t worst_x1 = 0, worst_x2 = 0;
  std::uint64_t evaluations = 0;

  /// Exact integer form of fraction <= 2^-k.
  bool within_bound(std::uint32_t k) const {
    return worst_collisions * (std::uint64_t(1) << k) <= seed_count;
  }
};

/// Exhaustively measures max over x != x' of |{s : f_s(x) = f_s(x')}| / |S|.
inline UhfVerifyResult verify_uhf_property(const FamilyView& f,
                                           std::uint64_t budget = kDefaultBudget) {
  if (f.l >= 32) throw BudgetExceeded("uhf collision enumeration (2^l inputs)", ~0ull, budget);
  const std::uint64_t nx = std::uint64_t(1) << f.l;
  const std::uint64_t evals = nx * f.seed_count;
  if (evals > budget) throw BudgetExceeded("uhf collision enumeration (seeds x inputs)", evals, budget);
  const std::uint64_t npairs = nx * (nx - 1) / 2;
  if (npairs > budget)
    throw BudgetExceeded("uhf collision enumeration (input pairs)", npairs, budget);

  std::vector<std::uint32_t> pair_hits(npairs, 0);
  std::vector<std::uint64_t> table(nx);
  std::vector<std::vector<std::uint32_t>> buckets;
  for (std::uint64_t si = 0; si < f.seed_count; ++si) {
    buckets.assign(std::size_t(1) << f.k, {});
    for (std::uint64_t x = 0; x < nx; ++x) {
      table[x] = f.eval(si, x);
      buckets[table[x]].push_back(std::uint32_t(x));
    }
    for (const auto& b : buckets)
      for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) {
          const std::uint64_t x1 = b[i], x2 = b[j];  // x1 < x2 by construction
          ++pair_hits[x2 * (x2 - 1) / 2 + x1];
        }
  }

  UhfVerifyResult r;
  r.seed_count = f.seed_count;
  r.evaluations = evals;
  for (std::uint64_t x2 = 1; x2 < nx; ++x2)
    for (std::uint64_t x1 = 0; x1 < x2; ++x1) {
      const std::uint64_t c = pair_hits[x2 * (x2 - 1) / 2 + x1];
      if (c > r.worst_collisions) {
        r.worst_collisions = c;
        r.worst_x1 = x1;
        r.worst_x2 = x2;
      }
    }
  r.fraction = double(r.worst_collisions) / double(f.seed_count);
  return r;
}

inline UhfVerifyResult verify_uhf_property(const UhfDescriptor& d,
                                           std::uint64_t budget = kDefaultBudget) {
  return verify_uhf_property(make_family_view(d), budget);
}

struct BalanceWitness {
  enum class Kind { PreimageSize, ForcedInput };
  Kind kind = Kind::PreimageSize;
  std::uint64_t seed_index = 0;  // PreimageSize: the offending seed
  std::uint64_t x = 0;           // ForcedInput: the nonzero input hashed identically
  std::uint64_t m = 0;
  std::uint64_t count = 0;
  std::uint64_t expected = 0;
};

struct BalanceResult {
  bool balanced = false;
  std::optional<std::uint32_t> b;
  std::optional<BalanceWitness> witness;
  std::uint64_t evaluations = 0;
};

/// Checks the two balance conditions exhaustively: every (s, m) preimage has
/// the same cardinality 2^b, and (for k >= 1) no nonzero input is sent to a
/// fixed output by every seed. The witness records whichever fails first.
inline BalanceResult verify_balanced(const FamilyView& f,
                                     std::uint64_t budget = kDefaultBudget) {
  if (f.l >= 32) throw BudgetExceeded("uhf balance enumeration (2^l inputs)", ~0ull, budget);
  const std::uint64_t nx = std::uint64_t(1) << f.l;
  const std::uint64_t evals = nx * f.seed_count;
  if (evals > budget) throw BudgetExceeded("uhf balance enumeration (seeds x inputs)", evals, budget);

  const std::uint64_t expected = nx >> f.k;  // forced if counts are all equal
  BalanceResult r;
  r.evaluations = evals;
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> first_m(nx, 0);
  std::vector<std::uint8_t> constant(nx, 1);
  for (std::uint64_t si = 0; si < f.seed_count; ++si) {
    counts.assign(std::size_t(1) << f.k, 0);
    for (std::uint64_t x = 0; x < nx; ++x) {
      const std::uint64_t m = f.eval(si, x);
      ++counts[m];
      if (si == 0) first_m[x] = m;
      else if (m != first_m[x]) constant[x] = 0;
    }
    for (std::uint64_t m = 0; m < counts.size(); ++m) {
      if (counts[m] != expected) {
        r.balanced = false;
        BalanceWitness w;
        w.kind = BalanceWitness::Kind::PreimageSize;
        w.seed_index = si;
        w.m = m;
        w.count = counts[m];
        w.expected = expected;
        r.witness = w;
        return r;
      }
    }
  }
  if (f.k >= 1) {
    for (std::uint64_t x = 1; x < nx; ++x) {
      if (constant[x] && f.seed_count > 1) {
        r.balanced = false;
        BalanceWitness w;
        w.kind = BalanceWitness::Kind::ForcedInput;
        w.x = x;
        w.m = first_m[x];
        w.count = f.seed_count;
        w.expected = f.seed_count >> f.k;
        r.witness = w;
        return r;
      }
    }
  }
  r.balanced = true;
  r.b = std::uint32_t(f.l - f.k);
  return r;
}

inline BalanceResult verify_balanced(const UhfDescriptor& d,
                                     std::uint64_t budget = kDefaultBudget) {
  return verify_balanced(make_family_view(d), budget);
}

}  // namespace uhsec
