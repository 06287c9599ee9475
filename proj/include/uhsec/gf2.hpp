#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uhsec/bits.hpp"

namespace uhsec {

// Arithmetic in GF(2^l) for the lengths l where the all-ones polynomial
// Phi(X) = X^l + X^(l-1) + ... + X + 1 is irreducible over GF(2), i.e. l+1 is
// prime and 2 generates the multiplicative group mod l+1. For those l the
// field embeds into the ring of polynomials mod X^(l+1) - 1, so a product is
// one cyclic convolution followed by folding the X^l coefficient with Phi.

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// True when l+1 is prime and 2 is a primitive root modulo l+1 (equivalently
/// the powers 2^0 ... 2^(l-1) are pairwise distinct mod l+1).
inline bool is_valid_length(std::uint64_t l) {
  if (l < 2) return false;
  const std::uint64_t p = l + 1;
  if (!is_prime_u64(p)) return false;
  std::uint64_t v = 2 % p;
  std::uint64_t order = 1;
  while (v != 1) {
    v = (v * 2) % p;
    ++order;
    if (order > l) return false;
  }
  return order == l;
}

inline std::vector<std::uint32_t> find_valid_lengths(std::uint32_t max_l) {
  if (max_l < 2) throw std::invalid_argument("find_valid_lengths: max_l < 2");
  std::vector<std::uint32_t> out;
  for (std::uint32_t l = 2; l <= max_l; ++l)
    if (is_valid_length(l)) out.push_back(l);
  return out;
}

inline void require_valid_length(std::size_t l) {
  if (!is_valid_length(l))
    throw std::invalid_argument("GF(2^l): l = " + std::to_string(l) +
                                " is not a supported field length");
}

inline BitVec gf_zero(std::size_t l) { return BitVec(l); }

inline BitVec gf_one(std::size_t l) {
  BitVec v(l);
  v.sig_set(0, true);
  return v;
}

/// The element X (coefficient of X^1).
inline BitVec gf_x(std::size_t l) {
  BitVec v(l);
  v.sig_set(1, true);
  return v;
}

namespace detail {

// Carry-less polynomial helpers on raw significance-order words.
using Words = std::vector<std::uint64_t>;

inline int poly_deg(const Words& w) {
  for (std::size_t i = w.size(); i-- > 0;)
    if (w[i]) return int(i) * 64 + 63 - std::countl_zero(w[i]);
  return -1;
}

inline bool poly_bit(const Words& w, std::size_t j) {
  const std::size_t wi = j >> 6;
  return wi < w.size() && ((w[wi] >> (j & 63)) & 1u);
}

// dst ^= src << shift
inline void poly_xor_shifted(Words& dst, const Words& src, std::size_t shift) {
  const std::size_t ws = shift >> 6, bs = shift & 63;
  for (std::size_t j = 0; j < src.size(); ++j) {
    if (!src[j]) continue;
    dst[ws + j] ^= src[j] << bs;
    if (bs) dst[ws + j + 1] ^= src[j] >> (64 - bs);
  }
}

inline Words poly_clmul(const Words& a, const Words& b, std::size_t out_bits) {
  Words prod(out_bits / 64 + 2, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t w = a[i];
    while (w) {
      const int bpos = std::countr_zero(w);
      w &= w - 1;
      poly_xor_shifted(prod, b, i * 64 + std::size_t(bpos));
    }
  }
  return prod;
}

// Phi(X) as an (l+1)-bit all-ones word vector.
inline Words poly_phi(std::size_t l) {
  Words phi((l + 1 + 63) / 64 + 1, 0);
  for (std::size_t j = 0; j <= l; ++j) phi[j >> 6] |= std::uint64_t(1) << (j & 63);
  return phi;
}

}  // namespace detail

/// Product in GF(2^l): cyclic convolution of the zero-extended coefficient
/// vectors modulo X^(l+1) - 1, then fold the X^l term by adding Phi.
inline BitVec gf_mul(const BitVec& a, const BitVec& b) {
  const std::size_t l = a.size();
  if (b.size() != l) throw std::invalid_argument("gf_mul: length mismatch");
  require_valid_length(l);
  const std::size_t ring = l + 1;

  detail::Words prod = detail::poly_clmul(a.words(), b.words(), 2 * ring);

  // X^ring == 1: fold bits [ring, 2*ring) onto [0, ring). Inputs have degree
  // < l so one pass reaches degree < ring.
  detail::Words c((ring + 63) / 64, 0);
  for (std::size_t j = 0; j < ring; ++j) {
    bool bit = detail::poly_bit(prod, j) ^ detail::poly_bit(prod, j + ring);
    if (bit) c[j >> 6] ^= std::uint64_t(1) << (j & 63);
  }

  // Fold the X^l coefficient: adding Phi flips all ring coefficients.
  if (detail::poly_bit(c, l)) {
    for (std::size_t j = 0; j < ring; ++j) c[j >> 6] ^= std::uint64_t(1) << (j & 63);
  }
  return BitVec::from_words(std::move(c), l);
}

/// Independent slow path: bitwise schoolbook product, then long division by
/// Phi. Serves as the oracle for gf_mul and as the bench comparator.
inline BitVec gf_mul_schoolbook(const BitVec& a, const BitVec& b) {
  const std::size_t l = a.size();
  if (b.size() != l) throw std::invalid_argument("gf_mul_schoolbook: length mismatch");
  require_valid_length(l);
  if (l == 0) return BitVec(0);

  std::vector<std::uint8_t> prod(2 * l, 0);
  for (std::size_t i = 0; i < l; ++i) {
    if (!a.sig_get(i)) continue;
    for (std::size_t j = 0; j < l; ++j)
      if (b.sig_get(j)) prod[i + j] ^= 1;
  }
  // reduce mod Phi = X^l + ... + 1
  for (std::size_t j = 2 * l - 2 + 1; j-- > l;) {
    if (!prod[j]) continue;
    for (std::size_t t = 0; t <= l; ++t) prod[j - l + t] ^= 1;
  }
  BitVec r(l);
  for (std::size_t j = 0; j < l; ++j)
    if (prod[j]) r.sig_set(j, true);
  return r;
}

/// Inverse via the extended Euclidean algorithm over GF(2)[X] mod Phi.
inline BitVec gf_inv(const BitVec& a) {
  const std::size_t l = a.size();
  require_valid_length(l);
  if (!a.any()) throw std::domain_error("gf_inv: zero has no inverse");

  const std::size_t cap = (2 * l + 2 + 63) / 64 + 1;
  detail::Words r_prev = detail::poly_phi(l);
  r_prev.resize(cap, 0);
  detail::Words r(cap, 0);
  for (std::size_t i = 0; i < a.words().size(); ++i) r[i] = a.words()[i];
  detail::Words t_prev(cap, 0), t(cap, 0);
  t[0] = 1;

  while (detail::poly_deg(r) >= 0) {
    int dr = detail::poly_deg(r);
    // one division step: r_prev mod r, applying the same shifts to t_prev
    while (detail::poly_deg(r_prev) >= dr && detail::poly_deg(r_prev) >= 0) {
      const std::size_t s = std::size_t(detail::poly_deg(r_prev) - dr);
      detail::poly_xor_shifted(r_prev, r, s);
      detail::poly_xor_shifted(t_prev, t, s);
    }
    std::swap(r_prev, r);
    std::swap(t_prev, t);
  }
  // gcd(Phi, a) sits in r_prev; it is 1 because Phi is irreducible and a != 0.
  if (detail::poly_deg(r_prev) != 0)
    throw std::logic_error("gf_inv: gcd with Phi is not constant");
  return BitVec::from_words(std::move(t_prev), l);
}

/// Square-and-multiply exponentiation; a^(2^l - 2) is the inversion oracle.
inline BitVec gf_pow(const BitVec& a, std::uint64_t e) {
  const std::size_t l = a.size();
  require_valid_length(l);
  BitVec result = gf_one(l);
  BitVec base = a;
  while (e) {
    if (e & 1) result = gf_mul(result, base);
    e >>= 1;
    if (e) base = gf_mul(base, base);
  }
  return result;
}

}  // namespace uhsec
