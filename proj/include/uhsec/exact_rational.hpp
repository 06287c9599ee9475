#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "uhsec/prob.hpp"
#include "uhsec/uhf.hpp"

namespace uhsec {

// Exact-arithmetic twin of the total-variation evaluators: probabilities are
// carried as arbitrary-precision rationals so the brute-force certificates do
// not hinge on float rounding. Divergence-type quantities need logarithms and
// stay on the double path.

using BigRat = boost::multiprecision::cpp_rational;

/// Exact rational from a double (every finite double is dyadic rational).
inline BigRat rat_from_double(double v) {
  if (v == 0) return BigRat(0);
  int exp = 0;
  const double mant = std::frexp(v, &exp);  // v = mant * 2^exp, |mant| in [1/2,1)
  const std::int64_t m = std::int64_t(std::ldexp(mant, 53));
  BigRat r(m);
  const int shift = exp - 53;
  if (shift >= 0) {
    r *= boost::multiprecision::pow(boost::multiprecision::cpp_int(2), unsigned(shift));
  } else {
    r /= boost::multiprecision::pow(boost::multiprecision::cpp_int(2), unsigned(-shift));
  }
  return r;
}

struct RationalJoint {
  std::size_t nx = 0, nz = 0;
  std::vector<BigRat> p;

  RationalJoint() = default;
  RationalJoint(std::size_t nx_, std::size_t nz_) : nx(nx_), nz(nz_), p(nx_ * nz_, BigRat(0)) {}

  static RationalJoint from_double(const JointDistribution& j) {
    RationalJoint r(j.nx, j.nz);
    for (std::size_t i = 0; i < j.p.size(); ++i) r.p[i] = rat_from_double(j.p[i]);
    return r;
  }

  BigRat& at(std::size_t x, std::size_t z) { return p[x * nz + z]; }
  const BigRat& at(std::size_t x, std::size_t z) const { return p[x * nz + z]; }
};

/// ||P_{f_S(X) Z S} - unif x P_{Z S}||_1 computed without rounding. The seed
/// is uniform over the family; the input pair (X, Z) follows pxz, whose mass
/// need not be normalized exactly as long as it is a probability vector in
/// spirit (the caller controls the rationals).
inline BigRat exact_extraction_tv_rational(const UhfDescriptor& d, const RationalJoint& pxz,
                                           std::uint64_t budget = kDefaultBudget) {
  d.validate();
  if (pxz.nx != (std::size_t(1) << d.l))
    throw std::invalid_argument("exact_extraction_tv_rational: |X| must be 2^l");
  const std::uint64_t seeds = d.seed_count();
  const std::uint64_t terms = seeds * pxz.nx * pxz.nz;
  if (terms > budget)
    throw BudgetExceeded("rational extraction enumeration (seeds x X x Z)", terms, budget);

  const std::size_t nm = std::size_t(1) << d.k;
  std::vector<BigRat> joint(nm * pxz.nz * seeds, BigRat(0));
  for (std::uint64_t si = 0; si < seeds; ++si) {
    const Seed s = seed_at(d, si);
    for (std::uint64_t x = 0; x < pxz.nx; ++x) {
      const std::uint64_t m = uhf_eval(d, s, BitVec::from_uint(x, d.l)).to_uint();
      for (std::size_t z = 0; z < pxz.nz; ++z)
        joint[(m * pxz.nz + z) * seeds + si] += pxz.at(x, z);
    }
  }
  // scale: each joint cell still carries the factor |S|; ideal cell is
  // P_Z(z) / 2^k per seed
  std::vector<BigRat> pz(pxz.nz, BigRat(0));
  for (std::size_t x = 0; x < pxz.nx; ++x)
    for (std::size_t z = 0; z < pxz.nz; ++z) pz[z] += pxz.at(x, z);

  BigRat sum(0);
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t z = 0; z < pxz.nz; ++z)
      for (std::uint64_t si = 0; si < seeds; ++si) {
        const BigRat diff = joint[(m * pxz.nz + z) * seeds + si] - pz[z] / int(nm);
        sum += diff < 0 ? BigRat(-diff) : diff;
      }
  return sum / (2 * BigRat(seeds));
}

}  // namespace uhsec
