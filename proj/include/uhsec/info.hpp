#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include "uhsec/prob.hpp"
#include "uhsec/uhf.hpp"

namespace uhsec {

// Exact information measures on finite distributions and channels, plus the
// leftover-hash bound calculators and brute-force leakage evaluators that
// certify them numerically. All logarithms are base 2; formulas stated in
// natural log are converted explicitly.

inline constexpr double kLn2 = 0.6931471805599453;

inline double log2_safe(double x) { return std::log2(x); }

inline void require_same_alphabet(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("distributions live on different alphabets");
}

/// Total variation distance, (1/2) sum |P - Q|.
inline double tv_distance(const Distribution& p, const Distribution& q) {
  require_same_alphabet(p, q);
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p.p[i] - q.p[i]);
  return 0.5 * s;
}

/// K-L divergence in bits; +infinity when supp(P) is not inside supp(Q).
inline double kl_divergence(const Distribution& p, const Distribution& q) {
  require_same_alphabet(p, q);
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.p[i] == 0) continue;
    if (q.p[i] == 0) return std::numeric_limits<double>::infinity();
    s += p.p[i] * std::log2(p.p[i] / q.p[i]);
  }
  return s;
}

inline double min_entropy(const Distribution& p) {
  const double mx = *std::max_element(p.p.begin(), p.p.end());
  return -std::log2(mx);
}

/// Renyi entropy of order 2, an alternative extraction threshold.
inline double renyi2_entropy(const Distribution& p) {
  double s = 0;
  for (double v : p.p) s += v * v;
  return -std::log2(s);
}

inline double shannon_entropy(const Distribution& p) {
  double s = 0;
  for (double v : p.p)
    if (v > 0) s -= v * std::log2(v);
  return s;
}

inline double binary_entropy(double x) {
  if (x <= 0 || x >= 1) return 0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

/// Smoothed min-entropy -log2(cap), where the cap is the smallest level
/// lambda with sum_x (P(x) - lambda)_+ <= eps, clamped to the smallest
/// support atom. The capped sub-distribution is a feasible smoothing
/// candidate, so the value never exceeds the true supremum and keeps
/// downstream bounds conservative; the clamp keeps flat distributions fixed.
inline double smooth_min_entropy(const Distribution& p, double eps) {
  if (eps < 0 || eps >= 1) throw std::invalid_argument("smooth_min_entropy: eps must be in [0,1)");
  std::vector<double> atoms;
  for (double v : p.p)
    if (v > 0) atoms.push_back(v);
  std::sort(atoms.begin(), atoms.end(), std::greater<double>());
  if (eps == 0) return -std::log2(atoms.front());

  // water-filling from the top: with m atoms above the cap,
  // excess(cap) = prefix_m - m*cap
  double prefix = 0;
  double cap = atoms.front();
  for (std::size_t m = 1; m <= atoms.size(); ++m) {
    prefix += atoms[m - 1];
    const double lam = (prefix - eps) / double(m);
    const double lo = m < atoms.size() ? atoms[m] : 0.0;
    if (lam <= atoms[m - 1] + 1e-15 && lam >= lo - 1e-15) {
      cap = std::max(lam, 0.0);
      break;
    }
  }
  cap = std::max(cap, atoms.back());
  return -std::log2(cap);
}

/// Conditional min-entropy in the sup-over-Q_Z form; the optimum has the
/// closed form -log2 sum_z max_x P(x,z).
inline double cond_min_entropy(const JointDistribution& pxz) {
  double s = 0;
  for (std::size_t z = 0; z < pxz.nz; ++z) {
    double mx = 0;
    for (std::size_t x = 0; x < pxz.nx; ++x) mx = std::max(mx, pxz.at(x, z));
    s += mx;
  }
  return -std::log2(s);
}

/// Conditional min-entropy against a fixed output law Q_Z:
/// -log2 max_{x,z} P(x,z)/Q_Z(z) over supp(Q_Z).
inline double cond_min_entropy_given(const JointDistribution& pxz, const Distribution& qz) {
  if (qz.size() != pxz.nz) throw std::invalid_argument("cond_min_entropy_given: alphabet mismatch");
  double worst = 0;
  for (std::size_t z = 0; z < pxz.nz; ++z) {
    for (std::size_t x = 0; x < pxz.nx; ++x) {
      const double m = pxz.at(x, z);
      if (m == 0) continue;
      if (qz.p[z] == 0)
        throw std::invalid_argument("cond_min_entropy_given: supp(P_Z) not inside supp(Q_Z)");
      worst = std::max(worst, m / qz.p[z]);
    }
  }
  return -std::log2(worst);
}

/// The definitional value at Q_Z = P_Z (used by the divergence-form bound).
inline double cond_min_entropy_fixed(const JointDistribution& pxz) {
  return cond_min_entropy_given(pxz, pxz.marginal_z());
}

/// Greedy smoothing: delete whole atoms in decreasing order of mass while the
/// total deleted stays within eps, then take cond_min_entropy of the
/// remainder. Any feasible candidate lower-bounds the supremum, so the result
/// is a certified conservative value; nondecreasing in eps by construction.
inline double smooth_cond_min_entropy(const JointDistribution& pxz, double eps) {
  if (eps < 0 || eps >= 1)
    throw std::invalid_argument("smooth_cond_min_entropy: eps must be in [0,1)");
  if (eps == 0) return cond_min_entropy(pxz);

  struct Atom {
    double v;
    std::size_t x, z;
  };
  std::vector<Atom> atoms;
  for (std::size_t x = 0; x < pxz.nx; ++x)
    for (std::size_t z = 0; z < pxz.nz; ++z)
      if (pxz.at(x, z) > 0) atoms.push_back({pxz.at(x, z), x, z});
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    if (a.v != b.v) return a.v > b.v;
    if (a.x != b.x) return a.x < b.x;
    return a.z < b.z;
  });

  JointDistribution q = pxz;
  double used = 0;
  for (const Atom& a : atoms) {
    if (used + a.v > eps) break;  // prefix deletion only
    used += a.v;
    q.at(a.x, a.z) = 0;
  }
  return cond_min_entropy(q);
}

inline double mutual_information(const JointDistribution& pxy) {
  const Distribution px = pxy.marginal_x();
  const Distribution py = pxy.marginal_z();
  double s = 0;
  for (std::size_t x = 0; x < pxy.nx; ++x)
    for (std::size_t y = 0; y < pxy.nz; ++y) {
      const double v = pxy.at(x, y);
      if (v > 0) s += v * std::log2(v / (px.p[x] * py.p[y]));
    }
  return std::max(s, 0.0);
}

/// Max-information of a (possibly subnormalized) channel:
/// log2 sum_z max_x W(z|x).
inline double max_information(const DiscreteChannel& v) {
  double s = 0;
  for (std::size_t z = 0; z < v.nz; ++z) {
    double mx = 0;
    for (std::size_t x = 0; x < v.nx; ++x) mx = std::max(mx, v.at(x, z));
    s += mx;
  }
  return std::log2(s);
}

/// Mask over X x Z retaining per-input mass >= 1 - eps, plus the residual
/// (largest removed row mass) actually incurred.
struct SmoothingSet {
  std::size_t nx = 0, nz = 0;
  std::vector<std::uint8_t> keep;  // row major
  double residual = 0;
};

struct SmoothMaxInfoResult {
  double bits = 0;
  SmoothingSet set;
};

/// Greedy upper bound on the smooth max-information: repeatedly trim the
/// column-maximum atom with the largest reduction of sum_z max_x, stopping as
/// soon as the best candidate would push its row past the eps budget. The
/// single fixed removal sequence makes the value nonincreasing in eps, and
/// any feasible trimming set upper-bounds the true infimum.
inline SmoothMaxInfoResult smooth_max_information(const DiscreteChannel& v, double eps) {
  if (eps < 0 || eps >= 1)
    throw std::invalid_argument("smooth_max_information: eps must be in [0,1)");
  SmoothMaxInfoResult r;
  r.set.nx = v.nx;
  r.set.nz = v.nz;
  r.set.keep.assign(v.nx * v.nz, 1);
  std::vector<double> row_used(v.nx, 0.0);

  auto col_top = [&](std::size_t z) {
    double m1 = 0, m2 = 0;
    std::size_t arg = v.nx;
    for (std::size_t x = 0; x < v.nx; ++x) {
      if (!r.set.keep[x * v.nz + z]) continue;
      const double val = v.at(x, z);
      if (val > m1) {
        m2 = m1;
        m1 = val;
        arg = x;
      } else if (val > m2) {
        m2 = val;
      }
    }
    struct Top {
      double max1, max2;
      std::size_t argmax;
    };
    return Top{m1, m2, arg};
  };

  if (eps > 0) {
    struct Cand {
      double saving;
      std::uint64_t gen;
      std::size_t z;
    };
    auto worse = [](const Cand& a, const Cand& b) {
      if (a.saving != b.saving) return a.saving < b.saving;
      return a.z > b.z;  // prefer the smaller column on ties
    };
    std::priority_queue<Cand, std::vector<Cand>, decltype(worse)> heap(worse);
    std::vector<std::uint64_t> gen(v.nz, 0);
    for (std::size_t z = 0; z < v.nz; ++z) {
      const auto t = col_top(z);
      heap.push({t.max1 - t.max2, 0, z});
    }
    while (!heap.empty()) {
      const Cand c = heap.top();
      heap.pop();
      if (c.gen != gen[c.z]) continue;  // stale entry
      const auto t = col_top(c.z);
      if (t.argmax >= v.nx) continue;  // column already empty
      if (t.max1 - t.max2 <= 0) break;   // nothing left to gain anywhere
      if (row_used[t.argmax] + t.max1 > eps) break;  // fixed sequence: stop, do not skip
      r.set.keep[t.argmax * v.nz + c.z] = 0;
      row_used[t.argmax] += t.max1;
      ++gen[c.z];
      const auto nt = col_top(c.z);
      heap.push({nt.max1 - nt.max2, gen[c.z], c.z});
    }
  }

  double sum = 0;
  for (std::size_t z = 0; z < v.nz; ++z) sum += col_top(z).max1;
  r.bits = std::log2(sum);
  r.set.residual = *std::max_element(row_used.begin(), row_used.end());
  return r;
}

// ---------------------------------------------------------------------------
// Bound calculators.

/// Leftover hash, total variation form: eps + (1/2) sqrt(|Z2| 2^(k-h)).
/// The no-side-information case is |Z2| = 1 with h the plain smooth
/// min-entropy.
inline double lhl_bound_tv(double k, double h, double eps, double z2_cardinality) {
  if (z2_cardinality < 1) throw std::invalid_argument("lhl_bound_tv: |Z2| >= 1 required");
  return eps + 0.5 * std::sqrt(z2_cardinality * std::exp2(k - h));
}

/// Leftover hash, divergence form: 2^(k-h) / ln 2, in bits.
inline double lhl_bound_kl(double k, double hmin_cond) {
  return std::exp2(k - hmin_cond) / kLn2;
}

/// Channel-model leftover hash: (1/ln 2) 2^{-(b - imax_eps)} + eps*k bits.
inline double channel_lhl_bound(double b, double imax_eps, double eps, double k) {
  return std::exp2(-(b - imax_eps)) / kLn2 + eps * k;
}

struct AwgnImaxBound {
  double bits = 0;
  double eps_n = 0;
};

/// Smooth max-information bound for a power-P encoder over an AWGN channel:
/// (n/2) log2(1 + delta + P/sigma^2) + (n delta log2 e)/2 + (1/2) log2(n pi),
/// paired with the smoothing residual eps_n = exp(-n delta^2 / 8).
inline AwgnImaxBound awgn_imax_bound(double n, double delta, double power, double sigma2) {
  if (!(delta > 0 && delta < 0.5)) throw std::invalid_argument("awgn_imax_bound: need 0 < delta < 1/2");
  if (sigma2 <= 0) throw std::invalid_argument("awgn_imax_bound: sigma2 must be positive");
  if (n <= 0) throw std::invalid_argument("awgn_imax_bound: n must be positive");
  AwgnImaxBound r;
  r.bits = 0.5 * n * std::log2(1.0 + delta + power / sigma2) +
           0.5 * n * delta * std::log2(std::exp(1.0)) +
           0.5 * std::log2(n * 3.14159265358979323846);
  r.eps_n = std::exp(-n * delta * delta / 8.0);
  return r;
}

// ---------------------------------------------------------------------------
// Exact leakage evaluators.

struct ExtractionLeakage {
  double tv = 0;   // ||P_{f_S(X) Z S} - unif x P_{Z S}||_1
  double kl = 0;   // D(P_{f_S(X) Z S} || unif x P_{Z S}) in bits
  std::uint64_t terms = 0;
};

/// Builds the exact joint of (f_S(X), Z, S) for X,Z ~ pxz and the uniform
/// seed of the family, and measures its distance from ideal.
inline ExtractionLeakage exact_extraction_leakage(const UhfDescriptor& d,
                                                  const JointDistribution& pxz,
                                                  std::uint64_t budget = kDefaultBudget) {
  d.validate();
  if (pxz.nx != (std::size_t(1) << d.l))
    throw std::invalid_argument("exact_extraction_leakage: |X| must be 2^l");
  const std::uint64_t seeds = d.seed_count();
  const std::uint64_t terms = seeds * pxz.nx * pxz.nz;
  if (terms > budget)
    throw BudgetExceeded("extraction leakage enumeration (seeds x X x Z)", terms, budget);

  const std::size_t nm = std::size_t(1) << d.k;
  const double unif = 1.0 / double(nm);
  // joint[m][z][s], seed uniform
  std::vector<double> joint(nm * pxz.nz * seeds, 0.0);
  for (std::uint64_t si = 0; si < seeds; ++si) {
    const Seed s = seed_at(d, si);
    for (std::uint64_t x = 0; x < pxz.nx; ++x) {
      const std::uint64_t m = uhf_eval(d, s, BitVec::from_uint(x, d.l)).to_uint();
      for (std::size_t z = 0; z < pxz.nz; ++z) {
        joint[(m * pxz.nz + z) * seeds + si] += pxz.at(x, z) / double(seeds);
      }
    }
  }

  const Distribution pz = pxz.marginal_z();
  ExtractionLeakage out;
  out.terms = terms;
  double tv = 0, kl = 0;
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t z = 0; z < pxz.nz; ++z)
      for (std::uint64_t si = 0; si < seeds; ++si) {
        const double actual = joint[(m * pxz.nz + z) * seeds + si];
        const double ideal = unif * pz.p[z] / double(seeds);
        tv += std::abs(actual - ideal);
        if (actual > 0) {
          if (ideal == 0) {
            kl = std::numeric_limits<double>::infinity();
          } else {
            kl += actual * std::log2(actual / ideal);
          }
        }
      }
  out.tv = 0.5 * tv;
  out.kl = kl;
  return out;
}

struct ChannelLeakage {
  double bits = 0;  // exact I(M ; Z, S)
  std::uint64_t terms = 0;
};

/// Exact I(M ; Z, S) when M is uniform on {0,1}^k, the seed is uniform, and
/// the channel input X is uniform on the preimage f_s^{-1}(m). Requires a
/// family whose preimages all have cardinality 2^(l-k) (the field kind).
inline ChannelLeakage exact_channel_leakage(const UhfDescriptor& d, const DiscreteChannel& v,
                                            std::uint64_t budget = kDefaultBudget) {
  d.validate();
  if (!d.balanced_b())
    throw std::invalid_argument("exact_channel_leakage: requires a balanced family");
  if (v.nx != (std::size_t(1) << d.l))
    throw std::invalid_argument("exact_channel_leakage: channel input must be 2^l");
  const std::uint64_t seeds = d.seed_count();
  const std::uint64_t terms = seeds * v.nx * v.nz;
  if (terms > budget)
    throw BudgetExceeded("channel leakage enumeration (seeds x X x Z)", terms, budget);

  const std::size_t nm = std::size_t(1) << d.k;
  const double pm = 1.0 / double(nm);
  const double px_given = 1.0 / double(std::size_t(1) << (d.l - d.k));  // 2^-b

  // joint[m][z][s]
  std::vector<double> joint(nm * v.nz * seeds, 0.0);
  for (std::uint64_t si = 0; si < seeds; ++si) {
    const Seed s = seed_at(d, si);
    for (std::uint64_t x = 0; x < v.nx; ++x) {
      const std::uint64_t m = uhf_eval(d, s, BitVec::from_uint(x, d.l)).to_uint();
      const double base = pm * px_given / double(seeds);
      for (std::size_t z = 0; z < v.nz; ++z)
        joint[(m * v.nz + z) * seeds + si] += base * v.at(x, z);
    }
  }

  // marginal over m
  std::vector<double> pzs(v.nz * seeds, 0.0);
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t i = 0; i < pzs.size(); ++i) pzs[i] += joint[m * pzs.size() + i];

  double mi = 0;
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t i = 0; i < pzs.size(); ++i) {
      const double pj = joint[m * pzs.size() + i];
      if (pj > 0) mi += pj * std::log2(pj / (pm * pzs[i]));
    }
  ChannelLeakage out;
  out.bits = std::max(mi, 0.0);
  out.terms = terms;
  return out;
}

}  // namespace uhsec
