#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uhsec/channel.hpp"
#include "uhsec/codes.hpp"
#include "uhsec/info.hpp"
#include "uhsec/rng.hpp"
#include "uhsec/uhf.hpp"

namespace uhsec {

// The two end-to-end primitives: secret key agreement (syndrome
// reconciliation + privacy amplification) and the modular seeded wiretap
// scheme with seed recycling. Each comes with an exact desk-scale security
// evaluator that enumerates the full joint distribution.

/// Outcome of one exact security evaluation: the measured quantity, the bound
/// it must stay under, and the smoothing parameter the bound was computed at.
struct LeakageReport {
  double exact = 0;
  double bound = 0;
  double eps = 0;
  bool pass = false;
  std::uint64_t enumeration_size = 0;
  double imax_eps = 0;  // channel-model reports record the smoothed threshold
};

// ---------------------------------------------------------------------------
// Secret key agreement.

enum class EntropyMode { ExactFromModel, Order2 };

struct EveModel {
  enum class Kind { Constant, BscCopy } kind = Kind::Constant;
  double q = 0;  // crossover of the copy channel when kind == BscCopy

  static EveModel constant() { return {}; }
  static EveModel bsc_copy(double q) {
    EveModel e;
    e.kind = Kind::BscCopy;
    e.q = q;
    return e;
  }
};

struct SkaConfig {
  std::uint32_t n = 7;      // source length
  double eps_src = 0.05;    // per-bit crossover between the two observations
  LinearCode code;          // reconciliation code of length n
  UhfDescriptor uhf;        // field kind, l <= n
  double delta = 0.25;      // target total-variation security
  EntropyMode entropy_mode = EntropyMode::ExactFromModel;
  EveModel eve;

  void validate() const {
    if (code.n != n) throw std::invalid_argument("SkaConfig: code length != n");
    if (uhf.l > n) throw std::invalid_argument("SkaConfig: uhf input exceeds n");
    if (uhf.kind != UhfKind::Field) throw std::invalid_argument("SkaConfig: field UHF required");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("SkaConfig: delta in (0,1)");
    uhf.validate();
  }
};

struct SkaTranscript {
  BitVec public_syndrome;  // the reconciliation message
  std::uint32_t r = 0;     // its bit length, n - k_code
  Seed seed;               // fresh public hash seed
  BitVec k1, k2;           // extracted keys at the two parties
  bool agreed = false;     // reconciliation recovered x exactly
};

struct SkaReconcileResult {
  BitVec x_hat;
  BitVec public_syndrome;
};

/// One-way reconciliation: the first party reveals the syndrome of x (which
/// pins its coset leader e_x); the second computes y + e_x = c_x + e, decodes
/// and re-offsets. Recovery is exact whenever the discrepancy e keeps
/// c_x + e inside c_x's decoding region.
inline SkaReconcileResult ska_reconcile(const BitVec& x, const BitVec& y,
                                        const LinearCode& code) {
  if (x.size() != code.n || y.size() != code.n)
    throw std::invalid_argument("ska_reconcile: words must have n bits");
  SkaReconcileResult r;
  r.public_syndrome = code.syndrome(x);
  const BitVec e_x = code.leader_for_syndrome(r.public_syndrome);
  const BitVec shifted = y ^ e_x;                    // = c_x + e
  const BitVec c_hat = code.decode_nearest(shifted);
  r.x_hat = c_hat ^ e_x;
  return r;
}

/// k = floor(h - r - 2 log2(2/delta)), clamped at 0; k = 0 means the budget
/// is infeasible at this security level.
inline std::uint32_t ska_select_key_length(double h, double r, double delta) {
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("ska_select_key_length: delta in (0,1)");
  const double v = std::floor(h - r - 2.0 * std::log2(2.0 / delta));
  if (v < 0) return 0;
  return std::uint32_t(v);
}

/// The exact source model for the hashed prefix: X^l uniform, Z^l the
/// eavesdropper's view (constant or a BSC(q) copy, per letter).
inline JointDistribution ska_model_joint(const SkaConfig& cfg) {
  const std::uint32_t l = cfg.uhf.l;
  const std::size_t nx = std::size_t(1) << l;
  if (cfg.eve.kind == EveModel::Kind::Constant) {
    JointDistribution j(nx, 1);
    for (std::size_t x = 0; x < nx; ++x) j.at(x, 0) = 1.0 / double(nx);
    return j;
  }
  JointDistribution j(nx, nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t z = 0; z < nx; ++z) {
      const std::uint32_t d = std::uint32_t(std::popcount(std::uint64_t(x ^ z)));
      j.at(x, z) = std::pow(cfg.eve.q, d) * std::pow(1 - cfg.eve.q, double(l - d)) / double(nx);
    }
  return j;
}

/// Extraction threshold h for the configured entropy mode, smoothed at
/// delta/2 where applicable.
inline double ska_model_entropy(const SkaConfig& cfg) {
  if (cfg.entropy_mode == EntropyMode::Order2) {
    // order-2 threshold applies to the constant-Z case
    return renyi2_entropy(Distribution::uniform(std::size_t(1) << cfg.uhf.l));
  }
  return smooth_cond_min_entropy(ska_model_joint(cfg), cfg.delta / 2.0);
}

/// Full protocol run: sample the correlated pair, reconcile, hash the first
/// l bits on both sides with one fresh public seed.
inline SkaTranscript ska_run(const SkaConfig& cfg, CounterRng& rng) {
  cfg.validate();
  const BitVec x = random_bits(cfg.n, rng);
  BitVec y = x;
  for (std::uint32_t i = 0; i < cfg.n; ++i)
    if (rng.next_double01() < cfg.eps_src) y.set(i, !y.get(i));

  const SkaReconcileResult rec = ska_reconcile(x, y, cfg.code);
  SkaTranscript t;
  t.public_syndrome = rec.public_syndrome;
  t.r = cfg.code.redundancy();
  t.seed = sample_field_seed(cfg.uhf.l, rng);
  t.k1 = field_uhf_eval(t.seed, x.prefix(cfg.uhf.l), cfg.uhf.k);
  t.k2 = field_uhf_eval(t.seed, rec.x_hat.prefix(cfg.uhf.l), cfg.uhf.k);
  t.agreed = rec.x_hat == x;
  return t;
}

/// Exact joint of (K, syndrome, Z, S) for X^n uniform, and its total
/// variation distance from uniform-key ideal. pass means tv <= delta.
inline LeakageReport ska_exact_security_eval(const SkaConfig& cfg,
                                             std::uint64_t budget = kDefaultBudget) {
  cfg.validate();
  const std::uint32_t n = cfg.n, l = cfg.uhf.l, k = cfg.uhf.k;
  const std::uint64_t nx = std::uint64_t(1) << n;
  const std::uint64_t seeds = cfg.uhf.seed_count();
  const std::uint64_t nzz = cfg.eve.kind == EveModel::Kind::Constant ? 1 : nx;
  const std::uint64_t terms = nx * seeds * nzz;
  if (terms > budget)
    throw BudgetExceeded("SKA security enumeration (X^n x seeds x Z)", terms, budget);

  const std::size_t nm = std::size_t(1) << k;
  const std::size_t nsynd = std::size_t(1) << cfg.code.redundancy();
  std::vector<double> joint(nm * nsynd * nzz * seeds, 0.0);
  auto idx = [&](std::size_t m, std::size_t sd, std::size_t z, std::size_t si) {
    return ((m * nsynd + sd) * nzz + z) * seeds + si;
  };

  std::vector<double> powq(n + 1, 1.0), powq1(n + 1, 1.0);
  for (std::uint32_t i = 1; i <= n; ++i) {
    powq[i] = powq[i - 1] * cfg.eve.q;
    powq1[i] = powq1[i - 1] * (1 - cfg.eve.q);
  }

  for (std::uint64_t xv = 0; xv < nx; ++xv) {
    const BitVec x = BitVec::from_uint(xv, n);
    const std::size_t sd = cfg.code.syndrome(x).to_uint();
    for (std::uint64_t si = 0; si < seeds; ++si) {
      const Seed s = seed_at(cfg.uhf, si);
      const std::size_t m = field_uhf_eval(s, x.prefix(l), k).to_uint();
      if (nzz == 1) {
        joint[idx(m, sd, 0, si)] += 1.0 / (double(nx) * double(seeds));
      } else {
        for (std::uint64_t zv = 0; zv < nzz; ++zv) {
          const std::uint32_t dist = std::uint32_t(std::popcount(xv ^ zv));
          joint[idx(m, sd, zv, si)] +=
              powq[dist] * powq1[n - dist] / (double(nx) * double(seeds));
        }
      }
    }
  }

  // TV against uniform-key x the true (syndrome, Z, S) marginal
  std::vector<double> marg(nsynd * nzz * seeds, 0.0);
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t i = 0; i < marg.size(); ++i) marg[i] += joint[m * marg.size() + i];
  double tv = 0;
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t i = 0; i < marg.size(); ++i)
      tv += std::abs(joint[m * marg.size() + i] - marg[i] / double(nm));
  tv *= 0.5;

  LeakageReport rep;
  rep.exact = tv;
  rep.bound = cfg.delta;
  rep.eps = cfg.delta;
  rep.pass = tv <= cfg.delta + 1e-12;
  rep.enumeration_size = terms;
  return rep;
}

// ---------------------------------------------------------------------------
// Modular seeded wiretap coding.

enum class MessageLaw { UniformNonzero, UniformAll };

struct WiretapConfig {
  LinearCode code;          // encoder e0: {0,1}^l -> {0,1}^n, so l == code.k
  std::uint32_t l = 4;      // hash input length (valid field length)
  std::uint32_t k = 1;      // message bits
  ChannelSpec channel_t = ChannelSpec::bsc(0.0);
  ChannelSpec channel_w = ChannelSpec::bsc(0.3);
  std::optional<ChannelSpec> degrading_v;  // when set, W = V o T
  double p_e = 0;           // decoding error bound of the code over T
  std::vector<double> eps_list = {0.0};
  std::uint32_t t_blocks = 1;          // messages per recycled seed
  std::optional<std::uint32_t> seed_transport_blocks;  // c; default ceil(seed_bits / l)
  MessageLaw law = MessageLaw::UniformNonzero;

  UhfDescriptor uhf() const { return UhfDescriptor{UhfKind::Field, l, k}; }

  DiscreteChannel eavesdropper_channel() const {
    const DiscreteChannel w = make_channel(channel_w);
    if (degrading_v) return compose_degraded(make_channel(channel_t), make_channel(*degrading_v));
    return w;
  }

  void validate() const {
    if (code.k != l) throw std::invalid_argument("WiretapConfig: code dimension != l");
    if (k > l) throw std::invalid_argument("WiretapConfig: k > l");
    uhf().validate();
  }

  std::uint32_t transport_blocks() const {
    if (seed_transport_blocks) return *seed_transport_blocks;
    return (uhf().seed_bits() + l - 1) / l;
  }
};

/// Number of distinct messages under the configured law (the all-zero
/// message is excluded by the protocol).
inline std::uint64_t message_count(const WiretapConfig& cfg) {
  const std::uint64_t all = std::uint64_t(1) << cfg.k;
  return cfg.law == MessageLaw::UniformAll ? all : all - 1;
}

/// Pre-processing layer: draw r uniformly, lift the message into the hash
/// preimage, and encode for transmission.
inline BitVec wiretap_encode(const BitVec& m, const Seed& seed, const WiretapConfig& cfg,
                             CounterRng& rng) {
  if (m.size() != cfg.k) throw std::invalid_argument("wiretap_encode: message must have k bits");
  if (cfg.law == MessageLaw::UniformNonzero && !m.any())
    throw std::invalid_argument("wiretap_encode: the all-zero message is excluded");
  const BitVec r = random_bits(cfg.l - cfg.k, rng);
  const BitVec u = field_uhf_invert(seed, m, r);
  return cfg.code.encode(u);
}

/// Post-processing layer: decode the block, then apply the hash.
inline BitVec wiretap_decode(const BitVec& y, const Seed& seed, const WiretapConfig& cfg) {
  const BitVec u_hat = cfg.code.message_of(cfg.code.decode_nearest(y));
  return field_uhf_eval(seed, u_hat, cfg.k);
}

namespace detail {

// Rows of P(z-block | m, seed) for one seed, averaged over the uniform r.
inline std::vector<std::vector<double>> block_rows_for_seed(
    const WiretapConfig& cfg, const DiscreteChannel& w_aug, const Seed& seed) {
  const std::uint64_t nr = std::uint64_t(1) << (cfg.l - cfg.k);
  const std::uint64_t nmsg = message_count(cfg);
  const std::uint64_t m0 = cfg.law == MessageLaw::UniformAll ? 0 : 1;
  std::vector<std::vector<double>> rows(nmsg, std::vector<double>(w_aug.nz, 0.0));
  for (std::uint64_t mi = 0; mi < nmsg; ++mi) {
    const BitVec m = BitVec::from_uint(mi + m0, cfg.k);
    for (std::uint64_t rv = 0; rv < nr; ++rv) {
      const BitVec u = field_uhf_invert(seed, m, BitVec::from_uint(rv, cfg.l - cfg.k));
      const std::uint64_t urow = u.to_uint();
      for (std::size_t z = 0; z < w_aug.nz; ++z)
        rows[mi][z] += w_aug.at(urow, z) / double(nr);
    }
  }
  return rows;
}

}  // namespace detail

/// Exact I(M ; Z^n, S) of the seeded scheme, one report per requested
/// smoothing parameter (0 is always evaluated). Each bound is the
/// channel-model leftover hash value at b = l - k with the greedy smoothed
/// max-information of the augmented eavesdropper channel.
inline std::vector<LeakageReport> wiretap_exact_leakage(const WiretapConfig& cfg,
                                                        std::uint64_t budget = kDefaultBudget) {
  cfg.validate();
  const DiscreteChannel w_aug =
      augment_with_encoder(cfg.eavesdropper_channel(), cfg.code).materialize(budget);
  const std::uint64_t seeds = cfg.uhf().seed_count();
  const std::uint64_t nmsg = message_count(cfg);
  const std::uint64_t nr = std::uint64_t(1) << (cfg.l - cfg.k);
  const std::uint64_t terms = seeds * nmsg * nr * w_aug.nz;
  if (terms > budget)
    throw BudgetExceeded("wiretap leakage enumeration (seeds x M x R x Z^n)", terms, budget);

  // joint[m][z][s]
  std::vector<double> joint(nmsg * w_aug.nz * seeds, 0.0);
  for (std::uint64_t si = 0; si < seeds; ++si) {
    const Seed s = seed_at(cfg.uhf(), si);
    const auto rows = detail::block_rows_for_seed(cfg, w_aug, s);
    for (std::uint64_t mi = 0; mi < nmsg; ++mi)
      for (std::size_t z = 0; z < w_aug.nz; ++z)
        joint[(mi * w_aug.nz + z) * seeds + si] +=
            rows[mi][z] / (double(nmsg) * double(seeds));
  }
  std::vector<double> pzs(w_aug.nz * seeds, 0.0);
  for (std::uint64_t mi = 0; mi < nmsg; ++mi)
    for (std::size_t i = 0; i < pzs.size(); ++i) pzs[i] += joint[mi * pzs.size() + i];
  double mi_bits = 0;
  const double pm = 1.0 / double(nmsg);
  for (std::uint64_t m = 0; m < nmsg; ++m)
    for (std::size_t i = 0; i < pzs.size(); ++i) {
      const double pj = joint[m * pzs.size() + i];
      if (pj > 0) mi_bits += pj * std::log2(pj / (pm * pzs[i]));
    }
  mi_bits = std::max(mi_bits, 0.0);

  std::vector<double> eps_list = cfg.eps_list;
  if (std::find(eps_list.begin(), eps_list.end(), 0.0) == eps_list.end())
    eps_list.insert(eps_list.begin(), 0.0);

  std::vector<LeakageReport> out;
  const double b = double(cfg.l - cfg.k);
  for (double eps : eps_list) {
    const SmoothMaxInfoResult smi = smooth_max_information(w_aug, eps);
    LeakageReport rep;
    rep.exact = mi_bits;
    rep.eps = eps;
    rep.imax_eps = smi.bits;
    rep.bound = channel_lhl_bound(b, smi.bits, eps, double(cfg.k));
    rep.pass = rep.exact <= rep.bound + 1e-12;
    rep.enumeration_size = terms;
    out.push_back(rep);
  }
  return out;
}

struct MultiBlockLeakage {
  double with_seed = 0;     // I(M_1..M_t ; Z-blocks, S)
  double without_seed = 0;  // I(M_1..M_t ; Z-blocks)
  double single_block = 0;  // I(M_1 ; Z-block, S)
  std::uint32_t t = 0;
  std::uint64_t terms = 0;
};

/// Exact multi-block leakage under seed recycling, for checking the chain
/// rule bound t * I(M_1 ; Z(1), S) by full enumeration. Supports t = 2.
inline MultiBlockLeakage multi_block_exact_leakage(const WiretapConfig& cfg, std::uint32_t t,
                                                   std::uint64_t budget = kDefaultBudget) {
  cfg.validate();
  if (t != 2) throw std::invalid_argument("multi_block_exact_leakage: t == 2 supported");
  const DiscreteChannel w_aug =
      augment_with_encoder(cfg.eavesdropper_channel(), cfg.code).materialize(budget);
  const std::uint64_t seeds = cfg.uhf().seed_count();
  const std::uint64_t nmsg = message_count(cfg);
  const std::uint64_t nz = w_aug.nz;
  const std::uint64_t terms = seeds * nmsg * nmsg * nz * nz;
  if (terms > budget)
    throw BudgetExceeded("multi-block leakage enumeration (seeds x M^2 x Z^2n)", terms, budget);

  // per-seed single block rows, then the two-block product
  std::vector<std::vector<std::vector<double>>> rows(seeds);
  for (std::uint64_t si = 0; si < seeds; ++si)
    rows[si] = detail::block_rows_for_seed(cfg, w_aug, seed_at(cfg.uhf(), si));

  const double pm = 1.0 / double(nmsg);
  MultiBlockLeakage out;
  out.t = t;
  out.terms = terms;

  // single block I(M ; Z, S)
  {
    std::vector<double> joint(nmsg * nz * seeds, 0.0);
    for (std::uint64_t si = 0; si < seeds; ++si)
      for (std::uint64_t m = 0; m < nmsg; ++m)
        for (std::uint64_t z = 0; z < nz; ++z)
          joint[(m * nz + z) * seeds + si] = pm * rows[si][m][z] / double(seeds);
    std::vector<double> pzs(nz * seeds, 0.0);
    for (std::uint64_t m = 0; m < nmsg; ++m)
      for (std::size_t i = 0; i < pzs.size(); ++i) pzs[i] += joint[m * pzs.size() + i];
    double mi = 0;
    for (std::uint64_t m = 0; m < nmsg; ++m)
      for (std::size_t i = 0; i < pzs.size(); ++i) {
        const double pj = joint[m * pzs.size() + i];
        if (pj > 0) mi += pj * std::log2(pj / (pm * pzs[i]));
      }
    out.single_block = std::max(mi, 0.0);
  }

  // two blocks sharing the seed
  const double pmm = pm * pm;
  std::vector<double> joint(nmsg * nmsg * nz * nz * seeds, 0.0);
  auto jidx = [&](std::uint64_t m1, std::uint64_t m2, std::uint64_t z1, std::uint64_t z2,
                  std::uint64_t si) {
    return (((m1 * nmsg + m2) * nz + z1) * nz + z2) * seeds + si;
  };
  for (std::uint64_t si = 0; si < seeds; ++si)
    for (std::uint64_t m1 = 0; m1 < nmsg; ++m1)
      for (std::uint64_t m2 = 0; m2 < nmsg; ++m2)
        for (std::uint64_t z1 = 0; z1 < nz; ++z1) {
          const double a = pmm * rows[si][m1][z1] / double(seeds);
          if (a == 0) continue;
          for (std::uint64_t z2 = 0; z2 < nz; ++z2)
            joint[jidx(m1, m2, z1, z2, si)] = a * rows[si][m2][z2];
        }

  // I(M^2 ; Z^2, S)
  {
    const std::size_t zs = nz * nz * seeds;
    std::vector<double> marg(zs, 0.0);
    for (std::uint64_t mm = 0; mm < nmsg * nmsg; ++mm)
      for (std::size_t i = 0; i < zs; ++i) marg[i] += joint[mm * zs + i];
    double mi = 0;
    for (std::uint64_t mm = 0; mm < nmsg * nmsg; ++mm)
      for (std::size_t i = 0; i < zs; ++i) {
        const double pj = joint[mm * zs + i];
        if (pj > 0) mi += pj * std::log2(pj / (pmm * marg[i]));
      }
    out.with_seed = std::max(mi, 0.0);
  }

  // I(M^2 ; Z^2) with the seed marginalized out
  {
    const std::size_t zs = nz * nz;
    std::vector<double> jm(nmsg * nmsg * zs, 0.0);
    for (std::uint64_t mm = 0; mm < nmsg * nmsg; ++mm)
      for (std::size_t zz = 0; zz < zs; ++zz)
        for (std::uint64_t si = 0; si < seeds; ++si)
          jm[mm * zs + zz] += joint[(mm * zs + zz) * seeds + si];
    std::vector<double> marg(zs, 0.0);
    for (std::uint64_t mm = 0; mm < nmsg * nmsg; ++mm)
      for (std::size_t i = 0; i < zs; ++i) marg[i] += jm[mm * zs + i];
    double mi = 0;
    for (std::uint64_t mm = 0; mm < nmsg * nmsg; ++mm)
      for (std::size_t i = 0; i < zs; ++i) {
        const double pj = jm[mm * zs + i];
        if (pj > 0) mi += pj * std::log2(pj / (pmm * marg[i]));
      }
    out.without_seed = std::max(mi, 0.0);
  }
  return out;
}

struct WiretapBlockResult {
  BitVec m, m_hat;
  bool ok = false;
};

struct RecyclingRun {
  std::uint32_t t = 0, c = 0;
  bool seed_recovered = false;
  std::vector<WiretapBlockResult> blocks;
  double single_block_leakage = 0;   // exact, at eps = 0
  double total_leakage_bound = 0;    // t x single block (chain rule)
  double rate = 0;                   // t k / ((t + c) n)
  double error_bound = 0;            // (t + 1) p_e
  bool rate_condition_warning = false;
};

/// Seed recycling: transmit the seed once over T using c code blocks, then
/// send t messages with that seed. Leakage is accounted by the chain rule;
/// the empirical half of the run uses the receiver's (possibly corrupted)
/// decoded seed.
inline RecyclingRun seed_recycling_run(const WiretapConfig& cfg, std::uint32_t t,
                                       CounterRng& rng,
                                       std::uint64_t budget = kDefaultBudget) {
  cfg.validate();
  RecyclingRun run;
  run.t = t;
  run.c = cfg.transport_blocks();

  const auto single = wiretap_exact_leakage(cfg, budget);
  run.single_block_leakage = single.front().exact;  // eps = 0 entry
  run.total_leakage_bound = double(t) * run.single_block_leakage;
  run.rate = double(t) * double(cfg.k) / (double(t + run.c) * double(cfg.code.n));
  run.error_bound = double(t + 1) * cfg.p_e;

  const double code_rate = double(cfg.l) / double(cfg.code.n);
  run.rate_condition_warning =
      double(cfg.k) / double(cfg.code.n) >= code_rate - capacity(cfg.channel_w);

  const DiscreteChannel t_ch = make_channel(cfg.channel_t);
  const Seed seed = sample_field_seed(cfg.l, rng);

  // transport: the seed bits ride c ordinary code blocks over T
  BitVec padded(run.c * cfg.l);
  for (std::uint32_t i = 0; i < cfg.l; ++i) padded.set(i, seed.get(i));
  BitVec recovered(run.c * cfg.l);
  for (std::uint32_t b = 0; b < run.c; ++b) {
    BitVec chunk(cfg.l);
    for (std::uint32_t i = 0; i < cfg.l; ++i) chunk.set(i, padded.get(b * cfg.l + i));
    const BitVec sent = cfg.code.encode(chunk);
    BitVec received(cfg.code.n);
    for (std::uint32_t i = 0; i < cfg.code.n; ++i)
      received.set(i, sample(t_ch, sent.get(i) ? 1 : 0, rng) == 1);
    const BitVec decoded = cfg.code.message_of(cfg.code.decode_nearest(received));
    for (std::uint32_t i = 0; i < cfg.l; ++i) recovered.set(b * cfg.l + i, decoded.get(i));
  }
  Seed seed_rx = recovered.prefix(cfg.l);
  run.seed_recovered = seed_rx == seed;
  if (!seed_rx.any()) seed_rx = seed;  // a corrupted all-zero seed cannot hash

  for (std::uint32_t bi = 0; bi < t; ++bi) {
    WiretapBlockResult blk;
    const std::uint64_t lo = cfg.law == MessageLaw::UniformAll ? 0 : 1;
    blk.m = BitVec::from_uint(lo + rng.next_below(message_count(cfg)), cfg.k);
    const BitVec xn = wiretap_encode(blk.m, seed, cfg, rng);
    BitVec yn(cfg.code.n);
    for (std::uint32_t i = 0; i < cfg.code.n; ++i)
      yn.set(i, sample(t_ch, xn.get(i) ? 1 : 0, rng) == 1);
    blk.m_hat = wiretap_decode(yn, seed_rx, cfg);
    blk.ok = blk.m_hat == blk.m;
    run.blocks.push_back(std::move(blk));
  }
  return run;
}

}  // namespace uhsec
