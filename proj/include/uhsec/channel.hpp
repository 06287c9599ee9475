#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uhsec/codes.hpp"
#include "uhsec/info.hpp"
#include "uhsec/prob.hpp"
#include "uhsec/rng.hpp"

namespace uhsec {

// Channel construction and composition: BSC/BEC/DMC matrices, discretized
// AWGN, tensor powers, and the encoder-augmented channel observed by an
// eavesdropper across a whole code block.

enum class ChannelKind { Dmc, Bsc, Bec, AwgnGrid };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::Bsc;
  double p = 0;          // crossover / erasure probability
  double sigma2 = 1.0;   // AWGN noise variance
  double power = 1.0;    // AWGN input power (BPSK levels +-sqrt(power))
  std::uint32_t grid_points = 33;
  double span_sigmas = 4.0;
  std::vector<std::vector<double>> matrix;  // explicit DMC rows

  static ChannelSpec bsc(double p) {
    if (p < 0 || p > 1) throw std::invalid_argument("bsc: p must be in [0,1]");
    ChannelSpec s;
    s.kind = ChannelKind::Bsc;
    s.p = p;
    return s;
  }
  static ChannelSpec bec(double p) {
    if (p < 0 || p > 1) throw std::invalid_argument("bec: p must be in [0,1]");
    ChannelSpec s;
    s.kind = ChannelKind::Bec;
    s.p = p;
    return s;
  }
  static ChannelSpec dmc(std::vector<std::vector<double>> rows) {
    ChannelSpec s;
    s.kind = ChannelKind::Dmc;
    s.matrix = std::move(rows);
    return s;
  }
  static ChannelSpec awgn(double sigma2, double power, std::uint32_t grid_points = 33,
                          double span_sigmas = 4.0) {
    if (sigma2 <= 0) throw std::invalid_argument("awgn: sigma2 must be positive");
    if (grid_points < 2) throw std::invalid_argument("awgn: need at least 2 grid points");
    ChannelSpec s;
    s.kind = ChannelKind::AwgnGrid;
    s.sigma2 = sigma2;
    s.power = power;
    s.grid_points = grid_points;
    s.span_sigmas = span_sigmas;
    return s;
  }

  const char* kind_name() const {
    switch (kind) {
      case ChannelKind::Dmc: return "dmc";
      case ChannelKind::Bsc: return "bsc";
      case ChannelKind::Bec: return "bec";
      case ChannelKind::AwgnGrid: return "awgn";
    }
    return "?";
  }
};

inline DiscreteChannel make_bsc(double p) {
  DiscreteChannel c(2, 2);
  c.at(0, 0) = 1 - p;
  c.at(0, 1) = p;
  c.at(1, 0) = p;
  c.at(1, 1) = 1 - p;
  return c;
}

/// Outputs are {0, erased, 1} in that order.
inline DiscreteChannel make_bec(double p) {
  DiscreteChannel c(2, 3);
  c.at(0, 0) = 1 - p;
  c.at(0, 1) = p;
  c.at(1, 1) = p;
  c.at(1, 2) = 1 - p;
  return c;
}

inline double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

/// Discretization grid for a BPSK-input AWGN channel: the union of
/// grid_points equally spaced points within span_sigmas of each level, with
/// each point absorbing the Gaussian mass of its cell (outer cells extend to
/// infinity), so rows are exact probability vectors.
struct AwgnGrid {
  std::vector<double> points;  // strictly increasing
  std::vector<double> levels;  // +sqrt(P), -sqrt(P)
};

inline AwgnGrid make_awgn_grid(const ChannelSpec& s) {
  const double sigma = std::sqrt(s.sigma2);
  const double a = std::sqrt(s.power);
  AwgnGrid g;
  g.levels = {a, -a};
  for (double level : g.levels) {
    const double lo = level - s.span_sigmas * sigma;
    const double hi = level + s.span_sigmas * sigma;
    for (std::uint32_t i = 0; i < s.grid_points; ++i)
      g.points.push_back(lo + (hi - lo) * double(i) / double(s.grid_points - 1));
  }
  std::sort(g.points.begin(), g.points.end());
  g.points.erase(std::unique(g.points.begin(), g.points.end(),
                             [](double x, double y) { return std::abs(x - y) < 1e-12; }),
                 g.points.end());
  return g;
}

inline DiscreteChannel make_awgn_channel(const ChannelSpec& s) {
  const AwgnGrid g = make_awgn_grid(s);
  const double sigma = std::sqrt(s.sigma2);
  DiscreteChannel c(2, g.points.size());
  for (std::size_t x = 0; x < 2; ++x) {
    const double mu = g.levels[x];
    double prev_cdf = 0.0;
    for (std::size_t z = 0; z < g.points.size(); ++z) {
      const double hi_edge = z + 1 < g.points.size()
                                 ? 0.5 * (g.points[z] + g.points[z + 1])
                                 : std::numeric_limits<double>::infinity();
      const double cdf = std::isinf(hi_edge) ? 1.0 : normal_cdf((hi_edge - mu) / sigma);
      c.at(x, z) = cdf - prev_cdf;
      prev_cdf = cdf;
    }
  }
  return c;
}

inline DiscreteChannel make_channel(const ChannelSpec& s) {
  switch (s.kind) {
    case ChannelKind::Bsc: return make_bsc(s.p);
    case ChannelKind::Bec: return make_bec(s.p);
    case ChannelKind::AwgnGrid: return make_awgn_channel(s);
    case ChannelKind::Dmc: {
      if (s.matrix.empty()) throw std::invalid_argument("dmc: empty matrix");
      DiscreteChannel c(s.matrix.size(), s.matrix[0].size());
      for (std::size_t x = 0; x < c.nx; ++x) {
        if (s.matrix[x].size() != c.nz) throw std::invalid_argument("dmc: ragged matrix");
        for (std::size_t z = 0; z < c.nz; ++z) c.at(x, z) = s.matrix[x][z];
      }
      c.validate();
      return c;
    }
  }
  throw std::logic_error("make_channel: bad kind");
}

/// W(z|x) = sum_y V(z|y) T(y|x): the eavesdropper sees a further degraded
/// version of the legitimate output.
inline DiscreteChannel compose_degraded(const DiscreteChannel& t, const DiscreteChannel& v) {
  if (v.nx != t.nz) throw std::invalid_argument("compose_degraded: alphabet mismatch");
  DiscreteChannel w(t.nx, v.nz);
  for (std::size_t x = 0; x < t.nx; ++x)
    for (std::size_t z = 0; z < v.nz; ++z) {
      double s = 0;
      for (std::size_t y = 0; y < t.nz; ++y) s += v.at(y, z) * t.at(x, y);
      w.at(x, z) = s;
    }
  return w;
}

constexpr std::uint64_t kChannelEntryBudget = std::uint64_t(1) << 24;

/// n independent uses as one channel X^n -> Z^n (index = base-|X| digits,
/// first use most significant).
inline DiscreteChannel product_channel(const DiscreteChannel& w, std::uint32_t n,
                                       std::uint64_t budget = kChannelEntryBudget) {
  if (n == 0) throw std::invalid_argument("product_channel: n >= 1");
  double entries = 1;
  for (std::uint32_t i = 0; i < n; ++i) entries *= double(w.nx) * double(w.nz);
  if (entries > double(budget))
    throw BudgetExceeded("tensor power materialization (|X|^n x |Z|^n)",
                         std::uint64_t(std::min(entries, 1e18)), budget);

  std::uint64_t nx = 1, nz = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    nx *= w.nx;
    nz *= w.nz;
  }
  DiscreteChannel c(nx, nz);
  for (std::uint64_t x = 0; x < nx; ++x) {
    std::vector<std::size_t> xd(n);
    std::uint64_t xt = x;
    for (std::uint32_t i = n; i-- > 0;) {
      xd[i] = xt % w.nx;
      xt /= w.nx;
    }
    for (std::uint64_t z = 0; z < nz; ++z) {
      double prob = 1;
      std::uint64_t zt = z;
      for (std::uint32_t i = n; i-- > 0;) {
        prob *= w.at(xd[i], zt % w.nz);
        zt /= w.nz;
      }
      c.at(x, z) = prob;
    }
  }
  return c;
}

/// A per-letter channel observed across a code block: rows indexed by the
/// l-bit encoder input, columns by Z^n.
struct AugmentedChannel {
  DiscreteChannel base;
  std::uint32_t n = 0;
  std::uint32_t input_bits = 0;
  std::function<BitVec(const BitVec&)> encoder;

  DiscreteChannel materialize(std::uint64_t budget = kChannelEntryBudget) const {
    const std::uint64_t nx = std::uint64_t(1) << input_bits;
    double nzd = 1;
    for (std::uint32_t i = 0; i < n; ++i) nzd *= double(base.nz);
    if (double(nx) * nzd > double(budget))
      throw BudgetExceeded("augmented channel materialization (2^l x |Z|^n)",
                           std::uint64_t(std::min(double(nx) * nzd, 1e18)), budget);
    const std::uint64_t nz = std::uint64_t(nzd);
    DiscreteChannel c(nx, nz);
    for (std::uint64_t v = 0; v < nx; ++v) {
      const BitVec x = encoder(BitVec::from_uint(v, input_bits));
      if (x.size() != n) throw std::invalid_argument("augmented channel: encoder output length");
      for (std::uint64_t z = 0; z < nz; ++z) {
        double prob = 1;
        std::uint64_t zt = z;
        for (std::uint32_t i = n; i-- > 0;) {
          prob *= base.at(x.get(i) ? 1 : 0, zt % base.nz);
          zt /= base.nz;
        }
        c.at(v, z) = prob;
      }
    }
    return c;
  }
};

inline AugmentedChannel augment_with_encoder(const DiscreteChannel& w, std::uint32_t n,
                                             std::uint32_t input_bits,
                                             std::function<BitVec(const BitVec&)> encoder) {
  if (w.nx != 2) throw std::invalid_argument("augment_with_encoder: binary-input base expected");
  AugmentedChannel a;
  a.base = w;
  a.n = n;
  a.input_bits = input_bits;
  a.encoder = std::move(encoder);
  return a;
}

inline AugmentedChannel augment_with_encoder(const DiscreteChannel& w, const LinearCode& code) {
  return augment_with_encoder(w, code.n, code.k,
                              [code](const BitVec& u) { return code.encode(u); });
}

/// One draw from row x; consumes the caller's rng stream.
inline std::size_t sample(const DiscreteChannel& w, std::size_t x, CounterRng& rng) {
  if (x >= w.nx) throw std::invalid_argument("sample: input out of range");
  const double u = rng.next_double01();
  double acc = 0;
  for (std::size_t z = 0; z < w.nz; ++z) {
    acc += w.at(x, z);
    if (u < acc) return z;
  }
  return w.nz - 1;
}

/// Blahut-Arimoto capacity with certified upper/lower sandwich, in bits.
inline double blahut_arimoto_capacity(const DiscreteChannel& w, double tol = 1e-9,
                                      std::uint32_t max_iter = 200000) {
  std::vector<double> p(w.nx, 1.0 / double(w.nx));
  std::vector<double> q(w.nz, 0.0);
  std::vector<double> d(w.nx, 0.0);
  for (std::uint32_t it = 0; it < max_iter; ++it) {
    for (std::size_t z = 0; z < w.nz; ++z) {
      q[z] = 0;
      for (std::size_t x = 0; x < w.nx; ++x) q[z] += p[x] * w.at(x, z);
    }
    double lower = 0, upper = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < w.nx; ++x) {
      double dx = 0;
      for (std::size_t z = 0; z < w.nz; ++z) {
        const double wxz = w.at(x, z);
        if (wxz > 0) dx += wxz * std::log2(wxz / q[z]);
      }
      d[x] = dx;
      lower += p[x] * dx;
      upper = std::max(upper, dx);
    }
    if (upper - lower <= tol) return lower;
    double norm = 0;
    for (std::size_t x = 0; x < w.nx; ++x) {
      p[x] *= std::exp2(d[x] - lower);  // shift for numeric headroom
      norm += p[x];
    }
    for (std::size_t x = 0; x < w.nx; ++x) p[x] /= norm;
  }
  throw std::runtime_error("blahut_arimoto_capacity: did not converge");
}

/// Capacity in bits per use; closed forms where available.
inline double capacity(const ChannelSpec& s) {
  switch (s.kind) {
    case ChannelKind::Bsc: return 1.0 - binary_entropy(s.p);
    case ChannelKind::Bec: return 1.0 - s.p;
    case ChannelKind::AwgnGrid: return 0.5 * std::log2(1.0 + s.power / s.sigma2);
    case ChannelKind::Dmc: return blahut_arimoto_capacity(make_channel(s));
  }
  throw std::logic_error("capacity: bad kind");
}

}  // namespace uhsec
