#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace uhsec {

constexpr double kProbTolerance = 1e-12;

/// Exact finite probability vector over a labeled alphabet.
struct Distribution {
  std::vector<double> p;
  std::vector<std::string> labels;  // optional; filled with indices on demand

  Distribution() = default;
  explicit Distribution(std::vector<double> probs) : p(std::move(probs)) { validate(); }

  static Distribution uniform(std::size_t n) {
    return Distribution(std::vector<double>(n, 1.0 / double(n)));
  }
  static Distribution point_mass(std::size_t n, std::size_t at) {
    std::vector<double> v(n, 0.0);
    v.at(at) = 1.0;
    return Distribution(std::move(v));
  }

  std::size_t size() const { return p.size(); }

  void validate() const {
    if (p.empty()) throw std::invalid_argument("Distribution: empty alphabet");
    double sum = 0;
    for (double v : p) {
      if (v < 0) throw std::invalid_argument("Distribution: negative mass");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbTolerance)
      throw std::invalid_argument("Distribution: mass sums to " + std::to_string(sum));
  }
};

/// Exact joint probability matrix over X x Z.
struct JointDistribution {
  std::size_t nx = 0, nz = 0;
  std::vector<double> p;  // row major: p[x * nz + z]

  JointDistribution() = default;
  JointDistribution(std::size_t nx_, std::size_t nz_)
      : nx(nx_), nz(nz_), p(nx_ * nz_, 0.0) {}

  double& at(std::size_t x, std::size_t z) { return p[x * nz + z]; }
  double at(std::size_t x, std::size_t z) const { return p[x * nz + z]; }

  Distribution marginal_x() const {
    std::vector<double> m(nx, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z) m[x] += at(x, z);
    return Distribution(std::move(m));
  }
  Distribution marginal_z() const {
    std::vector<double> m(nz, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z) m[z] += at(x, z);
    return Distribution(std::move(m));
  }

  void validate() const {
    if (nx == 0 || nz == 0) throw std::invalid_argument("JointDistribution: empty alphabet");
    double sum = 0;
    for (double v : p) {
      if (v < 0) throw std::invalid_argument("JointDistribution: negative mass");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbTolerance)
      throw std::invalid_argument("JointDistribution: mass sums to " + std::to_string(sum));
  }
};

/// Row-stochastic matrix W(z|x) over finite alphabets.
struct DiscreteChannel {
  std::size_t nx = 0, nz = 0;
  std::vector<double> w;  // row major: w[x * nz + z]

  DiscreteChannel() = default;
  DiscreteChannel(std::size_t nx_, std::size_t nz_)
      : nx(nx_), nz(nz_), w(nx_ * nz_, 0.0) {}

  double& at(std::size_t x, std::size_t z) { return w[x * nz + z]; }
  double at(std::size_t x, std::size_t z) const { return w[x * nz + z]; }

  void validate() const {
    if (nx == 0 || nz == 0) throw std::invalid_argument("DiscreteChannel: empty alphabet");
    for (std::size_t x = 0; x < nx; ++x) {
      double sum = 0;
      for (std::size_t z = 0; z < nz; ++z) {
        const double v = at(x, z);
        if (v < -kProbTolerance || v > 1 + kProbTolerance)
          throw std::invalid_argument("DiscreteChannel: entry outside [0,1]");
        sum += v;
      }
      if (std::abs(sum - 1.0) > kProbTolerance)
        throw std::invalid_argument("DiscreteChannel: row " + std::to_string(x) +
                                    " sums to " + std::to_string(sum));
    }
  }

  /// Joint distribution when the input is drawn from px.
  JointDistribution joint_with_input(const Distribution& px) const {
    if (px.size() != nx) throw std::invalid_argument("joint_with_input: alphabet mismatch");
    JointDistribution j(nx, nz);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t z = 0; z < nz; ++z) j.at(x, z) = px.p[x] * at(x, z);
    return j;
  }
};

}  // namespace uhsec
