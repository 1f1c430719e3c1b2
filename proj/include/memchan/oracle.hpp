// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Independent routes to the quantities computed in information.hpp:
//
//  * gaussian_mi_from_moments: invert the joint form V_N into a covariance
//    and use the log-determinant identity for jointly Gaussian vectors.
//  * monte_carlo_mi: simulate modulation, squeezed input noise, correlated
//    environment, the beam splitter and heterodyne noise sample by sample,
//    then estimate MI from the empirical covariance.
//  * quadrature_entropy_n1: brute-force -\int p log2 p on a tensor grid for
//    the 2- and 4-dimensional densities that appear at n = 1.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "memchan/channel_model.hpp"
#include "memchan/errors.hpp"
#include "memchan/information.hpp"
#include "memchan/matrix.hpp"

namespace memchan {

// MI in bits between the leading `split` coordinates and the rest of a
// Gaussian vector with covariance sigma.
inline double gaussian_mi_from_covariance(const SymMatrix& sigma, std::size_t split) {
  if (split == 0 || split >= sigma.dim())
    throw DimensionMismatch("gaussian_mi_from_covariance: split outside (0, dim)");
  const std::size_t rest = sigma.dim() - split;
  const SymMatrix a(block(sigma, 0, 0, split, split));
  const SymMatrix b(block(sigma, split, split, rest, rest));
  return (spd_logdet(a) + spd_logdet(b) - spd_logdet(sigma)) / (2.0 * kLn2);
}

inline double gaussian_mi_from_moments(const ModelMatrices& m, int n, double /*n_mod*/) {
  const SymMatrix sigma(Cholesky(m.v_n).inverse().matrix() * 0.5);
  return gaussian_mi_from_covariance(sigma, 2 * static_cast<std::size_t>(n));
}

// Counter-based generator: the stream for (seed, index) is fixed, so sample
// i draws the same numbers no matter which thread produces it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct McConfig {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
};

struct MiEstimate {
  double value = 0.0;      // bits
  double std_error = 0.0;  // bits, jackknife
};

inline constexpr std::size_t kJackknifeBlocks = 20;

namespace detail {

// Running first and second moments of the sampled (mu, zeta) vectors.
struct MomentSums {
  std::size_t count = 0;
  std::vector<double> s1;
  Matrix s2;

  explicit MomentSums(std::size_t dim = 0) : s1(dim, 0.0), s2(dim, dim) {}

  MomentSums& operator+=(const MomentSums& o) {
    count += o.count;
    for (std::size_t i = 0; i < s1.size(); ++i) s1[i] += o.s1[i];
    s2 += o.s2;
    return *this;
  }
  MomentSums& operator-=(const MomentSums& o) {
    count -= o.count;
    for (std::size_t i = 0; i < s1.size(); ++i) s1[i] -= o.s1[i];
    s2 -= o.s2;
    return *this;
  }

  SymMatrix covariance() const {
    const std::size_t d = s1.size();
    const double c = static_cast<double>(count);
    Matrix cov(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        cov(i, j) = (s2(i, j) - s1[i] * s1[j] / c) / (c - 1.0);
    return SymMatrix(cov);
  }
};

// Lower Cholesky factor of the covariance M^{-1}/2 of a density exp(-w M w^T).
inline Matrix sampling_factor(const SymMatrix& kernel) {
  const SymMatrix cov(Cholesky(kernel).inverse().matrix() * 0.5);
  return Cholesky(cov).lower();
}

struct ChannelSampler {
  std::size_t h;  // 2n
  double sqrt_eta;
  double sqrt_loss;
  double mod_sd;  // sqrt(N/2)
  Matrix in_factor;
  Matrix env_factor;

  ChannelSampler(const ChannelParams& p, const EncodingPoint& enc)
      : h(p.half_dim()),
        sqrt_eta(std::sqrt(p.eta)),
        sqrt_loss(std::sqrt(1.0 - p.eta)),
        mod_sd(std::sqrt(enc.n_mod / 2.0)),
        in_factor(sampling_factor(build_input_kernel(p.n, enc.r))),
        env_factor(sampling_factor(build_memory_kernel(p.n, p.s))) {}

  // Writes w = (mu, zeta) for sample `index`.
  void draw(std::uint64_t seed, std::uint64_t index, std::span<double> w) const {
    CounterRng rng(seed, index);
    std::vector<double> z_in(h), z_env(h);
    for (std::size_t i = 0; i < h; ++i) w[i] = mod_sd * rng.normal();
    for (std::size_t i = 0; i < h; ++i) z_in[i] = rng.normal();
    for (std::size_t i = 0; i < h; ++i) z_env[i] = rng.normal();
    for (std::size_t i = 0; i < h; ++i) {
      double u = w[i];  // coherent amplitude plus squeezed vacuum fluctuation
      double v = 0.0;   // correlated environment
      for (std::size_t k = 0; k <= i; ++k) {
        u += in_factor(i, k) * z_in[k];
        v += env_factor(i, k) * z_env[k];
      }
      const double out = sqrt_eta * u - sqrt_loss * v;
      w[h + i] = out + 0.5 * rng.normal();  // heterodyne adds variance 1/4
    }
  }

  MomentSums accumulate(std::uint64_t seed, std::uint64_t begin, std::uint64_t end) const {
    MomentSums sums(2 * h);
    std::vector<double> w(2 * h);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      draw(seed, idx, w);
      for (std::size_t i = 0; i < w.size(); ++i) {
        sums.s1[i] += w[i];
        for (std::size_t j = 0; j < w.size(); ++j) sums.s2(i, j) += w[i] * w[j];
      }
    }
    sums.count = static_cast<std::size_t>(end - begin);
    return sums;
  }
};

// One MomentSums per jackknife block, computed concurrently and returned in
// block order.
inline std::vector<MomentSums> sample_blocks(const ChannelParams& params, double r,
                                             const McConfig& cfg) {
  params.validate();
  if (cfg.samples < 2 * kJackknifeBlocks)
    throw InvalidSpec("monte_carlo_mi: need at least " + std::to_string(2 * kJackknifeBlocks) +
                      " samples");
  const ChannelSampler sampler(params, EncodingPoint::from_budget(params, r));
  std::vector<std::future<MomentSums>> jobs;
  jobs.reserve(kJackknifeBlocks);
  for (std::size_t b = 0; b < kJackknifeBlocks; ++b) {
    const std::uint64_t begin = cfg.samples * b / kJackknifeBlocks;
    const std::uint64_t end = cfg.samples * (b + 1) / kJackknifeBlocks;
    jobs.push_back(std::async(std::launch::async, [&sampler, &cfg, begin, end] {
      return sampler.accumulate(cfg.seed, begin, end);
    }));
  }
  std::vector<MomentSums> blocks;
  blocks.reserve(kJackknifeBlocks);
  for (auto& j : jobs) blocks.push_back(j.get());
  return blocks;
}

}  // namespace detail

// Empirical covariance of (mu, zeta) from the simulated channel.
inline SymMatrix sample_covariance(const ChannelParams& params, double r, const McConfig& cfg) {
  const auto blocks = detail::sample_blocks(params, r, cfg);
  detail::MomentSums total(blocks.front().s1.size());
  for (const auto& b : blocks) total += b;
  return total.covariance();
}

inline MiEstimate monte_carlo_mi(const ChannelParams& params, double r, const McConfig& cfg) {
  const auto blocks = detail::sample_blocks(params, r, cfg);
  const std::size_t h = params.half_dim();
  detail::MomentSums total(2 * h);
  for (const auto& b : blocks) total += b;

  const double full = gaussian_mi_from_covariance(total.covariance(), h);

  const double nb = static_cast<double>(blocks.size());
  std::vector<double> loo;
  loo.reserve(blocks.size());
  for (const auto& b : blocks) {
    detail::MomentSums rest = total;
    rest -= b;
    loo.push_back(gaussian_mi_from_covariance(rest.covariance(), h));
  }
  double mean = 0.0;
  for (double v : loo) mean += v;
  mean /= nb;
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  // The plug-in estimate is biased upward by ~ dim^2 / (8 samples ln 2) bits,
  // comparable to std_error at 1e5 samples; the jackknife removes that term.
  MiEstimate est;
  est.value = nb * full - (nb - 1.0) * mean;
  est.std_error = std::sqrt((nb - 1.0) / nb * ss);
  return est;
}

// Density p(w) = exp(log_norm - w K w^T) over R^dim.
struct QuadraticDensity {
  SymMatrix kernel;
  double log_norm = 0.0;
};

struct QuadratureResult {
  double bits = 0.0;
  double normalization = 0.0;
  double grid_error = 0.0;  // |H(points) - H(coarser grid)|
};

// P(mu) for n = 1: 2-D isotropic Gaussian with variance N/2 per quadrature.
inline QuadraticDensity modulation_density(int n, double n_mod) {
  const auto h = 2 * static_cast<std::size_t>(n);
  return {SymMatrix(Matrix::identity(h) * (1.0 / n_mod)),
          -static_cast<double>(n) * std::log(std::numbers::pi * n_mod)};
}

inline QuadraticDensity output_density(const ModelMatrices& m) {
  return {m.u_p, output_log_norm(m, m.n, m.n_mod)};
}

inline QuadraticDensity joint_density(const ModelMatrices& m) {
  return {m.v_n, joint_log_norm(m, m.n, m.n_mod)};
}

namespace detail {

struct GridSums {
  double mass = 0.0;
  double entropy_nats = 0.0;
};

// Cyclic Jacobi rotations. Returns eigenvalues; columns of `vectors` hold the
// orthonormal eigenvectors. Only used to orient quadrature grids.
inline std::vector<Real> jacobi_eigen(const SymMatrix& m, Matrix& vectors) {
  const std::size_t n = m.dim();
  Matrix a = m.matrix();
  vectors = Matrix::identity(n);
  Real scale = 0;
  for (Real x : a.data()) scale += x * x;
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int sweep = 0; sweep < 100; ++sweep) {
    Real off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= eps * eps * scale) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0) continue;
        const Real theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const Real t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Real c = 1 / std::sqrt(t * t + 1);
        const Real sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const Real akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Real apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Real vkp = vectors(k, p), vkq = vectors(k, q);
          vectors(k, p) = c * vkp - sn * vkq;
          vectors(k, q) = sn * vkp + c * vkq;
        }
      }
  }
  std::vector<Real> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  return values;
}

// Tensor trapezoid over y in a box, with w = y Q^T for the orthogonal `axes`
// (unit Jacobian). The density itself is always evaluated from its kernel.
inline GridSums trapezoid_grid(const QuadraticDensity& d, const Matrix& axes,
                               std::span<const double> half_width, std::size_t points) {
  const std::size_t dim = d.kernel.dim();
  std::vector<double> step(dim);
  double cell = 1.0;
  for (std::size_t k = 0; k < dim; ++k) {
    step[k] = 2.0 * half_width[k] / static_cast<double>(points - 1);
    cell *= step[k];
  }
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> y(dim);
  std::vector<Real> w(dim);
  GridSums sums;
  while (true) {
    double weight = 1.0;
    for (std::size_t k = 0; k < dim; ++k) {
      y[k] = -half_width[k] + step[k] * static_cast<double>(idx[k]);
      if (idx[k] == 0 || idx[k] == points - 1) weight *= 0.5;
    }
    for (std::size_t i = 0; i < dim; ++i) {
      w[i] = 0;
      for (std::size_t k = 0; k < dim; ++k) w[i] += axes(i, k) * y[k];
    }
    Real form = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      Real row = 0;
      for (std::size_t j = 0; j < dim; ++j) row += d.kernel(i, j) * w[j];
      form += w[i] * row;
    }
    const double log_p = d.log_norm - static_cast<double>(form);
    const double p = std::exp(log_p);
    sums.mass += weight * p;
    if (p > 0.0) sums.entropy_nats -= weight * p * log_p;

    std::size_t k = 0;
    while (k < dim && ++idx[k] == points) idx[k++] = 0;
    if (k == dim) break;
  }
  sums.mass *= cell;
  sums.entropy_nats *= cell;
  return sums;
}

}  // namespace detail

inline constexpr std::size_t kQuadraturePoints = 257;
// 4-D grids (joint density at n = 1); 257^4 points would be prohibitive.
inline constexpr std::size_t kJointQuadraturePoints = 41;
inline constexpr double kQuadratureHalfWidth = 8.0;  // principal standard deviations
inline constexpr double kNormalizationTol = 1e-6;
inline constexpr double kMaxQuadratureNodes = 5e7;

// Trapezoidal -\int p log2 p on a box of +- half_width standard deviations
// along the principal axes of the density. Restricted to dim 2 or 4 (n = 1 densities).
inline QuadratureResult quadrature_entropy_n1(const QuadraticDensity& density,
                                              double half_width = kQuadratureHalfWidth,
                                              std::size_t points = kQuadraturePoints) {
  const std::size_t dim = density.kernel.dim();
  if (dim != 2 && dim != 4)
    throw DimensionMismatch("quadrature_entropy_n1: dimension must be 2 or 4, got " +
                            std::to_string(dim));
  if (points < 5 || points % 2 == 0)
    throw InvalidSpec("quadrature_entropy_n1: points must be odd and >= 5");
  if (std::pow(static_cast<double>(points), static_cast<double>(dim)) > kMaxQuadratureNodes)
    throw InvalidSpec("quadrature_entropy_n1: " + std::to_string(points) + " points per axis in " +
                      std::to_string(dim) + "-D exceeds the node budget");

  // Principal axes of the kernel: along each, the standard deviation is
  // 1/sqrt(2 lambda). Strongly correlated pairs would starve a coordinate grid.
  Matrix axes;
  const std::vector<Real> lambda = detail::jacobi_eigen(density.kernel, axes);
  std::vector<double> hw(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    if (!(lambda[k] > 0))
      throw NotPositiveDefinite("quadrature_entropy_n1: kernel is not positive definite");
    hw[k] = half_width / std::sqrt(2.0 * static_cast<double>(lambda[k]));
  }

  const detail::GridSums fine = detail::trapezoid_grid(density, axes, hw, points);
  if (std::abs(fine.mass - 1.0) > kNormalizationTol)
    throw GridTooCoarse("quadrature: density integrates to " + std::to_string(fine.mass));
  const detail::GridSums coarse = detail::trapezoid_grid(density, axes, hw, (points + 1) / 2);

  QuadratureResult out;
  out.normalization = fine.mass;
  out.bits = nats_to_bits(fine.entropy_nats);
  out.grid_error = std::abs(out.bits - nats_to_bits(coarse.entropy_nats));
  return out;
}

}  // namespace memchan
