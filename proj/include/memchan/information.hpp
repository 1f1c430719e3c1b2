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

// Closed-form Shannon entropies of the heterodyne channel, the mutual
// information between encoded amplitudes mu and outcomes zeta, and the
// relative rate gain of entangled (squeezed) encodings over product ones.
//
// Every power and square-rooted determinant enters as a logarithm. The
// prefactor in front of each entropy bracket is evaluated, not assumed: it is
// the normalization integral of the corresponding density and is reported as
// c_out / c_joint so callers can watch it stay at 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "memchan/channel_model.hpp"
#include "memchan/errors.hpp"
#include "memchan/golden_section.hpp"
#include "memchan/matrix.hpp"

namespace memchan {

inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kLnPi = 1.1447298858494001741;  // ln(pi)
inline constexpr double kDegenerateBaseline = 1e-12;    // bits

inline double nats_to_bits(double nats) { return nats / kLn2; }

struct EntropyTerm {
  double bits = 0.0;
  double coefficient = 0.0;  // prefactor * ln 2, ideally 1
};

struct InfoBreakdown {
  double i_mu = 0.0;
  double i_zeta = 0.0;
  double i_joint = 0.0;
  double i_r = 0.0;
  double rate = 0.0;
  double c_out = 0.0;
  double c_joint = 0.0;
};

namespace detail {

inline const Real kLn2R = std::numbers::ln2_v<Real>;
inline const Real kLnPiR = std::log(std::numbers::pi_v<Real>);

inline Real input_entropy_bits(int n, double n_mod) {
  if (!(n_mod >= kMinModulation))
    throw PhotonBudgetExceeded("input_entropy: N=" + std::to_string(n_mod) +
                               " below the admissible minimum");
  const Real dn = static_cast<Real>(n);
  return (dn + dn * (kLnPiR + std::log(static_cast<Real>(n_mod)))) / kLn2R;
}

// ln of 2^{3n} / (pi^n N^n sqrt det(G+L)), shared by both densities.
inline Real log_conditional_prefactor(const ModelMatrices& m, int n, double n_mod) {
  const Real dn = static_cast<Real>(n);
  return 3 * dn * kLn2R - dn * kLnPiR - dn * std::log(static_cast<Real>(n_mod)) -
         m.logdet_gl / 2;
}

struct EntropyTermR {
  Real bits = 0;
  Real coefficient = 0;
};

inline Real output_log_norm(const ModelMatrices& m, int n, double n_mod) {
  return log_conditional_prefactor(m, n, n_mod) - spd_logdet(m.rn_p) / 2;
}

inline Real joint_log_norm(const ModelMatrices& m, int n, double n_mod) {
  return log_conditional_prefactor(m, n, n_mod) - static_cast<Real>(n) * kLnPiR;
}

inline EntropyTermR output_entropy(const ModelMatrices& m, int n, double n_mod) {
  const Real dn = static_cast<Real>(n);
  const Real log_c = output_log_norm(m, n, n_mod);
  const Real coeff = std::exp(log_c + dn * kLnPiR - spd_logdet(m.u_p) / 2);
  return {coeff * (dn - log_c) / kLn2R, coeff};
}

inline EntropyTermR joint_entropy(const ModelMatrices& m, int n, double n_mod) {
  const Real dn = static_cast<Real>(n);
  const Real log_c = joint_log_norm(m, n, n_mod);
  const Real coeff = std::exp(log_c + 2 * dn * kLnPiR - spd_logdet(m.v_n) / 2);
  return {coeff * (2 * dn - log_c) / kLn2R, coeff};
}

}  // namespace detail

inline double input_entropy(int n, double n_mod) {
  return static_cast<double>(detail::input_entropy_bits(n, n_mod));
}

// ln of the normalization constant of P(zeta).
inline double output_log_norm(const ModelMatrices& m, int n, double n_mod) {
  return static_cast<double>(detail::output_log_norm(m, n, n_mod));
}

// ln of the normalization constant of P(zeta, mu).
inline double joint_log_norm(const ModelMatrices& m, int n, double n_mod) {
  return static_cast<double>(detail::joint_log_norm(m, n, n_mod));
}

inline EntropyTerm output_entropy(const ModelMatrices& m, int n, double n_mod) {
  const auto t = detail::output_entropy(m, n, n_mod);
  return {static_cast<double>(t.bits), static_cast<double>(t.coefficient)};
}

inline EntropyTerm joint_entropy(const ModelMatrices& m, int n, double n_mod) {
  const auto t = detail::joint_entropy(m, n, n_mod);
  return {static_cast<double>(t.bits), static_cast<double>(t.coefficient)};
}

inline InfoBreakdown information_breakdown(const ModelMatrices& m) {
  // Differences of nearly equal entropies, so combine before narrowing.
  const Real mu = detail::input_entropy_bits(m.n, m.n_mod);
  const auto zeta = detail::output_entropy(m, m.n, m.n_mod);
  const auto joint = detail::joint_entropy(m, m.n, m.n_mod);
  const Real i_r = mu + zeta.bits - joint.bits;
  InfoBreakdown out;
  out.i_mu = static_cast<double>(mu);
  out.i_zeta = static_cast<double>(zeta.bits);
  out.i_joint = static_cast<double>(joint.bits);
  out.c_out = static_cast<double>(zeta.coefficient);
  out.c_joint = static_cast<double>(joint.coefficient);
  out.i_r = static_cast<double>(i_r);
  out.rate = static_cast<double>(i_r / static_cast<Real>(m.n));
  return out;
}

inline InfoBreakdown mutual_information(const ChannelParams& params, double r) {
  return information_breakdown(assemble_model(params, r));
}

struct GainPoint {
  double r = 0.0;
  double n_mod = 0.0;
  double gain = 0.0;
  InfoBreakdown info;
};

// Gain evaluation against a baseline I_{r=0} computed once per parameter set.
class GainEvaluator {
 public:
  explicit GainEvaluator(const ChannelParams& params)
      : params_(params), baseline_(mutual_information(params, 0.0)) {
    if (!(baseline_.i_r > kDegenerateBaseline))
      throw DegenerateBaseline("I_{r=0} = " + std::to_string(baseline_.i_r) +
                               " bits (eta=" + std::to_string(params.eta) + ")");
  }

  const ChannelParams& params() const { return params_; }
  const InfoBreakdown& baseline() const { return baseline_; }

  GainPoint at(double r) const {
    if (r == 0.0) return {0.0, params_.n_eff, 0.0, baseline_};
    GainPoint p;
    p.r = r;
    p.n_mod = photon_budget(params_.n_eff, r);
    p.info = mutual_information(params_, r);
    p.gain = (p.info.i_r - baseline_.i_r) / baseline_.i_r;
    return p;
  }

 private:
  ChannelParams params_;
  InfoBreakdown baseline_;
};

inline GainPoint rate_gain(const ChannelParams& params, double r) {
  return GainEvaluator(params).at(r);
}

// Largest |r| the optimizer and default sweeps visit: N stays >= 2 N_MIN.
inline double admissible_r_limit(double n_eff) {
  if (!(n_eff > 2.0 * kMinModulation)) return 0.0;
  return std::asinh(std::sqrt(n_eff - 2.0 * kMinModulation));
}

struct OptimumR {
  double r_star = 0.0;
  double gain_star = 0.0;
  GainPoint point;
};

// Maximizes g over the admissible interval. A coarse grid picks the best
// point on each side of r = 0, golden-section refines inside its neighbour
// bracket, and the better branch wins. Unimodality is not assumed globally.
inline OptimumR optimize_r(const ChannelParams& params, std::size_t coarse_points = 256,
                           double r_tol = 1e-10) {
  params.validate();
  const GainEvaluator eval(params);
  const double edge = admissible_r_limit(params.n_eff);
  auto gain = [&](double r) { return eval.at(r).gain; };

  Extremum best{0.0, 0.0};
  if (edge > 0.0 && coarse_points >= 3) {
    const std::size_t last = coarse_points - 1;
    std::vector<double> grid(coarse_points);
    std::vector<double> values(coarse_points);
    for (std::size_t i = 0; i < coarse_points; ++i) {
      grid[i] = (static_cast<double>(last - i) * -edge + static_cast<double>(i) * edge) /
                static_cast<double>(last);
      values[i] = gain(grid[i]);
    }
    // Negative branch [-edge, 0] and positive branch [0, edge].
    for (int side : {-1, +1}) {
      std::optional<std::size_t> arg;
      for (std::size_t i = 0; i < coarse_points; ++i) {
        if (side < 0 ? grid[i] > 0.0 : grid[i] < 0.0) continue;
        if (!arg || values[i] > values[*arg]) arg = i;
      }
      if (!arg) continue;
      const std::size_t i = *arg;
      double lo = i > 0 ? grid[i - 1] : grid[i];
      double hi = i < last ? grid[i + 1] : grid[i];
      if (side < 0) hi = std::min(hi, 0.0);
      else lo = std::max(lo, 0.0);
      const Extremum e = golden_section_max(gain, lo, hi, r_tol);
      if (e.value > best.value) best = e;
    }
  }
  OptimumR out;
  out.r_star = best.x;
  out.point = eval.at(best.x);
  out.gain_star = out.point.gain;
  return out;
}

}  // namespace memchan
