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

// Self-check suite behind `memchan verify`. The report contains no timings
// so identical inputs produce byte-identical output.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "memchan/channel_model.hpp"
#include "memchan/information.hpp"
#include "memchan/matrix.hpp"
#include "memchan/oracle.hpp"

namespace memchan {

enum class VerifyLevel { kQuick, kFull };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::kQuick;
  std::uint64_t seed = 42;
  std::uint64_t samples = 100000;
  std::optional<ChannelParams> spot;  // extra point supplied on the command line
  std::optional<double> spot_r;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Max-deviation style check: passes when worst <= tol.
inline CheckResult bound_check(std::string name, double worst, double tol) {
  return {std::move(name), worst <= tol, "max deviation " + fmt(worst) + " (tol " + fmt(tol) + ")"};
}

template <class F>
CheckResult guarded(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

struct StandardPoint {
  ChannelParams params;
  double r;
};

// eta in {0.1..0.9}, s in {0,1,2,5}, r in [-1,1] step 0.1, N_eff in {2,20}, n = 2.
inline std::vector<StandardPoint> standard_grid(int n = 2) {
  std::vector<StandardPoint> pts;
  for (int ie = 1; ie <= 9; ++ie)
    for (double s : {0.0, 1.0, 2.0, 5.0})
      for (double n_eff : {2.0, 20.0})
        for (int ir = -10; ir <= 10; ++ir)
          pts.push_back({{n, ie / 10.0, s, n_eff}, ir / 10.0});
  return pts;
}

}  // namespace detail

inline VerifyReport run_verify(const VerifyOptions& opt) {
  using detail::bound_check;
  using detail::fmt;
  using detail::guarded;
  VerifyReport rep;
  CounterRng rng(opt.seed, 0xfeedULL);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };

  rep.checks.push_back(guarded("beam_splitter_orthogonal", [&] {
    Real worst = 0.0;
    for (int n = 1; n <= 4; ++n)
      for (int k = 0; k <= 10; ++k) {
        const Matrix b = build_beam_splitter(n, k / 10.0);
        worst = std::max(worst, max_abs_diff(matmul(b, b.transposed()),
                                             Matrix::identity(b.rows())));
      }
    return bound_check("beam_splitter_orthogonal", worst, 1e-12);
  }));

  rep.checks.push_back(guarded("input_kernel_logdet", [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 64; ++trial) {
      const int n = 1 + trial % 8;
      const double r = uniform(-3.0, 3.0);
      const double ld = spd_logdet(build_input_kernel(n, r));
      worst = std::max(worst, std::abs(ld - 2.0 * n * kLn2));
    }
    return bound_check("input_kernel_logdet", worst, 1e-10);
  }));

  rep.checks.push_back(guarded("block_diag_logdet_additive", [&] {
    Real worst = 0.0;
    for (int trial = 0; trial < 16; ++trial) {
      const SymMatrix a = build_input_kernel(1 + trial % 4, uniform(-2.0, 2.0));
      const SymMatrix b = build_memory_kernel(1 + trial % 3, uniform(-2.0, 2.0));
      worst = std::max(worst, std::abs(spd_logdet(block_diag(a, b)) -
                                       spd_logdet(a) - spd_logdet(b)));
    }
    return bound_check("block_diag_logdet_additive", worst, 1e-12);
  }));

  rep.checks.push_back(guarded("conjugation_preserves_logdet", [&] {
    Real worst = 0.0;
    for (int trial = 0; trial < 16; ++trial) {
      const ChannelParams p{1 + trial % 4, uniform(0.0, 1.0), uniform(-2.0, 2.0), 2.0};
      const ModelMatrices m = assemble_model(p, uniform(-1.0, 1.0));
      worst = std::max(worst, std::abs(spd_logdet(m.g) - spd_logdet(m.a_tot)));
    }
    return bound_check("conjugation_preserves_logdet", worst, 1e-10);
  }));

  rep.checks.push_back(guarded("positive_definite_grid", [&] {
    std::size_t count = 0;
    for (int ie = 1; ie <= 9; ++ie)
      for (double r : {-2.0, -1.0, 0.0, 1.0, 2.0})
        for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0})
          for (double n_mod : {0.01, 1.0, 50.0}) {
            const double sh = std::sinh(r);
            const ChannelParams p{2, ie / 10.0, s, n_mod + sh * sh};
            const ModelMatrices m = assemble_model(p, EncodingPoint{r, p.n_eff - sh * sh});
            Cholesky gc(m.g);
            Cholesky vc(m.v_n);
            Cholesky uc(m.u_p);
            ++count;
          }
    return CheckResult{"positive_definite_grid", true,
                       std::to_string(count) + " points factorized"};
  }));

  const auto grid = detail::standard_grid();
  std::vector<InfoBreakdown> grid_info;
  grid_info.reserve(grid.size());
  rep.checks.push_back(guarded("standard_grid_evaluates", [&] {
    for (const auto& pt : grid) grid_info.push_back(mutual_information(pt.params, pt.r));
    return CheckResult{"standard_grid_evaluates", true, std::to_string(grid.size()) + " points"};
  }));

  if (grid_info.size() == grid.size()) {
    double worst_low = 0.0;
    double worst_high = 0.0;
    double worst_norm = 0.0;
    for (const auto& info : grid_info) {
      worst_low = std::max(worst_low, -info.i_r);
      worst_high = std::max(worst_high, info.i_r - info.i_mu);
      worst_norm = std::max({worst_norm, std::abs(info.c_out - 1.0), std::abs(info.c_joint - 1.0)});
    }
    rep.checks.push_back(bound_check("mutual_information_nonnegative", worst_low, 1e-9));
    rep.checks.push_back(bound_check("data_processing_bound", std::max(0.0, worst_high), 1e-9));
    rep.checks.push_back(bound_check("normalization_standard_grid", worst_norm, 1e-8));

    rep.checks.push_back(guarded("moment_oracle_agreement", [&] {
      double worst = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const ModelMatrices m = assemble_model(grid[i].params, grid[i].r);
        worst = std::max(worst, std::abs(grid_info[i].i_r -
                                         gaussian_mi_from_moments(m, m.n, m.n_mod)));
      }
      return bound_check("moment_oracle_agreement", worst, 1e-7);
    }));
  }

  rep.checks.push_back(guarded("normalization_n_le_6", [&] {
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
      double worst_n = 0.0;
      for (int trial = 0; trial < 8; ++trial) {
        const ChannelParams p{n, uniform(0.05, 1.0), uniform(-2.0, 2.0), uniform(0.5, 30.0)};
        const double lim = admissible_r_limit(p.n_eff);
        const InfoBreakdown info = mutual_information(p, uniform(-0.9, 0.9) * lim);
        worst_n = std::max({worst_n, std::abs(info.c_out - 1.0), std::abs(info.c_joint - 1.0)});
      }
      if (n <= 6) worst = std::max(worst, worst_n);
      else if (worst_n > 1e-8)
        rep.warnings.push_back("normalization drift at n=" + std::to_string(n) + ": " +
                               fmt(worst_n));
    }
    return bound_check("normalization_n_le_6", worst, 1e-8);
  }));

  rep.checks.push_back(guarded("full_transmission_ignores_memory", [&] {
    double worst = 0.0;
    for (double r : {-0.8, 0.0, 0.5}) {
      const double ref = mutual_information({2, 1.0, 0.0, 2.0}, r).i_r;
      for (double s : {1.0, 2.0, 5.0})
        worst = std::max(worst, std::abs(mutual_information({2, 1.0, s, 2.0}, r).i_r - ref));
    }
    return bound_check("full_transmission_ignores_memory", worst, 1e-9);
  }));

  rep.checks.push_back(guarded("zero_transmission_zero_information", [&] {
    double worst = 0.0;
    for (double s : {0.0, 1.0, 2.0, 5.0})
      for (double r : {-0.5, 0.0, 0.7})
        worst = std::max(worst, std::abs(mutual_information({2, 0.0, s, 2.0}, r).i_r));
    return bound_check("zero_transmission_zero_information", worst, 1e-9);
  }));

  rep.checks.push_back(guarded("information_increases_with_eta", [&] {
    double prev = -1.0;
    bool ok = true;
    for (int ie = 1; ie <= 9; ++ie) {
      const double v = mutual_information({2, ie / 10.0, 0.0, 2.0}, 0.0).i_r;
      ok = ok && v > prev;
      prev = v;
    }
    return CheckResult{"information_increases_with_eta", ok, "eta in {0.1..0.9}, r=s=0"};
  }));

  rep.checks.push_back(guarded("entropies_linear_in_n", [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
      const double eta = uniform(0.1, 0.95);
      const double s = uniform(-2.0, 2.0);
      const double n_eff = uniform(1.0, 20.0);
      const double r = uniform(-0.8, 0.8) * admissible_r_limit(n_eff);
      const InfoBreakdown one = mutual_information({1, eta, s, n_eff}, r);
      for (int n = 2; n <= 4; ++n) {
        const InfoBreakdown many = mutual_information({n, eta, s, n_eff}, r);
        for (auto [a, b] : {std::pair{one.i_mu, many.i_mu}, std::pair{one.i_zeta, many.i_zeta},
                            std::pair{one.i_joint, many.i_joint}})
          worst = std::max(worst, std::abs(b - n * a) / std::max(1.0, std::abs(n * a)));
      }
    }
    return bound_check("entropies_linear_in_n", worst, 1e-7);
  }));

  rep.checks.push_back(guarded("memoryless_gain_symmetric_nonpositive", [&] {
    const GainEvaluator eval({2, 0.8, 0.0, 2.0});
    double worst_sym = 0.0;
    double worst_pos = 0.0;
    const double lim = admissible_r_limit(2.0);
    for (int i = 1; i <= 50; ++i) {
      const double r = lim * i / 51.0;
      const double gp = eval.at(r).gain;
      const double gm = eval.at(-r).gain;
      worst_sym = std::max(worst_sym, std::abs(gp - gm));
      worst_pos = std::max({worst_pos, gp, gm});
    }
    CheckResult c = bound_check("memoryless_gain_symmetric_nonpositive", worst_sym, 1e-8);
    c.passed = c.passed && worst_pos <= 1e-9;
    c.detail += ", max gain " + fmt(worst_pos);
    return c;
  }));

  if (opt.spot) {
    rep.checks.push_back(guarded("spot_point_moment_oracle", [&] {
      const double r = opt.spot_r.value_or(0.0);
      const ModelMatrices m = assemble_model(*opt.spot, r);
      const double closed = information_breakdown(m).i_r;
      return bound_check("spot_point_moment_oracle",
                         std::abs(closed - gaussian_mi_from_moments(m, m.n, m.n_mod)), 1e-7);
    }));
  }

  if (opt.level == VerifyLevel::kFull) {
    const McConfig cfg{opt.samples, opt.seed};
    auto mc_check = [&](const std::string& name, const ChannelParams& p, double r,
                        double expected) {
      return guarded(name, [&] {
        const MiEstimate est = monte_carlo_mi(p, r, cfg);
        const double dev = std::abs(est.value - expected);
        return CheckResult{name, dev <= 3.0 * est.std_error,
                           "estimate " + fmt(est.value) + " +- " + fmt(est.std_error) +
                               ", closed form " + fmt(expected)};
      });
    };
    rep.checks.push_back(mc_check("monte_carlo_memoryless_anchor", {2, 0.8, 0.0, 2.0}, 0.0,
                                  2.0 * std::log2(1.0 + 0.8 * 2.0)));
    rep.checks.push_back(mc_check("monte_carlo_memory_point", {2, 0.8, 2.0, 2.0}, 0.4,
                                  mutual_information({2, 0.8, 2.0, 2.0}, 0.4).i_r));
    rep.checks.push_back(mc_check("monte_carlo_zero_transmission", {2, 0.0, 1.0, 2.0}, 0.3, 0.0));
    if (opt.spot) {
      const double r = opt.spot_r.value_or(0.0);
      rep.checks.push_back(mc_check("monte_carlo_spot_point", *opt.spot, r,
                                    mutual_information(*opt.spot, r).i_r));
    }

    rep.checks.push_back(guarded("quadrature_n1_entropies", [&] {
      double worst = 0.0;
      const std::vector<detail::StandardPoint> points = {
          {{1, 0.8, 0.0, 2.0}, 0.0}, {{1, 0.5, 1.0, 2.0}, 0.3}, {{1, 0.9, 2.0, 5.0}, -0.4},
          {{1, 0.3, -1.0, 3.0}, 0.6}, {{1, 0.7, 0.5, 1.0}, 0.2}};
      for (const auto& pt : points) {
        const ModelMatrices m = assemble_model(pt.params, pt.r);
        const InfoBreakdown info = information_breakdown(m);
        worst = std::max(worst, std::abs(quadrature_entropy_n1(modulation_density(1, m.n_mod)).bits -
                                         info.i_mu));
        worst = std::max(worst, std::abs(quadrature_entropy_n1(output_density(m)).bits - info.i_zeta));
        worst = std::max(worst, std::abs(quadrature_entropy_n1(joint_density(m), kQuadratureHalfWidth,
                                                               kJointQuadraturePoints)
                                             .bits -
                                         info.i_joint));
      }
      return bound_check("quadrature_n1_entropies", worst, 1e-4);
    }));
  }
  return rep;
}

inline void write_verify_report(std::ostream& os, const VerifyReport& rep) {
  for (const auto& c : rep.checks)
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  for (const auto& w : rep.warnings) os << "WARN " << w << '\n';
  const auto failed = std::count_if(rep.checks.begin(), rep.checks.end(),
                                    [](const auto& c) { return !c.passed; });
  os << (failed == 0 ? "verify: all " : "verify: ") << rep.checks.size() - failed << "/"
     << rep.checks.size() << " checks passed\n";
}

}  // namespace memchan
