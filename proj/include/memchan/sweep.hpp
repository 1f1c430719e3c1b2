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

// Gain-versus-r sweeps, per-s optimization reports and their text formats.
//
// CSV schema (frozen):
//   s,r,N,I_mu,I_zeta,I_joint,I_r,rate,gain
// twelve significant digits ("%.12g"), '.' decimal point, '\n' line ends.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "memchan/channel_model.hpp"
#include "memchan/errors.hpp"
#include "memchan/information.hpp"

namespace memchan {

struct SweepSpec {
  int n = 2;
  double eta = 0.8;
  double n_eff = 2.0;
  std::vector<double> s_list{0.0, 1.0, 2.0, 5.0};
  std::optional<double> r_min;  // default: -admissible_r_limit(n_eff)
  std::optional<double> r_max;  // default: +admissible_r_limit(n_eff)
  std::size_t r_steps = 221;
  std::string output_path;

  ChannelParams params_for(double s) const { return {n, eta, s, n_eff}; }

  double lower() const { return r_min.value_or(-admissible_r_limit(n_eff)); }
  double upper() const { return r_max.value_or(admissible_r_limit(n_eff)); }

  void validate() const {
    params_for(0.0).validate();
    if (s_list.empty()) throw InvalidSpec("sweep: s list is empty");
    for (double s : s_list)
      if (!std::isfinite(s)) throw InvalidSpec("sweep: non-finite s value");
    if (r_steps < 2) throw InvalidSpec("sweep: r_steps must be >= 2");
    const double lo = lower();
    const double hi = upper();
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
      throw InvalidSpec("sweep: need finite r_min <= r_max");
    const double lim = admissible_r_limit(n_eff);
    if (hi < -lim || lo > lim)
      throw InvalidSpec("sweep: [r_min, r_max] misses the admissible interval |r| <= " +
                        std::to_string(lim));
  }
};

// r_i = ((steps-1-i) r_min + i r_max) / (steps-1); symmetric ranges map to
// exactly antisymmetric grids with an exact 0 for odd step counts.
inline std::vector<double> r_grid(double r_min, double r_max, std::size_t steps) {
  std::vector<double> g(steps);
  const double last = static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    const double di = static_cast<double>(i);
    g[i] = ((last - di) * r_min + di * r_max) / last;
  }
  return g;
}

struct SweepRow {
  double s = 0.0;
  double r = 0.0;
  double n_mod = 0.0;
  double i_mu = 0.0;
  double i_zeta = 0.0;
  double i_joint = 0.0;
  double i_r = 0.0;
  double rate = 0.0;
  double gain = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t grid_points = 0;
  std::size_t skipped_budget = 0;
};

inline SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<double> s_sorted = spec.s_list;
  std::sort(s_sorted.begin(), s_sorted.end());
  const std::vector<double> grid = r_grid(spec.lower(), spec.upper(), spec.r_steps);

  SweepResult out;
  for (double s : s_sorted) {
    const GainEvaluator eval(spec.params_for(s));
    for (double r : grid) {
      ++out.grid_points;
      std::optional<GainPoint> p;
      try {
        p = eval.at(r);
      } catch (const PhotonBudgetExceeded&) {
        ++out.skipped_budget;
        continue;
      }
      out.rows.push_back({s, r, p->n_mod, p->info.i_mu, p->info.i_zeta, p->info.i_joint,
                          p->info.i_r, p->info.rate, p->gain});
    }
  }
  return out;
}

inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline constexpr const char* kCsvHeader = "s,r,N,I_mu,I_zeta,I_joint,I_r,rate,gain";

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& row : rows) {
    os << format_number(row.s) << ',' << format_number(row.r) << ','
       << format_number(row.n_mod) << ',' << format_number(row.i_mu) << ','
       << format_number(row.i_zeta) << ',' << format_number(row.i_joint) << ','
       << format_number(row.i_r) << ',' << format_number(row.rate) << ','
       << format_number(row.gain) << '\n';
  }
}

inline void write_sweep_summary(std::ostream& os, const SweepSpec& spec, const SweepResult& res) {
  os << "sweep n=" << spec.n << " eta=" << format_number(spec.eta)
     << " N_eff=" << format_number(spec.n_eff) << " r=[" << format_number(spec.lower()) << ", "
     << format_number(spec.upper()) << "] steps=" << spec.r_steps << '\n';
  os << "grid points: " << res.grid_points << ", emitted rows: " << res.rows.size()
     << ", skipped (photon budget): " << res.skipped_budget << '\n';
  std::vector<double> s_sorted = spec.s_list;
  std::sort(s_sorted.begin(), s_sorted.end());
  for (double s : s_sorted) {
    const SweepRow* best = nullptr;
    for (const auto& row : res.rows)
      if (row.s == s && (best == nullptr || row.gain > best->gain)) best = &row;
    if (best != nullptr)
      os << "  s=" << format_number(s) << ": max gain " << format_number(best->gain)
         << " at r=" << format_number(best->r) << '\n';
  }
}

struct OptimizeRow {
  double s = 0.0;
  double r_star = 0.0;
  double gain_star = 0.0;
  double rate_star = 0.0;
};

inline std::vector<OptimizeRow> run_optimize(const SweepSpec& spec) {
  spec.params_for(0.0).validate();
  if (spec.s_list.empty()) throw InvalidSpec("optimize: s list is empty");
  std::vector<double> s_sorted = spec.s_list;
  std::sort(s_sorted.begin(), s_sorted.end());
  std::vector<OptimizeRow> rows;
  for (double s : s_sorted) {
    const OptimumR opt = optimize_r(spec.params_for(s));
    rows.push_back({s, opt.r_star, opt.gain_star, opt.point.info.rate});
  }
  return rows;
}

inline void write_optimize_report(std::ostream& os, const std::vector<OptimizeRow>& rows) {
  os << "s,r_star,gain_star,rate_star\n";
  for (const auto& row : rows)
    os << format_number(row.s) << ',' << format_number(row.r_star) << ','
       << format_number(row.gain_star) << ',' << format_number(row.rate_star) << '\n';
}

}  // namespace memchan
