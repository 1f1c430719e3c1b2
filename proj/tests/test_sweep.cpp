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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "memchan/sweep.hpp"

using namespace memchan;

TEST_CASE("r grid is symmetric and hits zero exactly", "[sweep]") {
  for (std::size_t steps : {3u, 11u, 221u}) {
    const auto g = r_grid(-1.1, 1.1, steps);
    REQUIRE(g.size() == steps);
    CHECK(g.front() == -1.1);
    CHECK(g.back() == 1.1);
    CHECK(g[steps / 2] == 0.0);
    for (std::size_t i = 0; i < steps; ++i) CHECK(g[i] == -g[steps - 1 - i]);
    for (std::size_t i = 1; i < steps; ++i) CHECK(g[i] > g[i - 1]);
  }
}

TEST_CASE("number formatting", "[sweep][csv]") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(std::log2(2.6)) == "1.37851162325");
  CHECK(format_number(-1.1) == "-1.1");
  CHECK(format_number(2.5e-13) == "2.5e-13");
}

TEST_CASE("csv layout", "[sweep][csv]") {
  SweepSpec spec;
  spec.s_list = {0.0};
  spec.r_min = 0.0;
  spec.r_max = 0.0;
  spec.r_steps = 2;
  const SweepResult res = run_sweep(spec);
  REQUIRE(res.rows.size() == 2);
  std::ostringstream os;
  write_csv(os, res.rows);
  // Memoryless anchor at n = 2: every entropy is a circular Gaussian one.
  const double ln_pi = std::log(std::numbers::pi);
  const double i_mu = 2.0 * (1.0 + std::log(2.0 * std::numbers::pi)) / std::numbers::ln2;
  const double i_zeta = 2.0 * (1.0 + ln_pi + std::log(2.6)) / std::numbers::ln2;
  const double i_joint = i_mu + 2.0 * (1.0 + ln_pi) / std::numbers::ln2;
  const double i_r = 2.0 * std::log2(2.6);
  const std::string row = "0,0,2," + format_number(i_mu) + "," + format_number(i_zeta) + "," +
                          format_number(i_joint) + "," + format_number(i_r) + "," +
                          format_number(i_r / 2.0) + ",0\n";
  CHECK(os.str() == std::string(kCsvHeader) + "\n" + row + row);
}

TEST_CASE("zero-width grid gives two identical rows with zero gain", "[sweep]") {
  SweepSpec spec;
  spec.s_list = {2.0};
  spec.r_min = 0.0;
  spec.r_max = 0.0;
  spec.r_steps = 2;
  const SweepResult res = run_sweep(spec);
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0].gain == 0.0);
  CHECK(res.rows[1].gain == 0.0);
  CHECK(res.rows[0].i_r == res.rows[1].i_r);
}

TEST_CASE("default sweep ordering, counts and r=0 rows", "[sweep]") {
  SweepSpec spec;
  spec.s_list = {5.0, 0.0, 2.0};
  spec.r_steps = 41;
  const SweepResult res = run_sweep(spec);
  CHECK(res.grid_points == 3 * 41);
  CHECK(res.rows.size() + res.skipped_budget == res.grid_points);
  CHECK(res.skipped_budget == 0);  // default grid stays inside the budget
  for (std::size_t k = 1; k < res.rows.size(); ++k) {
    const auto& a = res.rows[k - 1];
    const auto& b = res.rows[k];
    CHECK((a.s < b.s || (a.s == b.s && a.r < b.r)));
  }
  int zeros = 0;
  for (const auto& row : res.rows)
    if (row.r == 0.0) {
      ++zeros;
      CHECK(row.gain == 0.0);
    }
  CHECK(zeros == 3);
}

TEST_CASE("explicit range beyond the budget skips points", "[sweep]") {
  SweepSpec spec;
  spec.s_list = {0.0, 1.0};
  spec.r_min = -2.0;
  spec.r_max = 2.0;
  spec.r_steps = 21;
  const SweepResult res = run_sweep(spec);
  CHECK(res.skipped_budget > 0);
  CHECK(res.rows.size() + res.skipped_budget == res.grid_points);
  for (const auto& row : res.rows) CHECK(row.n_mod >= kMinModulation);
}

TEST_CASE("csv output is deterministic", "[sweep][csv]") {
  SweepSpec spec;
  spec.r_steps = 31;
  std::ostringstream a, b;
  write_csv(a, run_sweep(spec).rows);
  write_csv(b, run_sweep(spec).rows);
  CHECK(a.str() == b.str());
  CHECK(a.str().find(' ') == std::string::npos);
  CHECK(a.str().find('\r') == std::string::npos);
}

TEST_CASE("invalid sweep specs", "[sweep][errors]") {
  SweepSpec spec;
  spec.r_steps = 1;
  CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);

  spec = {};
  spec.eta = 1.5;
  CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);

  spec = {};
  spec.s_list.clear();
  CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);

  spec = {};
  spec.r_min = 0.5;
  spec.r_max = -0.5;
  CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);

  spec = {};
  spec.r_min = 3.0;
  spec.r_max = 4.0;
  CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);

  spec = {};
  spec.n = 0;
  CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);
}

TEST_CASE("optimize report", "[sweep][optimize]") {
  SweepSpec spec;
  spec.s_list = {5.0, 0.0, 1.0};
  const auto rows = run_optimize(spec);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].s == 0.0);
  CHECK(rows[1].s == 1.0);
  CHECK(rows[2].s == 5.0);
  CHECK(std::abs(rows[0].r_star) <= 1e-6);
  CHECK(std::abs(rows[0].gain_star) <= 1e-9);
  CHECK(rows[2].gain_star > rows[1].gain_star);
  CHECK(rows[1].r_star > 0.0);

  std::ostringstream os;
  write_optimize_report(os, rows);
  CHECK(os.str().rfind("s,r_star,gain_star,rate_star\n", 0) == 0);

  spec.eta = 1.0;
  spec.s_list = {0.0, 2.0, 5.0};
  for (const auto& row : run_optimize(spec)) CHECK(std::abs(row.gain_star) <= 1e-9);

  spec.eta = 0.0;
  CHECK_THROWS_AS(run_optimize(spec), DegenerateBaseline);
}
