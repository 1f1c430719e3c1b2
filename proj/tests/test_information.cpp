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
#include <random>

#include "memchan/golden_section.hpp"
#include "memchan/information.hpp"
#include "test_support.hpp"

using Catch::Approx;
using namespace memchan;

namespace {
constexpr double kLog2Of2p6 = 1.3785116232537298;      // log2(1 + 0.8 * 2)
constexpr double kVacuumHeterodyneBits = 3.0941911703612822;  // (1 + ln pi) / ln 2
}  // namespace

TEST_CASE("photon budget", "[info]") {
  CHECK(photon_budget(2.0, 0.0) == 2.0);
  CHECK_THROWS_AS(photon_budget(2.0, std::asinh(std::sqrt(2.0))), PhotonBudgetExceeded);
  CHECK(photon_budget(20.0, 1.0) == Approx(18.618902154458183).epsilon(1e-14));
  CHECK(photon_budget(2.0, -0.5) == photon_budget(2.0, 0.5));
  CHECK_THROWS_AS(photon_budget(2.0, 3.0), PhotonBudgetExceeded);
  CHECK(admissible_r_limit(2.0) < budget_r_limit(2.0));
  CHECK(photon_budget(2.0, admissible_r_limit(2.0)) >= kMinModulation);
}

TEST_CASE("input entropy", "[info]") {
  CHECK(input_entropy(1, 2.0) == Approx((1.0 + std::log(2.0 * std::numbers::pi)) / std::log(2.0)).epsilon(1e-14));
  CHECK(input_entropy(1, 2.0) == Approx(4.0941911703612822).epsilon(1e-12));
  CHECK(input_entropy(2, 2.0) == Approx(2.0 * input_entropy(1, 2.0)).epsilon(1e-14));
  CHECK(input_entropy(1, 1.0 / std::numbers::pi) == Approx(1.0 / std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(input_entropy(1, 0.0), PhotonBudgetExceeded);
}

TEST_CASE("output entropy", "[info]") {
  SECTION("memoryless coherent heterodyne output is circular Gaussian of variance 1 + eta N") {
    const ModelMatrices m = assemble_model({1, 0.8, 0.0, 2.0}, 0.0);
    const EntropyTerm h = output_entropy(m, 1, 2.0);
    CHECK(h.bits == Approx((1.0 + std::log(std::numbers::pi * 2.6)) / std::log(2.0)).epsilon(1e-12));
    CHECK(h.bits == Approx(4.472702793615012).epsilon(1e-12));
    CHECK(std::abs(h.coefficient - 1.0) <= 1e-12);
  }
  SECTION("zero transmission leaves the heterodyned vacuum") {
    const ModelMatrices m = assemble_model({1, 0.0, 0.0, 2.0}, 0.0);
    CHECK(output_entropy(m, 1, 2.0).bits == Approx(kVacuumHeterodyneBits).epsilon(1e-12));
  }
}

TEST_CASE("joint entropy", "[info]") {
  SECTION("zero transmission factorizes") {
    for (double s : {0.0, 1.0, 3.0}) {
      const ModelMatrices m = assemble_model({2, 0.0, s, 2.0}, 0.4);
      const double joint = joint_entropy(m, 2, m.n_mod).bits;
      const double sum = input_entropy(2, m.n_mod) + output_entropy(m, 2, m.n_mod).bits;
      CHECK(std::abs(joint - sum) <= 1e-9);
    }
  }
  SECTION("memoryless n = 1 adds unit-variance heterodyne noise to I(mu)") {
    const ModelMatrices m = assemble_model({1, 0.8, 0.0, 2.0}, 0.0);
    CHECK(joint_entropy(m, 1, 2.0).bits ==
          Approx(input_entropy(1, 2.0) + kVacuumHeterodyneBits).epsilon(1e-12));
  }
}

TEST_CASE("normalization coefficients stay at one", "[info][property]") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const ChannelParams p{n, u01(rng), 6.0 * u01(rng) - 3.0, 0.2 + 30.0 * u01(rng)};
      const double r = (2.0 * u01(rng) - 1.0) * 0.95 * admissible_r_limit(p.n_eff);
      const InfoBreakdown info = mutual_information(p, r);
      CHECK(std::abs(info.c_out - 1.0) <= 1e-8);
      CHECK(std::abs(info.c_joint - 1.0) <= 1e-8);
    }
}

TEST_CASE("mutual information examples", "[info]") {
  const InfoBreakdown base = mutual_information({2, 0.8, 0.0, 2.0}, 0.0);
  CHECK(std::abs(base.rate - kLog2Of2p6) <= 1e-7);
  CHECK(std::abs(base.i_r - (base.i_mu + base.i_zeta - base.i_joint)) <= 1e-13);
  CHECK(std::abs(base.rate - base.i_r / 2.0) <= 1e-15);

  for (double s : {0.0, 1.0, 5.0}) CHECK(std::abs(mutual_information({2, 0.0, s, 2.0}, 0.0).i_r) <= 1e-9);

  for (double s : {0.0, 1.5, 5.0})
    for (double r : {-0.6, 0.3}) {
      const double r2 = mutual_information({2, 0.7, s, 3.0}, r).rate;
      const double r3 = mutual_information({3, 0.7, s, 3.0}, r).rate;
      CHECK(std::abs(r2 - r3) <= 1e-8);
    }
}

TEST_CASE("closed form agrees with the normal-mode decomposition", "[info][oracle]") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 5;
    const ChannelParams p{n, u01(rng), 4.0 * u01(rng) - 2.0, 0.5 + 25.0 * u01(rng)};
    const double r = (2.0 * u01(rng) - 1.0) * 0.9 * admissible_r_limit(p.n_eff);
    const double n_mod = photon_budget(p.n_eff, r);
    const InfoBreakdown info = mutual_information(p, r);
    CHECK(std::abs(info.rate - testing::normal_mode_rate_bits(p.eta, r, p.s, n_mod)) <= 1e-8);
  }
}

TEST_CASE("information invariants", "[info][property]") {
  SECTION("full transmission ignores the environment") {
    for (double r : {-0.7, 0.0, 0.9}) {
      const double ref = mutual_information({2, 1.0, 0.0, 2.0}, r).i_r;
      for (double s : {1.0, 2.0, 5.0})
        CHECK(std::abs(mutual_information({2, 1.0, s, 2.0}, r).i_r - ref) <= 1e-9);
    }
  }
  SECTION("strictly increasing in eta at r = s = 0") {
    double prev = 0.0;
    for (int ie = 1; ie <= 9; ++ie) {
      const double v = mutual_information({2, ie / 10.0, 0.0, 2.0}, 0.0).i_r;
      CHECK(v > prev);
      prev = v;
    }
  }
  SECTION("entropies are linear in n") {
    for (double r : {-0.5, 0.25}) {
      const InfoBreakdown one = mutual_information({1, 0.6, 1.2, 5.0}, r);
      for (int n = 2; n <= 4; ++n) {
        const InfoBreakdown many = mutual_information({n, 0.6, 1.2, 5.0}, r);
        CHECK(many.i_mu == Approx(n * one.i_mu).epsilon(1e-7));
        CHECK(many.i_zeta == Approx(n * one.i_zeta).epsilon(1e-7));
        CHECK(many.i_joint == Approx(n * one.i_joint).epsilon(1e-7));
      }
    }
  }
  SECTION("0 <= I_r <= I(mu)") {
    for (int ie = 0; ie <= 10; ++ie)
      for (double s : {-1.0, 0.0, 2.0, 5.0})
        for (double r : {-1.0, 0.0, 0.6}) {
          const InfoBreakdown info = mutual_information({2, ie / 10.0, s, 2.0}, r);
          CHECK(info.i_r >= -1e-9);
          CHECK(info.i_r <= info.i_mu + 1e-9);
        }
  }
}

TEST_CASE("rate gain", "[info]") {
  const ChannelParams memoryless{2, 0.8, 0.0, 2.0};
  CHECK(rate_gain(memoryless, 0.0).gain == 0.0);

  const GainEvaluator eval(memoryless);
  const double lim = admissible_r_limit(2.0);
  for (int i = 1; i <= 40; ++i) {
    const double r = lim * i / 41.0;
    const double gp = eval.at(r).gain;
    const double gm = eval.at(-r).gain;
    CHECK(std::abs(gp - gm) <= 1e-8);
    CHECK(gp <= 1e-9);
    CHECK(std::abs(gp - testing::normal_mode_gain(0.8, r, 0.0, 2.0)) <= 1e-8);
  }

  const GainEvaluator strong({2, 0.8, 5.0, 2.0});
  bool positive = false;
  for (int i = 1; i <= 40; ++i) positive = positive || strong.at(lim * i / 41.0).gain > 0.0;
  CHECK(positive);

  const GainPoint gp = rate_gain({2, 0.8, 2.0, 2.0}, 0.3);
  CHECK(gp.gain == Approx((gp.info.i_r - mutual_information({2, 0.8, 2.0, 2.0}, 0.0).i_r) /
                          mutual_information({2, 0.8, 2.0, 2.0}, 0.0).i_r)
                       .epsilon(1e-14));
  CHECK(gp.n_mod == photon_budget(2.0, 0.3));

  CHECK_THROWS_AS(rate_gain({2, 0.0, 1.0, 2.0}, 0.2), DegenerateBaseline);
  CHECK_THROWS_AS(rate_gain({2, 0.8, 1.0, 2.0}, 1.5), PhotonBudgetExceeded);
}

TEST_CASE("golden section finds interior and boundary maxima", "[info][optimizer]") {
  const Extremum interior = golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, -1.0, 2.0);
  CHECK(interior.x == Approx(0.3).margin(1e-8));
  const Extremum edge = golden_section_max([](double x) { return -x; }, 0.0, 1.0);
  CHECK(edge.x == 0.0);
}

TEST_CASE("optimize_r", "[info][optimizer]") {
  SECTION("memoryless optimum sits at r = 0 with zero gain") {
    const OptimumR opt = optimize_r({2, 0.8, 0.0, 2.0});
    CHECK(std::abs(opt.r_star) <= 1e-4);
    CHECK(std::abs(opt.gain_star) <= 1e-9);
  }
  SECTION("strong memory favours positive r") {
    const OptimumR opt5 = optimize_r({2, 0.8, 5.0, 2.0});
    const OptimumR opt1 = optimize_r({2, 0.8, 1.0, 2.0});
    CHECK(opt5.r_star > 0.0);
    CHECK(opt5.gain_star > 0.0);
    CHECK(opt5.gain_star > opt1.gain_star);
  }
  SECTION("matches a dense grid scan") {
    for (double s : {1.0, 2.0, 5.0, -2.0}) {
      const ChannelParams p{2, 0.8, s, 2.0};
      const OptimumR opt = optimize_r(p);
      const GainEvaluator eval(p);
      const double lim = admissible_r_limit(p.n_eff);
      const int points = 10000;
      double best_r = 0.0;
      double best_g = -1e300;
      for (int i = 0; i < points; ++i) {
        const double r = -lim + 2.0 * lim * i / (points - 1);
        const double g = eval.at(r).gain;
        if (g > best_g) {
          best_g = g;
          best_r = r;
        }
      }
      const double step = 2.0 * lim / (points - 1);
      CHECK(opt.gain_star >= best_g - 1e-9);
      CHECK(std::abs(opt.r_star - best_r) <= step);
    }
  }
  SECTION("full transmission gains nothing") {
    for (double s : {0.0, 2.0, 5.0}) CHECK(std::abs(optimize_r({2, 1.0, s, 2.0}).gain_star) <= 1e-9);
  }
  SECTION("zero transmission has no baseline") {
    CHECK_THROWS_AS(optimize_r({2, 0.0, 1.0, 2.0}), DegenerateBaseline);
  }
}
