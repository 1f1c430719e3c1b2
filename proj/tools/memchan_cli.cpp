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

// memchan: sweep / optimize / verify front end.
//
// Exit codes: 0 ok, 1 verification failure, 2 invalid specification,
// 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "memchan/memchan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalidSpec = 2;
constexpr int kExitNumerical = 3;

struct Options {
  int n = 2;
  double eta = 0.8;
  double n_eff = 2.0;
  std::vector<double> s_list{0.0, 1.0, 2.0, 5.0};
  std::optional<double> r_min;
  std::optional<double> r_max;
  std::size_t r_steps = 221;
  std::string out;
  std::uint64_t seed = 42;
  std::uint64_t samples = 100000;
  std::string level = "quick";
};

void add_channel_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.n, "channel uses")->capture_default_str();
  cmd->add_option("--eta", o.eta, "transmissivity in [0,1]")->capture_default_str();
  cmd->add_option("--neff", o.n_eff, "photon budget per use")->capture_default_str();
  cmd->add_option("--s", o.s_list, "comma-separated memory parameters")
      ->delimiter(',')
      ->capture_default_str();
}

memchan::SweepSpec to_spec(const Options& o) {
  memchan::SweepSpec spec;
  spec.n = o.n;
  spec.eta = o.eta;
  spec.n_eff = o.n_eff;
  spec.s_list = o.s_list;
  spec.r_min = o.r_min;
  spec.r_max = o.r_max;
  spec.r_steps = o.r_steps;
  spec.output_path = o.out;
  return spec;
}

int do_sweep(const Options& o) {
  const memchan::SweepSpec spec = to_spec(o);
  const memchan::SweepResult res = memchan::run_sweep(spec);
  if (spec.output_path.empty()) {
    memchan::write_csv(std::cout, res.rows);
    memchan::write_sweep_summary(std::cerr, spec, res);
    return kExitOk;
  }
  std::ofstream file(spec.output_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open '" << spec.output_path << "' for writing\n";
    return kExitNumerical;
  }
  memchan::write_csv(file, res.rows);
  file.close();
  if (!file) {
    std::cerr << "error: failed writing '" << spec.output_path << "'\n";
    return kExitNumerical;
  }
  memchan::write_sweep_summary(std::cout, spec, res);
  std::cout << "wrote " << spec.output_path << '\n';
  return kExitOk;
}

int do_optimize(const Options& o) {
  const auto rows = memchan::run_optimize(to_spec(o));
  memchan::write_optimize_report(std::cout, rows);
  if (!o.out.empty()) {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open '" << o.out << "' for writing\n";
      return kExitNumerical;
    }
    memchan::write_optimize_report(file, rows);
  }
  return kExitOk;
}

int do_verify(const Options& o, bool custom_point, std::optional<double> spot_r) {
  memchan::VerifyOptions v;
  if (o.level == "quick") v.level = memchan::VerifyLevel::kQuick;
  else if (o.level == "full") v.level = memchan::VerifyLevel::kFull;
  else throw memchan::InvalidSpec("verify: level must be 'quick' or 'full'");
  v.seed = o.seed;
  v.samples = o.samples;
  if (custom_point) {
    for (double s : o.s_list) {
      const memchan::ChannelParams p{o.n, o.eta, s, o.n_eff};
      p.validate();
      if (spot_r) memchan::photon_budget(p.n_eff, *spot_r);
    }
    // One spot point per invocation: the first s value.
    v.spot = memchan::ChannelParams{o.n, o.eta, o.s_list.front(), o.n_eff};
    v.spot_r = spot_r;
  }
  const memchan::VerifyReport rep = memchan::run_verify(v);
  memchan::write_verify_report(std::cout, rep);
  return rep.passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate of a lossy bosonic channel with correlated noise under entangled encodings"};
  app.require_subcommand(1);
  Options o;

  auto* sweep = app.add_subcommand("sweep", "gain versus r for each s, written as CSV");
  add_channel_flags(sweep, o);
  sweep->add_option("--r-min", o.r_min, "lower end of the r grid (default: budget limit)");
  sweep->add_option("--r-max", o.r_max, "upper end of the r grid (default: budget limit)");
  sweep->add_option("--r-steps", o.r_steps, "grid points")->capture_default_str();
  sweep->add_option("--out", o.out, "CSV path (default: standard output)");

  auto* optimize = app.add_subcommand("optimize", "optimal r and gain for each s");
  add_channel_flags(optimize, o);
  optimize->add_option("--out", o.out, "also write the report to this path");

  auto* verify = app.add_subcommand("verify", "run the invariant and oracle checks");
  add_channel_flags(verify, o);
  std::optional<double> spot_r;
  verify->add_option("--r", spot_r, "entanglement parameter of the spot point");
  verify->add_option("--level", o.level, "quick or full")->capture_default_str();
  verify->add_option("--seed", o.seed, "Monte Carlo seed")->capture_default_str();
  verify->add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidSpec;
  }

  try {
    if (*sweep) return do_sweep(o);
    if (*optimize) return do_optimize(o);
    const bool custom = verify->count("--n") + verify->count("--eta") + verify->count("--neff") +
                            verify->count("--s") + verify->count("--r") >
                        0;
    return do_verify(o, custom, spot_r);
  } catch (const memchan::InvalidSpec& e) {
    std::cerr << "invalid specification: " << e.what() << '\n';
    return kExitInvalidSpec;
  } catch (const memchan::PhotonBudgetExceeded& e) {
    std::cerr << "invalid specification: " << e.what() << '\n';
    return kExitInvalidSpec;
  } catch (const memchan::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
