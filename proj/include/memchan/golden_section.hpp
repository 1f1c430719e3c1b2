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

#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <utility>

namespace memchan {

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section maximization of f on [lo, hi]. Converges to a local maximum;
// the endpoints are compared at the end so a monotone f returns its boundary.
template <std::invocable<double> F>
Extremum golden_section_max(F&& f, double lo, double hi, double x_tol = 1e-10,
                            std::size_t max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (std::size_t it = 0; it < max_iter && (b - a) > x_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  Extremum best = fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
  for (double edge : {lo, hi}) {
    const double fe = f(edge);
    if (fe > best.value) best = {edge, fe};
  }
  return best;
}

}  // namespace memchan
