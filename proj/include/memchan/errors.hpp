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

#include <stdexcept>
#include <string>

namespace memchan {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Cholesky pivot fell below the breakdown threshold.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// The modulation variance N = N_eff - sinh^2(r) dropped below kMinModulation.
class PhotonBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// The r = 0 reference rate is (numerically) zero, so g is undefined.
class DegenerateBaseline : public Error {
 public:
  using Error::Error;
};

// A quadrature grid did not integrate the density to one.
class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

// Parameters or a sweep specification outside their valid domain.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

}  // namespace memchan
