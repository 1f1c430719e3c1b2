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

// Quadratic-form matrices of the lossy bosonic channel with correlated
// environment noise.
//
// Layout conventions (row vectors, forms w M w^T):
//   2n block : (x_1..x_n, p_1..p_n)
//   4n block : (signal 2n, environment 2n)
// A Gaussian density proportional to exp(-w M w^T) has covariance M^{-1}/2.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "memchan/errors.hpp"
#include "memchan/matrix.hpp"

namespace memchan {

// Smallest admissible modulation variance. The input entropy carries ln N and
// the forms carry I/N, so N -> 0 is a genuine boundary and is rejected.
inline constexpr double kMinModulation = 1e-9;

struct ChannelParams {
  int n = 2;            // channel uses
  double eta = 0.8;     // transmissivity
  double s = 0.0;       // environment (memory) squeezing
  double n_eff = 2.0;   // photon budget per use

  void validate() const {
    if (n < 1) throw InvalidSpec("channel uses n must be >= 1, got " + std::to_string(n));
    if (!(eta >= 0.0 && eta <= 1.0))
      throw InvalidSpec("transmissivity eta must lie in [0,1], got " + std::to_string(eta));
    if (!std::isfinite(s)) throw InvalidSpec("memory parameter s must be finite");
    if (!(n_eff > kMinModulation) || !std::isfinite(n_eff))
      throw InvalidSpec("photon budget n_eff must be positive, got " + std::to_string(n_eff));
  }

  std::size_t half_dim() const { return 2 * static_cast<std::size_t>(n); }
  std::size_t full_dim() const { return 4 * static_cast<std::size_t>(n); }
};

// N = N_eff - sinh^2 r; throws when the squeezing consumes the budget.
inline double photon_budget(double n_eff, double r) {
  if (!(n_eff > 0.0)) throw InvalidSpec("photon budget n_eff must be positive");
  const double sh = std::sinh(r);
  const double n_mod = n_eff - sh * sh;
  if (!(n_mod >= kMinModulation))
    throw PhotonBudgetExceeded("r=" + std::to_string(r) + " leaves N=" +
                               std::to_string(n_mod) + " for N_eff=" + std::to_string(n_eff));
  return n_mod;
}

// |r| bound where the budget is fully spent on squeezing.
inline double budget_r_limit(double n_eff) { return std::asinh(std::sqrt(n_eff)); }

struct EncodingPoint {
  double r = 0.0;
  double n_mod = 0.0;

  static EncodingPoint from_budget(const ChannelParams& p, double r) {
    return {r, photon_budget(p.n_eff, r)};
  }
};

// (2/n) [[A''_r, 0], [0, A''_{-r}]] with A''_r = (e^{-2r} - e^{2r}) J + n e^{2r} I.
// The all-ones direction of the x block has kernel 2 e^{-2r}, every orthogonal
// direction 2 e^{2r}; the p block is the same with r -> -r.
inline SymMatrix build_input_kernel(int n, double r) {
  if (n < 1) throw InvalidSpec("build_input_kernel: n must be >= 1");
  const auto un = static_cast<std::size_t>(n);
  const Real scale = Real(2) / static_cast<Real>(n);
  Matrix m(2 * un, 2 * un);
  for (int sign : {+1, -1}) {
    const Real rr = sign * static_cast<Real>(r);
    const Real off = std::exp(-2 * rr) - std::exp(2 * rr);
    const Real diag = static_cast<Real>(n) * std::exp(2 * rr);
    const std::size_t o = sign > 0 ? 0 : un;
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j)
        m(o + i, o + j) = scale * (off + (i == j ? diag : 0.0));
  }
  return SymMatrix(m);
}

// The correlated environment is an n-mode squeezed vacuum with the same form.
inline SymMatrix build_memory_kernel(int n, double s) { return build_input_kernel(n, s); }

// [[B1, B2], [-B2, B1]] with B1 = sqrt(eta) I_{2n}, B2 = sqrt(1-eta) I_{2n}.
inline Matrix build_beam_splitter(int n, double eta) {
  if (n < 1) throw InvalidSpec("build_beam_splitter: n must be >= 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidSpec("build_beam_splitter: eta outside [0,1]");
  const std::size_t h = 2 * static_cast<std::size_t>(n);
  const Real t = std::sqrt(static_cast<Real>(eta));
  const Real u = std::sqrt(1 - static_cast<Real>(eta));
  Matrix b(2 * h, 2 * h);
  for (std::size_t i = 0; i < h; ++i) {
    b(i, i) = t;
    b(h + i, h + i) = t;
    b(i, h + i) = u;
    b(h + i, i) = -u;
  }
  return b;
}

// Heterodyne projection kernel: 2 I on the signal block, zero elsewhere.
inline SymMatrix build_heterodyne_kernel(int n) {
  if (n < 1) throw InvalidSpec("build_heterodyne_kernel: n must be >= 1");
  const std::size_t h = 2 * static_cast<std::size_t>(n);
  Matrix l(2 * h, 2 * h);
  for (std::size_t i = 0; i < h; ++i) l(i, i) = 2.0;
  return SymMatrix(l);
}

struct ModelMatrices {
  int n = 0;
  double n_mod = 0.0;
  SymMatrix a_in;   // 2n, input kernel
  SymMatrix a_mem;  // 2n, environment kernel
  SymMatrix a_tot;  // 4n, block_diag(a_in, a_mem)
  Matrix b;         // 4n, beam splitter
  SymMatrix l;      // 4n, heterodyne kernel
  Matrix f;         // 4n, A B
  SymMatrix g;      // 4n, B^T A B
  SymMatrix r_p;    // 2n, leading block of A - F (G+L)^{-1} F^T
  Matrix s_p;       // 2n, leading block of 2 L (G+L)^{-1} F^T
  SymMatrix t_p;    // 2n, leading block of L - L (G+L)^{-1} L
  SymMatrix rn_p;   // 2n, R' + I/N
  SymMatrix u_p;    // 2n, T' - S' (R' + I/N)^{-1} S'^T / 4
  SymMatrix v_n;    // 4n, joint form over (mu, zeta)
  Real logdet_gl = 0;  // ln det(G + L)
};

inline ModelMatrices assemble_model(const ChannelParams& params, const EncodingPoint& enc) {
  params.validate();
  if (!(enc.n_mod >= kMinModulation))
    throw PhotonBudgetExceeded("assemble_model: N=" + std::to_string(enc.n_mod) +
                               " below the admissible minimum");
  const double expected = params.n_eff - std::sinh(enc.r) * std::sinh(enc.r);
  if (std::abs(expected - enc.n_mod) > 1e-12 * std::max(1.0, params.n_eff))
    throw PhotonBudgetExceeded("assemble_model: encoding N=" + std::to_string(enc.n_mod) +
                               " inconsistent with N_eff - sinh^2 r = " +
                               std::to_string(expected));

  const int n = params.n;
  const std::size_t h = params.half_dim();

  ModelMatrices m;
  m.n = n;
  m.n_mod = enc.n_mod;
  m.a_in = build_input_kernel(n, enc.r);
  m.a_mem = build_memory_kernel(n, params.s);
  m.a_tot = block_diag(m.a_in, m.a_mem);
  m.b = build_beam_splitter(n, params.eta);
  m.l = build_heterodyne_kernel(n);
  m.f = matmul(m.a_tot, m.b);
  m.g = SymMatrix(transpose_matmul(m.b, m.f));

  const SymMatrix gl(m.g.matrix() + m.l.matrix());
  const Cholesky gl_chol(gl);
  m.logdet_gl = gl_chol.logdet();

  // Full 4n x 4n intermediates, truncated to their leading 2n block.
  const Matrix gl_inv_ft = gl_chol.solve(m.f.transposed());  // (G+L)^{-1} F^T
  const SymMatrix r_full(m.a_tot.matrix() - matmul(m.f, gl_inv_ft));
  const Matrix s_full = Real(2) * matmul(m.l, gl_inv_ft);
  const SymMatrix t_full(m.l.matrix() - matmul(m.l, gl_chol.solve(m.l)));

  m.r_p = top_left(r_full, h);
  m.s_p = top_left(s_full, h);
  m.t_p = top_left(t_full, h);

  m.rn_p = SymMatrix(m.r_p.matrix() + Matrix::identity(h) * (Real(1) / enc.n_mod));
  const Matrix rn_inv_st = spd_solve(m.rn_p, m.s_p.transposed());
  m.u_p = SymMatrix(m.t_p.matrix() - Real(0.25) * matmul(m.s_p, rn_inv_st));

  // w = (mu, zeta): w V w^T = mu (R'+I/N) mu^T - zeta S' mu^T + zeta T' zeta^T.
  Matrix v(2 * h, 2 * h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      v(i, j) = m.rn_p(i, j);
      v(h + i, h + j) = m.t_p(i, j);
      v(h + i, j) = -m.s_p(i, j) / 2;
      v(i, h + j) = -m.s_p(j, i) / 2;
    }
  m.v_n = SymMatrix(v);
  return m;
}

inline ModelMatrices assemble_model(const ChannelParams& params, double r) {
  return assemble_model(params, EncodingPoint::from_budget(params, r));
}

}  // namespace memchan
