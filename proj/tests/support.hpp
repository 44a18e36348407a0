//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random instances shared by the unit and acceptance suites.

#ifndef MODTRACE_TESTS_SUPPORT_HPP
#define MODTRACE_TESTS_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "modtrace/frames.hpp"
#include "modtrace/hilbert_module.hpp"
#include "modtrace/linalg.hpp"
#include "modtrace/spectrum.hpp"

namespace modtrace::testing {

inline CMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> g;
  CMatrix m(r, c);
  for (cplx& z : m.a) z = cplx(g(rng), g(rng));
  return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  CMatrix g = random_matrix(rng, n, n);
  return 0.5 * (g + adjoint(g));
}

inline CMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  return herm_eig(random_hermitian(rng, n)).vectors;
}

/// Rank-r orthogonal projection from a random unitary.
inline CMatrix random_projection(std::mt19937_64& rng, std::size_t n, std::size_t rank) {
  CMatrix u = random_unitary(rng, n);
  CMatrix p(n, n);
  for (std::size_t j = 0; j < rank; ++j)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) p(i, l) += u(i, j) * std::conj(u(l, j));
  return p;
}

inline SpectrumPtr random_spectrum(std::mt19937_64& rng, std::size_t max_points,
                                   bool allow_infinity = true) {
  const std::size_t n = 1 + rng() % max_points;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
  const bool inf = allow_infinity && (rng() % 3 == 0);
  return std::make_shared<Spectrum>(std::move(labels), inf);
}

/// Projection-field module with random per-point ranks in [1, d]. The
/// projection at infinity is zero so that compact operators over it behave
/// like honest C0 fields.
inline ModulePtr random_module(std::mt19937_64& rng, SpectrumPtr spectrum, std::size_t d) {
  std::vector<CMatrix> projections;
  for (std::size_t i = 0; i < spectrum->size(); ++i)
    projections.push_back(random_projection(rng, d, 1 + rng() % d));
  std::optional<CMatrix> inf;
  if (spectrum->has_infinity()) inf = CMatrix::zero(d, d);
  return std::make_shared<HilbertModule>(std::move(spectrum), d, std::move(projections),
                                         std::move(inf));
}

/// Random element of F: p_x applied to a Gaussian vector at each finite
/// point, nothing declared at infinity.
inline ModuleElement random_element(std::mt19937_64& rng, const ModulePtr& m) {
  std::normal_distribution<double> g;
  std::vector<std::vector<cplx>> vectors;
  for (std::size_t i = 0; i < m->spectrum()->size(); ++i) {
    std::vector<cplx> v(m->ambient_dim());
    for (cplx& z : v) z = cplx(g(rng), g(rng));
    vectors.push_back(matvec(m->projection(Point::finite(i)), v));
  }
  return ModuleElement(m, std::move(vectors));
}

/// Random compact operator: a short sum of ket-bras of random elements.
inline AdjointableOperator random_compact_operator(std::mt19937_64& rng, const ModulePtr& m,
                                                   std::size_t terms = 2) {
  AdjointableOperator t = AdjointableOperator::zero(m, m);
  for (std::size_t i = 0; i < terms; ++i)
    t = t + ket_bra(random_element(rng, m), random_element(rng, m));
  return t;
}

/// Random positive compact operator sum_i |xi_i><xi_i|.
inline AdjointableOperator random_positive_operator(std::mt19937_64& rng, const ModulePtr& m,
                                                    std::size_t terms = 2) {
  AdjointableOperator t = AdjointableOperator::zero(m, m);
  for (std::size_t i = 0; i < terms; ++i) {
    ModuleElement xi = random_element(rng, m);
    t = t + ket_bra(xi, xi);
  }
  return t;
}

/// Frame of multipliers obtained by rotating the canonical frame with a
/// random unitary field: members x -> p_x W_x e_i.
inline FrameOfMultipliers random_unitary_frame(std::mt19937_64& rng, const ModulePtr& m) {
  const std::size_t d = m->ambient_dim();
  std::vector<CMatrix> w;
  for (std::size_t i = 0; i < m->spectrum()->size(); ++i) w.push_back(random_unitary(rng, d));
  CMatrix w_inf = random_unitary(rng, d);
  std::vector<ModuleElement> members;
  for (std::size_t col = 0; col < d; ++col) {
    std::vector<std::vector<cplx>> vectors;
    for (std::size_t i = 0; i < m->spectrum()->size(); ++i) {
      std::vector<cplx> v(d);
      for (std::size_t k = 0; k < d; ++k) v[k] = w[i](k, col);
      vectors.push_back(matvec(m->projection(Point::finite(i)), v));
    }
    std::optional<std::vector<cplx>> inf;
    if (m->spectrum()->has_infinity()) {
      std::vector<cplx> v(d);
      for (std::size_t k = 0; k < d; ++k) v[k] = w_inf(k, col);
      inf = matvec(m->projection(Point::infinity()), v);
    }
    members.emplace_back(m, std::move(vectors), std::move(inf));
  }
  return FrameOfMultipliers(m, std::move(members));
}

}  // namespace modtrace::testing

#endif  // MODTRACE_TESTS_SUPPORT_HPP
