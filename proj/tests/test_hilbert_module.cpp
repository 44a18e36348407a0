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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace modtrace;
using namespace modtrace::testing;

namespace {

SpectrumPtr spec2() {
  return std::make_shared<Spectrum>(std::vector<std::string>{"x1", "x2"}, false);
}

}  // namespace

TEST_CASE("inner product examples") {
  auto m = HilbertModule::free_module(spec2(), 2);
  ModuleElement xi(m, {{1.0, 0.0}, {0.0, 2.0}});
  ModuleElement eta(m, {{0.0, 1.0}, {0.0, 1.0}});
  AlgebraElement ip = inner(xi, eta);
  CHECK(ip.value(0) == cplx(0.0));
  CHECK(ip.value(1) == cplx(2.0));

  ModuleElement unit(m, {{1.0, 0.0}, {1.0, 0.0}});
  AlgebraElement norm1 = inner(unit, unit);
  CHECK(norm1.value(0) == cplx(1.0));
  CHECK(norm1.value(1) == cplx(1.0));

  CHECK(alg_norm(inner(xi, ModuleElement::zero(m))) == 0.0);
}

TEST_CASE("inner is conjugate linear on the left") {
  auto m = HilbertModule::free_module(spec2(), 2);
  std::mt19937_64 rng(17);
  ModuleElement xi = random_element(rng, m);
  ModuleElement eta = random_element(rng, m);
  const cplx s(0.3, -1.2);
  CHECK(alg_norm(inner(s * xi, eta) - std::conj(s) * inner(xi, eta)) <= 1e-13);
  CHECK(alg_norm(inner(xi, s * eta) - s * inner(xi, eta)) <= 1e-13);
}

TEST_CASE("localisation is the stored field") {
  auto m = HilbertModule::free_module(spec2(), 2);
  ModuleElement c(m, {{1.0, 2.0}, {1.0, 2.0}});
  CHECK(localize_elem(c, Point::finite(0)) == localize_elem(c, Point::finite(1)));
  CHECK_THROWS_AS(localize_elem(c, Point::finite(7)), UnknownPoint);
  CHECK_THROWS_AS(localize_elem(c, Point::infinity()), UnknownPoint);
}

TEST_CASE("localisation functoriality") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 30; ++rep) {
    auto s = random_spectrum(rng, 4);
    auto m = random_module(rng, s, 2 + rng() % 3);
    AdjointableOperator t = random_compact_operator(rng, m);
    AdjointableOperator r = random_compact_operator(rng, m);
    AdjointableOperator tr = compose(t, r);
    AdjointableOperator ts = adjoint(t);
    for (const Point& x : all_points(*m)) {
      CHECK(max_abs(tr.matrix(x) - t.matrix(x) * r.matrix(x)) <= 1e-10);
      CHECK(max_abs(ts.matrix(x) - adjoint(t.matrix(x))) == 0.0);
    }
    // inner(xi, eta)(x) = <xi_x | eta_x>
    ModuleElement xi = random_element(rng, m), eta = random_element(rng, m);
    AlgebraElement ip = inner(xi, eta);
    for (std::size_t i = 0; i < s->size(); ++i) {
      cplx direct = 0.0;
      const auto& a = xi.vector(Point::finite(i));
      const auto& b = eta.vector(Point::finite(i));
      for (std::size_t k = 0; k < a.size(); ++k) direct += std::conj(a[k]) * b[k];
      CHECK(std::abs(ip.value(i) - direct) == 0.0);
    }
  }
}

TEST_CASE("compose with identity and involution") {
  std::mt19937_64 rng(29);
  auto s = random_spectrum(rng, 3);
  auto m = random_module(rng, s, 3);
  AdjointableOperator t = random_compact_operator(rng, m);
  AdjointableOperator id = AdjointableOperator::identity(m);
  AdjointableOperator t_id = compose(t, id);
  AdjointableOperator id_t = compose(id, t);
  AdjointableOperator tss = adjoint(adjoint(t));
  for (const Point& x : all_points(*m)) {
    CHECK(max_abs(t_id.matrix(x) - t.matrix(x)) <= 1e-12);
    CHECK(max_abs(id_t.matrix(x) - t.matrix(x)) <= 1e-12);
    CHECK(max_abs(tss.matrix(x) - t.matrix(x)) == 0.0);
  }
}

TEST_CASE("operator norm field") {
  auto s = spec2();
  auto m = HilbertModule::free_module(s, 2);
  // diag(1,3) at x1, diag(2,0) at x2 -> sup is 3.
  AdjointableOperator t(m, m,
                        {CMatrix{2, 2, {1.0, 0.0, 0.0, 3.0}}, CMatrix{2, 2, {2.0, 0.0, 0.0, 0.0}}},
                        std::nullopt, false);
  CHECK(op_norm_field(t) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(op_norm_field(AdjointableOperator::zero(m, m)) == 0.0);

  std::mt19937_64 rng(31);
  auto pm = random_module(rng, random_spectrum(rng, 3), 2);
  CHECK(op_norm_field(AdjointableOperator::identity(pm)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("submultiplicativity of the field norm") {
  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 20; ++rep) {
    auto m = random_module(rng, random_spectrum(rng, 3), 3);
    AdjointableOperator t = random_compact_operator(rng, m);
    AdjointableOperator r = random_compact_operator(rng, m);
    CHECK(op_norm_field(compose(t, r)) <= op_norm_field(t) * op_norm_field(r) + 1e-10);
  }
}

TEST_CASE("ket_bra identities") {
  auto s = std::make_shared<Spectrum>(std::vector<std::string>{"x"}, false);
  auto m = HilbertModule::free_module(s, 2);
  ModuleElement e1(m, {{1.0, 0.0}});
  AdjointableOperator p1 = ket_bra(e1, e1);
  CHECK(max_abs(p1.matrix(Point::finite(0)) - CMatrix{2, 2, {1.0, 0.0, 0.0, 0.0}}) == 0.0);

  std::mt19937_64 rng(41);
  auto pm = random_module(rng, random_spectrum(rng, 3), 3);
  ModuleElement xi = random_element(rng, pm), eta = random_element(rng, pm);
  ModuleElement zeta = random_element(rng, pm);
  // apply(|eta><xi|, zeta) = eta . <xi|zeta>
  ModuleElement lhs = apply(ket_bra(eta, xi), zeta);
  ModuleElement rhs = module_mult(eta, inner(xi, zeta));
  CHECK(element_norm(lhs - rhs) <= 1e-12 * (1.0 + element_norm(eta)));
  // adjoint(|eta><xi|) = |xi><eta|
  AdjointableOperator adj = adjoint(ket_bra(eta, xi));
  AdjointableOperator swapped = ket_bra(xi, eta);
  for (const Point& x : all_points(*pm))
    CHECK(max_abs(adj.matrix(x) - swapped.matrix(x)) <= 1e-14);
}

TEST_CASE("Cauchy-Schwarz across the field") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 30; ++rep) {
    auto m = random_module(rng, random_spectrum(rng, 4), 3);
    ModuleElement xi = random_element(rng, m), eta = random_element(rng, m);
    CHECK(alg_norm(inner(xi, eta)) <=
          std::sqrt(alg_norm(inner(xi, xi))) * std::sqrt(alg_norm(inner(eta, eta))) + 1e-12);
  }
}

TEST_CASE("constructors validate projection compatibility") {
  auto s = spec2();
  // Non-idempotent projection.
  CMatrix bad(2, 2);
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(HilbertModule(s, 2, {bad, bad}, std::nullopt), ValidationError);

  auto m = HilbertModule::free_module(s, 2);
  auto rank1 = std::make_shared<HilbertModule>(
      s, 2, std::vector<CMatrix>{CMatrix{2, 2, {1.0, 0.0, 0.0, 0.0}}, CMatrix{2, 2, {1.0, 0.0, 0.0, 0.0}}},
      std::nullopt);
  // Element outside the range of the projection.
  CHECK_THROWS_AS(ModuleElement(rank1, {{0.0, 1.0}, {0.0, 0.0}}), ValidationError);
  // Operator not compatible with the projection field.
  CHECK_THROWS_AS(AdjointableOperator(rank1, rank1,
                                      {CMatrix{2, 2, {0.0, 0.0, 0.0, 1.0}}, CMatrix(2, 2)},
                                      std::nullopt, false),
                  ValidationError);
  // Mixing modules.
  ModuleElement xi = ModuleElement::zero(m);
  ModuleElement nu = ModuleElement::zero(rank1);
  CHECK_THROWS_AS(inner(xi, nu), ModuleMismatch);
}

TEST_CASE("multiplier bookkeeping at infinity") {
  auto s = std::make_shared<Spectrum>(std::vector<std::string>{"x"}, true);
  auto m = HilbertModule::free_module(s, 2);
  ModuleElement mult(m, {{1.0, 0.0}}, std::vector<cplx>{1.0, 0.0});
  CHECK(mult.has_infinity_data());
  CHECK_FALSE(mult.is_element_of_F());
  ModuleElement elem(m, {{1.0, 0.0}});
  CHECK(elem.is_element_of_F());
  // <element | multiplier> lands in A.
  CHECK(inner(elem, mult).is_in_A());
  // Compact operators send multipliers to elements of F.
  AdjointableOperator k = ket_bra(elem, elem);
  CHECK(k.compact());
  CHECK(apply(k, mult).is_element_of_F());
  // ket_bra of multipliers is not compact.
  CHECK_FALSE(ket_bra(mult, mult).compact());
}
