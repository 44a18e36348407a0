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

#include "modtrace/demos.hpp"
#include "support.hpp"

using namespace modtrace;
using namespace modtrace::testing;

namespace {

SpectrumPtr spec2() {
  return std::make_shared<Spectrum>(std::vector<std::string>{"x1", "x2"}, false);
}

AdjointableOperator constant_endo(const ModulePtr& m, const CMatrix& mat, bool compact = true) {
  std::vector<CMatrix> mats(m->spectrum()->size(), mat);
  std::optional<CMatrix> inf;
  if (m->spectrum()->has_infinity()) inf = CMatrix::zero(mat.rows, mat.cols);
  return AdjointableOperator(m, m, std::move(mats), std::move(inf), compact);
}

}  // namespace

TEST_CASE("abs_op") {
  auto m = HilbertModule::free_module(spec2(), 2);
  std::mt19937_64 rng(3);
  AdjointableOperator pos = random_positive_operator(rng, m);
  AdjointableOperator abs_pos = abs_op(pos);
  for (const Point& x : all_points(*m))
    CHECK(max_abs(abs_pos.matrix(x) - pos.matrix(x)) <= 1e-9 * (1.0 + max_abs(pos.matrix(x))));

  AdjointableOperator nil = constant_endo(m, CMatrix{2, 2, {0.0, 2.0, 0.0, 0.0}});
  AdjointableOperator abs_nil = abs_op(nil);
  for (const Point& x : all_points(*m))
    CHECK(max_abs(abs_nil.matrix(x) - CMatrix{2, 2, {0.0, 0.0, 0.0, 2.0}}) <= 1e-12);

  AdjointableOperator zero = AdjointableOperator::zero(m, m);
  CHECK(op_norm_field(abs_op(zero)) == 0.0);
  // |t|^2 = t* t fiberwise.
  AdjointableOperator t = random_compact_operator(rng, m);
  AdjointableOperator a = abs_op(t);
  for (const Point& x : all_points(*m)) {
    CMatrix lhs = a.matrix(x) * a.matrix(x);
    CMatrix rhs = adjoint(t.matrix(x)) * t.matrix(x);
    CHECK(max_abs(lhs - rhs) <= 1e-9 * (1.0 + max_abs(rhs)));
  }
}

TEST_CASE("trace of a diagonal field with the standard frame") {
  auto m = HilbertModule::free_module(spec2(), 2);
  AdjointableOperator t = constant_endo(m, CMatrix{2, 2, {0.5, 0.0, 0.0, 0.25}});
  TraceVerdict v = trace_beta(t, standard_frame(m));
  REQUIRE(v.defined);
  CHECK(std::abs(v.value->value(0) - 0.75) == 0.0);
  CHECK(std::abs(v.value->value(1) - 0.75) == 0.0);
}

TEST_CASE("matrix trace is the sum of the diagonal entries") {
  // The free-module picture of operators as matrices over the multiplier
  // algebra: the standard-frame trace adds up the diagonal.
  std::mt19937_64 rng(5);
  auto s = std::make_shared<Spectrum>(std::vector<std::string>{"a", "b", "c"}, false);
  auto m = HilbertModule::free_module(s, 3);
  AdjointableOperator t = random_positive_operator(rng, m, 3);
  TraceVerdict v = trace_beta(t, standard_frame(m));
  REQUIRE(v.defined);
  for (std::size_t i = 0; i < s->size(); ++i) {
    cplx diag = trace(t.matrix(Point::finite(i)));
    CHECK(std::abs(v.value->value(i) - diag) <= 1e-12 * (1.0 + std::abs(diag)));
  }
  // A diagonal sum that stays bounded away from zero at infinity leaves A:
  // the trace is undefined even though every partial sum is a multiplier.
  auto s_inf = std::make_shared<Spectrum>(std::vector<std::string>{"a"}, true);
  auto m_inf = HilbertModule::free_module(s_inf, 2);
  AdjointableOperator u(m_inf, m_inf, {CMatrix::identity(2)}, CMatrix::identity(2), false);
  TraceVerdict w = trace_beta(u, standard_frame(m_inf));
  CHECK_FALSE(w.defined);
  CHECK(w.failure == TraceFailure::limit_outside_A);
  REQUIRE(w.witness.has_value());
  CHECK(std::abs(w.witness->infinity_value() - 2.0) == 0.0);
}

TEST_CASE("trace_beta preconditions") {
  auto m = HilbertModule::free_module(spec2(), 2);
  AdjointableOperator neg = constant_endo(m, CMatrix{2, 2, {-1.0, 0.0, 0.0, 1.0}});
  CHECK_THROWS_AS(trace_beta(neg, standard_frame(m)), NotPositive);
  ModuleElement e1(m, {{1.0, 0.0}, {1.0, 0.0}});
  FrameOfMultipliers not_frame(m, {e1});
  AdjointableOperator id = AdjointableOperator::identity(m);
  CHECK_THROWS_AS(trace_beta(id, not_frame), NotAFrame);
}

TEST_CASE("escaping trace: series gap is exactly one half") {
  EscapingTraceFixture fx = escaping_trace_fixture(8);
  TraceVerdict v = trace_beta(fx.averaging, fx.truncated_frame);
  CHECK_FALSE(v.defined);
  CHECK(v.failure == TraceFailure::not_cauchy);
  CHECK(v.gap == 0.5);

  PointwiseTrace pw = pointwise_trace(fx.averaging);
  for (std::size_t i = 0; i < pw.values.values().size(); ++i)
    CHECK(std::abs(pw.values.value(i) - 1.0) <= 1e-12);
  CHECK(std::abs(pw.values.infinity_value() - 1.0) == 0.0);
  CHECK_FALSE(pw.in_A);

  CHECK_FALSE(is_trace_class(fx.averaging));
}

TEST_CASE("pointwise trace of a rank-one operator") {
  std::mt19937_64 rng(7);
  auto m = random_module(rng, random_spectrum(rng, 3), 3);
  ModuleElement xi = random_element(rng, m), eta = random_element(rng, m);
  PointwiseTrace pw = pointwise_trace(ket_bra(eta, xi));
  AlgebraElement expect = inner(xi, eta);
  CHECK(alg_norm(pw.values - expect) <= 1e-12 * (1.0 + alg_norm(expect)));

  PointwiseTrace zero = pointwise_trace(AdjointableOperator::zero(m, m));
  CHECK(alg_norm(zero.values) == 0.0);
  CHECK(zero.in_A);
}

TEST_CASE("frame independence of the trace") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 15; ++rep) {
    auto m = random_module(rng, random_spectrum(rng, 4), 2 + rng() % 3);
    AdjointableOperator t = random_positive_operator(rng, m);
    std::vector<FrameOfMultipliers> frames{canonical_frame(m), random_unitary_frame(rng, m),
                                           random_unitary_frame(rng, m)};
    TraceConsistencyReport rep_out = check_trace_consistency(t, frames);
    CHECK(rep_out.pass);
    CHECK(rep_out.max_pairwise <= 1e-10);
    CHECK(rep_out.max_vs_pointwise <= 1e-10);
  }
}

TEST_CASE("redundant frame agrees with the basis frame") {
  auto m = HilbertModule::free_module(spec2(), 2);
  std::vector<ModuleElement> members;
  for (int k = 0; k < 3; ++k) {
    const double ang = 2.0 * 3.14159265358979323846 * k / 3.0;
    const double s = std::sqrt(2.0 / 3.0);
    std::vector<cplx> v{s * std::cos(ang), s * std::sin(ang)};
    members.emplace_back(m, std::vector<std::vector<cplx>>{v, v});
  }
  FrameOfMultipliers mb(m, members);
  std::mt19937_64 rng(13);
  AdjointableOperator t = random_positive_operator(rng, m);
  TraceConsistencyReport rep = check_trace_consistency(t, {standard_frame(m), mb});
  CHECK(rep.pass);

  AdjointableOperator zero = AdjointableOperator::zero(m, m);
  TraceConsistencyReport zrep = check_trace_consistency(zero, {standard_frame(m), mb});
  CHECK(zrep.pass);
  CHECK(alg_norm(*zrep.verdicts[0].value) == 0.0);
}

TEST_CASE("trace class detection and module trace norm") {
  auto s1 = std::make_shared<Spectrum>(std::vector<std::string>{"x"}, false);
  std::vector<CMatrix> p{CMatrix{3, 3, {1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0}}};
  auto m = std::make_shared<HilbertModule>(s1, 3, p, std::nullopt);
  AdjointableOperator id = AdjointableOperator::identity(m);
  CHECK(is_trace_class(id));
  CHECK(trace_norm_module(id) == doctest::Approx(2.0).epsilon(1e-12));

  auto free2 = HilbertModule::free_module(spec2(), 2);
  AdjointableOperator nil = constant_endo(free2, CMatrix{2, 2, {0.0, 2.0, 0.0, 0.0}});
  CHECK(trace_norm_module(nil) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("conjugation by the inclusion preserves traces") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 15; ++rep) {
    auto m = random_module(rng, random_spectrum(rng, 3), 2 + rng() % 3);
    AdjointableOperator theta = inclusion_into_free(m);
    AdjointableOperator t = random_positive_operator(rng, m);
    AdjointableOperator conj_t = conjugate_by_isometry(t, theta);

    PointwiseTrace a = pointwise_trace(t);
    PointwiseTrace b = pointwise_trace(conj_t);
    CHECK(alg_norm(a.values - b.values) <= 1e-10 * (1.0 + alg_norm(a.values)));
    CHECK(is_trace_class(t) == is_trace_class(conj_t));

    TraceVerdict vt = trace_beta(t, canonical_frame(m));
    TraceVerdict vc = trace_beta(conj_t, canonical_frame(theta.codomain()));
    REQUIRE(vt.defined);
    REQUIRE(vc.defined);
    CHECK(alg_norm(*vt.value - *vc.value) <= 1e-10 * (1.0 + alg_norm(*vt.value)));
  }
  // Zero conjugates to zero.
  auto m0 = HilbertModule::free_module(spec2(), 2);
  AdjointableOperator z = AdjointableOperator::zero(m0, m0);
  CHECK(op_norm_field(conjugate_by_isometry(z, AdjointableOperator::identity(m0))) == 0.0);
}

TEST_CASE("conjugation rejects non-isometries") {
  auto m = HilbertModule::free_module(spec2(), 2);
  AdjointableOperator half = cplx(0.5) * AdjointableOperator::identity(m);
  CHECK_THROWS_AS(conjugate_by_isometry(AdjointableOperator::identity(m), half), NotIsometry);
}

TEST_CASE("trace norm dominates the operator norm for positives") {
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 20; ++rep) {
    auto m = random_module(rng, random_spectrum(rng, 3), 3);
    AdjointableOperator t = random_positive_operator(rng, m);
    CHECK(trace_norm_module(t) >= op_norm_field(t) - 1e-12);
    TraceVerdict v = trace_beta(t, canonical_frame(m));
    REQUIRE(v.defined);
    CHECK(v.value->is_positive());
  }
}

TEST_CASE("pointwise Schmidt-norm bound for products") {
  // ||r s||_1 <= ||r||_2 ||s||_2 fiberwise, so the module trace norm of a
  // product is bounded by the sup of the pointwise products.
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    auto m = random_module(rng, random_spectrum(rng, 3), 3);
    AdjointableOperator r = random_compact_operator(rng, m);
    AdjointableOperator s = random_compact_operator(rng, m);
    double bound = 0.0;
    for (const Point& x : all_points(*m)) {
      const double r2 = trace(adjoint(r.matrix(x)) * r.matrix(x)).real();
      const double s2 = trace(adjoint(s.matrix(x)) * s.matrix(x)).real();
      bound = std::max(bound, std::sqrt(std::max(0.0, r2)) * std::sqrt(std::max(0.0, s2)));
    }
    CHECK(trace_norm_module(compose(r, s)) <= bound + 1e-10);
  }
}
