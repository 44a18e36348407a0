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

#include "modtrace/traceclass.hpp"

#include <algorithm>
#include <cmath>

namespace modtrace {

namespace {

void require_endomorphism(const AdjointableOperator& t) {
  if (!t.endomorphism()) throw ModuleMismatch("operation requires an endomorphism");
}

void require_positive(const AdjointableOperator& t) {
  require_endomorphism(t);
  for (const Point& x : all_points(*t.domain())) {
    const CMatrix& m = t.matrix(x);
    const double scale = 1.0 + max_abs(m);
    if (max_abs(m - adjoint(m)) > tol::op_positive * scale)
      throw NotPositive("operator is not Hermitian at some point");
    EigResult e = herm_eig(m);
    if (!e.values.empty() && e.values.front() < -tol::op_positive * scale)
      throw NotPositive("operator has a negative eigenvalue at some point");
  }
}

}  // namespace

AdjointableOperator abs_op(const AdjointableOperator& t) {
  require_endomorphism(t);
  // |t| through the singular value decomposition rather than sqrt_psd(t* t):
  // squaring first would turn eigenvalue dust of size eps ||t||^2 into
  // sqrt(eps) ||t|| contributions along directions outside the fiber range.
  std::vector<CMatrix> mats;
  for (std::size_t i = 0; i < t.domain()->spectrum()->size(); ++i)
    mats.push_back(polar(t.matrix(Point::finite(i))).positive);
  std::optional<CMatrix> inf;
  if (t.domain()->spectrum()->has_infinity())
    inf = polar(t.matrix(Point::infinity())).positive;
  return AdjointableOperator(t.domain(), t.domain(), std::move(mats), std::move(inf), t.compact());
}

TraceVerdict trace_beta(const AdjointableOperator& t, const FrameOfMultipliers& beta) {
  require_positive(t);
  if (!same_module(beta.module(), t.domain()))
    throw NotAFrame("frame does not live on the operator's module");
  if (!is_frame(beta).ok) throw NotAFrame("frame fails its resolution-of-identity check");

  std::vector<AlgebraElement> summands;
  summands.reserve(beta.members().size());
  for (const ModuleElement& b : beta.members()) summands.push_back(inner(b, apply(t, b)));

  const SeriesMode mode = beta.truncated() ? SeriesMode::truncated : SeriesMode::complete;
  SeriesResult r = series_in_A(summands, mode);

  TraceVerdict verdict;
  if (auto* c = std::get_if<SeriesConverged>(&r)) {
    verdict.defined = true;
    verdict.value = c->sum;
  } else if (auto* nc = std::get_if<SeriesNotCauchy>(&r)) {
    verdict.failure = TraceFailure::not_cauchy;
    verdict.gap = nc->gap;
  } else {
    auto& out = std::get<SeriesLimitOutsideA>(r);
    verdict.failure = TraceFailure::limit_outside_A;
    verdict.witness = out.sum;
  }
  return verdict;
}

PointwiseTrace pointwise_trace(const AdjointableOperator& t) {
  require_endomorphism(t);
  const SpectrumPtr& s = t.domain()->spectrum();
  std::vector<cplx> values(s->size());
  for (std::size_t i = 0; i < s->size(); ++i) values[i] = trace(t.matrix(Point::finite(i)));
  cplx inf = 0.0;
  if (s->has_infinity()) inf = trace(t.matrix(Point::infinity()));
  AlgebraElement fn(s, std::move(values), inf);
  const bool in_a = fn.is_in_A();
  return PointwiseTrace{std::move(fn), in_a};
}

TraceConsistencyReport check_trace_consistency(const AdjointableOperator& t,
                                               const std::vector<FrameOfMultipliers>& frames) {
  if (frames.size() < 2)
    throw ValidationError("trace consistency check needs at least two frames");

  TraceConsistencyReport rep;
  for (const FrameOfMultipliers& f : frames) rep.verdicts.push_back(trace_beta(t, f));

  rep.verdicts_agree = true;
  for (const TraceVerdict& v : rep.verdicts)
    if (v.defined != rep.verdicts.front().defined) rep.verdicts_agree = false;

  const PointwiseTrace pw = pointwise_trace(t);
  for (std::size_t i = 0; i < rep.verdicts.size(); ++i) {
    if (!rep.verdicts[i].defined) continue;
    const AlgebraElement& vi = *rep.verdicts[i].value;
    rep.max_vs_pointwise = std::max(rep.max_vs_pointwise, alg_norm(vi - pw.values));
    for (std::size_t j = i + 1; j < rep.verdicts.size(); ++j) {
      if (!rep.verdicts[j].defined) continue;
      rep.max_pairwise = std::max(rep.max_pairwise, alg_norm(vi - *rep.verdicts[j].value));
    }
  }
  rep.pass = rep.verdicts_agree && rep.max_pairwise <= tol::trace_agree &&
             rep.max_vs_pointwise <= tol::trace_pointwise;
  return rep;
}

bool is_trace_class(const AdjointableOperator& t) {
  require_endomorphism(t);
  return trace_beta(abs_op(t), canonical_frame(t.domain())).defined;
}

double trace_norm_module(const AdjointableOperator& t) {
  double v = 0.0;
  for (const Point& x : all_points(*t.domain())) v = std::max(v, trace_norm(t.matrix(x)));
  return v;
}

AdjointableOperator conjugate_by_isometry(const AdjointableOperator& t,
                                          const AdjointableOperator& theta) {
  require_endomorphism(t);
  if (!same_module(theta.domain(), t.domain()))
    throw NotIsometry("theta's domain is not the operator's module");
  const HilbertModule& dom = *theta.domain();
  double dev = 0.0;
  for (const Point& x : all_points(dom)) {
    const CMatrix& th = theta.matrix(x);
    dev = std::max(dev, op_norm(adjoint(th) * th - dom.projection(x)));
  }
  if (dev > tol::isometry) throw NotIsometry("theta* theta != id on the operator's module");

  std::vector<CMatrix> mats;
  for (std::size_t i = 0; i < dom.spectrum()->size(); ++i) {
    const Point x = Point::finite(i);
    mats.push_back(theta.matrix(x) * t.matrix(x) * adjoint(theta.matrix(x)));
  }
  std::optional<CMatrix> inf;
  if (dom.spectrum()->has_infinity()) {
    const Point x = Point::infinity();
    inf = theta.matrix(x) * t.matrix(x) * adjoint(theta.matrix(x));
  }
  return AdjointableOperator(theta.codomain(), theta.codomain(), std::move(mats), std::move(inf),
                             t.compact());
}

}  // namespace modtrace
