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

#include "modtrace/hilbert_module.hpp"

#include <cmath>

namespace modtrace {

namespace {

double vec_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

void check_projection(const CMatrix& p, std::size_t dim) {
  if (p.rows != dim || p.cols != dim) throw ValidationError("projection has the wrong shape");
  if (!all_finite(p)) throw ValidationError("projection has non-finite entries");
  const double scale = 1.0 + max_abs(p);
  if (max_abs(p - adjoint(p)) > tol::projection * scale)
    throw ValidationError("projection is not Hermitian");
  if (max_abs(p * p - p) > tol::projection * scale)
    throw ValidationError("projection is not idempotent");
}

}  // namespace

HilbertModule::HilbertModule(SpectrumPtr spectrum, std::size_t ambient_dim,
                             std::vector<CMatrix> projections,
                             std::optional<CMatrix> projection_infinity)
    : spectrum_(std::move(spectrum)), dim_(ambient_dim), projections_(std::move(projections)),
      projection_infinity_(std::move(projection_infinity)) {
  if (!spectrum_) throw ValidationError("module without spectrum");
  if (dim_ == 0) throw ValidationError("module ambient dimension must be positive");
  if (projections_.size() != spectrum_->size())
    throw ValidationError("module needs one projection per finite point");
  for (const CMatrix& p : projections_) check_projection(p, dim_);
  if (spectrum_->has_infinity()) {
    if (!projection_infinity_) projection_infinity_ = CMatrix::identity(dim_);
    check_projection(*projection_infinity_, dim_);
  } else {
    projection_infinity_.reset();
  }
}

ModulePtr HilbertModule::free_module(SpectrumPtr spectrum, std::size_t ambient_dim) {
  std::vector<CMatrix> projections(spectrum->size(), CMatrix::identity(ambient_dim));
  std::optional<CMatrix> at_inf;
  if (spectrum->has_infinity()) at_inf = CMatrix::identity(ambient_dim);
  return std::make_shared<HilbertModule>(std::move(spectrum), ambient_dim, std::move(projections),
                                         std::move(at_inf));
}

const CMatrix& HilbertModule::projection(const Point& x) const {
  if (x.at_infinity) {
    if (!projection_infinity_) throw UnknownPoint("module spectrum has no point at infinity");
    return *projection_infinity_;
  }
  if (x.index >= projections_.size()) throw UnknownPoint("point index out of range");
  return projections_[x.index];
}

bool HilbertModule::is_free() const {
  for (const CMatrix& p : projections_)
    if (max_abs(p - CMatrix::identity(dim_)) > tol::projection) return false;
  if (projection_infinity_ &&
      max_abs(*projection_infinity_ - CMatrix::identity(dim_)) > tol::projection)
    return false;
  return true;
}

bool operator==(const HilbertModule& a, const HilbertModule& b) {
  return same_spectrum(a.spectrum_, b.spectrum_) && a.dim_ == b.dim_ &&
         a.projections_ == b.projections_ && a.projection_infinity_ == b.projection_infinity_;
}

bool same_module(const ModulePtr& a, const ModulePtr& b) {
  return a == b || (a && b && *a == *b);
}

std::vector<Point> all_points(const HilbertModule& m) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < m.spectrum()->size(); ++i) pts.push_back(Point::finite(i));
  if (m.spectrum()->has_infinity()) pts.push_back(Point::infinity());
  return pts;
}

ModuleElement::ModuleElement(ModulePtr module, std::vector<std::vector<cplx>> vectors,
                             std::optional<std::vector<cplx>> infinity_vector)
    : module_(std::move(module)), vectors_(std::move(vectors)) {
  if (!module_) throw ValidationError("module element without module");
  const std::size_t d = module_->ambient_dim();
  if (vectors_.size() != module_->spectrum()->size())
    throw ValidationError("module element needs one vector per finite point");
  const bool has_inf = module_->spectrum()->has_infinity();
  if (infinity_vector) {
    if (!has_inf) throw ValidationError("infinity vector on a spectrum without infinity");
    infinity_vector_ = std::move(*infinity_vector);
    declared_multiplier_ = true;
  } else if (has_inf) {
    infinity_vector_.assign(d, 0.0);
  }

  auto check = [&](const std::vector<cplx>& v, const CMatrix& p) {
    if (v.size() != d) throw ValidationError("fiber vector has the wrong dimension");
    for (const cplx& z : v)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ValidationError("fiber vector has non-finite entries");
    std::vector<cplx> pv = matvec(p, v);
    double dev = 0.0;
    for (std::size_t i = 0; i < d; ++i) dev = std::max(dev, std::abs(pv[i] - v[i]));
    if (dev > tol::support * (1.0 + vec_norm(v)))
      throw ValidationError("fiber vector is not in the range of the projection");
  };
  for (std::size_t i = 0; i < vectors_.size(); ++i) check(vectors_[i], module_->projection(Point::finite(i)));
  if (has_inf) check(infinity_vector_, module_->projection(Point::infinity()));
}

ModuleElement ModuleElement::zero(ModulePtr module) {
  std::vector<std::vector<cplx>> vectors(module->spectrum()->size(),
                                         std::vector<cplx>(module->ambient_dim(), 0.0));
  return ModuleElement(std::move(module), std::move(vectors));
}

const std::vector<cplx>& ModuleElement::vector(const Point& x) const {
  if (x.at_infinity) {
    if (!module_->spectrum()->has_infinity())
      throw UnknownPoint("element spectrum has no point at infinity");
    return infinity_vector_;
  }
  if (x.index >= vectors_.size()) throw UnknownPoint("point index out of range");
  return vectors_[x.index];
}

bool ModuleElement::is_element_of_F() const {
  if (!module_->spectrum()->has_infinity()) return true;
  double finite_norm = 0.0;
  for (const auto& v : vectors_) finite_norm = std::max(finite_norm, vec_norm(v));
  return vec_norm(infinity_vector_) <= tol::support * (1.0 + finite_norm);
}

namespace {
void check_same_module(const ModuleElement& x, const ModuleElement& y) {
  if (!same_module(x.module(), y.module()))
    throw ModuleMismatch("module elements live in different modules");
}

ModuleElement combine(const ModuleElement& x, const ModuleElement& y, cplx sx, cplx sy) {
  check_same_module(x, y);
  const HilbertModule& m = *x.module();
  std::vector<std::vector<cplx>> vectors(m.spectrum()->size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& a = x.vector(Point::finite(i));
    const auto& b = y.vector(Point::finite(i));
    vectors[i].resize(m.ambient_dim());
    for (std::size_t k = 0; k < m.ambient_dim(); ++k) vectors[i][k] = sx * a[k] + sy * b[k];
  }
  std::optional<std::vector<cplx>> inf;
  if (m.spectrum()->has_infinity() && (x.has_infinity_data() || y.has_infinity_data())) {
    const auto& a = x.vector(Point::infinity());
    const auto& b = y.vector(Point::infinity());
    inf.emplace(m.ambient_dim());
    for (std::size_t k = 0; k < m.ambient_dim(); ++k) (*inf)[k] = sx * a[k] + sy * b[k];
  }
  return ModuleElement(x.module(), std::move(vectors), std::move(inf));
}
}  // namespace

ModuleElement operator+(const ModuleElement& x, const ModuleElement& y) {
  return combine(x, y, 1.0, 1.0);
}

ModuleElement operator-(const ModuleElement& x, const ModuleElement& y) {
  return combine(x, y, 1.0, -1.0);
}

ModuleElement operator*(cplx s, const ModuleElement& x) {
  return combine(x, x, s, 0.0);
}

ModuleElement module_mult(const ModuleElement& xi, const AlgebraElement& a) {
  if (!same_spectrum(xi.module()->spectrum(), a.spectrum()))
    throw SpectrumMismatch("module action across different spectra");
  const HilbertModule& m = *xi.module();
  std::vector<std::vector<cplx>> vectors(m.spectrum()->size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = xi.vector(Point::finite(i));
    vectors[i].resize(m.ambient_dim());
    for (std::size_t k = 0; k < m.ambient_dim(); ++k) vectors[i][k] = v[k] * a.value(i);
  }
  std::optional<std::vector<cplx>> inf;
  if (m.spectrum()->has_infinity()) {
    const auto& v = xi.vector(Point::infinity());
    inf.emplace(m.ambient_dim());
    for (std::size_t k = 0; k < m.ambient_dim(); ++k) (*inf)[k] = v[k] * a.infinity_value();
  }
  return ModuleElement(xi.module(), std::move(vectors), std::move(inf));
}

AlgebraElement inner(const ModuleElement& xi, const ModuleElement& eta) {
  check_same_module(xi, eta);
  const HilbertModule& m = *xi.module();
  std::vector<cplx> values(m.spectrum()->size());
  auto dot = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
  };
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = dot(xi.vector(Point::finite(i)), eta.vector(Point::finite(i)));
  cplx inf = 0.0;
  if (m.spectrum()->has_infinity())
    inf = dot(xi.vector(Point::infinity()), eta.vector(Point::infinity()));
  return AlgebraElement(m.spectrum(), std::move(values), inf);
}

double element_norm(const ModuleElement& xi) { return std::sqrt(alg_norm(inner(xi, xi))); }

const std::vector<cplx>& localize_elem(const ModuleElement& xi, const Point& x) {
  return xi.vector(x);
}

AdjointableOperator::AdjointableOperator(ModulePtr domain, ModulePtr codomain,
                                         std::vector<CMatrix> matrices,
                                         std::optional<CMatrix> matrix_infinity, bool compact)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrices_(std::move(matrices)),
      matrix_infinity_(std::move(matrix_infinity)), compact_(compact) {
  if (!domain_ || !codomain_) throw ValidationError("operator without modules");
  if (!same_spectrum(domain_->spectrum(), codomain_->spectrum()))
    throw ModuleMismatch("operator domain and codomain live on different spectra");
  if (matrices_.size() != domain_->spectrum()->size())
    throw ValidationError("operator needs one matrix per finite point");
  const bool has_inf = domain_->spectrum()->has_infinity();
  if (has_inf && !matrix_infinity_)
    matrix_infinity_ = CMatrix::zero(codomain_->ambient_dim(), domain_->ambient_dim());
  if (!has_inf) matrix_infinity_.reset();

  auto check = [&](const CMatrix& t, const Point& x) {
    if (t.rows != codomain_->ambient_dim() || t.cols != domain_->ambient_dim())
      throw ValidationError("operator matrix has the wrong shape");
    if (!all_finite(t)) throw ValidationError("operator matrix has non-finite entries");
    const CMatrix compat = codomain_->projection(x) * t * domain_->projection(x);
    if (max_abs(compat - t) > tol::support * (1.0 + max_abs(t)))
      throw ValidationError("operator matrix is not compatible with the projection fields");
  };
  for (std::size_t i = 0; i < matrices_.size(); ++i) check(matrices_[i], Point::finite(i));
  if (has_inf) check(*matrix_infinity_, Point::infinity());
}

AdjointableOperator AdjointableOperator::zero(ModulePtr domain, ModulePtr codomain) {
  std::vector<CMatrix> mats(domain->spectrum()->size(),
                            CMatrix::zero(codomain->ambient_dim(), domain->ambient_dim()));
  return AdjointableOperator(std::move(domain), std::move(codomain), std::move(mats), std::nullopt,
                             true);
}

AdjointableOperator AdjointableOperator::identity(ModulePtr module) {
  std::vector<CMatrix> mats;
  for (std::size_t i = 0; i < module->spectrum()->size(); ++i)
    mats.push_back(module->projection(Point::finite(i)));
  std::optional<CMatrix> inf;
  bool compact = true;
  if (module->spectrum()->has_infinity()) {
    inf = module->projection(Point::infinity());
    compact = op_norm(*inf) <= tol::support;
  }
  return AdjointableOperator(module, module, std::move(mats), std::move(inf), compact);
}

const CMatrix& AdjointableOperator::matrix(const Point& x) const {
  if (x.at_infinity) {
    if (!matrix_infinity_) throw UnknownPoint("operator spectrum has no point at infinity");
    return *matrix_infinity_;
  }
  if (x.index >= matrices_.size()) throw UnknownPoint("point index out of range");
  return matrices_[x.index];
}

const CMatrix& localize_op(const AdjointableOperator& t, const Point& x) { return t.matrix(x); }

AdjointableOperator compose(const AdjointableOperator& t, const AdjointableOperator& r) {
  if (!same_module(t.domain(), r.codomain()))
    throw ModuleMismatch("compose: inner modules do not match");
  std::vector<CMatrix> mats;
  for (std::size_t i = 0; i < t.domain()->spectrum()->size(); ++i) {
    const Point x = Point::finite(i);
    mats.push_back(t.matrix(x) * r.matrix(x));
  }
  std::optional<CMatrix> inf;
  if (t.domain()->spectrum()->has_infinity())
    inf = t.matrix(Point::infinity()) * r.matrix(Point::infinity());
  return AdjointableOperator(r.domain(), t.codomain(), std::move(mats), std::move(inf),
                             t.compact() || r.compact());
}

AdjointableOperator adjoint(const AdjointableOperator& t) {
  std::vector<CMatrix> mats;
  for (std::size_t i = 0; i < t.domain()->spectrum()->size(); ++i)
    mats.push_back(adjoint(t.matrix(Point::finite(i))));
  std::optional<CMatrix> inf;
  if (t.domain()->spectrum()->has_infinity()) inf = adjoint(t.matrix(Point::infinity()));
  return AdjointableOperator(t.codomain(), t.domain(), std::move(mats), std::move(inf),
                             t.compact());
}

ModuleElement apply(const AdjointableOperator& t, const ModuleElement& xi) {
  if (!same_module(t.domain(), xi.module()))
    throw ModuleMismatch("apply: element is not in the operator's domain");
  std::vector<std::vector<cplx>> vectors;
  for (std::size_t i = 0; i < t.domain()->spectrum()->size(); ++i) {
    const Point x = Point::finite(i);
    vectors.push_back(matvec(t.matrix(x), xi.vector(x)));
  }
  std::optional<std::vector<cplx>> inf;
  if (t.domain()->spectrum()->has_infinity())
    inf = matvec(t.matrix(Point::infinity()), xi.vector(Point::infinity()));
  return ModuleElement(t.codomain(), std::move(vectors), std::move(inf));
}

namespace {
AdjointableOperator combine_ops(const AdjointableOperator& t, const AdjointableOperator& r,
                                cplx st, cplx sr, bool compact) {
  if (!same_module(t.domain(), r.domain()) || !same_module(t.codomain(), r.codomain()))
    throw ModuleMismatch("operator combination across different modules");
  std::vector<CMatrix> mats;
  for (std::size_t i = 0; i < t.domain()->spectrum()->size(); ++i) {
    const Point x = Point::finite(i);
    mats.push_back(st * t.matrix(x) + sr * r.matrix(x));
  }
  std::optional<CMatrix> inf;
  if (t.domain()->spectrum()->has_infinity())
    inf = st * t.matrix(Point::infinity()) + sr * r.matrix(Point::infinity());
  return AdjointableOperator(t.domain(), t.codomain(), std::move(mats), std::move(inf), compact);
}
}  // namespace

AdjointableOperator operator+(const AdjointableOperator& t, const AdjointableOperator& r) {
  return combine_ops(t, r, 1.0, 1.0, t.compact() && r.compact());
}

AdjointableOperator operator-(const AdjointableOperator& t, const AdjointableOperator& r) {
  return combine_ops(t, r, 1.0, -1.0, t.compact() && r.compact());
}

AdjointableOperator operator*(cplx s, const AdjointableOperator& t) {
  return combine_ops(t, t, s, 0.0, t.compact());
}

double op_norm_field(const AdjointableOperator& t) {
  double v = 0.0;
  for (const Point& x : all_points(*t.domain())) v = std::max(v, op_norm(t.matrix(x)));
  return v;
}

AdjointableOperator ket_bra(const ModuleElement& eta, const ModuleElement& xi) {
  check_same_module(eta, xi);
  std::vector<CMatrix> mats;
  for (std::size_t i = 0; i < eta.module()->spectrum()->size(); ++i) {
    const Point x = Point::finite(i);
    mats.push_back(outer(eta.vector(x), xi.vector(x)));
  }
  std::optional<CMatrix> inf;
  if (eta.module()->spectrum()->has_infinity())
    inf = outer(eta.vector(Point::infinity()), xi.vector(Point::infinity()));
  const bool compact = eta.is_element_of_F() && xi.is_element_of_F();
  return AdjointableOperator(eta.module(), eta.module(), std::move(mats), std::move(inf), compact);
}

}  // namespace modtrace
