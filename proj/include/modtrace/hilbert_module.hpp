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

#ifndef MODTRACE_HILBERT_MODULE_HPP
#define MODTRACE_HILBERT_MODULE_HPP

#include <memory>
#include <optional>
#include <vector>

#include "modtrace/linalg.hpp"
#include "modtrace/spectrum.hpp"

namespace modtrace {

/// A point of the spectrum, finite or the point at infinity.
struct Point {
  std::size_t index = 0;
  bool at_infinity = false;

  static Point finite(std::size_t i) { return Point{i, false}; }
  static Point infinity() { return Point{0, true}; }
};

/// Hilbert module over C0 of the spectrum, presented as a field of
/// projections inside the free module of a fixed ambient dimension. The
/// fiber over x is range(p_x); the free module has p identically the
/// identity. Per-point ranks may differ.
class HilbertModule {
 public:
  HilbertModule(SpectrumPtr spectrum, std::size_t ambient_dim, std::vector<CMatrix> projections,
                std::optional<CMatrix> projection_infinity);

  static std::shared_ptr<const HilbertModule> free_module(SpectrumPtr spectrum,
                                                          std::size_t ambient_dim);

  const SpectrumPtr& spectrum() const { return spectrum_; }
  std::size_t ambient_dim() const { return dim_; }
  const CMatrix& projection(const Point& x) const;
  bool is_free() const;

  friend bool operator==(const HilbertModule& a, const HilbertModule& b);

 private:
  SpectrumPtr spectrum_;
  std::size_t dim_;
  std::vector<CMatrix> projections_;
  std::optional<CMatrix> projection_infinity_;
};

using ModulePtr = std::shared_ptr<const HilbertModule>;

bool same_module(const ModulePtr& a, const ModulePtr& b);

/// Vector field in the fibers of a module. Elements of F carry no infinity
/// data (implicitly zero there); multipliers declare a vector at infinity.
class ModuleElement {
 public:
  ModuleElement(ModulePtr module, std::vector<std::vector<cplx>> vectors,
                std::optional<std::vector<cplx>> infinity_vector = std::nullopt);

  static ModuleElement zero(ModulePtr module);

  const ModulePtr& module() const { return module_; }
  const std::vector<cplx>& vector(const Point& x) const;
  bool has_infinity_data() const { return declared_multiplier_; }

  /// True when the declared infinity vector vanishes within tolerance, i.e.
  /// the multiplier is an honest element of F.
  bool is_element_of_F() const;

 private:
  ModulePtr module_;
  std::vector<std::vector<cplx>> vectors_;
  std::vector<cplx> infinity_vector_;  // kept zero when nothing is declared
  bool declared_multiplier_ = false;
};

ModuleElement operator+(const ModuleElement& x, const ModuleElement& y);
ModuleElement operator-(const ModuleElement& x, const ModuleElement& y);
ModuleElement operator*(cplx s, const ModuleElement& x);
/// Right module action xi . a (pointwise scalar multiplication).
ModuleElement module_mult(const ModuleElement& xi, const AlgebraElement& a);

/// A-valued inner product, conjugate-linear in the first argument.
AlgebraElement inner(const ModuleElement& xi, const ModuleElement& eta);
double element_norm(const ModuleElement& xi);

const std::vector<cplx>& localize_elem(const ModuleElement& xi, const Point& x);

/// Adjointable operator between modules as a compatible field of matrices
/// (q_x t_x p_x = t_x). The matrix at infinity is the declared
/// multiplier-level localisation. Compactness is bookkeeping set by the
/// constructors, not a detected property.
class AdjointableOperator {
 public:
  AdjointableOperator(ModulePtr domain, ModulePtr codomain, std::vector<CMatrix> matrices,
                      std::optional<CMatrix> matrix_infinity, bool compact);

  static AdjointableOperator zero(ModulePtr domain, ModulePtr codomain);
  /// Identity of L_A(F): the projection field itself.
  static AdjointableOperator identity(ModulePtr module);

  const ModulePtr& domain() const { return domain_; }
  const ModulePtr& codomain() const { return codomain_; }
  const CMatrix& matrix(const Point& x) const;
  bool compact() const { return compact_; }
  bool endomorphism() const { return same_module(domain_, codomain_); }

 private:
  ModulePtr domain_;
  ModulePtr codomain_;
  std::vector<CMatrix> matrices_;
  std::optional<CMatrix> matrix_infinity_;
  bool compact_ = false;
};

const CMatrix& localize_op(const AdjointableOperator& t, const Point& x);

AdjointableOperator compose(const AdjointableOperator& t, const AdjointableOperator& r);
AdjointableOperator adjoint(const AdjointableOperator& t);
ModuleElement apply(const AdjointableOperator& t, const ModuleElement& xi);

AdjointableOperator operator+(const AdjointableOperator& t, const AdjointableOperator& r);
AdjointableOperator operator-(const AdjointableOperator& t, const AdjointableOperator& r);
AdjointableOperator operator*(cplx s, const AdjointableOperator& t);

/// sup over all points (including infinity) of the fiber operator norm.
double op_norm_field(const AdjointableOperator& t);

/// |eta><xi| as an operator on the common module. Compact iff both
/// arguments are elements of F.
AdjointableOperator ket_bra(const ModuleElement& eta, const ModuleElement& xi);

/// All points of a module's spectrum, finite ones first.
std::vector<Point> all_points(const HilbertModule& m);

}  // namespace modtrace

#endif  // MODTRACE_HILBERT_MODULE_HPP
