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

#ifndef MODTRACE_HAAGERUP_HPP
#define MODTRACE_HAAGERUP_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "modtrace/traceclass.hpp"

namespace modtrace {

/// One elementary tensor <xi| (x) |eta>.
struct TensorTerm {
  ModuleElement xi;
  ModuleElement eta;
};

/// Finite sum of elementary tensors in F* (x)_A F, kept as a concrete
/// representation. Equality of tensors is the equality of their images
/// under phi; norms never depend on the chosen representation.
class TensorElement {
 public:
  TensorElement(ModulePtr module, std::vector<TensorTerm> terms);

  const ModulePtr& module() const { return module_; }
  const std::vector<TensorTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

 private:
  ModulePtr module_;
  std::vector<TensorTerm> terms_;
};

/// n x n grid of tensors, the level-n element for the matrix-norm checks.
class MatrixTensor {
 public:
  MatrixTensor(ModulePtr module, std::vector<std::vector<TensorElement>> entries);

  const ModulePtr& module() const { return module_; }
  std::size_t level() const { return entries_.size(); }
  const TensorElement& entry(std::size_t i, std::size_t j) const { return entries_[i][j]; }

 private:
  ModulePtr module_;
  std::vector<std::vector<TensorElement>> entries_;
};

/// phi(sum <xi_i| (x) |eta_i>) = sum |eta_i><xi_i|, compact-flagged.
AdjointableOperator phi(const TensorElement& u);

/// || sum <xi_i|xi_i> ||^(1/2) || sum <eta_i|eta_i> ||^(1/2) for the given
/// representation: an upper bound for the Haagerup norm.
double haagerup_upper(const TensorElement& u);

/// The polar-decomposition factorization of a trace-class operator through
/// a frame: terms eta_i = v|t|^(1/2) beta_i, xi_i = |t|^(1/2) beta_i. The
/// result satisfies phi(u) = t and haagerup_upper(u) = trace norm of t.
TensorElement factorize_trace_class(const AdjointableOperator& t, const FrameOfMultipliers& beta);

/// The Haagerup norm through the isometry: the module trace norm of phi(u).
double haagerup_norm(const TensorElement& u);

/// Localisation of a tensor at a point: the fiber term pairs.
struct LocalizedTensor {
  std::vector<std::pair<std::vector<cplx>, std::vector<cplx>>> terms;  // (xi_x, eta_x)
};

LocalizedTensor psi(const TensorElement& u, const Point& x);

/// The Hilbert-space counterpart of phi on a localized tensor.
CMatrix phi_fiber(const LocalizedTensor& localized, std::size_t dim);

enum class BlockOrientation { kets, bras };

/// sup over points of the largest singular value of the stacked localized
/// grid: columns of kets, or rows of bras.
double block_norm(const std::vector<std::vector<ModuleElement>>& grid, BlockOrientation o);

/// A global factorization certificate U = R (.) C: an n x m grid of bras
/// and an m x n grid of kets whose block norms multiply to the upper bound.
struct MatrixFactorization {
  std::vector<std::vector<ModuleElement>> bras;  // n x m
  std::vector<std::vector<ModuleElement>> kets;  // m x n
  double bra_norm = 0.0;
  double ket_norm = 0.0;
  double upper = 0.0;  // bra_norm * ket_norm
};

struct SearchOptions {
  std::size_t width = 0;  // minimum factorization / probe width; 0 = automatic
  std::uint64_t seed = 1;
  int restarts = 16;
};

/// Best found factorization: per-fiber convex search seeded from the
/// canonical polar candidate, balanced and assembled across the spectrum.
MatrixFactorization matrix_haagerup_factorization(const MatrixTensor& u,
                                                  const SearchOptions& opts = {});

double matrix_haagerup_upper(const MatrixTensor& u, const SearchOptions& opts = {});

/// Duality lower bound: the best pairing norm against seeded-and-ascended
/// contractive probe grids of compact operators, at level n*m.
double matrix_dual_lower(const MatrixTensor& u, const SearchOptions& opts = {});

struct IsometryReport {
  std::size_t level = 0;
  double upper = 0.0;
  double lower = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  double trace_norm = 0.0;  // level-1 reference value (phi-image trace norm)
  std::uint64_t seed = 0;
  int restarts = 0;
  bool pass = false;
};

/// Sandwich verification of the matrix-level isometry: upper and lower must
/// agree within tolerance * (1 + upper); at level 1 both must also match the
/// trace norm of the phi-image.
IsometryReport verify_complete_isometry(const MatrixTensor& u, double tolerance,
                                        const SearchOptions& opts = {});

}  // namespace modtrace

#endif  // MODTRACE_HAAGERUP_HPP
