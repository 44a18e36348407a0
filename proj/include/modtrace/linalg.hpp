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

#ifndef MODTRACE_LINALG_HPP
#define MODTRACE_LINALG_HPP

#include <cstddef>
#include <vector>

#include "modtrace/common.hpp"

namespace modtrace {

/// Dense complex matrix, row-major. Small (d <= 64 or so); everything the
/// kernel does is O(d^3) with no blocking.
struct CMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> a;  // rows*cols entries, row-major

  CMatrix() = default;
  CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  CMatrix(std::size_t r, std::size_t c, std::vector<cplx> entries)
      : rows(r), cols(c), a(std::move(entries)) {
    if (a.size() != rows * cols) throw ShapeMismatch("entry count does not match matrix shape");
  }

  cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  bool square() const { return rows == cols; }

  static CMatrix identity(std::size_t n);
  static CMatrix zero(std::size_t r, std::size_t c) { return CMatrix(r, c); }
};

bool operator==(const CMatrix& x, const CMatrix& y);

CMatrix operator+(const CMatrix& x, const CMatrix& y);
CMatrix operator-(const CMatrix& x, const CMatrix& y);
CMatrix operator*(const CMatrix& x, const CMatrix& y);
CMatrix operator*(cplx s, const CMatrix& x);

CMatrix adjoint(const CMatrix& m);
cplx trace(const CMatrix& m);
double max_abs(const CMatrix& m);
double frobenius(const CMatrix& m);
bool all_finite(const CMatrix& m);

std::vector<cplx> matvec(const CMatrix& m, const std::vector<cplx>& v);
/// |ket><bra| as a matrix: out(i,j) = ket[i] * conj(bra[j]).
CMatrix outer(const std::vector<cplx>& ket, const std::vector<cplx>& bra);

struct EigResult {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // unitary, columns are eigenvectors
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
/// Throws NonHermitian if m is not square or ||m - m*||_max exceeds the
/// hermiticity tolerance; NoConvergence after 100 sweeps.
EigResult herm_eig(const CMatrix& m);

struct SvdResult {
  CMatrix u;                  // rows x k, orthonormal columns
  std::vector<double> sigma;  // k = min(rows, cols), descending
  CMatrix v;                  // cols x k, orthonormal columns
};

/// Singular value decomposition by one-sided Jacobi. m = u diag(sigma) v*.
SvdResult svd(const CMatrix& m);

struct PolarResult {
  CMatrix isometry;  // partial isometry v supported on range(positive)
  CMatrix positive;  // p = sqrt_psd(m* m)
};

/// Polar decomposition m = v p for square m. Directions with singular value
/// below rank_cut * sigma_max are dropped from v.
PolarResult polar(const CMatrix& m);

/// Positive square root of a positive semidefinite Hermitian matrix.
/// Eigenvalue dust down to -psd_clamp * ||m|| is clamped to zero; anything
/// below that throws NotPositive.
CMatrix sqrt_psd(const CMatrix& m);

double op_norm(const CMatrix& m);     // largest singular value
double trace_norm(const CMatrix& m);  // sum of singular values

}  // namespace modtrace

#endif  // MODTRACE_LINALG_HPP
