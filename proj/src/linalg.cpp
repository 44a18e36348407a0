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

#include "modtrace/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace modtrace {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kRotationEps = 1e-15;

// Stable tangent of the Jacobi angle for the 2x2 Hermitian block
// [[app, g],[conj(g), aqq]] with g = |apq|.
double jacobi_tangent(double app, double aqq, double g) {
  const double zeta = (app - aqq) / (2.0 * g);
  const double root = std::hypot(1.0, zeta);
  return (zeta >= 0.0) ? 1.0 / (zeta + root) : 1.0 / (zeta - root);
}

}  // namespace

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool operator==(const CMatrix& x, const CMatrix& y) {
  return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
}

CMatrix operator+(const CMatrix& x, const CMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw ShapeMismatch("matrix addition shape mismatch");
  CMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] + y.a[i];
  return out;
}

CMatrix operator-(const CMatrix& x, const CMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw ShapeMismatch("matrix subtraction shape mismatch");
  CMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] - y.a[i];
  return out;
}

CMatrix operator*(const CMatrix& x, const CMatrix& y) {
  if (x.cols != y.rows) throw ShapeMismatch("matrix product shape mismatch");
  CMatrix out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t k = 0; k < x.cols; ++k) {
      const cplx xik = x(i, k);
      if (xik == cplx{}) continue;
      for (std::size_t j = 0; j < y.cols; ++j) out(i, j) += xik * y(k, j);
    }
  }
  return out;
}

CMatrix operator*(cplx s, const CMatrix& x) {
  CMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = s * x.a[i];
  return out;
}

CMatrix adjoint(const CMatrix& m) {
  CMatrix out(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

cplx trace(const CMatrix& m) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows, m.cols); ++i) t += m(i, i);
  return t;
}

double max_abs(const CMatrix& m) {
  double v = 0.0;
  for (const cplx& z : m.a) v = std::max(v, std::abs(z));
  return v;
}

double frobenius(const CMatrix& m) {
  double s = 0.0;
  for (const cplx& z : m.a) s += std::norm(z);
  return std::sqrt(s);
}

bool all_finite(const CMatrix& m) {
  for (const cplx& z : m.a)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

std::vector<cplx> matvec(const CMatrix& m, const std::vector<cplx>& v) {
  if (m.cols != v.size()) throw ShapeMismatch("matvec shape mismatch");
  std::vector<cplx> out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

CMatrix outer(const std::vector<cplx>& ket, const std::vector<cplx>& bra) {
  CMatrix out(ket.size(), bra.size());
  for (std::size_t i = 0; i < ket.size(); ++i)
    for (std::size_t j = 0; j < bra.size(); ++j) out(i, j) = ket[i] * std::conj(bra[j]);
  return out;
}

EigResult herm_eig(const CMatrix& m) {
  if (!m.square()) throw NonHermitian("herm_eig requires a square matrix");
  const std::size_t n = m.rows;
  const double scale = max_abs(m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol::hermitian_pre * (1.0 + scale))
        throw NonHermitian("herm_eig input is not Hermitian");

  // Work on the symmetrised copy so that roundoff asymmetry cannot bias
  // the rotations.
  CMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  CMatrix u = CMatrix::identity(n);

  const double thr = kRotationEps * (1.0 + scale);
  bool converged = (n <= 1);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = w(p, q);
        const double g = std::abs(apq);
        if (g <= thr) continue;
        converged = false;
        const cplx phase = apq / g;
        const double t = jacobi_tangent(w(p, p).real(), w(q, q).real(), g);
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Columns: col_p <- c col_p + s conj(phase) col_q,
        //          col_q <- -s phase col_p + c col_q.   Then the matching
        // row update (w <- J* w J); the eigenvector matrix gets the column
        // update only.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx wkp = w(k, p), wkq = w(k, q);
          w(k, p) = c * wkp + s * std::conj(phase) * wkq;
          w(k, q) = -s * phase * wkp + c * wkq;
          const cplx ukp = u(k, p), ukq = u(k, q);
          u(k, p) = c * ukp + s * std::conj(phase) * ukq;
          u(k, q) = -s * phase * ukp + c * ukq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx wpk = w(p, k), wqk = w(q, k);
          w(p, k) = c * wpk + s * phase * wqk;
          w(q, k) = -s * std::conj(phase) * wpk + c * wqk;
        }
      }
    }
  }
  if (!converged) throw NoConvergence("herm_eig: Jacobi sweep cap exceeded");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return w(i, i).real() < w(j, j).real(); });

  EigResult out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = w(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = u(i, order[j]);
  }
  return out;
}

namespace {

// Extend the first `filled` orthonormal columns of u to a full orthonormal
// set by Gram-Schmidt over standard basis candidates.
void complete_orthonormal(CMatrix& u, std::size_t filled) {
  const std::size_t n = u.rows, k = u.cols;
  std::size_t next = filled;
  for (std::size_t cand = 0; cand < n && next < k; ++cand) {
    std::vector<cplx> v(n, 0.0);
    v[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < next; ++j) {
        cplx ip = 0.0;
        for (std::size_t i = 0; i < n; ++i) ip += std::conj(u(i, j)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= ip * u(i, j);
      }
    }
    double nrm = 0.0;
    for (const cplx& z : v) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    if (nrm < 0.5) continue;  // candidate was (nearly) in the span already
    for (std::size_t i = 0; i < n; ++i) u(i, next) = v[i] / nrm;
    ++next;
  }
}

// One-sided Jacobi for rows >= cols: returns W with orthogonal columns and
// V unitary with input = W V*.
void one_sided_jacobi(CMatrix& w, CMatrix& v) {
  const std::size_t n = w.cols;
  const double scale2 = 1.0 + frobenius(w) * frobenius(w);
  v = CMatrix::identity(n);
  bool converged = (n <= 1);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma = 0.0;
        for (std::size_t i = 0; i < w.rows; ++i) {
          alpha += std::norm(w(i, p));
          beta += std::norm(w(i, q));
          gamma += std::conj(w(i, p)) * w(i, q);
        }
        const double g = std::abs(gamma);
        if (g <= kRotationEps * (std::sqrt(alpha * beta) + scale2)) continue;
        converged = false;
        const cplx phase = gamma / g;
        const double t = jacobi_tangent(alpha, beta, g);
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < w.rows; ++i) {
          const cplx wip = w(i, p), wiq = w(i, q);
          w(i, p) = c * wip + s * std::conj(phase) * wiq;
          w(i, q) = -s * phase * wip + c * wiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + s * std::conj(phase) * viq;
          v(i, q) = -s * phase * vip + c * viq;
        }
      }
    }
  }
  if (!converged) throw NoConvergence("svd: Jacobi sweep cap exceeded");
}

}  // namespace

SvdResult svd(const CMatrix& m) {
  if (m.rows == 0 || m.cols == 0) throw ShapeMismatch("svd of empty matrix");
  if (m.rows < m.cols) {
    SvdResult flipped = svd(adjoint(m));
    return SvdResult{flipped.v, flipped.sigma, flipped.u};
  }
  const std::size_t k = m.cols;
  CMatrix w = m, v;
  one_sided_jacobi(w, v);

  std::vector<double> sigma(k);
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.rows; ++i) s += std::norm(w(i, j));
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SvdResult out;
  out.sigma.resize(k);
  out.u = CMatrix(m.rows, k);
  out.v = CMatrix(k, k);
  const double sig_max = sigma.empty() ? 0.0 : sigma[order[0]];
  std::size_t filled = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = sigma[src];
    for (std::size_t i = 0; i < k; ++i) out.v(i, j) = v(i, src);
    if (sigma[src] > 1e-14 * (1.0 + sig_max)) {
      for (std::size_t i = 0; i < m.rows; ++i) out.u(i, j) = w(i, src) / sigma[src];
      filled = j + 1;
    }
  }
  complete_orthonormal(out.u, filled);
  return out;
}

PolarResult polar(const CMatrix& m) {
  if (!m.square()) throw ShapeMismatch("polar requires a square matrix");
  const SvdResult f = svd(m);
  const std::size_t n = m.rows;
  const double sig_max = f.sigma.empty() ? 0.0 : f.sigma[0];
  const double cut = tol::rank_cut * sig_max;

  PolarResult out;
  out.isometry = CMatrix(n, n);
  out.positive = CMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    // positive part p = V diag(sigma) V* always; the isometry keeps only
    // directions above the rank threshold.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        out.positive(i, l) += f.v(i, j) * f.sigma[j] * std::conj(f.v(l, j));
        if (f.sigma[j] > cut) out.isometry(i, l) += f.u(i, j) * std::conj(f.v(l, j));
      }
    }
  }
  return out;
}

CMatrix sqrt_psd(const CMatrix& m) {
  EigResult e = herm_eig(m);
  const std::size_t n = m.rows;
  double norm = 0.0;
  for (double lam : e.values) norm = std::max(norm, std::abs(lam));
  CMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double lam = e.values[j];
    if (lam < -tol::psd_clamp * norm)
      throw NotPositive("sqrt_psd: eigenvalue below the clamp threshold");
    lam = std::max(lam, 0.0);
    const double r = std::sqrt(lam);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        out(i, l) += e.vectors(i, j) * r * std::conj(e.vectors(l, j));
  }
  return out;
}

double op_norm(const CMatrix& m) {
  if (m.rows == 0 || m.cols == 0) return 0.0;
  const SvdResult f = svd(m);
  return f.sigma.empty() ? 0.0 : f.sigma[0];
}

double trace_norm(const CMatrix& m) {
  if (m.rows == 0 || m.cols == 0) return 0.0;
  const SvdResult f = svd(m);
  double s = 0.0;
  for (double x : f.sigma) s += x;
  return s;
}

}  // namespace modtrace
