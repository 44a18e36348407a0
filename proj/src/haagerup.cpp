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

#include "modtrace/haagerup.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace modtrace {

TensorElement::TensorElement(ModulePtr module, std::vector<TensorTerm> terms)
    : module_(std::move(module)), terms_(std::move(terms)) {
  if (!module_) throw ValidationError("tensor without module");
  for (const TensorTerm& t : terms_)
    if (!same_module(t.xi.module(), module_) || !same_module(t.eta.module(), module_))
      throw ModuleMismatch("tensor term lives in a different module");
}

MatrixTensor::MatrixTensor(ModulePtr module, std::vector<std::vector<TensorElement>> entries)
    : module_(std::move(module)), entries_(std::move(entries)) {
  if (!module_) throw ValidationError("matrix tensor without module");
  if (entries_.empty()) throw ValidationError("matrix tensor must have positive size");
  for (const auto& row : entries_) {
    if (row.size() != entries_.size()) throw ShapeMismatch("matrix tensor must be square");
    for (const TensorElement& e : row)
      if (!same_module(e.module(), module_))
        throw ModuleMismatch("matrix tensor entry lives in a different module");
  }
}

AdjointableOperator phi(const TensorElement& u) {
  AdjointableOperator out = AdjointableOperator::zero(u.module(), u.module());
  for (const TensorTerm& t : u.terms()) out = out + ket_bra(t.eta, t.xi);
  return out;
}

double haagerup_upper(const TensorElement& u) {
  if (u.empty()) return 0.0;
  AlgebraElement xi_sum = AlgebraElement::zero(u.module()->spectrum());
  AlgebraElement eta_sum = AlgebraElement::zero(u.module()->spectrum());
  for (const TensorTerm& t : u.terms()) {
    xi_sum = xi_sum + inner(t.xi, t.xi);
    eta_sum = eta_sum + inner(t.eta, t.eta);
  }
  return std::sqrt(alg_norm(xi_sum)) * std::sqrt(alg_norm(eta_sum));
}

TensorElement factorize_trace_class(const AdjointableOperator& t, const FrameOfMultipliers& beta) {
  if (!t.endomorphism()) throw ModuleMismatch("factorization requires an endomorphism");
  if (!same_module(beta.module(), t.domain()))
    throw NotAFrame("frame does not live on the operator's module");
  if (is_frame(beta).deviation > tol::frame_dev)
    throw NotAFrame("factorization requires an exact resolution of the identity");
  if (!is_trace_class(t)) throw NotTraceClass("operator is not trace class");

  const ModulePtr& m = t.domain();
  // t = v|t| pointwise; with s = |t|^(1/2) and r = v s the frame expansion
  // of r and s gives t = sum_i |r beta_i><s beta_i|. Both factors come from
  // one singular value decomposition with the kernel rank cut applied, so
  // the sqrt cannot amplify kernel dust out of the fiber range.
  std::vector<CMatrix> r_mats, s_mats;
  auto split = [](const CMatrix& tt, CMatrix& r_out, CMatrix& s_out) {
    const SvdResult f = svd(tt);
    const double cut = tol::rank_cut * (f.sigma.empty() ? 0.0 : f.sigma[0]);
    const std::size_t n = tt.rows;
    r_out = CMatrix(n, n);
    s_out = CMatrix(n, n);
    for (std::size_t k = 0; k < f.sigma.size(); ++k) {
      if (f.sigma[k] <= cut) break;
      const double root = std::sqrt(f.sigma[k]);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          r_out(a, b) += root * f.u(a, k) * std::conj(f.v(b, k));
          s_out(a, b) += root * f.v(a, k) * std::conj(f.v(b, k));
        }
    }
  };
  for (std::size_t i = 0; i < m->spectrum()->size(); ++i) {
    CMatrix r, s;
    split(t.matrix(Point::finite(i)), r, s);
    r_mats.push_back(std::move(r));
    s_mats.push_back(std::move(s));
  }
  std::optional<CMatrix> r_inf, s_inf;
  if (m->spectrum()->has_infinity()) {
    CMatrix r, s;
    split(t.matrix(Point::infinity()), r, s);
    r_inf = std::move(r);
    s_inf = std::move(s);
  }
  AdjointableOperator r_op(m, m, std::move(r_mats), std::move(r_inf), t.compact());
  AdjointableOperator s_op(m, m, std::move(s_mats), std::move(s_inf), t.compact());

  std::vector<TensorTerm> terms;
  for (const ModuleElement& b : beta.members())
    terms.push_back(TensorTerm{apply(s_op, b), apply(r_op, b)});
  return TensorElement(m, std::move(terms));
}

double haagerup_norm(const TensorElement& u) { return trace_norm_module(phi(u)); }

LocalizedTensor psi(const TensorElement& u, const Point& x) {
  LocalizedTensor loc;
  for (const TensorTerm& t : u.terms()) loc.terms.emplace_back(t.xi.vector(x), t.eta.vector(x));
  return loc;
}

CMatrix phi_fiber(const LocalizedTensor& localized, std::size_t dim) {
  CMatrix out(dim, dim);
  for (const auto& [xi, eta] : localized.terms) out = out + outer(eta, xi);
  return out;
}

double block_norm(const std::vector<std::vector<ModuleElement>>& grid, BlockOrientation o) {
  if (grid.empty() || grid.front().empty()) return 0.0;
  const std::size_t rows = grid.size(), cols = grid.front().size();
  const ModulePtr& m = grid.front().front().module();
  for (const auto& row : grid) {
    if (row.size() != cols) throw ShapeMismatch("block grid must be rectangular");
    for (const ModuleElement& e : row)
      if (!same_module(e.module(), m)) throw ShapeMismatch("block grid mixes modules");
  }
  const std::size_t d = m->ambient_dim();
  double sup = 0.0;
  for (const Point& x : all_points(*m)) {
    CMatrix stacked = (o == BlockOrientation::kets) ? CMatrix(rows * d, cols)
                                                    : CMatrix(rows, cols * d);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        const std::vector<cplx>& v = grid[i][j].vector(x);
        for (std::size_t a = 0; a < d; ++a) {
          if (o == BlockOrientation::kets)
            stacked(i * d + a, j) = v[a];
          else
            stacked(i, j * d + a) = std::conj(v[a]);
        }
      }
    sup = std::max(sup, op_norm(stacked));
  }
  return sup;
}

// ---------------------------------------------------------------------------
// Level-n machinery. Everything below works fiberwise: at a point x the grid
// [phi(U_ij)_x] is rearranged into tau with block (j, i) = phi(U_ij)_x, so
// that factorizations tau = C R* correspond to representations
// U_ij = sum_k <a_ik| (x) |b_kj> via the block components of the columns of
// R and C. The two grid norms are partial-trace norms of R R* and C C*.
// ---------------------------------------------------------------------------

namespace {

// n x n partial trace over the inner dimension d of an (n d) x (n d) matrix.
CMatrix partial_trace(const CMatrix& big, std::size_t n, std::size_t d) {
  CMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      cplx s = 0.0;
      for (std::size_t a = 0; a < d; ++a) s += big(j * d + a, j2 * d + a);
      out(j, j2) = s;
    }
  return out;
}

// W (x) I_d in the block layout used here.
CMatrix lift(const CMatrix& w, std::size_t d) {
  CMatrix out(w.rows * d, w.cols * d);
  for (std::size_t j = 0; j < w.rows; ++j)
    for (std::size_t j2 = 0; j2 < w.cols; ++j2)
      for (std::size_t a = 0; a < d; ++a) out(j * d + a, j2 * d + a) = w(j, j2);
  return out;
}

// I_count (x) p: the fiber projection repeated down the block diagonal.
CMatrix block_diag(const CMatrix& p, std::size_t count) {
  CMatrix out(count * p.rows, count * p.cols);
  for (std::size_t blk = 0; blk < count; ++blk)
    for (std::size_t a = 0; a < p.rows; ++a)
      for (std::size_t b = 0; b < p.cols; ++b) out(blk * p.rows + a, blk * p.cols + b) = p(a, b);
  return out;
}

struct SmoothedNorm {
  double value = 0.0;
  CMatrix weights;  // sum_i softmax_i u_i u_i*
};

// Soft maximum of the eigenvalues of a Hermitian matrix, with the matching
// derivative weights.
SmoothedNorm smoothed_norm(const CMatrix& herm, double mu) {
  EigResult e = herm_eig(herm);
  const std::size_t n = herm.rows;
  const double lmax = e.values.empty() ? 0.0 : e.values.back();
  double z = 0.0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp((e.values[i] - lmax) / mu);
    z += w[i];
  }
  SmoothedNorm out;
  out.value = lmax + mu * std::log(z);
  out.weights = CMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w[i] / z;
    if (wi < 1e-300) continue;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        out.weights(a, b) += wi * e.vectors(a, i) * std::conj(e.vectors(b, i));
  }
  return out;
}

double psd_norm(const CMatrix& herm) {
  EigResult e = herm_eig(herm);
  return e.values.empty() ? 0.0 : std::max(0.0, e.values.back());
}

struct HermExp {
  CMatrix p;
  CMatrix p_inv;
  CMatrix vectors;
  std::vector<double> values;
};

HermExp herm_exp(const CMatrix& m) {
  EigResult e = herm_eig(m);
  const std::size_t n = m.rows;
  HermExp out{CMatrix(n, n), CMatrix(n, n), e.vectors, e.values};
  for (std::size_t i = 0; i < n; ++i) {
    const double ep = std::exp(e.values[i]);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const cplx uv = e.vectors(a, i) * std::conj(e.vectors(b, i));
        out.p(a, b) += ep * uv;
        out.p_inv(a, b) += (1.0 / ep) * uv;
      }
  }
  return out;
}

double exp_divided_difference(double a, double b) {
  if (std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a) + std::abs(b))) return std::exp(0.5 * (a + b));
  return (std::exp(a) - std::exp(b)) / (a - b);
}

// Pull a gradient with respect to P = exp(M) back to M.
CMatrix dexp_pullback(const CMatrix& gamma, const HermExp& ex) {
  const std::size_t n = gamma.rows;
  CMatrix tilde = adjoint(ex.vectors) * gamma * ex.vectors;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      tilde(a, b) *= exp_divided_difference(ex.values[a], ex.values[b]);
  return ex.vectors * tilde * adjoint(ex.vectors);
}

CMatrix herm_sqrt_exp(const CMatrix& m, double sign) {
  EigResult e = herm_eig(m);
  const std::size_t n = m.rows;
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ep = std::exp(0.5 * sign * e.values[i]);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        out(a, b) += ep * e.vectors(a, i) * std::conj(e.vectors(b, i));
  }
  return out;
}

struct FiberFactorization {
  CMatrix c_hat;  // (n d) x width
  CMatrix r_hat;  // (n d) x width
  double f1 = 0.0;
  double f2 = 0.0;
  double value = 0.0;  // sqrt(f1 f2) after balancing
};

// Minimise ||ptr(C0 P C0*)|| ||ptr(R0 P^-1 R0*)|| over P > 0 with P = exp(M).
// The problem is convex in P; the canonical polar candidate is M = 0. A
// log-sum-exp homotopy smooths the spectral norms, and seeded restarts guard
// the descent.
FiberFactorization optimize_fiber(const CMatrix& tau, std::size_t n, std::size_t d,
                                  std::mt19937_64& rng, int restarts) {
  FiberFactorization out;
  SvdResult f = svd(tau);
  const double smax = f.sigma.empty() ? 0.0 : f.sigma[0];
  std::size_t rank = 0;
  while (rank < f.sigma.size() && f.sigma[rank] > 1e-14 * smax) ++rank;
  if (rank == 0 || smax <= 0.0) {
    out.c_hat = CMatrix(n * d, 0);
    out.r_hat = CMatrix(n * d, 0);
    return out;
  }

  CMatrix c0(n * d, rank), r0(n * d, rank);
  for (std::size_t k = 0; k < rank; ++k) {
    const double root = std::sqrt(f.sigma[k]);
    for (std::size_t a = 0; a < n * d; ++a) {
      c0(a, k) = f.u(a, k) * root;
      r0(a, k) = f.v(a, k) * root;
    }
  }
  const CMatrix c0_adj = adjoint(c0), r0_adj = adjoint(r0);

  auto eval_exact = [&](const HermExp& ex) {
    const double a = psd_norm(partial_trace(c0 * ex.p * c0_adj, n, d));
    const double b = psd_norm(partial_trace(r0 * ex.p_inv * r0_adj, n, d));
    return std::pair<double, double>{a, b};
  };

  CMatrix best_m(rank, rank);
  double best_value = -1.0;
  auto consider = [&](const CMatrix& m) {
    auto [a, b] = eval_exact(herm_exp(m));
    const double v = std::sqrt(std::max(0.0, a * b));
    if (best_value < 0.0 || v < best_value) {
      best_value = v;
      best_m = m;
    }
  };

  std::normal_distribution<double> g;
  const int tries = std::max(1, restarts);
  for (int restart = 0; restart < tries; ++restart) {
    CMatrix m(rank, rank);
    if (restart > 0) {
      for (std::size_t a = 0; a < rank; ++a) {
        m(a, a) = 0.7 * g(rng);
        for (std::size_t b = a + 1; b < rank; ++b) {
          m(a, b) = 0.5 * cplx(g(rng), g(rng));
          m(b, a) = std::conj(m(a, b));
        }
      }
    }
    consider(m);

    for (double mu_rel : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5}) {
      HermExp ex = herm_exp(m);
      auto [a0, b0] = eval_exact(ex);
      const double mu = mu_rel * std::max({a0, b0, 1e-30});
      auto objective = [&](const HermExp& e) {
        const SmoothedNorm sa = smoothed_norm(partial_trace(c0 * e.p * c0_adj, n, d), mu);
        const SmoothedNorm sb = smoothed_norm(partial_trace(r0 * e.p_inv * r0_adj, n, d), mu);
        return std::tuple<double, SmoothedNorm, SmoothedNorm>(
            std::log(std::max(sa.value, 1e-300)) + std::log(std::max(sb.value, 1e-300)), sa, sb);
      };
      auto [gval, sa, sb] = objective(ex);
      double step = 0.25;
      for (int iter = 0; iter < 60; ++iter) {
        const CMatrix ga = c0_adj * lift(sa.weights, d) * c0;
        const CMatrix gb = r0_adj * lift(sb.weights, d) * r0;
        const CMatrix gamma = (cplx(1.0 / std::max(sa.value, 1e-300)) * ga) -
                              (cplx(1.0 / std::max(sb.value, 1e-300)) *
                               (ex.p_inv * gb * ex.p_inv));
        const CMatrix grad = dexp_pullback(gamma, ex);
        const double gnorm = frobenius(grad);
        if (gnorm < 1e-11) break;

        bool accepted = false;
        for (int back = 0; back < 24 && !accepted; ++back) {
          CMatrix m_try = m - (cplx(step) * grad);
          HermExp ex_try = herm_exp(m_try);
          auto [g_try, sa_try, sb_try] = objective(ex_try);
          if (g_try < gval - 1e-4 * step * gnorm * gnorm) {
            m = std::move(m_try);
            ex = std::move(ex_try);
            gval = g_try;
            sa = std::move(sa_try);
            sb = std::move(sb_try);
            step = std::min(1.0, step * 1.4);
            accepted = true;
          } else {
            step *= 0.5;
          }
        }
        if (!accepted) break;
      }
      consider(m);
    }
  }

  out.c_hat = c0 * herm_sqrt_exp(best_m, +1.0);
  out.r_hat = r0 * herm_sqrt_exp(best_m, -1.0);
  out.f1 = psd_norm(partial_trace(out.c_hat * adjoint(out.c_hat), n, d));
  out.f2 = psd_norm(partial_trace(out.r_hat * adjoint(out.r_hat), n, d));
  if (out.f1 > 0.0 && out.f2 > 0.0) {
    const double bal = std::pow(out.f2 / out.f1, 0.25);
    out.c_hat = cplx(bal) * out.c_hat;
    out.r_hat = cplx(1.0 / bal) * out.r_hat;
    out.f1 = psd_norm(partial_trace(out.c_hat * adjoint(out.c_hat), n, d));
    out.f2 = psd_norm(partial_trace(out.r_hat * adjoint(out.r_hat), n, d));
  }
  out.value = std::sqrt(std::max(0.0, out.f1 * out.f2));
  return out;
}

std::vector<std::vector<CMatrix>> localized_blocks(const MatrixTensor& u, const Point& x,
                                                   std::vector<AdjointableOperator>& phis_flat) {
  const std::size_t n = u.level();
  std::vector<std::vector<CMatrix>> t(n, std::vector<CMatrix>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = phis_flat[i * n + j].matrix(x);
  return t;
}

std::vector<AdjointableOperator> phi_grid(const MatrixTensor& u) {
  std::vector<AdjointableOperator> out;
  out.reserve(u.level() * u.level());
  for (std::size_t i = 0; i < u.level(); ++i)
    for (std::size_t j = 0; j < u.level(); ++j) out.push_back(phi(u.entry(i, j)));
  return out;
}

// The pairing ascent at one point: alternate between the top singular pair
// of the pairing matrix and the trace-norm-optimal contractive probe.
double dual_fiber(const std::vector<std::vector<CMatrix>>& t, const CMatrix& proj, std::size_t n,
                  std::size_t d, std::size_t m, std::mt19937_64& rng, int restarts) {
  double scale = 0.0;
  for (const auto& row : t)
    for (const CMatrix& blk : row) scale = std::max(scale, max_abs(blk));
  if (scale <= 0.0) return 0.0;

  const CMatrix big_proj = block_diag(proj, m);

  std::normal_distribution<double> g;
  double best = 0.0;
  for (int restart = 0; restart < std::max(1, restarts); ++restart) {
    CMatrix k(m * d, m * d);
    for (cplx& z : k.a) z = cplx(g(rng), g(rng));
    k = big_proj * k * big_proj;
    const double kn = op_norm(k);
    if (kn > 1.0) k = cplx(1.0 / kn) * k;

    double sigma_prev = -1.0;
    for (int iter = 0; iter < 120; ++iter) {
      CMatrix pairing(n * m, n * m);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q) {
              cplx tr_val = 0.0;
              for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                  tr_val += t[i][j](a, b) * k(p * d + b, q * d + a);
              pairing(i * m + p, j * m + q) = tr_val;
            }
      SvdResult sv = svd(pairing);
      const double sigma = sv.sigma.empty() ? 0.0 : sv.sigma[0];
      best = std::max(best, sigma);
      if (sigma_prev >= 0.0 && sigma - sigma_prev <= 1e-12 * (1.0 + sigma)) break;
      sigma_prev = sigma;

      // X block (q, p) = sum_ij conj(w_{ip}) z_{jq} T_ij maximises
      // Re tr(X K) over contractions at K = adjoint of the polar isometry.
      CMatrix x(m * d, m * d);
      for (std::size_t q = 0; q < m; ++q)
        for (std::size_t p = 0; p < m; ++p)
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
              const cplx coeff = std::conj(sv.u(i * m + p, 0)) * sv.v(j * m + q, 0);
              if (coeff == cplx{}) continue;
              for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                  x(q * d + a, p * d + b) += coeff * t[i][j](a, b);
            }
      k = adjoint(polar(x).isometry);
      k = big_proj * k * big_proj;
    }
  }
  return best;
}

}  // namespace

MatrixFactorization matrix_haagerup_factorization(const MatrixTensor& u,
                                                  const SearchOptions& opts) {
  const std::size_t n = u.level();
  const ModulePtr& mod = u.module();
  const std::size_t d = mod->ambient_dim();
  std::vector<AdjointableOperator> phis = phi_grid(u);
  const std::vector<Point> points = all_points(*mod);

  std::vector<FiberFactorization> fibers;
  fibers.reserve(points.size());
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const Point& x = points[pi];
    std::vector<std::vector<CMatrix>> t = localized_blocks(u, x, phis);
    // Rearranged fiber operator: block (j, i) = phi(U_ij)_x, projected onto
    // the fiber so singular directions stay inside range(p_x).
    CMatrix tau(n * d, n * d);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b) tau(j * d + a, i * d + b) = t[i][j](a, b);
    const CMatrix big_p = block_diag(mod->projection(x), n);
    tau = big_p * tau * big_p;
    std::mt19937_64 rng(opts.seed * 0x9e3779b97f4a7c15ull + 1000003ull * pi);
    fibers.push_back(optimize_fiber(tau, n, d, rng, opts.restarts));
  }

  std::size_t width = opts.width;
  for (const FiberFactorization& f : fibers) width = std::max(width, f.c_hat.cols);

  MatrixFactorization out;
  if (width == 0) {
    out.bras.assign(n, {});
    out.kets.clear();
    return out;
  }

  const bool has_inf = mod->spectrum()->has_infinity();
  const std::size_t finite_count = mod->spectrum()->size();
  auto component = [&](const CMatrix& hat, std::size_t block, std::size_t col) {
    std::vector<cplx> v(d, 0.0);
    if (col < hat.cols)
      for (std::size_t a = 0; a < d; ++a) v[a] = hat(block * d + a, col);
    return v;
  };

  out.bras.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < width; ++k) {
      std::vector<std::vector<cplx>> vecs(finite_count);
      for (std::size_t pi = 0; pi < finite_count; ++pi) vecs[pi] = component(fibers[pi].r_hat, i, k);
      std::optional<std::vector<cplx>> inf;
      if (has_inf) inf = component(fibers.back().r_hat, i, k);
      out.bras[i].emplace_back(mod, std::move(vecs), std::move(inf));
    }
  }
  out.kets.assign(width, {});
  for (std::size_t k = 0; k < width; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::vector<cplx>> vecs(finite_count);
      for (std::size_t pi = 0; pi < finite_count; ++pi) vecs[pi] = component(fibers[pi].c_hat, j, k);
      std::optional<std::vector<cplx>> inf;
      if (has_inf) inf = component(fibers.back().c_hat, j, k);
      out.kets[k].emplace_back(mod, std::move(vecs), std::move(inf));
    }
  }

  out.bra_norm = block_norm(out.bras, BlockOrientation::bras);
  out.ket_norm = block_norm(out.kets, BlockOrientation::kets);
  out.upper = out.bra_norm * out.ket_norm;
  return out;
}

double matrix_haagerup_upper(const MatrixTensor& u, const SearchOptions& opts) {
  return matrix_haagerup_factorization(u, opts).upper;
}

double matrix_dual_lower(const MatrixTensor& u, const SearchOptions& opts) {
  const std::size_t n = u.level();
  const ModulePtr& mod = u.module();
  const std::size_t d = mod->ambient_dim();
  const std::size_t m = opts.width > 0 ? opts.width : n;
  std::vector<AdjointableOperator> phis = phi_grid(u);

  // Probes are compact, hence vanish at infinity: only finite points pair.
  double lower = 0.0;
  for (std::size_t pi = 0; pi < mod->spectrum()->size(); ++pi) {
    const Point x = Point::finite(pi);
    std::vector<std::vector<CMatrix>> t = localized_blocks(u, x, phis);
    std::mt19937_64 rng(opts.seed * 0x9e3779b97f4a7c15ull + 7777777ull * (pi + 1));
    lower = std::max(lower, dual_fiber(t, mod->projection(x), n, d, m, rng, opts.restarts));
  }
  return lower;
}

IsometryReport verify_complete_isometry(const MatrixTensor& u, double tolerance,
                                        const SearchOptions& opts) {
  IsometryReport rep;
  rep.level = u.level();
  rep.tolerance = tolerance;
  rep.seed = opts.seed;
  rep.restarts = opts.restarts;
  rep.upper = matrix_haagerup_upper(u, opts);
  rep.lower = matrix_dual_lower(u, opts);
  rep.gap = rep.upper - rep.lower;
  bool pass = rep.gap <= tolerance * (1.0 + rep.upper) && rep.lower <= rep.upper + 1e-9;
  if (u.level() == 1) {
    rep.trace_norm = trace_norm_module(phi(u.entry(0, 0)));
    pass = pass && std::abs(rep.upper - rep.trace_norm) <= tol::level_one &&
           std::abs(rep.lower - rep.trace_norm) <= tol::level_one;
  }
  rep.pass = pass;
  return rep;
}

}  // namespace modtrace
