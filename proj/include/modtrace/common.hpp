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

#ifndef MODTRACE_COMMON_HPP
#define MODTRACE_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace modtrace {

using cplx = std::complex<double>;

/// Base class for every error the library raises on violated preconditions
/// or failed numerics. The derived names mirror the failure kinds reported
/// to callers (and mapped to CLI exit codes).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonHermitian : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct NotPositive : Error { using Error::Error; };
struct SpectrumMismatch : Error { using Error::Error; };
struct ModuleMismatch : Error { using Error::Error; };
struct UnknownPoint : Error { using Error::Error; };
struct NotFree : Error { using Error::Error; };
struct NotAFrame : Error { using Error::Error; };
struct NotIsometry : Error { using Error::Error; };
struct NotTraceClass : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// All tolerances are relative, scaled by 1 + the relevant norm, and are
// fixed here rather than at call sites.
namespace tol {
inline constexpr double hermitian_pre = 1e-9;    // ||m - m*||_max precondition
inline constexpr double eig_residual = 1e-10;    // eig/svd reconstruction
inline constexpr double sqrt_residual = 1e-9;    // sqrt_psd(m)^2 vs m
inline constexpr double rank_cut = 1e-10;        // sigma <= cut * sigma_max is zero
inline constexpr double psd_clamp = 1e-10;       // eigenvalue clamp in sqrt_psd
inline constexpr double projection = 1e-9;       // p = p* = p^2
inline constexpr double support = 1e-9;          // p xi = xi, q t p = t
inline constexpr double membership = 1e-9;       // is_in_A infinity test
inline constexpr double positivity = 1e-10;      // is_positive dust
inline constexpr double series_gap = 1e-9;       // series_in_A Cauchy gap
inline constexpr double frame_dev = 1e-8;        // is_frame deviation
inline constexpr double isometry = 1e-9;         // theta* theta = id
inline constexpr double op_positive = 1e-9;      // pointwise eigenvalue dust
inline constexpr double trace_agree = 1e-8;      // frame independence
inline constexpr double trace_pointwise = 1e-9;  // trace_beta vs pointwise trace
inline constexpr double factorize = 1e-8;        // phi(u) vs t, bound slack
inline constexpr double level_one = 1e-7;        // level-1 sandwich gap
inline constexpr double psi_diagram = 1e-12;     // localisation diagram
inline constexpr double contraction = 1e-10;     // op norm vs Haagerup bound
inline constexpr double level_two = 1e-3;        // level-2 sandwich, relative
}  // namespace tol

}  // namespace modtrace

#endif  // MODTRACE_COMMON_HPP
