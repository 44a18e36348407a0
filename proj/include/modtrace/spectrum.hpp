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

#ifndef MODTRACE_SPECTRUM_HPP
#define MODTRACE_SPECTRUM_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "modtrace/common.hpp"

namespace modtrace {

/// Finite model of the spectrum of a commutative C*-algebra: a list of
/// labelled points, optionally augmented by one point at infinity. With the
/// infinity point the element algebra models C0 functions inside their
/// multiplier algebra; without it the algebra is unital and M(A) = A.
class Spectrum {
 public:
  Spectrum(std::vector<std::string> points, bool has_infinity);

  std::size_t size() const { return points_.size(); }
  bool has_infinity() const { return has_infinity_; }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& label(std::size_t i) const { return points_[i]; }
  std::size_t index_of(const std::string& label) const;  // throws UnknownPoint

  friend bool operator==(const Spectrum& x, const Spectrum& y) = default;

 private:
  std::vector<std::string> points_;
  bool has_infinity_ = false;
};

using SpectrumPtr = std::shared_ptr<const Spectrum>;

bool same_spectrum(const SpectrumPtr& x, const SpectrumPtr& y);

/// Complex-valued function on a spectrum. The value at infinity is the
/// declared multiplier-level limit; membership in A means that value
/// vanishes (within tolerance).
class AlgebraElement {
 public:
  AlgebraElement(SpectrumPtr spectrum, std::vector<cplx> values, cplx infinity_value = 0.0);
  static AlgebraElement zero(SpectrumPtr spectrum);
  static AlgebraElement constant(SpectrumPtr spectrum, cplx value);

  const SpectrumPtr& spectrum() const { return spectrum_; }
  const std::vector<cplx>& values() const { return values_; }
  cplx value(std::size_t i) const { return values_[i]; }
  cplx infinity_value() const { return infinity_value_; }

  double norm() const;       // sup of moduli, including infinity
  bool is_in_A() const;      // infinity value vanishes within tolerance
  bool is_positive() const;  // real and nonnegative up to dust

  AlgebraElement conj() const;

 private:
  SpectrumPtr spectrum_;
  std::vector<cplx> values_;
  cplx infinity_value_ = 0.0;
};

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator*(cplx s, const AlgebraElement& x);

double alg_norm(const AlgebraElement& a);

/// How a summand list is to be read: a complete series (the sum terminates
/// with the list) or the prefix of an infinite one (convergence has to be
/// witnessed by a stabilising tail before the list runs out).
enum class SeriesMode { complete, truncated };

struct SeriesConverged {
  AlgebraElement sum;
};
struct SeriesNotCauchy {
  double gap;  // max_{J' > N/2} ||S_J' - S_{N/2}||
};
struct SeriesLimitOutsideA {
  AlgebraElement sum;
};

using SeriesResult = std::variant<SeriesConverged, SeriesNotCauchy, SeriesLimitOutsideA>;

SeriesResult series_in_A(const std::vector<AlgebraElement>& summands, SeriesMode mode);

}  // namespace modtrace

#endif  // MODTRACE_SPECTRUM_HPP
