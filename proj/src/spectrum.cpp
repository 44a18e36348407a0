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

#include "modtrace/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace modtrace {

Spectrum::Spectrum(std::vector<std::string> points, bool has_infinity)
    : points_(std::move(points)), has_infinity_(has_infinity) {
  if (points_.empty()) throw ValidationError("spectrum needs at least one finite point");
  std::set<std::string> seen(points_.begin(), points_.end());
  if (seen.size() != points_.size()) throw ValidationError("spectrum labels must be unique");
}

std::size_t Spectrum::index_of(const std::string& label) const {
  auto it = std::find(points_.begin(), points_.end(), label);
  if (it == points_.end()) throw UnknownPoint("unknown spectrum point: " + label);
  return static_cast<std::size_t>(it - points_.begin());
}

bool same_spectrum(const SpectrumPtr& x, const SpectrumPtr& y) {
  return x == y || (x && y && *x == *y);
}

AlgebraElement::AlgebraElement(SpectrumPtr spectrum, std::vector<cplx> values, cplx infinity_value)
    : spectrum_(std::move(spectrum)), values_(std::move(values)), infinity_value_(infinity_value) {
  if (!spectrum_) throw ValidationError("algebra element without spectrum");
  if (values_.size() != spectrum_->size())
    throw ValidationError("algebra element value count does not match the spectrum");
  if (!spectrum_->has_infinity()) infinity_value_ = 0.0;
  for (const cplx& z : values_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ValidationError("algebra element has a non-finite value");
}

AlgebraElement AlgebraElement::zero(SpectrumPtr spectrum) {
  std::vector<cplx> values(spectrum->size(), 0.0);
  return AlgebraElement(std::move(spectrum), std::move(values));
}

AlgebraElement AlgebraElement::constant(SpectrumPtr spectrum, cplx value) {
  std::vector<cplx> values(spectrum->size(), value);
  return AlgebraElement(std::move(spectrum), std::move(values), value);
}

double AlgebraElement::norm() const {
  double v = 0.0;
  for (const cplx& z : values_) v = std::max(v, std::abs(z));
  if (spectrum_->has_infinity()) v = std::max(v, std::abs(infinity_value_));
  return v;
}

bool AlgebraElement::is_in_A() const {
  if (!spectrum_->has_infinity()) return true;
  return std::abs(infinity_value_) <= tol::membership * (1.0 + norm());
}

bool AlgebraElement::is_positive() const {
  const double scale = 1.0 + norm();
  auto ok = [&](cplx z) {
    return std::abs(z.imag()) <= tol::positivity && z.real() >= -tol::positivity * scale;
  };
  for (const cplx& z : values_)
    if (!ok(z)) return false;
  if (spectrum_->has_infinity() && !ok(infinity_value_)) return false;
  return true;
}

AlgebraElement AlgebraElement::conj() const {
  std::vector<cplx> values(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) values[i] = std::conj(values_[i]);
  return AlgebraElement(spectrum_, std::move(values), std::conj(infinity_value_));
}

namespace {
void check_same_spectrum(const AlgebraElement& x, const AlgebraElement& y) {
  if (!same_spectrum(x.spectrum(), y.spectrum()))
    throw SpectrumMismatch("algebra elements live on different spectra");
}
}  // namespace

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  check_same_spectrum(x, y);
  std::vector<cplx> values(x.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = x.value(i) + y.value(i);
  return AlgebraElement(x.spectrum(), std::move(values), x.infinity_value() + y.infinity_value());
}

AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
  check_same_spectrum(x, y);
  std::vector<cplx> values(x.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = x.value(i) - y.value(i);
  return AlgebraElement(x.spectrum(), std::move(values), x.infinity_value() - y.infinity_value());
}

AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
  check_same_spectrum(x, y);
  std::vector<cplx> values(x.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = x.value(i) * y.value(i);
  return AlgebraElement(x.spectrum(), std::move(values), x.infinity_value() * y.infinity_value());
}

AlgebraElement operator*(cplx s, const AlgebraElement& x) {
  std::vector<cplx> values(x.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = s * x.value(i);
  return AlgebraElement(x.spectrum(), std::move(values), s * x.infinity_value());
}

double alg_norm(const AlgebraElement& a) { return a.norm(); }

SeriesResult series_in_A(const std::vector<AlgebraElement>& summands, SeriesMode mode) {
  if (summands.empty()) throw ValidationError("series_in_A needs at least one summand");
  for (const AlgebraElement& a : summands) {
    if (!same_spectrum(a.spectrum(), summands.front().spectrum()))
      throw SpectrumMismatch("series summands live on different spectra");
  }

  const std::size_t n = summands.size();
  std::vector<AlgebraElement> partial;
  partial.reserve(n + 1);
  partial.push_back(AlgebraElement::zero(summands.front().spectrum()));
  for (const AlgebraElement& a : summands) partial.push_back(partial.back() + a);
  const AlgebraElement& total = partial.back();

  if (mode == SeriesMode::truncated) {
    // Converged iff some strict prefix already pins every later partial sum
    // within the gap tolerance; otherwise the half-vs-tail comparison is the
    // witnessed non-Cauchy gap.
    bool witnessed = false;
    for (std::size_t j = 0; j < n && !witnessed; ++j) {
      double gap = 0.0;
      for (std::size_t k = j + 1; k <= n; ++k) gap = std::max(gap, alg_norm(partial[k] - partial[j]));
      witnessed = gap <= tol::series_gap;
    }
    if (!witnessed) {
      const std::size_t half = n / 2;
      double gap = 0.0;
      for (std::size_t k = half + 1; k <= n; ++k)
        gap = std::max(gap, alg_norm(partial[k] - partial[half]));
      return SeriesNotCauchy{gap};
    }
  }

  if (!total.is_in_A()) return SeriesLimitOutsideA{total};
  return SeriesConverged{total};
}

}  // namespace modtrace
