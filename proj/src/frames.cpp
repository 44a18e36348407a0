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

#include "modtrace/frames.hpp"

#include <algorithm>

namespace modtrace {

FrameOfMultipliers::FrameOfMultipliers(ModulePtr module, std::vector<ModuleElement> members,
                                       bool truncated, double tail_bound)
    : module_(std::move(module)), members_(std::move(members)), truncated_(truncated),
      tail_bound_(tail_bound) {
  if (!module_) throw ValidationError("frame without module");
  if (members_.empty()) throw ValidationError("frame needs at least one member");
  if (tail_bound_ < 0.0) throw ValidationError("frame tail bound must be nonnegative");
  for (const ModuleElement& beta : members_)
    if (!same_module(beta.module(), module_))
      throw ModuleMismatch("frame member lives in a different module");
}

namespace {

ModuleElement coordinate_multiplier(const ModulePtr& m, std::size_t col, bool project) {
  const std::size_t d = m->ambient_dim();
  std::vector<cplx> e(d, 0.0);
  e[col] = 1.0;
  std::vector<std::vector<cplx>> vectors;
  for (std::size_t i = 0; i < m->spectrum()->size(); ++i)
    vectors.push_back(project ? matvec(m->projection(Point::finite(i)), e) : e);
  std::optional<std::vector<cplx>> inf;
  if (m->spectrum()->has_infinity())
    inf = project ? matvec(m->projection(Point::infinity()), e) : e;
  return ModuleElement(m, std::move(vectors), std::move(inf));
}

}  // namespace

FrameOfMultipliers standard_frame(const ModulePtr& free_module) {
  if (!free_module->is_free())
    throw NotFree("standard_frame requires an identically-identity projection field");
  std::vector<ModuleElement> members;
  for (std::size_t col = 0; col < free_module->ambient_dim(); ++col)
    members.push_back(coordinate_multiplier(free_module, col, false));
  return FrameOfMultipliers(free_module, std::move(members));
}

FrameOfMultipliers canonical_frame(const ModulePtr& module) {
  std::vector<ModuleElement> members;
  for (std::size_t col = 0; col < module->ambient_dim(); ++col)
    members.push_back(coordinate_multiplier(module, col, true));
  return FrameOfMultipliers(module, std::move(members));
}

FrameCheck is_frame(const FrameOfMultipliers& beta) {
  const HilbertModule& m = *beta.module();
  double dev = 0.0;
  for (const Point& x : all_points(m)) {
    CMatrix sum(m.ambient_dim(), m.ambient_dim());
    for (const ModuleElement& b : beta.members()) {
      const std::vector<cplx>& v = b.vector(x);
      for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) sum(i, j) += v[i] * std::conj(v[j]);
    }
    dev = std::max(dev, op_norm(sum - m.projection(x)));
  }
  return FrameCheck{dev <= tol::frame_dev + beta.tail_bound(), dev};
}

ModuleElement reconstruct(const FrameOfMultipliers& beta, const ModuleElement& eta) {
  FrameCheck chk = is_frame(beta);
  if (chk.deviation > tol::frame_dev)
    throw NotAFrame("reconstruct requires an exact resolution of the identity");
  if (!same_module(beta.module(), eta.module()))
    throw ModuleMismatch("reconstruct across different modules");
  ModuleElement out = ModuleElement::zero(eta.module());
  for (const ModuleElement& b : beta.members()) out = out + module_mult(b, inner(b, eta));
  return out;
}

FrameOfMultipliers pullback_frame(const AdjointableOperator& theta,
                                  const FrameOfMultipliers& frame) {
  if (!same_module(theta.codomain(), frame.module()))
    throw ModuleMismatch("pullback_frame: frame does not live on theta's codomain");
  const HilbertModule& dom = *theta.domain();
  double dev = 0.0;
  for (const Point& x : all_points(dom)) {
    const CMatrix& th = theta.matrix(x);
    dev = std::max(dev, op_norm(adjoint(th) * th - dom.projection(x)));
  }
  if (dev > tol::isometry) throw NotIsometry("pullback_frame: theta* theta != id");

  const AdjointableOperator theta_star = adjoint(theta);
  std::vector<ModuleElement> members;
  for (const ModuleElement& g : frame.members()) members.push_back(apply(theta_star, g));
  return FrameOfMultipliers(theta.domain(), std::move(members), frame.truncated(),
                            frame.tail_bound());
}

std::vector<std::vector<cplx>> localize_frame(const FrameOfMultipliers& beta, const Point& x) {
  std::vector<std::vector<cplx>> out;
  for (const ModuleElement& b : beta.members()) out.push_back(b.vector(x));
  return out;
}

AdjointableOperator inclusion_into_free(const ModulePtr& module) {
  const ModulePtr ambient = HilbertModule::free_module(module->spectrum(), module->ambient_dim());
  std::vector<CMatrix> mats;
  for (std::size_t i = 0; i < module->spectrum()->size(); ++i)
    mats.push_back(module->projection(Point::finite(i)));
  std::optional<CMatrix> inf;
  bool compact = true;
  if (module->spectrum()->has_infinity()) {
    inf = module->projection(Point::infinity());
    compact = op_norm(*inf) <= tol::support;
  }
  return AdjointableOperator(module, ambient, std::move(mats), std::move(inf), compact);
}

}  // namespace modtrace
