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

#ifndef MODTRACE_FRAMES_HPP
#define MODTRACE_FRAMES_HPP

#include <vector>

#include "modtrace/hilbert_module.hpp"

namespace modtrace {

/// Finite frame of multipliers (beta_i). A frame flagged `truncated` stands
/// for the prefix of an infinite frame: `tail_bound` is the declared bound
/// on the missing part of the resolution of the identity, and series built
/// over it are read as truncations rather than complete sums.
class FrameOfMultipliers {
 public:
  FrameOfMultipliers(ModulePtr module, std::vector<ModuleElement> members, bool truncated = false,
                     double tail_bound = 0.0);

  const ModulePtr& module() const { return module_; }
  const std::vector<ModuleElement>& members() const { return members_; }
  bool truncated() const { return truncated_; }
  double tail_bound() const { return tail_bound_; }

 private:
  ModulePtr module_;
  std::vector<ModuleElement> members_;
  bool truncated_ = false;
  double tail_bound_ = 0.0;
};

/// Constant coordinate multipliers of a free module (the frame that inserts
/// a into the i-th coordinate). Throws NotFree otherwise.
FrameOfMultipliers standard_frame(const ModulePtr& free_module);

/// Pullback of the standard frame along the inclusion: members x -> p_x e_i.
FrameOfMultipliers canonical_frame(const ModulePtr& module);

struct FrameCheck {
  bool ok = false;
  double deviation = 0.0;  // max_x || sum_i beta_i beta_i* - p_x ||
};

/// Verifies the pointwise resolution of the projection, including at
/// infinity. A declared tail bound widens the acceptance accordingly.
FrameCheck is_frame(const FrameOfMultipliers& beta);

/// sum_i beta_i . <beta_i | eta>. Requires a strict (untruncated-quality)
/// frame; throws NotAFrame when the resolution deviates beyond tolerance.
ModuleElement reconstruct(const FrameOfMultipliers& beta, const ModuleElement& eta);

/// Members theta* gamma_i of a frame on the codomain of an adjointable
/// isometry theta (theta* theta = id on the domain module).
FrameOfMultipliers pullback_frame(const AdjointableOperator& theta,
                                  const FrameOfMultipliers& frame);

/// Fiber vectors (beta_{i,x})_i, a Parseval frame for range(p_x).
std::vector<std::vector<cplx>> localize_frame(const FrameOfMultipliers& beta, const Point& x);

/// The inclusion of a projection-field module into its ambient free module;
/// an adjointable isometry (theta* theta = id).
AdjointableOperator inclusion_into_free(const ModulePtr& module);

}  // namespace modtrace

#endif  // MODTRACE_FRAMES_HPP
