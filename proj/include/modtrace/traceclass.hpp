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

#ifndef MODTRACE_TRACECLASS_HPP
#define MODTRACE_TRACECLASS_HPP

#include <optional>
#include <vector>

#include "modtrace/frames.hpp"

namespace modtrace {

enum class TraceFailure {
  none,
  not_cauchy,
  limit_outside_A,
  pointwise_not_trace_class,  // unreachable on finite-dimensional fibers; kept for the schema
};

/// Outcome of a frame-trace computation. When defined, the value is the
/// A-valued trace; otherwise the failure kind plus its witness survive.
struct TraceVerdict {
  bool defined = false;
  std::optional<AlgebraElement> value;
  TraceFailure failure = TraceFailure::none;
  double gap = 0.0;                        // Cauchy gap witness, when not_cauchy
  std::optional<AlgebraElement> witness;   // escaping limit, when limit_outside_A
};

/// |t| = (t* t)^{1/2}, computed fiberwise.
AdjointableOperator abs_op(const AdjointableOperator& t);

/// sum_i <beta_i | t beta_i> read as a complete series, or as a truncation
/// when the frame is truncated-flagged. Throws NotPositive when t is not a
/// positive endomorphism and NotAFrame when beta fails its resolution check.
TraceVerdict trace_beta(const AdjointableOperator& t, const FrameOfMultipliers& beta);

struct PointwiseTrace {
  AlgebraElement values;  // x -> trace(t_x), including the declared infinity
  bool in_A = false;
};

PointwiseTrace pointwise_trace(const AdjointableOperator& t);

/// Frame-independence and localisation report: every frame's verdict, the
/// worst pairwise disagreement between defined trace values, and the worst
/// deviation from the pointwise trace.
struct TraceConsistencyReport {
  std::vector<TraceVerdict> verdicts;
  bool verdicts_agree = false;    // same defined/undefined status for all frames
  double max_pairwise = 0.0;      // between defined values
  double max_vs_pointwise = 0.0;  // defined values vs pointwise trace, per point
  bool pass = false;
};

TraceConsistencyReport check_trace_consistency(const AdjointableOperator& t,
                                               const std::vector<FrameOfMultipliers>& frames);

/// trace(|t|) exists in A (checked with the canonical frame of t's module).
bool is_trace_class(const AdjointableOperator& t);

/// sup over points of the fiber trace norm; equals ||trace(|t|)|| when t is
/// trace class.
double trace_norm_module(const AdjointableOperator& t);

/// theta t theta* on the codomain of an adjointable isometry theta.
/// Preserves trace-class status and the trace value.
AdjointableOperator conjugate_by_isometry(const AdjointableOperator& t,
                                          const AdjointableOperator& theta);

}  // namespace modtrace

#endif  // MODTRACE_TRACECLASS_HPP
