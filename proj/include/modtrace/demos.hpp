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

#ifndef MODTRACE_DEMOS_HPP
#define MODTRACE_DEMOS_HPP

#include <string>
#include <vector>

#include "modtrace/frames.hpp"
#include "modtrace/traceclass.hpp"

namespace modtrace {

/// The classic escaping-trace instance over a truncated copy of the natural
/// numbers: the averaging operator t(n) = (1/n) sum_{i<=n} E_ii has
/// pointwise trace identically 1, so its frame-trace series never settles
/// (half-vs-full gap exactly 1/2) and the trace escapes the algebra.
///
/// The window holds the first 2J points; the ambient dimension matches so
/// every fiber carries the full averaging matrix. The infinity fiber is
/// declared I/d: the smallest positive stand-in with the correct (unit)
/// trace limit. The standard frame comes truncated-flagged, since it stands
/// for the infinite coordinate frame.
struct EscapingTraceFixture {
  ModulePtr module;
  AdjointableOperator averaging;
  FrameOfMultipliers truncated_frame;
};

EscapingTraceFixture escaping_trace_fixture(std::size_t half_length = 8);

struct DemoResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Built-in reproductions behind the CLI's `paper-examples` subcommand.
std::vector<DemoResult> run_builtin_demos();

}  // namespace modtrace

#endif  // MODTRACE_DEMOS_HPP
