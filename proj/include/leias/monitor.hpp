#pragma once

// Runtime verification of the IAS guarantees and the pilot-interaction
// property over recorded traces. The monitor reads only TraceEvents, so it
// checks engine output and externally supplied traces alike.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "leias/core.hpp"
#include "leias/trace.hpp"

namespace leias {

enum class RequirementId : std::uint8_t {
  G1NormalReliable,       // range Normal => reliable
  G2SafetyUnreliable,     // implicated and Safety => not reliable
  G3ResponseExpected,     // alert answered by its deadline
  G4MandatoryAlert,       // active implicated at Safety => alert
  G5NormalNoAlert,        // active at Normal => no alert opened for it
  L2UnreliableActive,     // unreliable active sensor must be justified
};

inline constexpr std::array<RequirementId, 6> kAllRequirements{
    RequirementId::G1NormalReliable,  RequirementId::G2SafetyUnreliable,
    RequirementId::G3ResponseExpected, RequirementId::G4MandatoryAlert,
    RequirementId::G5NormalNoAlert,   RequirementId::L2UnreliableActive};

std::string_view to_string(RequirementId r) noexcept;
std::optional<RequirementId> parse_requirement(std::string_view s) noexcept;
std::string_view describe(RequirementId r) noexcept;

struct Violation {
  RequirementId req;
  Tick tick = 0;
  // Named witness values; enough to re-evaluate the predicate on its own.
  nlohmann::json bindings = nlohmann::json::object();

  friend bool operator==(const Violation&, const Violation&) = default;
};

// {"req": id, "tick": k, "bindings": {...}}
nlohmann::json to_json(const Violation& v);

// Evaluates every requirement at every tick. Ticks must be nondecreasing and
// every tick from the first to the last must carry exactly one
// StateSnapshot; otherwise MalformedTraceError. Violations come back sorted
// by tick, then requirement. An alert whose deadline lies past the end of
// the trace is still pending and is not reported.
std::vector<Violation> check_trace(const Trace& trace);

// The requirement's predicate re-evaluated from the violation's bindings
// alone. False for every violation check_trace reports.
bool predicate_holds(const Violation& v);

// Events from the start of the violation's look-back window through its
// tick: one tick for per-tick guarantees, the previous tick as well for L2,
// the alert interval for G3.
Trace extract_counterexample(const Trace& trace, const Violation& v);

}  // namespace leias
