#pragma once

#include <string>
#include <vector>

namespace dmcis {

// One failed scenario condition. `condition` is a stable machine-readable
// code (see docs/FORMATS.md), `message` names the offending entities.
struct Violation {
    std::string condition;
    std::string message;

    bool operator==(const Violation&) const = default;
};

using Violations = std::vector<Violation>;

namespace condition {
inline constexpr const char* tau_exceeds_sensors = "tau_exceeds_sensors";
inline constexpr const char* maps_vs_sdccs = "maps_below_sdccs";
inline constexpr const char* maps_vs_dpcs = "maps_below_dpcs";
inline constexpr const char* dpc_cdc_dominance = "dpcs_not_dominant";
inline constexpr const char* cdc_required = "cdc_required";
inline constexpr const char* containment = "position_outside_region";
inline constexpr const char* pairing = "sdcc_unpaired";
} // namespace condition

} // namespace dmcis
