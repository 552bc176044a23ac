#pragma once

// Random scenarios that validate by construction. Used by the conservation
// property tests and `dmcis generate`.

#include "dmcis/scenario.hpp"

#include <cstdint>

namespace dmcis {

struct GeneratorOptions {
    int min_areas = 2;
    int max_areas = 3;
    double duration = 1200.0;
    // Probability that a MAP gets a buffer too small for an aggregated report,
    // which exercises the drop path.
    double tiny_buffer_chance = 0.15;
};

Scenario generate_scenario(std::uint64_t seed, const GeneratorOptions& opt = {});

} // namespace dmcis
