#pragma once

// Station x MAP in-range matrix evaluated every contact tick. The serial loop
// is the reference; the OpenMP loop must produce the identical matrix.

#include "dmcis/geometry.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dmcis {

enum class KernelMode { serial, parallel };

struct RangeInput {
    std::span<const Position> stations;
    std::span<const double> station_range;
    std::span<const Position> maps;
    std::span<const double> map_range;
};

// Row-major [station][map]; 1 where distance <= min(range_s, range_m).
std::vector<std::uint8_t> in_range_serial(const RangeInput& in);
std::vector<std::uint8_t> in_range_parallel(const RangeInput& in);

inline std::vector<std::uint8_t> in_range(const RangeInput& in, KernelMode mode)
{
    return mode == KernelMode::parallel ? in_range_parallel(in) : in_range_serial(in);
}

bool openmp_enabled();
int max_threads();

} // namespace dmcis
