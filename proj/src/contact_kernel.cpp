#include "dmcis/contact_kernel.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dmcis {

std::vector<std::uint8_t> in_range_serial(const RangeInput& in)
{
    const std::size_t ns = in.stations.size();
    const std::size_t nm = in.maps.size();
    std::vector<std::uint8_t> out(ns * nm, 0);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t m = 0; m < nm; ++m) {
            double r = std::min(in.station_range[s], in.map_range[m]);
            out[s * nm + m] = distance(in.stations[s], in.maps[m]) <= r ? 1 : 0;
        }
    return out;
}

std::vector<std::uint8_t> in_range_parallel(const RangeInput& in)
{
    const auto ns = static_cast<std::int64_t>(in.stations.size());
    const auto nm = static_cast<std::int64_t>(in.maps.size());
    std::vector<std::uint8_t> out(static_cast<std::size_t>(ns * nm), 0);
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < ns * nm; ++idx) {
        auto s = static_cast<std::size_t>(idx / nm);
        auto m = static_cast<std::size_t>(idx % nm);
        double r = std::min(in.station_range[s], in.map_range[m]);
        out[static_cast<std::size_t>(idx)] = distance(in.stations[s], in.maps[m]) <= r ? 1 : 0;
    }
    return out;
}

bool openmp_enabled()
{
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace dmcis
