#include "dmcis/report.hpp"

#include "dmcis/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace dmcis {

namespace {

constexpr std::array<std::string_view, kModalityCount> kModalityNames = {
    "acoustic", "magnetic", "seismic", "thermal", "infrared", "visual"};

constexpr std::array<std::string_view, 6> kRoleNames = {"sensor", "sdcc", "map", "dpc", "cdc", "dcc"};

constexpr std::array<std::string_view, 6> kReportKindNames = {
    "raw", "partially_processed", "processed", "manual_record", "warning_request", "emergency_call"};

} // namespace

std::string_view to_string(Modality m)
{
    return kModalityNames[static_cast<std::size_t>(m)];
}

std::optional<Modality> parse_modality(std::string_view s)
{
    for (std::size_t i = 0; i < kModalityNames.size(); ++i)
        if (kModalityNames[i] == s)
            return static_cast<Modality>(i);
    return std::nullopt;
}

std::string ActorId::str() const
{
    std::string out(kRoleNames[static_cast<std::size_t>(role)]);
    out += ':';
    out += std::to_string(id);
    return out;
}

std::optional<ActorId> parse_actor(std::string_view s)
{
    auto colon = s.find(':');
    if (colon == std::string_view::npos)
        return std::nullopt;
    auto role = s.substr(0, colon);
    auto num = s.substr(colon + 1);
    for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
        if (kRoleNames[i] != role)
            continue;
        int id = 0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), id);
        if (ec != std::errc{} || ptr != num.data() + num.size())
            return std::nullopt;
        return ActorId{static_cast<ActorRole>(i), id};
    }
    return std::nullopt;
}

std::string_view to_string(ReportKind k)
{
    return kReportKindNames[static_cast<std::size_t>(k)];
}

void Report::add_hop(ActorId actor, SimTime at)
{
    if (!provenance.empty() && at < provenance.back().at)
        throw Error("provenance hop at " + std::to_string(at) + " precedes previous hop");
    provenance.push_back(Hop{actor, at});
}

void merge_into(Report& into, const Report& from)
{
    auto& a = into.payload;
    const auto& b = from.payload;
    double wa = static_cast<double>(a.k());
    double wb = static_cast<double>(b.k());
    if (wa + wb > 0.0) {
        a.epicenter.x = (a.epicenter.x * wa + b.epicenter.x * wb) / (wa + wb);
        a.epicenter.y = (a.epicenter.y * wa + b.epicenter.y * wb) / (wa + wb);
    }
    a.sensor_ids.insert(b.sensor_ids.begin(), b.sensor_ids.end());
    a.modalities.insert(b.modalities.begin(), b.modalities.end());
    if (a.intensity_estimates.empty())
        a.intensity_estimates.push_back(a.intensity);
    a.intensity = std::max(a.intensity, b.intensity);
    if (b.intensity_estimates.empty())
        a.intensity_estimates.push_back(b.intensity);
    else
        a.intensity_estimates.insert(a.intensity_estimates.end(), b.intensity_estimates.begin(),
                                     b.intensity_estimates.end());
    into.severity = std::max(into.severity, from.severity);
    into.truth_events.insert(from.truth_events.begin(), from.truth_events.end());
}

} // namespace dmcis
