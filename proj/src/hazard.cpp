#include "dmcis/hazard.hpp"

#include <algorithm>

namespace dmcis {

namespace {

constexpr std::array<std::string_view, kHazardKindCount> kKindNames = {
    "flood", "tsunami", "earthquake", "cyclone", "landslide", "false_spike"};

constexpr std::array<std::string_view, 3> kSeverityNames = {"routine", "urgent", "emergency"};

} // namespace

std::string_view to_string(HazardKind k)
{
    return kKindNames[static_cast<std::size_t>(k)];
}

std::string_view to_string(Severity s)
{
    return kSeverityNames[static_cast<std::size_t>(s)];
}

std::optional<HazardKind> parse_hazard_kind(std::string_view s)
{
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == s)
            return static_cast<HazardKind>(i);
    return std::nullopt;
}

std::optional<Severity> parse_severity(std::string_view s)
{
    for (std::size_t i = 0; i < kSeverityNames.size(); ++i)
        if (kSeverityNames[i] == s)
            return static_cast<Severity>(i);
    return std::nullopt;
}

double HazardEvent::intensity_at(const Position& p, SimTime t) const
{
    if (!active_at(t))
        return 0.0;
    return peak_intensity * std::max(0.0, 1.0 - distance(p, epicenter) / radius);
}

double hazard_value(const HazardField& field, const Position& p, SimTime t, double normal_draw)
{
    double v = 0.0;
    for (const auto& ev : field.events)
        v += ev.intensity_at(p, t);
    v += field.background_noise_sigma * normal_draw;
    return std::max(0.0, v);
}

std::optional<std::size_t> dominant_event(const HazardField& field, const Position& p, SimTime t)
{
    std::optional<std::size_t> best;
    double best_value = 0.0;
    for (std::size_t i = 0; i < field.events.size(); ++i) {
        double v = field.events[i].intensity_at(p, t);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

SeverityTable::SeverityTable()
{
    cuts_.fill(SeverityCuts{1.0, 5.0});
    set(HazardKind::earthquake, SeverityCuts{0.0, 0.0});
    set(HazardKind::landslide, SeverityCuts{0.0, 0.0});
}

Severity severity_of(HazardKind kind, double intensity, const SeverityTable& table)
{
    const auto& c = table.cuts(kind);
    if (intensity >= c.emergency)
        return Severity::emergency;
    if (intensity >= c.urgent)
        return Severity::urgent;
    return Severity::routine;
}

} // namespace dmcis
