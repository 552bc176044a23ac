#pragma once

#include "dmcis/geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dmcis {

enum class HazardKind { flood, tsunami, earthquake, cyclone, landslide, false_spike };
inline constexpr std::size_t kHazardKindCount = 6;

enum class Severity { routine, urgent, emergency };

std::string_view to_string(HazardKind k);
std::string_view to_string(Severity s);
std::optional<HazardKind> parse_hazard_kind(std::string_view s);
std::optional<Severity> parse_severity(std::string_view s);

struct HazardEvent {
    std::string id;
    HazardKind kind = HazardKind::flood;
    Position epicenter;
    double radius = 1.0;
    SimTime onset = 0.0;
    double duration = 1.0;
    double peak_intensity = 0.0;
    Severity severity = Severity::routine;
    bool ground_truth_warnable = true;

    bool active_at(SimTime t) const { return onset <= t && t < onset + duration; }
    // Linear radial cone; zero outside the radius or the active window.
    double intensity_at(const Position& p, SimTime t) const;

    bool operator==(const HazardEvent&) const = default;
};

struct HazardField {
    std::vector<HazardEvent> events;
    double background_noise_sigma = 0.0;

    bool operator==(const HazardField&) const = default;
};

// Sum of active cones plus sigma * normal_draw, clamped at zero.
// `normal_draw` is a standard normal variate supplied by the caller's stream.
double hazard_value(const HazardField& field, const Position& p, SimTime t, double normal_draw);

// Index of the event contributing the most intensity at (p, t), if any does.
std::optional<std::size_t> dominant_event(const HazardField& field, const Position& p, SimTime t);

// Per-kind severity cut points: intensity >= urgent -> urgent,
// intensity >= emergency -> emergency.
struct SeverityCuts {
    double urgent = 1.0;
    double emergency = 5.0;

    bool operator==(const SeverityCuts&) const = default;
};

class SeverityTable {
public:
    // flood/tsunami/cyclone/false_spike use (1, 5); earthquake and landslide
    // are emergencies at any detected intensity.
    SeverityTable();

    const SeverityCuts& cuts(HazardKind k) const { return cuts_[static_cast<std::size_t>(k)]; }
    void set(HazardKind k, SeverityCuts c) { cuts_[static_cast<std::size_t>(k)] = c; }

    bool operator==(const SeverityTable&) const = default;

private:
    std::array<SeverityCuts, kHazardKindCount> cuts_;
};

Severity severity_of(HazardKind kind, double intensity, const SeverityTable& table = SeverityTable{});

} // namespace dmcis
