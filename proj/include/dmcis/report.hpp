#pragma once

#include "dmcis/geometry.hpp"
#include "dmcis/hazard.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dmcis {

enum class Modality { acoustic, magnetic, seismic, thermal, infrared, visual };
inline constexpr std::size_t kModalityCount = 6;

std::string_view to_string(Modality m);
std::optional<Modality> parse_modality(std::string_view s);

enum class ActorRole { sensor, sdcc, map, dpc, cdc, dcc };

// Typed actor reference, printed as "role:id" (e.g. "map:3").
struct ActorId {
    ActorRole role = ActorRole::sensor;
    int id = 0;

    std::string str() const;
    auto operator<=>(const ActorId&) const = default;
};

std::optional<ActorId> parse_actor(std::string_view s);

enum class ReportKind { raw, partially_processed, processed, manual_record, warning_request, emergency_call };

std::string_view to_string(ReportKind k);

using ReportId = std::uint64_t;

// Summary carried by aggregated reports.
struct Payload {
    std::set<int> sensor_ids;       // distinct reporting sensors; k = size()
    std::set<Modality> modalities;
    double intensity = 0.0;         // max observed
    // Every pre-merge intensity estimate; history matching accepts any of them.
    std::vector<double> intensity_estimates;
    Position epicenter;             // centroid of reporting sensors
    HazardKind hypothesis = HazardKind::flood;

    std::size_t k() const { return sensor_ids.size(); }
};

struct Hop {
    ActorId actor;
    SimTime at = 0.0;
};

struct Report {
    ReportId id = 0;
    ReportKind kind = ReportKind::raw;
    std::string origin_area;
    int origin_sdcc = 0;
    SimTime created_at = 0.0;
    std::uint64_t size_bytes = 1;
    Severity severity = Severity::routine;
    Payload payload;
    std::vector<Hop> provenance;
    std::optional<double> confidence;
    bool low_confidence = false;
    // Ground-truth hazard event ids behind the detections; metrics only.
    std::set<std::string> truth_events;
    // Free-form label for manual records (e.g. "demographic").
    std::string label;

    void add_hop(ActorId actor, SimTime at);
};

// Union of sensors and modalities, max intensity, count-weighted centroid,
// max severity. `into` keeps its id and kind.
void merge_into(Report& into, const Report& from);

} // namespace dmcis
