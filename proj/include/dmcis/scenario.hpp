#pragma once

// Scenario documents: a single versioned JSON object describing the region,
// every actor, hazard events and all tunables. See docs/FORMATS.md for the
// schema and the table of defaults.

#include "dmcis/geometry.hpp"
#include "dmcis/hazard.hpp"
#include "dmcis/level_one.hpp"
#include "dmcis/level_three.hpp"
#include "dmcis/level_two.hpp"
#include "dmcis/validation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace dmcis {

inline constexpr const char* kScenarioSchema = "dmcis-scenario/1";

struct AreaSpec {
    std::string id;
    RadioProfile radio = default_profile(RadioStandard::b);
    std::uint64_t subscribers = 0;

    bool operator==(const AreaSpec&) const = default;
};

struct SensorSpec {
    int id = 0;
    Position position;
    Modality modality = Modality::acoustic;
    double threshold = 1.0;
    double period = 10.0;
    int sdcc = 0;

    bool operator==(const SensorSpec&) const = default;
};

struct SensorFailureSpec {
    int sensor = 0;
    SimTime at = 0.0;

    bool operator==(const SensorFailureSpec&) const = default;
};

struct ManualRecordSpec {
    SimTime at = 0.0;
    std::string label = "manual";
    std::uint64_t size_bytes = 1024;

    bool operator==(const ManualRecordSpec&) const = default;
};

struct SdccSpec {
    int id = 0;
    std::string area;
    Position position;
    int tau = 1;
    double window = 60.0;
    double refractory = 300.0;
    double eval_period = 10.0;
    std::uint64_t report_bytes = 4096;
    HazardKind default_kind = HazardKind::flood;
    std::vector<ManualRecordSpec> manual_records;

    bool operator==(const SdccSpec&) const = default;
};

struct MapSpec {
    int id = 0;
    std::string area;
    std::vector<Position> route;
    double speed = 10.0;
    double phase_offset = 0.0;
    std::uint64_t capacity = 10'000'000;
    RadioProfile radio = default_profile(RadioStandard::g);
    double jitter = 0.0; // uniform waypoint displacement per axis, meters

    bool operator==(const MapSpec&) const = default;
};

// N identical MAPs on one route, evenly staggered in phase; ids 1..N.
struct MapFleetSpec {
    int count = 1;
    MapSpec prototype;

    bool operator==(const MapFleetSpec&) const = default;
};

struct DpcSpec {
    int id = 0;
    std::string area;
    Position position;
    double confidence_threshold = 0.7;
    int max_reprocess = 2;
    double reprocess_wait = 60.0;
    double processing_delay = 1.0;
    std::vector<HistoryRecord> history;
    std::vector<int> peers;
    int cdc = 1;

    bool operator==(const DpcSpec&) const = default;
};

struct CdcSpec {
    int id = 1;
    std::vector<HistoryRecord> reference_db;
    double similarity_threshold = 0.6;

    bool operator==(const CdcSpec&) const = default;
};

struct DccSpec {
    int id = 1;
    double sms_rate = 100.0;
    double sms_base_latency = 1.0;
    bool sms = true;
    bool internet_messaging = false;

    bool operator==(const DccSpec&) const = default;
};

struct TimingSpec {
    double contact_tick = 1.0;
    double inter_dpc_latency = 1.0;
    double dpc_cdc_latency = 2.0;
    double cdc_dcc_latency = 1.0;
    double emergency_latency = 1.0;

    bool operator==(const TimingSpec&) const = default;
};

struct ClusteringSpec {
    int k_per_cluster = 8;
    double hop_delay = 0.05;

    bool operator==(const ClusteringSpec&) const = default;
};

struct Scenario {
    std::uint64_t seed = 1;
    double duration = 0.0;
    double delta = 0.0;
    Region region;
    std::vector<AreaSpec> areas;
    std::vector<SensorSpec> sensors;
    std::vector<SensorFailureSpec> sensor_failures;
    std::vector<SdccSpec> sdccs;
    std::vector<MapSpec> maps;
    std::optional<MapFleetSpec> fleet; // exclusive with `maps`
    std::vector<DpcSpec> dpcs;
    std::vector<CdcSpec> cdcs;
    DccSpec dcc;
    std::vector<std::pair<int, int>> pairs; // (sdcc, dpc)
    HazardField hazard;
    SeverityTable severity;
    KindMap kind_map;
    TimingSpec timing;
    ClusteringSpec clustering;
    double cdc_dominance_factor = 4.0;

    bool operator==(const Scenario&) const = default;

    const AreaSpec* area(std::string_view id) const;
    const SdccSpec* sdcc(int id) const;
    const DpcSpec* dpc(int id) const;
};

// Explicit MAP list, expanding a fleet and applying seeded waypoint jitter.
std::vector<MapSpec> expanded_maps(const Scenario& s);

// Throws ParseError / MissingField / UnknownKey.
Scenario parse_scenario(std::string_view text);
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

// Fully materialized document (every default written out).
nlohmann::ordered_json scenario_to_json(const Scenario& s);
std::string emit_scenario(const Scenario& s);

// Empty result means the scenario is runnable.
Violations validate_scenario(const Scenario& s);

// Resolves "a.b[2].c" style paths to JSON pointers ("/a/b/2/c"); pointers pass through.
nlohmann::json::json_pointer scenario_path(std::string_view dotted);

} // namespace dmcis
