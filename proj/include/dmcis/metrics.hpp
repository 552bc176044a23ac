#pragma once

// Quantitative outcomes derived from a finished trace. Everything here is a
// pure function of (trace, scenario); no re-simulation is needed because
// ground-truth event ids ride along in the trace details.

#include "dmcis/scenario.hpp"
#include "dmcis/trace.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace dmcis {

struct EventMetrics {
    std::string id;
    HazardKind kind = HazardKind::flood;
    bool warnable = true;
    SimTime onset = 0.0;
    std::optional<double> warning_latency; // onset -> first attributable warning
    std::optional<double> bypass_latency;  // onset -> first attributable emergency call
    std::size_t emitted = 0;               // reports carrying this event
    std::size_t delivered = 0;             // ... of which reached a DPC
    std::size_t warnings = 0;
    bool missed = false;                   // warnable and never warned
    bool falsely_warned = false;           // not warnable but warned

    bool operator==(const EventMetrics&) const = default;
};

struct MetricsReport {
    std::vector<EventMetrics> events; // scenario order

    std::size_t emitted = 0;   // every report_emitted, manual records included
    std::size_t delivered = 0; // reached a DPC inbox
    std::size_t dropped = 0;
    std::size_t buffered = 0;  // emitted - delivered - dropped
    double delivery_ratio = 1.0; // delivered / emitted; 1 when nothing was emitted

    std::size_t warnings = 0;
    std::size_t false_warnings = 0; // warnings whose report carries no warnable event
    std::size_t missed = 0;
    // Share of non-warnable events that drew a warning; 0 with no such events.
    double false_warning_rate = 0.0;
    std::size_t emergency_calls = 0;

    std::optional<double> mean_warning_latency;
    std::optional<double> p95_warning_latency;
    std::optional<double> mean_delivery_latency; // SDCC emission -> DPC arrival
    std::optional<double> p95_delivery_latency;

    std::uint64_t max_map_buffer_bytes = 0;
    std::map<std::string, std::uint64_t> max_buffer_by_map; // "map:<id>" -> bytes

    // Raw samples behind the means, kept for pooling across sweep seeds.
    std::vector<double> warning_latencies;
    std::vector<double> delivery_latencies;

    bool operator==(const MetricsReport&) const = default;
};

MetricsReport compute_metrics(std::span<const TraceEvent> trace, const Scenario& s);

// Nearest-rank percentile, p in (0, 100]. Empty input gives nullopt.
std::optional<double> percentile(std::vector<double> values, double p);

nlohmann::ordered_json metrics_to_json(const MetricsReport& m);
std::string metrics_json(const MetricsReport& m);

// One row per hazard event, then one summary row (scope "run").
std::string metrics_csv_header();
std::string metrics_csv(const MetricsReport& m);

// Writes `path` (JSON) and the same stem with a .csv extension.
void write_metrics_files(const MetricsReport& m, const std::string& json_path);

// Shared number formatting for every CSV the tools write.
std::string csv_number(double v);
std::string csv_number(const std::optional<double>& v);

} // namespace dmcis
