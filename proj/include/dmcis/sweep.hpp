#pragma once

// Parameter sweeps: one simulation per (value, seed) cell. Cells are
// independent, so they can run concurrently; each cell's seed depends only on
// the master seed, the value itself and the seed index.

#include "dmcis/contact_kernel.hpp"
#include "dmcis/errors.hpp"
#include "dmcis/metrics.hpp"
#include "dmcis/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace dmcis {

struct SweepSpec {
    std::string path;                 // dotted, e.g. "sdccs[0].tau" or "maps.count"
    std::vector<nlohmann::json> values;
    int seeds = 1;
    std::string out;                  // CSV destination
};

// Accepts JSON literals ("3", "true", "[1,2]") and falls back to a string.
nlohmann::json parse_sweep_value(const std::string& text);

// Comma-separated list; "a..b" expands to the integers a through b.
std::vector<nlohmann::json> parse_sweep_values(const std::string& text);

// Thrown when the path does not resolve in the scenario document.
class UnresolvedPath : public Error {
public:
    using Error::Error;
};

struct SweepCell {
    nlohmann::json value;
    int seed_index = 0;
    std::uint64_t seed = 0;
    MetricsReport metrics;
};

struct SweepAggregate {
    nlohmann::json value;
    int runs = 0;
    std::optional<double> mean_warning_latency;   // pooled over seeds
    std::optional<double> p95_warning_latency;
    std::optional<double> mean_delivery_latency;
    std::optional<double> p95_delivery_latency;
    double false_warning_rate = 0.0;              // mean over seeds
    double delivery_ratio = 0.0;                  // mean over seeds
    double warnings = 0.0;                        // mean over seeds
    double false_warnings = 0.0;                  // mean over seeds
};

struct SweepResult {
    std::vector<SweepCell> cells; // value order, then seed index
    std::vector<SweepAggregate> aggregates;
};

std::uint64_t sweep_cell_seed(std::uint64_t master, const nlohmann::json& value, int seed_index);

// Scenario with `value` written at `path`. Throws UnresolvedPath, or
// ParseError when the value has the wrong type.
Scenario apply_sweep_value(const Scenario& base, const std::string& path, const nlohmann::json& value);

// Every cell scenario, validated up front. Throws UnresolvedPath / ParseError;
// returns the first cell's violations when some cell is not runnable.
Violations check_sweep(const Scenario& base, const SweepSpec& spec);

SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, KernelMode mode = KernelMode::parallel);

std::string sweep_csv(const SweepSpec& spec, const SweepResult& r);

} // namespace dmcis
