#pragma once

// Level one: fixed sensor fields, distance-partitioned clusters, and the
// SDCC sink that emits a report once tau distinct sensors detect within W.

#include "dmcis/buffer.hpp"
#include "dmcis/hazard.hpp"
#include "dmcis/report.hpp"
#include "dmcis/rng.hpp"

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dmcis {

struct SensorNode {
    int id = 0;
    Position position;
    Modality modality = Modality::acoustic;
    double detect_threshold = 1.0;
    double sample_period = 10.0;
    bool alive = true;
    int cluster = 0;
    int home_sdcc = 0;
};

using SensorMap = std::map<int, SensorNode>;

struct Cluster {
    int id = 0;
    int sdcc = 0;
    int head = 0;
    std::vector<int> members; // ascending distance to the SDCC, then id
    double hop_delay = 0.0;
};

struct Detection {
    int sensor = 0;
    SimTime at = 0.0; // arrival time at the SDCC
    double value = 0.0;
    Modality modality = Modality::acoustic;
    std::optional<std::string> event; // dominant hazard event, ground truth only
};

// Maps a detecting modality to the hazard it most likely indicates.
using KindMap = std::map<Modality, HazardKind>;

class Sdcc {
public:
    int id = 0;
    std::string area;
    Position position;
    int tau = 1;
    double window = 60.0;
    double refractory = 300.0;
    std::uint64_t report_bytes = 4096;
    HazardKind default_kind = HazardKind::flood;

    std::deque<Detection> detection_buffer;
    ReportBuffer outbox;
    std::vector<Report> manual_records;
    std::optional<SimTime> last_emit;

    void record(Detection d) { detection_buffer.push_back(std::move(d)); }
};

// Groups sensors by home SDCC and chunks each group into clusters of at most
// `k_per_cluster`, ordered by distance to the SDCC. Cluster ids are assigned
// 1.. in SDCC order. Writes the cluster id back into each sensor.
std::vector<Cluster> form_clusters(SensorMap& sensors, const std::map<int, Sdcc>& sdccs, int k_per_cluster,
                                   double hop_delay);

// Removes `failed`; the nearest remaining member becomes head if needed.
// Returns nullopt once the cluster has no members left.
std::optional<Cluster> reelect_head(Cluster cluster, int failed, const SensorMap& sensors,
                                    const Position& sdcc_position);

// One reading. The detection carries its SDCC arrival time t + 2 * hop_delay.
// Draws exactly one normal variate from `rng` per call.
std::optional<Detection> sample(const SensorNode& sensor, const HazardField& field, SimTime t, Rng& rng,
                                double hop_delay);

// Number of distinct alive sensors with a detection in (now - W, now].
std::size_t distinct_detectors(const Sdcc& sdcc, SimTime now, const SensorMap& sensors);

struct AggregationContext {
    const SensorMap& sensors;
    const KindMap& kind_map;
    const SeverityTable& severity;
};

// Window-close evaluation. Emits a partially processed report when at least
// tau distinct alive sensors detected in (now - W, now] and the refractory
// period of the previous report has elapsed. Prunes expired detections.
std::optional<Report> sdcc_aggregate(Sdcc& sdcc, SimTime now, const AggregationContext& ctx, ReportId id);

// Manual records (demographic, resources, ...) ship with the next contact.
void sdcc_insert_manual(Sdcc& sdcc, Report record);

} // namespace dmcis
