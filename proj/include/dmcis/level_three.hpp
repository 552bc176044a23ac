#pragma once

// Level three: data processing centers. Incoming summaries are scored, held
// and merged with corroborating evidence while below the confidence
// threshold, and forwarded to the CDC once ready or out of retries.

#include "dmcis/buffer.hpp"
#include "dmcis/report.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dmcis {

enum class Outcome { disaster_confirmed, false_alarm };

std::string_view to_string(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view s);

struct HistoryRecord {
    std::string area;
    HazardKind kind = HazardKind::flood;
    double intensity = 0.0;
    int year_tag = 0;
    Outcome outcome = Outcome::disaster_confirmed;

    bool operator==(const HistoryRecord&) const = default;
};

// Denominators for the confidence score, taken from the report's area.
struct AreaStats {
    int alive_in_area = 1;
    int modalities_deployed = 1;
    int tau = 1;
};

// True when a confirmed record of the same area and kind lies within 25% of
// any of the report's intensity estimates.
bool history_supports(const Report& report, std::span<const HistoryRecord> history);

// coverage (k / alive) x modality agreement x history factor (1.0 or 0.8),
// normalized by tau / alive and clamped to 1.
double confidence(const Report& report, std::span<const HistoryRecord> history, const AreaStats& stats);

enum class Disposition { forward, reprocess, forward_flagged, merged };

std::string_view to_string(Disposition d);

struct HeldReport {
    Report report;
    int retries = 0;
    SimTime deadline = 0.0;
};

struct Dpc {
    int id = 0;
    std::string area;
    Position position;
    double confidence_threshold = 0.7;
    int max_reprocess = 2;
    double reprocess_wait = 60.0;
    double processing_delay = 1.0;
    std::vector<HistoryRecord> history;
    std::set<int> peers;
    int cdc = 1;

    ReportBuffer inbox;
    std::map<ReportId, HeldReport> held;
};

struct ProcessOutcome {
    Disposition disposition = Disposition::forward;
    std::optional<double> confidence;
    std::optional<ReportId> merged_into;
    std::optional<Report> forward; // set for forward / forward_flagged
    int retries = 0;
};

// Held report of the same area and hazard hypothesis, if any.
HeldReport* find_matching_held(Dpc& dpc, const Report& report);

// First pass over a freshly received report. Manual records forward as-is.
// Non-emergency reports matching a held one merge into it. Emergency reports
// skip the gate and forward immediately, flagged when below threshold.
ProcessOutcome dpc_process(Dpc& dpc, Report report, SimTime now, const AreaStats& stats);

// Reprocess deadline for a held report.
ProcessOutcome dpc_retry(Dpc& dpc, ReportId id, SimTime now, const AreaStats& stats);

// Peer summary arrival; merges into a matching held report when present.
std::optional<ReportId> dpc_merge_summary(Dpc& dpc, const Report& summary);

struct PeerMessage {
    int peer = 0;
    SimTime arrive_at = 0.0;
    Report summary;
};

// One summary per peer, delivered after the fixed inter-DPC latency.
std::vector<PeerMessage> peer_sync(const Dpc& dpc, const Report& held, SimTime now, double latency);

// Appends the DPC hop and returns the CDC arrival time.
SimTime dpc_forward(const Dpc& dpc, Report& processed, SimTime now, double latency);

} // namespace dmcis
