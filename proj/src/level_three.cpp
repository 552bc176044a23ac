#include "dmcis/level_three.hpp"

#include "dmcis/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dmcis {

std::string_view to_string(Outcome o)
{
    return o == Outcome::disaster_confirmed ? "disaster_confirmed" : "false_alarm";
}

std::optional<Outcome> parse_outcome(std::string_view s)
{
    if (s == "disaster_confirmed")
        return Outcome::disaster_confirmed;
    if (s == "false_alarm")
        return Outcome::false_alarm;
    return std::nullopt;
}

std::string_view to_string(Disposition d)
{
    switch (d) {
    case Disposition::forward: return "forward";
    case Disposition::reprocess: return "reprocess";
    case Disposition::forward_flagged: return "forward_flagged";
    case Disposition::merged: return "merged";
    }
    return "?";
}

bool history_supports(const Report& report, std::span<const HistoryRecord> history)
{
    const auto& estimates = report.payload.intensity_estimates;
    for (const auto& rec : history) {
        if (rec.area != report.origin_area || rec.kind != report.payload.hypothesis
            || rec.outcome != Outcome::disaster_confirmed)
            continue;
        auto close = [&](double v) { return std::abs(v - rec.intensity) <= 0.25 * rec.intensity; };
        if (close(report.payload.intensity) || std::any_of(estimates.begin(), estimates.end(), close))
            return true;
    }
    return false;
}

double confidence(const Report& report, std::span<const HistoryRecord> history, const AreaStats& stats)
{
    const auto k = static_cast<double>(report.payload.k());
    if (k < 1.0)
        throw Error("confidence of report " + std::to_string(report.id) + " with no reporting sensors");
    if (stats.modalities_deployed < 1 || stats.tau < 1)
        throw Error("confidence needs at least one deployed modality and tau >= 1");
    // Sensors that failed after detecting still count toward the population.
    const double alive = std::max(k, static_cast<double>(stats.alive_in_area));
    const double coverage = k / alive;
    const double agreement = std::min(1.0, static_cast<double>(report.payload.modalities.size())
                                               / static_cast<double>(stats.modalities_deployed));
    const double history_factor = history_supports(report, history) ? 1.0 : 0.8;
    const double normalizer = static_cast<double>(stats.tau) / alive;
    return std::min(1.0, coverage * agreement * history_factor / normalizer);
}

HeldReport* find_matching_held(Dpc& dpc, const Report& report)
{
    for (auto& [id, h] : dpc.held)
        if (h.report.origin_area == report.origin_area
            && h.report.payload.hypothesis == report.payload.hypothesis)
            return &h;
    return nullptr;
}

namespace {

ProcessOutcome finish(Report report, double conf, bool flagged, int retries)
{
    report.kind = ReportKind::processed;
    report.confidence = conf;
    report.low_confidence = flagged;
    ProcessOutcome out;
    out.disposition = flagged ? Disposition::forward_flagged : Disposition::forward;
    out.confidence = conf;
    out.retries = retries;
    out.forward = std::move(report);
    return out;
}

} // namespace

ProcessOutcome dpc_process(Dpc& dpc, Report report, SimTime now, const AreaStats& stats)
{
    if (report.kind == ReportKind::manual_record) {
        ProcessOutcome out;
        out.forward = std::move(report);
        return out;
    }
    if (report.kind != ReportKind::partially_processed)
        throw KindMismatch("dpc " + std::to_string(dpc.id) + " cannot process a "
                           + std::string(to_string(report.kind)) + " report");

    const bool emergency = report.severity == Severity::emergency;
    if (!emergency) {
        if (auto* h = find_matching_held(dpc, report)) {
            merge_into(h->report, report);
            ProcessOutcome out;
            out.disposition = Disposition::merged;
            out.merged_into = h->report.id;
            return out;
        }
    }

    const double conf = confidence(report, dpc.history, stats);
    const bool pass = conf >= dpc.confidence_threshold;
    if (pass || emergency || dpc.max_reprocess == 0)
        return finish(std::move(report), conf, !pass, 0);

    ProcessOutcome out;
    out.disposition = Disposition::reprocess;
    out.confidence = conf;
    const ReportId id = report.id;
    dpc.held.emplace(id, HeldReport{std::move(report), 0, now + dpc.reprocess_wait});
    return out;
}

ProcessOutcome dpc_retry(Dpc& dpc, ReportId id, SimTime now, const AreaStats& stats)
{
    auto it = dpc.held.find(id);
    if (it == dpc.held.end())
        throw Error("dpc " + std::to_string(dpc.id) + " holds no report " + std::to_string(id));
    HeldReport& h = it->second;
    ++h.retries;
    const double conf = confidence(h.report, dpc.history, stats);
    const bool pass = conf >= dpc.confidence_threshold;
    if (pass || h.retries >= dpc.max_reprocess) {
        Report r = std::move(h.report);
        int retries = h.retries;
        dpc.held.erase(it);
        return finish(std::move(r), conf, !pass, retries);
    }
    h.deadline = now + dpc.reprocess_wait;
    ProcessOutcome out;
    out.disposition = Disposition::reprocess;
    out.confidence = conf;
    out.retries = h.retries;
    return out;
}

std::optional<ReportId> dpc_merge_summary(Dpc& dpc, const Report& summary)
{
    auto* h = find_matching_held(dpc, summary);
    if (!h || h->report.id == summary.id)
        return std::nullopt;
    merge_into(h->report, summary);
    return h->report.id;
}

std::vector<PeerMessage> peer_sync(const Dpc& dpc, const Report& held, SimTime now, double latency)
{
    std::vector<PeerMessage> out;
    for (int peer : dpc.peers) {
        if (peer == dpc.id)
            continue;
        out.push_back(PeerMessage{peer, now + latency, held});
    }
    return out;
}

SimTime dpc_forward(const Dpc& dpc, Report& processed, SimTime now, double latency)
{
    if (processed.kind != ReportKind::processed && processed.kind != ReportKind::manual_record)
        throw KindMismatch("dpc " + std::to_string(dpc.id) + " forwards only processed reports, got "
                           + std::string(to_string(processed.kind)));
    processed.add_hop(ActorId{ActorRole::dpc, dpc.id}, now);
    return now + latency;
}

} // namespace dmcis
