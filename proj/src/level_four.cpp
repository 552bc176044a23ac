#include "dmcis/level_four.hpp"

#include "dmcis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dmcis {

std::string_view to_string(Decision d)
{
    return d == Decision::warn ? "warn" : "archive_only";
}

double cdc_similarity(const Report& report, std::span<const HistoryRecord> db)
{
    if (report.kind != ReportKind::processed)
        throw KindMismatch("cdc similarity needs a processed report, got "
                           + std::string(to_string(report.kind)));
    double best = 0.0;
    for (const auto& rec : db) {
        if (rec.area != report.origin_area || rec.kind != report.payload.hypothesis)
            continue;
        double closeness = 0.0;
        if (rec.intensity > 0.0)
            closeness = 1.0 - std::min(1.0, std::abs(report.payload.intensity - rec.intensity) / rec.intensity);
        else
            closeness = report.payload.intensity == 0.0 ? 1.0 : 0.0;
        double weight = rec.outcome == Outcome::disaster_confirmed ? 1.0 : 0.5;
        best = std::max(best, closeness * weight);
    }
    return best;
}

WarningDecision cdc_decide(Cdc& cdc, const Report& report, SimTime now)
{
    WarningDecision d;
    d.report = report.id;
    d.area = report.origin_area;
    d.kind = report.payload.hypothesis;
    d.similarity = cdc_similarity(report, cdc.reference_db);
    d.emergency = report.severity == Severity::emergency;
    d.decision = (d.similarity >= cdc.similarity_threshold || d.emergency) ? Decision::warn : Decision::archive_only;
    d.decided_at = now;
    cdc.archive.push_back(report);
    return d;
}

Dissemination dcc_disseminate(const Dcc& dcc, const WarningDecision& decision, SimTime now)
{
    if (decision.decision != Decision::warn)
        throw Error("dcc " + std::to_string(dcc.id) + " asked to disseminate a non-warning decision");
    auto it = dcc.subscribers_per_area.find(decision.area);
    if (it == dcc.subscribers_per_area.end())
        throw UnknownArea("dcc " + std::to_string(dcc.id) + " has no subscriber entry for area " + decision.area);
    Dissemination out;
    out.issued = now;
    if (dcc.sms)
        out.sms_complete = now + dcc.sms_base_latency + static_cast<double>(it->second) / dcc.sms_rate;
    if (dcc.internet_messaging)
        out.internet_complete = now + dcc.sms_base_latency;
    return out;
}

SimTime bypass(ActorId origin, const Report& report, SimTime now, double latency)
{
    if (origin.role != ActorRole::map && origin.role != ActorRole::dpc)
        throw Error("only MAPs and DPCs place emergency calls, not " + origin.str());
    if (report.severity != Severity::emergency)
        throw SeverityTooLow("report " + std::to_string(report.id) + " is "
                             + std::string(to_string(report.severity)) + ", bypass needs emergency");
    return now + latency;
}

Violations validate_cdc_count(int total_dpcs, int cdcs, double dominance_factor)
{
    if (cdcs < 1)
        return {Violation{condition::cdc_required, "scenario has no CDC; at least one is required"}};
    if (static_cast<double>(total_dpcs) <= static_cast<double>(cdcs) * dominance_factor) {
        std::ostringstream msg;
        msg << "sum of DPCs " << total_dpcs << " does not dominate c = " << cdcs << " (needs > " << dominance_factor
            << " x c)";
        return {Violation{condition::dpc_cdc_dominance, msg.str()}};
    }
    return {};
}

} // namespace dmcis
