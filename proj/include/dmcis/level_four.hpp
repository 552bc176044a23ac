#pragma once

// Level four: the central data center matches processed reports against its
// reference database, the decision and command center disseminates warnings,
// and emergency reports may call services directly from a MAP or DPC.

#include "dmcis/level_three.hpp"
#include "dmcis/report.hpp"
#include "dmcis/validation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dmcis {

struct Cdc {
    int id = 1;
    std::vector<HistoryRecord> reference_db;
    double similarity_threshold = 0.6;
    std::vector<Report> archive; // append-only
};

struct Dcc {
    int id = 1;
    std::map<std::string, std::uint64_t> subscribers_per_area;
    double sms_rate = 100.0;        // messages per second
    double sms_base_latency = 1.0;  // seconds
    bool sms = true;
    bool internet_messaging = false;
};

enum class Decision { warn, archive_only };

std::string_view to_string(Decision d);

struct WarningDecision {
    ReportId report = 0;
    std::string area;
    HazardKind kind = HazardKind::flood;
    double similarity = 0.0;
    Decision decision = Decision::archive_only;
    bool emergency = false;
    SimTime decided_at = 0.0;
};

// Best match over same-area, same-kind records:
// (1 - min(1, |x - r| / r)) x (1 for confirmed, 0.5 for false alarms).
double cdc_similarity(const Report& report, std::span<const HistoryRecord> db);

// Archives the report and warns when similarity >= sigma or the report is an
// emergency.
WarningDecision cdc_decide(Cdc& cdc, const Report& report, SimTime now);

struct Dissemination {
    SimTime issued = 0.0;
    std::optional<SimTime> sms_complete;      // now + L0 + M / rho
    std::optional<SimTime> internet_complete; // now + L0
};

Dissemination dcc_disseminate(const Dcc& dcc, const WarningDecision& decision, SimTime now);

// Time of the direct emergency call placed by a MAP or DPC.
SimTime bypass(ActorId origin, const Report& report, SimTime now, double latency);

// Sum of DPCs over all areas must exceed c x dominance_factor; c >= 1.
Violations validate_cdc_count(int total_dpcs, int cdcs, double dominance_factor = 4.0);

} // namespace dmcis
