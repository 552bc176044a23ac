#pragma once

#include "dmcis/geometry.hpp"
#include "dmcis/report.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dmcis {

enum class TraceKind {
    detection,
    report_emitted,
    contact_open,
    contact_close,
    transfer_complete,
    report_dropped,
    dpc_disposition,
    cdc_decision,
    warning_issued,
    dissemination_complete,
    emergency_call,
    sensor_failure,
};

std::string_view to_string(TraceKind k);
std::optional<TraceKind> parse_trace_kind(std::string_view s);

struct TraceEvent {
    SimTime t = 0.0;
    TraceKind kind = TraceKind::detection;
    std::string actor;
    std::optional<ReportId> report;
    nlohmann::ordered_json detail = nlohmann::ordered_json::object();

    bool operator==(const TraceEvent&) const = default;
};

// Append-only, time-ordered event log of one run.
class Trace {
public:
    // Throws Error when `ev.t` precedes the last appended event.
    void append(TraceEvent ev);

    const std::vector<TraceEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }

private:
    std::vector<TraceEvent> events_;
};

// One JSON object per line with keys t, kind, actor, report, detail in that
// order. Throws IoError on stream failure and Error on unordered input.
void emit_trace(const std::vector<TraceEvent>& events, std::ostream& out);
void write_trace_file(const std::vector<TraceEvent>& events, const std::string& path);

std::string trace_line(const TraceEvent& ev);

std::vector<TraceEvent> read_trace(std::istream& in);
std::vector<TraceEvent> read_trace_file(const std::string& path);

} // namespace dmcis
