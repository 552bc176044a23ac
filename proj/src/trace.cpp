#include "dmcis/trace.hpp"

#include "dmcis/errors.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

namespace dmcis {

namespace {

constexpr std::array<std::string_view, 12> kTraceKindNames = {
    "detection",       "report_emitted",  "contact_open", "contact_close",          "transfer_complete",
    "report_dropped",  "dpc_disposition", "cdc_decision", "warning_issued",         "dissemination_complete",
    "emergency_call",  "sensor_failure"};

} // namespace

std::string_view to_string(TraceKind k)
{
    return kTraceKindNames[static_cast<std::size_t>(k)];
}

std::optional<TraceKind> parse_trace_kind(std::string_view s)
{
    for (std::size_t i = 0; i < kTraceKindNames.size(); ++i)
        if (kTraceKindNames[i] == s)
            return static_cast<TraceKind>(i);
    return std::nullopt;
}

void Trace::append(TraceEvent ev)
{
    if (!events_.empty() && ev.t < events_.back().t)
        throw Error("trace event " + std::string(to_string(ev.kind)) + " at t=" + std::to_string(ev.t)
                    + " precedes t=" + std::to_string(events_.back().t));
    events_.push_back(std::move(ev));
}

std::string trace_line(const TraceEvent& ev)
{
    nlohmann::ordered_json j;
    j["t"] = ev.t;
    j["kind"] = std::string(to_string(ev.kind));
    j["actor"] = ev.actor;
    if (ev.report)
        j["report"] = *ev.report;
    else
        j["report"] = nullptr;
    j["detail"] = ev.detail;
    return j.dump();
}

void emit_trace(const std::vector<TraceEvent>& events, std::ostream& out)
{
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i > 0 && events[i].t < events[i - 1].t)
            throw Error("emit_trace: events out of time order at line " + std::to_string(i + 1));
        out << trace_line(events[i]) << '\n';
    }
    out.flush();
    if (!out)
        throw IoError("failed writing trace");
}

void write_trace_file(const std::vector<TraceEvent>& events, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open trace file " + path);
    emit_trace(events, out);
}

std::vector<TraceEvent> read_trace(std::istream& in)
{
    std::vector<TraceEvent> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        try {
            auto j = nlohmann::ordered_json::parse(line);
            TraceEvent ev;
            ev.t = j.at("t").get<double>();
            auto kind = parse_trace_kind(j.at("kind").get<std::string>());
            if (!kind)
                throw ParseError("unknown trace kind", "kind", lineno);
            ev.kind = *kind;
            ev.actor = j.at("actor").get<std::string>();
            if (!j.at("report").is_null())
                ev.report = j.at("report").get<ReportId>();
            ev.detail = j.at("detail");
            out.push_back(std::move(ev));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad trace record: ") + e.what(), "", lineno);
        }
    }
    return out;
}

std::vector<TraceEvent> read_trace_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open trace file " + path);
    return read_trace(in);
}

} // namespace dmcis
