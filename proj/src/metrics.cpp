#include "dmcis/metrics.hpp"

#include "dmcis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace dmcis {

using nlohmann::ordered_json;

namespace {

std::optional<double> mean_of(const std::vector<double>& v)
{
    if (v.empty())
        return std::nullopt;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

ordered_json opt(const std::optional<double>& v)
{
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

bool starts_with(const std::string& s, std::string_view prefix)
{
    return s.rfind(prefix, 0) == 0;
}

} // namespace

std::optional<double> percentile(std::vector<double> values, double p)
{
    if (values.empty())
        return std::nullopt;
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return values[rank - 1];
}

MetricsReport compute_metrics(std::span<const TraceEvent> trace, const Scenario& s)
{
    MetricsReport m;
    std::map<std::string, std::size_t> index;
    for (const auto& ev : s.hazard.events) {
        index[ev.id] = m.events.size();
        EventMetrics em;
        em.id = ev.id;
        em.kind = ev.kind;
        em.warnable = ev.ground_truth_warnable;
        em.onset = ev.onset;
        m.events.push_back(em);
    }

    std::map<ReportId, std::set<std::string>> truth;
    std::map<ReportId, SimTime> emitted_at;
    std::set<ReportId> delivered;
    auto& delivery_latencies = m.delivery_latencies;
    auto& warning_latencies = m.warning_latencies;

    auto truth_of = [&](ReportId id) -> const std::set<std::string>& {
        return truth[id];
    };

    for (const auto& ev : trace) {
        switch (ev.kind) {
        case TraceKind::report_emitted: {
            if (!ev.report)
                break;
            ++m.emitted;
            emitted_at[*ev.report] = ev.t;
            auto& set = truth[*ev.report];
            if (ev.detail.contains("events"))
                for (const auto& e : ev.detail["events"])
                    set.insert(e.get<std::string>());
            for (const auto& e : set)
                if (auto it = index.find(e); it != index.end())
                    ++m.events[it->second].emitted;
            break;
        }
        case TraceKind::transfer_complete: {
            const auto to = ev.detail.value("to", std::string{});
            if (starts_with(to, "map:")) {
                const auto occ = ev.detail.value("dest_occupancy", std::uint64_t{0});
                m.max_map_buffer_bytes = std::max(m.max_map_buffer_bytes, occ);
                auto& slot = m.max_buffer_by_map[to];
                slot = std::max(slot, occ);
            } else if (starts_with(to, "dpc:") && ev.report && !delivered.contains(*ev.report)) {
                delivered.insert(*ev.report);
                ++m.delivered;
                if (auto it = emitted_at.find(*ev.report); it != emitted_at.end())
                    delivery_latencies.push_back(ev.t - it->second);
                for (const auto& e : truth_of(*ev.report))
                    if (auto it = index.find(e); it != index.end())
                        ++m.events[it->second].delivered;
            }
            break;
        }
        case TraceKind::report_dropped:
            ++m.dropped;
            break;
        case TraceKind::dpc_disposition:
            if (ev.detail.contains("into") && ev.detail.contains("from")) {
                const auto into = ev.detail["into"].get<ReportId>();
                const auto from = ev.detail["from"].get<ReportId>();
                const auto src = truth[from];
                truth[into].insert(src.begin(), src.end());
            }
            break;
        case TraceKind::warning_issued: {
            if (!ev.report)
                break;
            ++m.warnings;
            bool any_warnable = false;
            for (const auto& e : truth_of(*ev.report)) {
                auto it = index.find(e);
                if (it == index.end())
                    continue;
                auto& em = m.events[it->second];
                ++em.warnings;
                if (em.warnable) {
                    any_warnable = true;
                    if (!em.warning_latency)
                        em.warning_latency = ev.t - em.onset;
                }
            }
            if (!any_warnable)
                ++m.false_warnings;
            break;
        }
        case TraceKind::emergency_call:
            ++m.emergency_calls;
            if (ev.report)
                for (const auto& e : truth_of(*ev.report))
                    if (auto it = index.find(e); it != index.end() && !m.events[it->second].bypass_latency)
                        m.events[it->second].bypass_latency = ev.t - m.events[it->second].onset;
            break;
        default:
            break;
        }
    }

    std::size_t non_warnable = 0;
    std::size_t non_warnable_warned = 0;
    for (auto& em : m.events) {
        if (em.warnable) {
            em.missed = !em.warning_latency.has_value();
            if (em.missed)
                ++m.missed;
            else
                warning_latencies.push_back(*em.warning_latency);
        } else {
            ++non_warnable;
            em.falsely_warned = em.warnings > 0;
            if (em.falsely_warned)
                ++non_warnable_warned;
        }
    }
    if (non_warnable > 0)
        m.false_warning_rate = static_cast<double>(non_warnable_warned) / static_cast<double>(non_warnable);

    m.buffered = m.emitted - std::min(m.emitted, m.delivered + m.dropped);
    if (m.emitted > 0)
        m.delivery_ratio = static_cast<double>(m.delivered) / static_cast<double>(m.emitted);
    m.mean_warning_latency = mean_of(warning_latencies);
    m.p95_warning_latency = percentile(warning_latencies, 95.0);
    m.mean_delivery_latency = mean_of(delivery_latencies);
    m.p95_delivery_latency = percentile(delivery_latencies, 95.0);
    return m;
}

ordered_json metrics_to_json(const MetricsReport& m)
{
    ordered_json j;
    ordered_json run;
    run["emitted"] = m.emitted;
    run["delivered"] = m.delivered;
    run["dropped"] = m.dropped;
    run["buffered"] = m.buffered;
    run["delivery_ratio"] = m.delivery_ratio;
    run["warnings"] = m.warnings;
    run["false_warnings"] = m.false_warnings;
    run["missed"] = m.missed;
    run["false_warning_rate"] = m.false_warning_rate;
    run["emergency_calls"] = m.emergency_calls;
    run["mean_warning_latency"] = opt(m.mean_warning_latency);
    run["p95_warning_latency"] = opt(m.p95_warning_latency);
    run["mean_delivery_latency"] = opt(m.mean_delivery_latency);
    run["p95_delivery_latency"] = opt(m.p95_delivery_latency);
    run["max_map_buffer_bytes"] = m.max_map_buffer_bytes;
    ordered_json per_map = ordered_json::object();
    for (const auto& [k, v] : m.max_buffer_by_map)
        per_map[k] = v;
    run["max_buffer_by_map"] = per_map;
    j["run"] = run;

    ordered_json events = ordered_json::array();
    for (const auto& e : m.events) {
        ordered_json x;
        x["id"] = e.id;
        x["kind"] = std::string(to_string(e.kind));
        x["warnable"] = e.warnable;
        x["onset"] = e.onset;
        x["warning_latency"] = opt(e.warning_latency);
        x["bypass_latency"] = opt(e.bypass_latency);
        x["emitted"] = e.emitted;
        x["delivered"] = e.delivered;
        x["warnings"] = e.warnings;
        x["missed"] = e.missed;
        x["falsely_warned"] = e.falsely_warned;
        events.push_back(std::move(x));
    }
    j["events"] = std::move(events);
    return j;
}

std::string metrics_json(const MetricsReport& m)
{
    return metrics_to_json(m).dump(2) + "\n";
}

std::string csv_number(double v)
{
    if (!std::isfinite(v))
        return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string csv_number(const std::optional<double>& v)
{
    return v ? csv_number(*v) : std::string{};
}

std::string metrics_csv_header()
{
    return "scope,event,kind,warnable,onset,warning_latency,bypass_latency,emitted,delivered,dropped,"
           "warnings,false_warnings,missed,delivery_ratio,false_warning_rate,mean_warning_latency,"
           "p95_warning_latency,mean_delivery_latency,p95_delivery_latency,max_map_buffer_bytes";
}

std::string metrics_csv(const MetricsReport& m)
{
    std::ostringstream out;
    out << metrics_csv_header() << '\n';
    for (const auto& e : m.events) {
        out << "event," << e.id << ',' << to_string(e.kind) << ',' << (e.warnable ? 1 : 0) << ','
            << csv_number(e.onset) << ',' << csv_number(e.warning_latency) << ',' << csv_number(e.bypass_latency)
            << ',' << e.emitted << ',' << e.delivered << ",," << e.warnings << ','
            << (e.falsely_warned ? 1 : 0) << ',' << (e.missed ? 1 : 0) << ",,,,,,,\n";
    }
    out << "run,,,,,,," << m.emitted << ',' << m.delivered << ',' << m.dropped << ',' << m.warnings << ','
        << m.false_warnings << ',' << m.missed << ',' << csv_number(m.delivery_ratio) << ','
        << csv_number(m.false_warning_rate) << ',' << csv_number(m.mean_warning_latency) << ','
        << csv_number(m.p95_warning_latency) << ',' << csv_number(m.mean_delivery_latency) << ','
        << csv_number(m.p95_delivery_latency) << ',' << m.max_map_buffer_bytes << '\n';
    return out.str();
}

void write_metrics_files(const MetricsReport& m, const std::string& json_path)
{
    auto write = [](const std::string& path, const std::string& body) {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw IoError("cannot open " + path + " for writing");
        f << body;
        if (!f)
            throw IoError("write failed: " + path);
    };
    write(json_path, metrics_json(m));
    write(std::filesystem::path(json_path).replace_extension(".csv").string(), metrics_csv(m));
}

} // namespace dmcis
