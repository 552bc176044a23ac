#include "dmcis/sweep.hpp"

#include "dmcis/errors.hpp"
#include "dmcis/rng.hpp"
#include "dmcis/simulation.hpp"

#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dmcis {

using nlohmann::json;

json parse_sweep_value(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(text);
    }
}

std::vector<json> parse_sweep_values(const std::string& text)
{
    std::vector<json> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        if (auto dots = item.find(".."); dots != std::string::npos) {
            try {
                const long lo = std::stol(item.substr(0, dots));
                const long hi = std::stol(item.substr(dots + 2));
                for (long v = lo; v <= hi; ++v)
                    out.emplace_back(v);
                continue;
            } catch (const std::exception&) {
                // not a range; keep as a plain value
            }
        }
        out.push_back(parse_sweep_value(item));
    }
    return out;
}

std::uint64_t sweep_cell_seed(std::uint64_t master, const json& value, int seed_index)
{
    return combine_seed(combine_seed(master, fnv1a64(value.dump())), static_cast<std::uint64_t>(seed_index));
}

namespace {

json::json_pointer resolve(const json& doc, const std::string& path)
{
    json::json_pointer ptr;
    try {
        ptr = scenario_path(path);
    } catch (const std::exception& e) {
        throw UnresolvedPath("bad sweep path \"" + path + "\": " + e.what());
    }
    if (!doc.contains(ptr))
        throw UnresolvedPath("sweep path \"" + path + "\" does not resolve in the scenario");
    return ptr;
}

} // namespace

Scenario apply_sweep_value(const Scenario& base, const std::string& path, const json& value)
{
    json doc = json::parse(emit_scenario(base));
    doc[resolve(doc, path)] = value;
    return scenario_from_json(doc);
}

Violations check_sweep(const Scenario& base, const SweepSpec& spec)
{
    if (spec.seeds < 1)
        throw Error("seeds per value must be >= 1");
    // Resolve against the base even with an empty value list.
    resolve(json::parse(emit_scenario(base)), spec.path);
    for (const auto& v : spec.values) {
        auto v_errors = validate_scenario(apply_sweep_value(base, spec.path, v));
        if (!v_errors.empty())
            return v_errors;
    }
    return {};
}

namespace {

SweepCell run_cell(const Scenario& s, const json& value, int seed_index, std::uint64_t master)
{
    SweepCell cell;
    cell.value = value;
    cell.seed_index = seed_index;
    cell.seed = sweep_cell_seed(master, value, seed_index);
    RunOptions opt;
    opt.seed = cell.seed;
    // Cells already run concurrently; keep the contact kernel serial inside them.
    opt.parallel_contact_threshold = static_cast<std::size_t>(-1);
    Simulation sim(s, opt);
    sim.run();
    cell.metrics = compute_metrics(sim.trace().events(), sim.scenario());
    return cell;
}

double mean(const std::vector<double>& v)
{
    double sum = 0.0;
    for (double x : v)
        sum += x;
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

} // namespace

SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, KernelMode mode)
{
    std::vector<Scenario> scenarios;
    for (const auto& v : spec.values)
        scenarios.push_back(apply_sweep_value(base, spec.path, v));

    const int per = spec.seeds;
    const int total = static_cast<int>(spec.values.size()) * per;
    SweepResult r;
    r.cells.resize(static_cast<std::size_t>(total));

    if (mode == KernelMode::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < total; ++i)
            r.cells[static_cast<std::size_t>(i)] =
                run_cell(scenarios[static_cast<std::size_t>(i / per)], spec.values[static_cast<std::size_t>(i / per)],
                         i % per, base.seed);
    } else {
        for (int i = 0; i < total; ++i)
            r.cells[static_cast<std::size_t>(i)] =
                run_cell(scenarios[static_cast<std::size_t>(i / per)], spec.values[static_cast<std::size_t>(i / per)],
                         i % per, base.seed);
    }

    for (std::size_t v = 0; v < spec.values.size(); ++v) {
        SweepAggregate a;
        a.value = spec.values[v];
        std::vector<double> warn, deliv, fwr, ratio, nwarn, nfalse;
        for (int k = 0; k < per; ++k) {
            const auto& m = r.cells[v * static_cast<std::size_t>(per) + static_cast<std::size_t>(k)].metrics;
            warn.insert(warn.end(), m.warning_latencies.begin(), m.warning_latencies.end());
            deliv.insert(deliv.end(), m.delivery_latencies.begin(), m.delivery_latencies.end());
            fwr.push_back(m.false_warning_rate);
            ratio.push_back(m.delivery_ratio);
            nwarn.push_back(static_cast<double>(m.warnings));
            nfalse.push_back(static_cast<double>(m.false_warnings));
        }
        a.runs = per;
        if (!warn.empty())
            a.mean_warning_latency = mean(warn);
        a.p95_warning_latency = percentile(warn, 95.0);
        if (!deliv.empty())
            a.mean_delivery_latency = mean(deliv);
        a.p95_delivery_latency = percentile(deliv, 95.0);
        a.false_warning_rate = mean(fwr);
        a.delivery_ratio = mean(ratio);
        a.warnings = mean(nwarn);
        a.false_warnings = mean(nfalse);
        r.aggregates.push_back(std::move(a));
    }
    return r;
}

std::string sweep_csv(const SweepSpec& spec, const SweepResult& r)
{
    auto value_text = [](const json& v) {
        std::string s = v.is_string() ? v.get<std::string>() : v.dump();
        if (s.find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char c : s)
                q += c == '"' ? std::string("\"\"") : std::string(1, c);
            return q + "\"";
        }
        return s;
    };
    std::ostringstream out;
    out << "row,param,value,seed_index,seed,runs,emitted,delivered,dropped,warnings,false_warnings,missed,"
           "delivery_ratio,false_warning_rate,mean_warning_latency,p95_warning_latency,mean_delivery_latency,"
           "p95_delivery_latency,max_map_buffer_bytes\n";
    for (const auto& c : r.cells) {
        const auto& m = c.metrics;
        out << "cell," << spec.path << ',' << value_text(c.value) << ',' << c.seed_index << ',' << c.seed << ",1,"
            << m.emitted << ',' << m.delivered << ',' << m.dropped << ',' << m.warnings << ',' << m.false_warnings
            << ',' << m.missed << ',' << csv_number(m.delivery_ratio) << ',' << csv_number(m.false_warning_rate)
            << ',' << csv_number(m.mean_warning_latency) << ',' << csv_number(m.p95_warning_latency) << ','
            << csv_number(m.mean_delivery_latency) << ',' << csv_number(m.p95_delivery_latency) << ','
            << m.max_map_buffer_bytes << '\n';
    }
    for (const auto& a : r.aggregates) {
        out << "aggregate," << spec.path << ',' << value_text(a.value) << ",,," << a.runs << ",,,,"
            << csv_number(a.warnings) << ',' << csv_number(a.false_warnings) << ",," << csv_number(a.delivery_ratio)
            << ',' << csv_number(a.false_warning_rate) << ',' << csv_number(a.mean_warning_latency) << ','
            << csv_number(a.p95_warning_latency) << ',' << csv_number(a.mean_delivery_latency) << ','
            << csv_number(a.p95_delivery_latency) << ",\n";
    }
    return out.str();
}

} // namespace dmcis
