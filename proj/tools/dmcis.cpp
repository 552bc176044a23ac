// dmcis: validate, run, sweep and inspect scenarios.
//
// Exit codes: 0 ok, 1 domain violation or runtime failure, 2 usage or parse error.

#include "dmcis/errors.hpp"
#include "dmcis/generator.hpp"
#include "dmcis/metrics.hpp"
#include "dmcis/scenario.hpp"
#include "dmcis/simulation.hpp"
#include "dmcis/sweep.hpp"
#include "dmcis/trace.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace dmcis;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

void print_violations(const Violations& v, std::ostream& out)
{
    for (const auto& x : v)
        out << x.condition << ": " << x.message << '\n';
}

// Seed precedence: --seed, then DMCIS_SEED, then the scenario's own seed.
std::optional<std::uint64_t> seed_override(const std::optional<std::uint64_t>& flag)
{
    if (flag)
        return flag;
    if (const char* env = std::getenv("DMCIS_SEED"); env && *env) {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(env, &used, 0);
        if (env[used] != '\0')
            throw std::invalid_argument("DMCIS_SEED is not an integer");
        return v;
    }
    return std::nullopt;
}

void write_file(const std::string& path, const std::string& body)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open " + path + " for writing");
    f << body;
    if (!f)
        throw IoError("write failed: " + path);
}

void print_summary(const MetricsReport& m, std::ostream& out)
{
    auto opt = [](const std::optional<double>& v) { return v ? csv_number(*v) : std::string("n/a"); };
    out << "reports: emitted " << m.emitted << ", delivered " << m.delivered << ", dropped " << m.dropped
        << ", buffered " << m.buffered << " (delivery ratio " << csv_number(m.delivery_ratio) << ")\n"
        << "warnings: " << m.warnings << " (false " << m.false_warnings << ", missed events " << m.missed
        << "), emergency calls " << m.emergency_calls << '\n'
        << "warning latency: mean " << opt(m.mean_warning_latency) << " s, p95 " << opt(m.p95_warning_latency)
        << " s\n"
        << "delivery latency: mean " << opt(m.mean_delivery_latency) << " s, p95 " << opt(m.p95_delivery_latency)
        << " s\n"
        << "max MAP buffer: " << m.max_map_buffer_bytes << " bytes\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Four-level disaster communications simulator"};
    app.require_subcommand(1);

    std::string scenario_path;

    auto* validate = app.add_subcommand("validate", "Check a scenario against the deployment conditions");
    validate->add_option("scenario", scenario_path, "Scenario JSON")->required();

    std::optional<std::uint64_t> seed;
    std::optional<double> until;
    std::string trace_path, metrics_path;
    auto* run = app.add_subcommand("run", "Simulate a scenario");
    run->add_option("scenario", scenario_path, "Scenario JSON")->required();
    run->add_option("--seed", seed, "Override the scenario seed (default: DMCIS_SEED, then the file)");
    run->add_option("--until", until, "Horizon in seconds (default: scenario duration)")->check(CLI::NonNegativeNumber);
    run->add_option("--trace", trace_path, "Write the JSON Lines trace here");
    run->add_option("--metrics", metrics_path, "Write metrics JSON here, plus a .csv next to it");

    std::string param, values_text, out_path;
    int seeds = 1;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep->add_option("scenario", scenario_path, "Scenario JSON")->required();
    sweep->add_option("--param", param, "Dotted path, e.g. sdccs[0].tau or maps.count")->required();
    sweep->add_option("--values", values_text, "Comma-separated values; a..b expands integer ranges")->required();
    sweep->add_option("--seeds", seeds, "Seeds per value")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_path, "CSV destination (default: stdout)");
    bool serial = false;
    sweep->add_flag("--serial", serial, "Run cells one at a time");

    std::string report_trace;
    auto* report = app.add_subcommand("report", "Recompute metrics from a saved trace");
    report->add_option("trace", report_trace, "Trace JSON Lines file")->required();
    report->add_option("--scenario", scenario_path, "Scenario the trace came from")->required();
    report->add_option("--metrics", metrics_path, "Write metrics JSON here, plus a .csv next to it");

    std::uint64_t gen_seed = 1;
    auto* generate = app.add_subcommand("generate", "Write a random valid scenario");
    generate->add_option("--seed", gen_seed, "Generator seed");
    generate->add_option("--out", out_path, "Destination (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*generate) {
            const auto text = emit_scenario(generate_scenario(gen_seed));
            if (out_path.empty())
                std::cout << text;
            else
                write_file(out_path, text);
            return kOk;
        }

        Scenario s;
        try {
            s = load_scenario(scenario_path);
        } catch (const ParseError& e) {
            std::cerr << scenario_path << ": " << e.what() << '\n';
            return kUsage;
        } catch (const IoError& e) {
            std::cerr << e.what() << '\n';
            return kUsage;
        }

        if (*validate) {
            const auto v = validate_scenario(s);
            if (v.empty()) {
                std::cout << "OK\n";
                return kOk;
            }
            print_violations(v, std::cout);
            return kViolation;
        }

        if (*report) {
            std::vector<TraceEvent> events;
            try {
                events = read_trace_file(report_trace);
            } catch (const Error& e) {
                std::cerr << report_trace << ": " << e.what() << '\n';
                return kUsage;
            }
            const auto m = compute_metrics(events, s);
            if (!metrics_path.empty())
                write_metrics_files(m, metrics_path);
            print_summary(m, std::cout);
            return kOk;
        }

        if (*run) {
            std::optional<std::uint64_t> chosen;
            try {
                chosen = seed_override(seed);
            } catch (const std::exception& e) {
                std::cerr << "bad seed: " << e.what() << '\n';
                return kUsage;
            }
            const auto v = validate_scenario(s);
            if (!v.empty()) {
                std::cerr << "refusing to run an invalid scenario:\n";
                print_violations(v, std::cerr);
                return kViolation;
            }
            RunOptions opt;
            opt.seed = chosen;
            Simulation sim(s, opt);
            sim.run_until(until.value_or(s.duration));
            const auto m = compute_metrics(sim.trace().events(), sim.scenario());
            if (!trace_path.empty())
                write_trace_file(sim.trace().events(), trace_path);
            if (!metrics_path.empty())
                write_metrics_files(m, metrics_path);
            std::cout << "ran to t=" << csv_number(sim.now()) << " with seed " << sim.scenario().seed << ", "
                      << sim.trace().size() << " trace events\n";
            print_summary(m, std::cout);
            return kOk;
        }

        if (*sweep) {
            SweepSpec spec;
            spec.path = param;
            spec.values = parse_sweep_values(values_text);
            spec.seeds = seeds;
            spec.out = out_path;
            if (auto env = seed_override(std::nullopt))
                s.seed = *env;
            Violations v;
            try {
                v = check_sweep(s, spec);
            } catch (const UnresolvedPath& e) {
                std::cerr << e.what() << '\n';
                return kUsage;
            } catch (const ParseError& e) {
                std::cerr << "sweep value rejected: " << e.what() << '\n';
                return kUsage;
            }
            if (!v.empty()) {
                std::cerr << "a sweep cell is not runnable:\n";
                print_violations(v, std::cerr);
                return kViolation;
            }
            const auto result = run_sweep(s, spec, serial ? KernelMode::serial : KernelMode::parallel);
            const auto csv = sweep_csv(spec, result);
            if (out_path.empty())
                std::cout << csv;
            else
                write_file(out_path, csv);
            return kOk;
        }
    } catch (const IoError& e) {
        std::cerr << e.what() << '\n';
        return kViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kViolation;
    }
    return kUsage;
}
