#include "doctest.h"

#include "fixtures.hpp"

#include "dmcis/errors.hpp"
#include "dmcis/generator.hpp"
#include "dmcis/metrics.hpp"
#include "dmcis/scenario.hpp"
#include "dmcis/simulation.hpp"
#include "dmcis/trace.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dmcis;
using nlohmann::json;

namespace {

const char* kMinimal = R"({
  "schema": "dmcis-scenario/1",
  "duration": 600,
  "delta": 500,
  "region": {"min": [0, 0], "max": [1000, 1000]},
  "areas": [{"id": "a"}],
  "sdccs": [{"id": 1, "area": "a", "position": [100, 100], "tau": 1}],
  "sensors": [{"id": 1, "position": [110, 100], "sdcc": 1}],
  "cdcs": [{"id": 1}],
  "dpcs": [{"id": 1, "area": "a", "position": [200, 100]}]
})";

json minimal() { return json::parse(kMinimal); }

std::string parse_error_of(const json& doc)
{
    try {
        scenario_from_json(doc);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("parse a minimal document")
{
    const auto s = parse_scenario(kMinimal);
    CHECK(s.seed == 1);
    CHECK(s.duration == 600.0);
    CHECK(s.delta == 500.0);
    REQUIRE(s.sdccs.size() == 1);
    CHECK(s.sdccs[0].window == SdccSpec{}.window);
    CHECK(s.sdccs[0].refractory == SdccSpec{}.refractory);
    CHECK(s.sensors[0].modality == Modality::acoustic);
    CHECK(s.dpcs[0].confidence_threshold == 0.7);
    CHECK(s.dpcs[0].max_reprocess == 2);
    CHECK(s.cdcs[0].similarity_threshold == 0.6);
    CHECK(s.dcc == DccSpec{});
    CHECK(s.timing == TimingSpec{});
    CHECK(s.cdc_dominance_factor == 4.0);
    CHECK(s.areas[0].radio == default_profile(RadioStandard::b));
    CHECK(s.maps.empty());
    CHECK_FALSE(s.fleet.has_value());
}

TEST_CASE("parse errors")
{
    SUBCASE("missing delta")
    {
        auto doc = minimal();
        doc.erase("delta");
        try {
            scenario_from_json(doc);
            FAIL("accepted a document without delta");
        } catch (const MissingField& e) {
            CHECK(e.field() == "/delta");
        }
    }
    SUBCASE("duplicate sensor id names the id")
    {
        auto doc = minimal();
        doc["sensors"].push_back({{"id", 1}, {"position", {120, 100}}, {"sdcc", 1}});
        const auto msg = parse_error_of(doc);
        CHECK(msg.find("duplicate sensor id 1") != std::string::npos);
    }
    SUBCASE("unknown key")
    {
        auto doc = minimal();
        doc["dpcs"][0]["colour"] = "red";
        CHECK_THROWS_AS(scenario_from_json(doc), UnknownKey);
        auto top = minimal();
        top["extra"] = 1;
        CHECK_THROWS_AS(scenario_from_json(top), UnknownKey);
    }
    SUBCASE("malformed JSON reports a line")
    {
        try {
            parse_scenario("{\n  \"schema\": \"dmcis-scenario/1\",\n  \"delta\": ,\n}");
            FAIL("accepted malformed JSON");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("wrong schema tag")
    {
        auto doc = minimal();
        doc["schema"] = "dmcis-scenario/0";
        CHECK_THROWS_AS(scenario_from_json(doc), ParseError);
    }
    SUBCASE("unknown area reference")
    {
        auto doc = minimal();
        doc["dpcs"][0]["area"] = "zz";
        CHECK(parse_error_of(doc).find("/dpcs/0/area") != std::string::npos);
    }
}

TEST_CASE("validate_scenario")
{
    SUBCASE("happy path")
    {
        auto s = parse_scenario(kMinimal);
        CHECK(validate_scenario(s).size() == 1); // one DPC cannot dominate one CDC by the default factor
        s.cdc_dominance_factor = 0.5;
        CHECK(validate_scenario(s).empty());
        CHECK(validate_scenario(fixtures::deployment()).empty());
    }
    SUBCASE("tau above the sensor population")
    {
        auto s = parse_scenario(kMinimal);
        s.cdc_dominance_factor = 0.5;
        s.sdccs[0].tau = 2;
        auto v = validate_scenario(s);
        REQUIRE(v.size() == 1);
        CHECK(v[0].condition == condition::tau_exceeds_sensors);
    }
    SUBCASE("too few MAPs when ferrying is needed")
    {
        auto s = fixtures::deployment();
        s.maps.erase(std::remove_if(s.maps.begin(), s.maps.end(), [](const MapSpec& m) { return m.area == "north"; }),
                     s.maps.end());
        s.maps.push_back(MapSpec{99, "north", {{100, 100}, {900, 100}}});
        auto v = validate_scenario(s);
        REQUIRE(v.size() == 1);
        CHECK(v[0].condition == condition::maps_vs_sdccs);
        CHECK(v[0].message.find("north") != std::string::npos);
    }
    SUBCASE("too many CDCs")
    {
        auto s = fixtures::deployment();
        s.cdcs.push_back(CdcSpec{2});
        auto v = validate_scenario(s);
        REQUIRE(v.size() == 1);
        CHECK(v[0].condition == condition::dpc_cdc_dominance);
    }
    SUBCASE("positions outside the region")
    {
        auto s = parse_scenario(kMinimal);
        s.dpcs[0].position = {2000, 0};
        auto v = validate_scenario(s);
        CHECK(std::any_of(v.begin(), v.end(), [](const Violation& x) { return x.condition == condition::containment; }));
    }
    SUBCASE("pure")
    {
        auto s = fixtures::deployment();
        s.cdcs.push_back(CdcSpec{2});
        const auto copy = s;
        const auto a = validate_scenario(s);
        const auto b = validate_scenario(s);
        CHECK(a == b);
        CHECK(s == copy);
    }
}

TEST_CASE("emit and parse round-trip")
{
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto s = generate_scenario(seed);
        const auto text = emit_scenario(s);
        const auto back = parse_scenario(text);
        CHECK(back == s);
        CHECK(emit_scenario(back) == text);
    }
    for (const auto& s : {fixtures::riverbank(3), fixtures::ferry_benchmark(4), fixtures::deployment(),
                          fixtures::direct_only(), fixtures::surge()})
        CHECK(parse_scenario(emit_scenario(s)) == s);
}

TEST_CASE("scenario_path")
{
    CHECK(scenario_path("maps.count").to_string() == "/maps/count");
    CHECK(scenario_path("sdccs[0].tau").to_string() == "/sdccs/0/tau");
    CHECK(scenario_path("/delta").to_string() == "/delta");
}

TEST_CASE("trace sink")
{
    SUBCASE("no events, empty output")
    {
        std::ostringstream out;
        emit_trace({}, out);
        CHECK(out.str().empty());
    }
    SUBCASE("out of order append is rejected")
    {
        Trace t;
        t.append(TraceEvent{5.0, TraceKind::detection, "sensor:1"});
        CHECK_THROWS_AS(t.append(TraceEvent{4.0, TraceKind::detection, "sensor:1"}), Error);
        t.append(TraceEvent{5.0, TraceKind::detection, "sensor:2"});
        CHECK(t.size() == 2);
    }
    SUBCASE("stable field order and read-back")
    {
        TraceEvent ev{1.5, TraceKind::report_emitted, "sdcc:1", ReportId{7}};
        ev.detail["b"] = 1;
        ev.detail["a"] = "x";
        const auto line = trace_line(ev);
        CHECK(line == R"({"t":1.5,"kind":"report_emitted","actor":"sdcc:1","report":7,"detail":{"b":1,"a":"x"}})");
        std::istringstream in(line + "\n");
        const auto back = read_trace(in);
        REQUIRE(back.size() == 1);
        CHECK(back[0] == ev);
    }
    SUBCASE("a whole run survives the file round trip")
    {
        Simulation sim(fixtures::riverbank(3));
        sim.run();
        std::ostringstream a, b;
        emit_trace(sim.trace().events(), a);
        std::istringstream in(a.str());
        const auto back = read_trace(in);
        CHECK(back == sim.trace().events());
        emit_trace(back, b);
        CHECK(a.str() == b.str());
    }
}

namespace {

Scenario one_event(bool warnable, HazardKind kind = HazardKind::flood)
{
    auto s = parse_scenario(kMinimal);
    HazardEvent e;
    e.id = "e1";
    e.kind = kind;
    e.onset = 100;
    e.duration = 100;
    e.ground_truth_warnable = warnable;
    s.hazard.events.push_back(e);
    return s;
}

TraceEvent emitted(SimTime t, ReportId id, std::vector<std::string> events)
{
    TraceEvent ev{t, TraceKind::report_emitted, "sdcc:1", id};
    ev.detail["events"] = events;
    return ev;
}

TraceEvent arrived(SimTime t, ReportId id, const std::string& to)
{
    TraceEvent ev{t, TraceKind::transfer_complete, "sdcc:1", id};
    ev.detail["to"] = to;
    return ev;
}

} // namespace

TEST_CASE("compute_metrics examples")
{
    SUBCASE("a warnable event nobody warned about is missed")
    {
        const std::vector<TraceEvent> trace{emitted(120, 1, {"e1"})};
        const auto m = compute_metrics(trace, one_event(true));
        CHECK(m.missed == 1);
        CHECK(m.events[0].missed);
        CHECK_FALSE(m.events[0].warning_latency);
        CHECK_FALSE(m.mean_warning_latency);
        CHECK(metrics_to_json(m)["events"][0]["warning_latency"].is_null());
    }
    SUBCASE("onset 100, warning at 460")
    {
        const std::vector<TraceEvent> trace{emitted(120, 1, {"e1"}), arrived(200, 1, "dpc:1"),
                                            TraceEvent{460, TraceKind::warning_issued, "dcc:1", ReportId{1}}};
        const auto m = compute_metrics(trace, one_event(true));
        REQUIRE(m.events[0].warning_latency);
        CHECK(*m.events[0].warning_latency == doctest::Approx(460.0 - 100.0));
        CHECK(m.missed == 0);
        CHECK(m.false_warnings == 0);
        CHECK(*m.mean_delivery_latency == doctest::Approx(80.0));
    }
    SUBCASE("spikes only, no warnings")
    {
        const std::vector<TraceEvent> trace{emitted(120, 1, {"e1"}), emitted(130, 2, {"e1"}),
                                            arrived(150, 1, "map:1"), arrived(170, 1, "dpc:1")};
        const auto m = compute_metrics(trace, one_event(false, HazardKind::false_spike));
        CHECK(m.false_warnings == 0);
        CHECK(m.false_warning_rate == 0.0);
        CHECK(m.emitted == 2);
        CHECK(m.delivered == 1);
        CHECK(m.delivery_ratio == doctest::Approx(0.5));
    }
    SUBCASE("a warning on a spike is false; merges carry truth along")
    {
        TraceEvent merge{140, TraceKind::dpc_disposition, "dpc:1", ReportId{2}};
        merge.detail["into"] = 1;
        merge.detail["from"] = 2;
        const std::vector<TraceEvent> trace{emitted(120, 1, {}), emitted(130, 2, {"e1"}), merge,
                                            TraceEvent{300, TraceKind::warning_issued, "dcc:1", ReportId{1}}};
        const auto m = compute_metrics(trace, one_event(false, HazardKind::false_spike));
        CHECK(m.false_warnings == 1);
        CHECK(m.events[0].falsely_warned);
        CHECK(m.false_warning_rate == 1.0);
    }
    SUBCASE("nothing emitted")
    {
        const auto m = compute_metrics({}, one_event(true));
        CHECK(m.delivery_ratio == 1.0);
    }
}

TEST_CASE("percentile is nearest rank")
{
    CHECK_FALSE(percentile({}, 95));
    CHECK(*percentile({3, 1, 2}, 50) == 2.0);
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i)
        v.push_back(i);
    CHECK(*percentile(v, 95) == 95.0);
    CHECK(*percentile(v, 100) == 100.0);
    CHECK(*percentile({7}, 95) == 7.0);
}

TEST_CASE("metrics are a pure function of trace and scenario")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Simulation sim(generate_scenario(seed));
        sim.run();
        const auto a = compute_metrics(sim.trace().events(), sim.scenario());
        const auto b = compute_metrics(sim.trace().events(), sim.scenario());
        CHECK(a == b);
        CHECK(metrics_json(a) == metrics_json(b));
        CHECK(a.emitted == a.delivered + a.dropped + a.buffered);
        CHECK(a.buffered == sim.buffered_reports());
    }
}

TEST_CASE("metrics files")
{
    Simulation sim(fixtures::riverbank(3));
    sim.run();
    const auto m = compute_metrics(sim.trace().events(), sim.scenario());
    const auto dir = std::filesystem::temp_directory_path() / "dmcis_metrics_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "m.json").string();
    write_metrics_files(m, path);
    std::ifstream js(path), cs((dir / "m.csv").string());
    REQUIRE(js);
    REQUIRE(cs);
    const auto doc = json::parse(js);
    CHECK(doc["run"]["warnings"] == m.warnings);
    std::string header, line;
    std::getline(cs, header);
    CHECK(header == metrics_csv_header());
    std::size_t rows = 0;
    std::string last;
    while (std::getline(cs, line)) {
        ++rows;
        last = line;
    }
    CHECK(rows == m.events.size() + 1);
    CHECK(last.rfind("run,", 0) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("bundled scenario files parse and validate")
{
    const std::filesystem::path dir = DMCIS_SCENARIOS;
    std::size_t seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json")
            continue;
        ++seen;
        INFO(entry.path().string());
        const auto s = load_scenario(entry.path().string());
        CHECK(validate_scenario(s).empty());
    }
    CHECK(seen >= 3);
}
