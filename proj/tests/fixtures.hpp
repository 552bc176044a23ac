#pragma once

// Hand-built scenarios shared by the unit, property and acceptance tests.

#include "dmcis/scenario.hpp"

#include <optional>

namespace fixtures {

using namespace dmcis;

inline HistoryRecord flood_record(const std::string& area, double intensity)
{
    return HistoryRecord{area, HazardKind::flood, intensity, 2010, Outcome::disaster_confirmed};
}

// 20 acoustic sensors 10 m apart along a riverbank (x = 0..190, y = 0), one
// SDCC and a DPC close enough for a direct link. A 4-sensor false spike
// (ship wake) at t=100 and a flood at t=1000 covering sensors 3..20, or all
// 20 with `flood_covers_all`. Severity cuts keep both below emergency, so
// warnings depend on the CDC similarity alone. sigma = 0.
inline Scenario riverbank(int tau, bool flood_covers_all = false)
{
    Scenario s;
    s.seed = 42;
    s.duration = 2000.0;
    s.delta = 200.0;
    s.region = Region{{-100.0, -100.0}, {400.0, 300.0}};
    s.areas.push_back(AreaSpec{"river", default_profile(RadioStandard::b), 10000});

    SdccSpec sd;
    sd.id = 1;
    sd.area = "river";
    sd.position = {95.0, 30.0};
    sd.tau = tau;
    s.sdccs.push_back(sd);

    for (int i = 0; i < 20; ++i) {
        SensorSpec n;
        n.id = i + 1;
        n.position = {10.0 * i, 0.0};
        n.modality = Modality::acoustic;
        n.sdcc = 1;
        s.sensors.push_back(n);
    }

    DpcSpec dpc;
    dpc.id = 1;
    dpc.area = "river";
    dpc.position = {95.0, 80.0};
    dpc.history.push_back(flood_record("river", 8.0));
    s.dpcs.push_back(dpc);
    s.pairs.emplace_back(1, 1);

    CdcSpec cdc;
    cdc.id = 1;
    cdc.reference_db.push_back(flood_record("river", 8.0));
    s.cdcs.push_back(cdc);

    // Sensors at x = 0..30 see 2.5 / 7.5 / 7.5 / 2.5; x = 40 is outside.
    HazardEvent spike;
    spike.id = "wake";
    spike.kind = HazardKind::false_spike;
    spike.epicenter = {15.0, 0.0};
    spike.radius = 20.0;
    spike.onset = 100.0;
    spike.duration = 30.0;
    spike.peak_intensity = 10.0;
    spike.ground_truth_warnable = false;
    s.hazard.events.push_back(spike);

    HazardEvent flood;
    flood.id = "flood";
    flood.kind = HazardKind::flood;
    flood.onset = 1000.0;
    flood.duration = 600.0;
    flood.peak_intensity = 8.0;
    flood.severity = Severity::urgent;
    if (flood_covers_all) {
        flood.epicenter = {95.0, 0.0};
        flood.radius = 200.0; // farthest sensor sees 8 * (1 - 95/200) = 4.2
    } else {
        flood.epicenter = {105.0, 0.0};
        flood.radius = 100.0; // x = 10 sees 0.4 < 1, x = 20 sees 1.2
    }
    s.hazard.events.push_back(flood);

    s.kind_map[Modality::acoustic] = HazardKind::flood;
    s.severity.set(HazardKind::flood, SeverityCuts{1.0, 20.0});
    s.severity.set(HazardKind::false_spike, SeverityCuts{1.0, 20.0});
    // One SDCC, one DPC, one CDC: the DPC/CDC ratio check is exercised elsewhere.
    s.cdc_dominance_factor = 0.5;
    return s;
}

// SDCC at the origin and a DPC 2 km away; `maps` MAPs shuttle between them
// as a staggered fleet. Reports come from background noise on 20 sensors.
inline Scenario ferry_benchmark(int maps)
{
    Scenario s;
    s.seed = 7;
    s.duration = 4000.0;
    s.delta = 500.0;
    s.region = Region{{-200.0, -200.0}, {2200.0, 200.0}};
    s.areas.push_back(AreaSpec{"coast", default_profile(RadioStandard::b), 5000});

    SdccSpec sd;
    sd.id = 1;
    sd.area = "coast";
    sd.position = {0.0, 0.0};
    sd.tau = 2;
    sd.refractory = 60.0;
    s.sdccs.push_back(sd);
    for (int i = 0; i < 20; ++i) {
        SensorSpec n;
        n.id = i + 1;
        n.position = {-50.0 + 5.0 * i, -20.0};
        n.sdcc = 1;
        s.sensors.push_back(n);
    }
    s.hazard.background_noise_sigma = 0.5;

    DpcSpec dpc;
    dpc.id = 1;
    dpc.area = "coast";
    dpc.position = {2000.0, 0.0};
    s.dpcs.push_back(dpc);
    s.pairs.emplace_back(1, 1);

    CdcSpec cdc;
    cdc.id = 1;
    s.cdcs.push_back(cdc);

    MapFleetSpec fleet;
    fleet.count = maps;
    fleet.prototype.area = "coast";
    fleet.prototype.route = {{0.0, 0.0}, {2000.0, 0.0}};
    fleet.prototype.speed = 10.0;
    fleet.prototype.jitter = 20.0;
    s.fleet = fleet;
    s.cdc_dominance_factor = 0.5;
    return s;
}

// One MAP parked on top of an SDCC whose area radio is `area_radio`; a single
// manual record of `bytes` is inserted at t = 0.5. The DPC is out of reach.
inline Scenario parked_map(RadioStandard area_radio, std::uint64_t bytes, double tick)
{
    Scenario s;
    s.seed = 3;
    s.duration = 20.0;
    s.delta = 100.0;
    s.region = Region{{-10.0, -10.0}, {5000.0, 100.0}};
    s.areas.push_back(AreaSpec{"depot", default_profile(area_radio), 100});
    SdccSpec sd;
    sd.id = 1;
    sd.area = "depot";
    sd.position = {0.0, 0.0};
    sd.tau = 1;
    sd.manual_records.push_back(ManualRecordSpec{0.5, "demographic", bytes});
    s.sdccs.push_back(sd);
    SensorSpec n;
    n.id = 1;
    n.position = {5.0, 5.0};
    n.sdcc = 1;
    s.sensors.push_back(n);
    DpcSpec dpc;
    dpc.id = 1;
    dpc.area = "depot";
    dpc.position = {4000.0, 0.0};
    s.dpcs.push_back(dpc);
    s.pairs.emplace_back(1, 1);
    s.cdcs.push_back(CdcSpec{});
    MapSpec m;
    m.id = 1;
    m.area = "depot";
    m.route = {{10.0, 0.0}, {10.0, 0.0}};
    m.capacity = 100'000'000;
    s.maps.push_back(m);
    s.timing.contact_tick = tick;
    s.cdc_dominance_factor = 0.5;
    return s;
}

// `maps` MAPs parked within range of one station: the SDCC when
// `at_dpc` is false, the DPC otherwise. The station's area uses `radio`.
inline Scenario crowded(RadioStandard radio, int maps, bool at_dpc)
{
    Scenario s;
    s.seed = 5;
    s.duration = 30.0;
    s.delta = 100.0;
    s.region = Region{{-100.0, -100.0}, {5000.0, 100.0}};
    s.areas.push_back(AreaSpec{"hub", default_profile(radio), 100});
    SdccSpec sd;
    sd.id = 1;
    sd.area = "hub";
    sd.position = {0.0, 0.0};
    sd.tau = 1;
    s.sdccs.push_back(sd);
    SensorSpec n;
    n.id = 1;
    n.position = {1.0, 1.0};
    n.sdcc = 1;
    s.sensors.push_back(n);
    DpcSpec dpc;
    dpc.id = 1;
    dpc.area = "hub";
    dpc.position = {4000.0, 0.0};
    s.dpcs.push_back(dpc);
    s.pairs.emplace_back(1, 1);
    s.cdcs.push_back(CdcSpec{});
    const Position at = at_dpc ? dpc.position : sd.position;
    for (int j = 1; j <= maps; ++j) {
        MapSpec m;
        m.id = j;
        m.area = "hub";
        m.route = {{at.x + j, at.y}, {at.x + j, at.y}};
        s.maps.push_back(m);
    }
    s.cdc_dominance_factor = 0.5;
    return s;
}

// Riverbank where every SDCC-DPC pair is inside delta, plus a MAP patrolling
// past both that must never carry anything.
inline Scenario direct_only()
{
    Scenario s = riverbank(10);
    s.sdccs[0].manual_records.push_back(ManualRecordSpec{50.0, "resources", 20'000});
    MapSpec m;
    m.id = 1;
    m.area = "river";
    m.route = {{0.0, 50.0}, {190.0, 50.0}};
    m.speed = 5.0;
    s.maps.push_back(m);
    return s;
}

// Valid multi-area deployment that satisfies Eqs. 1-3 with the default
// dominance factor. North: 2 SDCCs, 1 DPC, 2 MAPs. South: 1 SDCC, 4 DPCs,
// 4 MAPs. One CDC, so 5 DPCs > 4 x 1.
inline Scenario deployment()
{
    Scenario s;
    s.seed = 11;
    s.duration = 600.0;
    s.delta = 300.0;
    s.region = Region{{0.0, 0.0}, {6000.0, 3000.0}};
    s.areas.push_back(AreaSpec{"north", default_profile(RadioStandard::g), 2000});
    s.areas.push_back(AreaSpec{"south", default_profile(RadioStandard::a), 3000});
    int sensor = 1;
    auto add_sdcc = [&](int id, const std::string& area, Position p, int n) {
        SdccSpec d;
        d.id = id;
        d.area = area;
        d.position = p;
        d.tau = 3;
        s.sdccs.push_back(d);
        for (int i = 0; i < n; ++i) {
            SensorSpec x;
            x.id = sensor++;
            x.position = {p.x + 10.0 * i, p.y + 15.0};
            x.sdcc = id;
            s.sensors.push_back(x);
        }
    };
    add_sdcc(1, "north", {500.0, 500.0}, 6);
    add_sdcc(2, "north", {1500.0, 500.0}, 6);
    add_sdcc(3, "south", {500.0, 2000.0}, 8);
    auto add_dpc = [&](int id, const std::string& area, Position p) {
        DpcSpec d;
        d.id = id;
        d.area = area;
        d.position = p;
        s.dpcs.push_back(d);
    };
    add_dpc(1, "north", {3000.0, 500.0});
    for (int t = 2; t <= 5; ++t)
        add_dpc(t, "south", {2500.0 + 500.0 * t, 2000.0});
    s.pairs = {{1, 1}, {2, 1}, {3, 2}, {3, 3}, {3, 4}, {3, 5}};
    s.cdcs.push_back(CdcSpec{});
    auto add_map = [&](int id, const std::string& area, std::vector<Position> route) {
        MapSpec m;
        m.id = id;
        m.area = area;
        m.route = std::move(route);
        s.maps.push_back(m);
    };
    add_map(1, "north", {{500.0, 500.0}, {3000.0, 500.0}});
    add_map(2, "north", {{1500.0, 500.0}, {3000.0, 500.0}});
    for (int j = 3; j <= 6; ++j)
        add_map(j, "south", {{500.0, 2000.0}, {2500.0 + 500.0 * (j - 1), 2000.0}});
    return s;
}

// Ferry benchmark with an emergency-severity flood around the SDCC.
inline Scenario surge()
{
    auto s = ferry_benchmark(2);
    s.hazard.background_noise_sigma = 0.0;
    s.sdccs[0].tau = 5;
    HazardEvent quake;
    quake.id = "surge";
    quake.kind = HazardKind::flood;
    quake.epicenter = {0.0, -20.0};
    quake.radius = 200.0;
    quake.onset = 300.0;
    quake.duration = 2000.0;
    quake.peak_intensity = 9.0; // above the flood emergency cut of 5
    quake.severity = Severity::emergency;
    s.hazard.events.push_back(quake);
    s.kind_map[Modality::acoustic] = HazardKind::flood;
    s.cdcs[0].reference_db.push_back(flood_record("coast", 9.0));
    return s;
}

} // namespace fixtures
