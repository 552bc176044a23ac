#include "dmcis/generator.hpp"

#include "dmcis/rng.hpp"

#include <algorithm>
#include <cmath>

namespace dmcis {

namespace {

int pick(Rng& rng, int lo, int hi) // inclusive
{
    return lo + static_cast<int>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

double between(Rng& rng, double lo, double hi)
{
    return lo + (hi - lo) * rng.uniform();
}

Position jittered(Rng& rng, const Position& c, double r)
{
    return Position{c.x + between(rng, -r, r), c.y + between(rng, -r, r)};
}

} // namespace

Scenario generate_scenario(std::uint64_t seed, const GeneratorOptions& opt)
{
    Rng rng(combine_seed(seed, 0x5CE7A810ULL));
    Scenario s;
    s.seed = seed;
    s.duration = opt.duration;
    s.delta = between(rng, 150.0, 700.0);
    s.region = Region{{0.0, 0.0}, {4000.0, 4000.0}};
    s.timing.contact_tick = 1.0;
    s.hazard.background_noise_sigma = rng.uniform() < 0.5 ? 0.0 : between(rng, 0.05, 0.4);
    s.kind_map[Modality::acoustic] = HazardKind::flood;
    s.kind_map[Modality::seismic] = HazardKind::earthquake;

    const int n_areas = pick(rng, opt.min_areas, opt.max_areas);
    const Modality modalities[] = {Modality::acoustic, Modality::seismic, Modality::thermal};

    int sensor_id = 1, sdcc_id = 1, dpc_id = 1, map_id = 1;
    std::vector<int> all_dpcs;
    for (int a = 0; a < n_areas; ++a) {
        AreaSpec area;
        area.id = "area" + std::to_string(a + 1);
        const RadioStandard stds[] = {RadioStandard::b, RadioStandard::g, RadioStandard::a};
        area.radio = default_profile(stds[pick(rng, 0, 2)]);
        area.subscribers = static_cast<std::uint64_t>(pick(rng, 100, 5000));
        s.areas.push_back(area);

        const Position centre{800.0 + 1800.0 * (a % 2), 800.0 + 1800.0 * (a / 2)};
        std::vector<Position> stops;
        std::vector<int> area_sdccs, area_dpcs;

        const int n_sdcc = pick(rng, 1, 2);
        for (int i = 0; i < n_sdcc; ++i) {
            SdccSpec d;
            d.id = sdcc_id++;
            d.area = area.id;
            d.position = jittered(rng, centre, 400.0);
            d.window = between(rng, 20.0, 90.0);
            d.refractory = between(rng, 60.0, 400.0);
            d.report_bytes = static_cast<std::uint64_t>(pick(rng, 1024, 200'000));
            if (rng.uniform() < 0.5)
                d.manual_records.push_back(ManualRecordSpec{between(rng, 0.0, opt.duration / 2), "demographic",
                                                            static_cast<std::uint64_t>(pick(rng, 512, 50'000))});
            const int n_sensors = pick(rng, 4, 14);
            for (int k = 0; k < n_sensors; ++k) {
                SensorSpec n;
                n.id = sensor_id++;
                n.position = jittered(rng, d.position, 120.0);
                n.modality = modalities[pick(rng, 0, 2)];
                n.threshold = between(rng, 0.5, 2.0);
                n.period = between(rng, 5.0, 20.0);
                n.sdcc = d.id;
                s.sensors.push_back(n);
                if (rng.uniform() < 0.05)
                    s.sensor_failures.push_back(SensorFailureSpec{n.id, between(rng, 0.0, opt.duration)});
            }
            d.tau = pick(rng, 1, n_sensors);
            stops.push_back(d.position);
            area_sdccs.push_back(d.id);
            s.sdccs.push_back(std::move(d));
        }

        const int n_dpc = pick(rng, 2, 3);
        for (int i = 0; i < n_dpc; ++i) {
            DpcSpec p;
            p.id = dpc_id++;
            p.area = area.id;
            p.position = jittered(rng, centre, 500.0);
            p.confidence_threshold = between(rng, 0.3, 0.9);
            p.max_reprocess = pick(rng, 0, 3);
            p.reprocess_wait = between(rng, 10.0, 90.0);
            p.history.push_back(HistoryRecord{area.id, HazardKind::flood, between(rng, 1.0, 8.0), 2000 + i,
                                              Outcome::disaster_confirmed});
            stops.push_back(p.position);
            area_dpcs.push_back(p.id);
            all_dpcs.push_back(p.id);
            s.dpcs.push_back(std::move(p));
        }
        for (auto& p : s.dpcs)
            if (p.area == area.id)
                for (int q : area_dpcs)
                    if (q != p.id)
                        p.peers.push_back(q);
        for (int sd : area_sdccs)
            for (int dp : area_dpcs)
                s.pairs.emplace_back(sd, dp);

        const int n_maps = std::max(n_sdcc, n_dpc) + pick(rng, 0, 2);
        for (int j = 0; j < n_maps; ++j) {
            MapSpec m;
            m.id = map_id++;
            m.area = area.id;
            m.route = stops;
            std::rotate(m.route.begin(), m.route.begin() + (j % static_cast<int>(stops.size())), m.route.end());
            m.speed = rng.uniform() < 0.2 ? between(rng, 0.2, 1.0) : between(rng, 1.0, 25.0);
            m.phase_offset = between(rng, 0.0, 100.0);
            m.capacity = rng.uniform() < opt.tiny_buffer_chance ? static_cast<std::uint64_t>(pick(rng, 2000, 60'000))
                                                                 : static_cast<std::uint64_t>(pick(rng, 200'000, 2'000'000));
            m.radio = default_profile(rng.uniform() < 0.5 ? RadioStandard::g : RadioStandard::b);
            s.maps.push_back(std::move(m));
        }

        const int n_events = pick(rng, 1, 3);
        for (int e = 0; e < n_events; ++e) {
            HazardEvent ev;
            ev.id = area.id + "-e" + std::to_string(e + 1);
            const bool spike = rng.uniform() < 0.35;
            ev.kind = spike ? HazardKind::false_spike : (rng.uniform() < 0.7 ? HazardKind::flood : HazardKind::earthquake);
            ev.ground_truth_warnable = !spike;
            ev.epicenter = jittered(rng, centre, 400.0);
            ev.radius = spike ? between(rng, 30.0, 120.0) : between(rng, 200.0, 700.0);
            ev.onset = between(rng, 0.0, opt.duration * 0.9);
            ev.duration = spike ? between(rng, 10.0, 60.0) : between(rng, 100.0, 600.0);
            ev.peak_intensity = between(rng, 1.0, 10.0);
            ev.severity = ev.peak_intensity >= 5.0 ? Severity::emergency : Severity::urgent;
            s.hazard.events.push_back(std::move(ev));
        }
    }

    CdcSpec cdc;
    cdc.id = 1;
    for (const auto& a : s.areas)
        cdc.reference_db.push_back(HistoryRecord{a.id, HazardKind::flood, between(rng, 2.0, 9.0), 1999,
                                                 Outcome::disaster_confirmed});
    cdc.similarity_threshold = between(rng, 0.3, 0.8);
    s.cdcs.push_back(std::move(cdc));
    // Total DPCs must exceed CDCs x factor; keep the factor below the DPC count.
    s.cdc_dominance_factor = std::min(4.0, static_cast<double>(all_dpcs.size()) - 0.5);
    return s;
}

} // namespace dmcis
