#include "dmcis/level_one.hpp"

#include "dmcis/errors.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace dmcis {

namespace {

// Members sorted by (distance to SDCC, id).
void sort_by_distance(std::vector<int>& ids, const SensorMap& sensors, const Position& sdcc)
{
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        double da = distance(sensors.at(a).position, sdcc);
        double db = distance(sensors.at(b).position, sdcc);
        if (da != db)
            return da < db;
        return a < b;
    });
}

} // namespace

std::vector<Cluster> form_clusters(SensorMap& sensors, const std::map<int, Sdcc>& sdccs, int k_per_cluster,
                                   double hop_delay)
{
    if (k_per_cluster < 1)
        throw Error("k_per_cluster must be >= 1");
    std::map<int, std::vector<int>> by_sdcc;
    for (const auto& [id, s] : sensors) {
        if (!sdccs.contains(s.home_sdcc))
            throw Error("sensor " + std::to_string(id) + " references unknown sdcc "
                        + std::to_string(s.home_sdcc));
        by_sdcc[s.home_sdcc].push_back(id);
    }

    std::vector<Cluster> clusters;
    for (const auto& [sdcc_id, sdcc] : sdccs) {
        auto it = by_sdcc.find(sdcc_id);
        if (it == by_sdcc.end() || it->second.empty())
            throw EmptyDeployment("sdcc " + std::to_string(sdcc_id) + " has no sensors");
        auto ids = it->second;
        sort_by_distance(ids, sensors, sdcc.position);
        for (std::size_t start = 0; start < ids.size(); start += static_cast<std::size_t>(k_per_cluster)) {
            auto stop = std::min(ids.size(), start + static_cast<std::size_t>(k_per_cluster));
            Cluster c;
            c.id = static_cast<int>(clusters.size()) + 1;
            c.sdcc = sdcc_id;
            c.members.assign(ids.begin() + static_cast<std::ptrdiff_t>(start),
                             ids.begin() + static_cast<std::ptrdiff_t>(stop));
            c.head = c.members.front();
            c.hop_delay = hop_delay;
            for (int m : c.members)
                sensors.at(m).cluster = c.id;
            clusters.push_back(std::move(c));
        }
    }
    return clusters;
}

std::optional<Cluster> reelect_head(Cluster cluster, int failed, const SensorMap& sensors,
                                    const Position& sdcc_position)
{
    auto it = std::find(cluster.members.begin(), cluster.members.end(), failed);
    if (it == cluster.members.end())
        throw Error("sensor " + std::to_string(failed) + " is not a member of cluster "
                    + std::to_string(cluster.id));
    cluster.members.erase(it);
    if (cluster.members.empty())
        return std::nullopt;
    if (cluster.head == failed) {
        sort_by_distance(cluster.members, sensors, sdcc_position);
        cluster.head = cluster.members.front();
    }
    return cluster;
}

std::optional<Detection> sample(const SensorNode& sensor, const HazardField& field, SimTime t, Rng& rng,
                                double hop_delay)
{
    double z = rng.normal();
    if (!sensor.alive)
        return std::nullopt;
    double v = hazard_value(field, sensor.position, t, z);
    if (v < sensor.detect_threshold)
        return std::nullopt;
    Detection d{sensor.id, t + 2.0 * hop_delay, v, sensor.modality, std::nullopt};
    if (auto ev = dominant_event(field, sensor.position, t))
        d.event = field.events[*ev].id;
    return d;
}

std::size_t distinct_detectors(const Sdcc& sdcc, SimTime now, const SensorMap& sensors)
{
    std::set<int> ids;
    for (const auto& d : sdcc.detection_buffer) {
        if (d.at <= now - sdcc.window || d.at > now)
            continue;
        auto it = sensors.find(d.sensor);
        if (it != sensors.end() && it->second.alive)
            ids.insert(d.sensor);
    }
    return ids.size();
}

std::optional<Report> sdcc_aggregate(Sdcc& sdcc, SimTime now, const AggregationContext& ctx, ReportId id)
{
    const SimTime window_start = now - sdcc.window;
    std::erase_if(sdcc.detection_buffer, [&](const Detection& d) { return d.at <= window_start; });

    if (sdcc.last_emit && now < *sdcc.last_emit + sdcc.refractory)
        return std::nullopt;

    Payload payload;
    std::set<std::string> truth;
    std::array<int, kModalityCount> modality_votes{};
    for (const auto& d : sdcc.detection_buffer) {
        if (d.at > now)
            continue;
        auto it = ctx.sensors.find(d.sensor);
        if (it == ctx.sensors.end() || !it->second.alive)
            continue;
        if (payload.sensor_ids.insert(d.sensor).second) {
            payload.epicenter.x += it->second.position.x;
            payload.epicenter.y += it->second.position.y;
            ++modality_votes[static_cast<std::size_t>(d.modality)];
        }
        payload.modalities.insert(d.modality);
        payload.intensity = std::max(payload.intensity, d.value);
        if (d.event)
            truth.insert(*d.event);
    }

    const std::size_t k = payload.k();
    if (k == 0 || k < static_cast<std::size_t>(sdcc.tau))
        return std::nullopt;

    payload.epicenter.x /= static_cast<double>(k);
    payload.epicenter.y /= static_cast<double>(k);
    payload.intensity_estimates = {payload.intensity};

    // Hypothesis from the most common detecting modality; ties go to the
    // lower enum value.
    payload.hypothesis = sdcc.default_kind;
    auto best = std::max_element(modality_votes.begin(), modality_votes.end());
    auto mapped = ctx.kind_map.find(static_cast<Modality>(best - modality_votes.begin()));
    if (mapped != ctx.kind_map.end())
        payload.hypothesis = mapped->second;

    Report r;
    r.id = id;
    r.kind = ReportKind::partially_processed;
    r.origin_area = sdcc.area;
    r.origin_sdcc = sdcc.id;
    r.created_at = now;
    r.size_bytes = sdcc.report_bytes;
    r.severity = severity_of(payload.hypothesis, payload.intensity, ctx.severity);
    r.payload = std::move(payload);
    r.truth_events = std::move(truth);
    r.add_hop(ActorId{ActorRole::sdcc, sdcc.id}, now);
    sdcc.last_emit = now;
    return r;
}

void sdcc_insert_manual(Sdcc& sdcc, Report record)
{
    if (record.kind != ReportKind::manual_record)
        throw KindMismatch("sdcc " + std::to_string(sdcc.id) + " accepts only manual_record inserts, got "
                           + std::string(to_string(record.kind)));
    sdcc.manual_records.push_back(record);
    sdcc.outbox.push(std::move(record));
}

} // namespace dmcis
