#include "dmcis/simulation.hpp"

#include "dmcis/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dmcis {

using nlohmann::ordered_json;

namespace {

ActorId sdcc_actor(int id) { return ActorId{ActorRole::sdcc, id}; }
ActorId map_actor(int id) { return ActorId{ActorRole::map, id}; }
ActorId dpc_actor(int id) { return ActorId{ActorRole::dpc, id}; }

ordered_json string_list(const auto& items)
{
    ordered_json arr = ordered_json::array();
    for (const auto& x : items)
        arr.push_back(std::string(x));
    return arr;
}

ordered_json modality_list(const std::set<Modality>& mods)
{
    ordered_json arr = ordered_json::array();
    for (auto m : mods)
        arr.push_back(std::string(to_string(m)));
    return arr;
}

} // namespace

Simulation::Simulation(Scenario scenario, RunOptions options)
    : scenario_(std::move(scenario)), options_(options)
{
    if (options_.seed)
        scenario_.seed = *options_.seed;
    seed_ = scenario_.seed;

    for (const auto& d : scenario_.sdccs) {
        Sdcc s;
        s.id = d.id;
        s.area = d.area;
        s.position = d.position;
        s.tau = d.tau;
        s.window = d.window;
        s.refractory = d.refractory;
        s.report_bytes = d.report_bytes;
        s.default_kind = d.default_kind;
        sdccs_.emplace(d.id, std::move(s));
    }
    for (const auto& n : scenario_.sensors) {
        SensorNode s;
        s.id = n.id;
        s.position = n.position;
        s.modality = n.modality;
        s.detect_threshold = n.threshold;
        s.sample_period = n.period;
        s.home_sdcc = n.sdcc;
        sensors_.emplace(n.id, s);
        sensor_rng_.emplace(n.id, Rng(derive_seed(seed_, static_cast<int>(ActorRole::sensor), n.id)));
    }
    for (auto& c : form_clusters(sensors_, sdccs_, scenario_.clustering.k_per_cluster, scenario_.clustering.hop_delay))
        clusters_.emplace(c.id, std::move(c));

    for (const auto& m : expanded_maps(scenario_)) {
        MapNode node;
        node.id = m.id;
        node.area = m.area;
        node.route = m.route;
        node.speed = m.speed;
        node.phase_offset = m.phase_offset;
        node.buffer = ReportBuffer(m.capacity);
        node.radio = m.radio;
        maps_.emplace(m.id, std::move(node));
    }
    for (const auto& d : scenario_.dpcs) {
        Dpc p;
        p.id = d.id;
        p.area = d.area;
        p.position = d.position;
        p.confidence_threshold = d.confidence_threshold;
        p.max_reprocess = d.max_reprocess;
        p.reprocess_wait = d.reprocess_wait;
        p.processing_delay = d.processing_delay;
        p.history = d.history;
        p.peers.insert(d.peers.begin(), d.peers.end());
        p.cdc = d.cdc;
        dpcs_.emplace(d.id, std::move(p));
    }
    for (const auto& c : scenario_.cdcs) {
        Cdc x;
        x.id = c.id;
        x.reference_db = c.reference_db;
        x.similarity_threshold = c.similarity_threshold;
        cdcs_.emplace(c.id, std::move(x));
    }
    dcc_.id = scenario_.dcc.id;
    dcc_.sms_rate = scenario_.dcc.sms_rate;
    dcc_.sms_base_latency = scenario_.dcc.sms_base_latency;
    dcc_.sms = scenario_.dcc.sms;
    dcc_.internet_messaging = scenario_.dcc.internet_messaging;
    for (const auto& a : scenario_.areas)
        dcc_.subscribers_per_area[a.id] = a.subscribers;

    // Direct links: the lowest-id paired DPC within delta.
    for (const auto& [sd, dp] : scenario_.pairs) {
        paired_[sd].insert(dp);
        const auto& s = sdccs_.at(sd);
        const auto& d = dpcs_.at(dp);
        if (!needs_ferry(s.position, d.position, scenario_.delta)) {
            auto it = direct_.find(sd);
            if (it == direct_.end() || dp < it->second)
                direct_[sd] = dp;
        }
    }
    for (const auto& [sd, dp] : direct_) {
        const auto& area = *scenario_.area(sdccs_.at(sd).area);
        Link link;
        link.kind = LinkKind::direct;
        link.sdcc = sd;
        link.dpc = dp;
        link.contact.from = sdcc_actor(sd);
        link.contact.to = dpc_actor(dp);
        link.contact.rate = area.radio.nominal_rate * area.radio.efficiency;
        links_.emplace(next_link_++, std::move(link));
    }

    if (!maps_.empty())
        engine_.schedule(0.0, Action::contact_check_tick, 0);
    for (const auto& [id, s] : sensors_)
        engine_.schedule(0.0, Action::sensor_sample, id, 0);
    for (const auto& d : scenario_.sdccs) {
        engine_.schedule(d.eval_period, Action::sdcc_window_close, d.id, 1);
        for (std::size_t i = 0; i < d.manual_records.size(); ++i)
            engine_.schedule(d.manual_records[i].at, Action::manual_insert, d.id, static_cast<int>(i));
    }
    for (const auto& f : scenario_.sensor_failures)
        engine_.schedule(f.at, Action::sensor_failure, f.sensor);
}

std::size_t Simulation::run_until(SimTime horizon)
{
    return engine_.run_until(horizon, [this](const ScheduledEvent& ev) { handle(ev); });
}

std::optional<int> Simulation::direct_dpc(int sdcc) const
{
    auto it = direct_.find(sdcc);
    if (it == direct_.end())
        return std::nullopt;
    return it->second;
}

std::size_t Simulation::buffered_reports() const
{
    std::size_t n = 0;
    for (const auto& [id, s] : sdccs_)
        n += s.outbox.size();
    for (const auto& [id, m] : maps_)
        n += m.buffer.size();
    return n;
}

std::size_t Simulation::open_contacts() const
{
    return contact_links_.size();
}

AreaStats Simulation::area_stats(const Report& report) const
{
    AreaStats st;
    int alive = 0;
    std::set<Modality> deployed;
    for (const auto& [id, s] : sensors_) {
        if (sdccs_.at(s.home_sdcc).area != report.origin_area)
            continue;
        deployed.insert(s.modality);
        if (s.alive)
            ++alive;
    }
    st.alive_in_area = alive;
    st.modalities_deployed = std::max<int>(1, static_cast<int>(deployed.size()));
    auto it = sdccs_.find(report.origin_sdcc);
    st.tau = it != sdccs_.end() ? it->second.tau : 1;
    return st;
}

void Simulation::trace_event(TraceKind kind, const std::string& actor, std::optional<ReportId> report,
                             ordered_json detail)
{
    trace_.append(TraceEvent{engine_.now(), kind, actor, report, std::move(detail)});
}

void Simulation::handle(const ScheduledEvent& ev)
{
    switch (ev.action) {
    case Action::sensor_sample: on_sample(ev.a, ev.b); break;
    case Action::sdcc_window_close: on_window_close(ev.a, ev.b); break;
    case Action::manual_insert: on_manual_insert(ev.a, ev.b); break;
    case Action::contact_check_tick: on_contact_tick(ev.a); break;
    case Action::transfer_complete: on_transfer_complete(ev.a, ev.token); break;
    case Action::dpc_process_complete: on_dpc_process(ev.a, ev.token); break;
    case Action::dpc_reprocess_deadline: on_reprocess_deadline(ev.a, ev.token); break;
    case Action::peer_summary: on_peer_summary(ev.token); break;
    case Action::cdc_decision: on_cdc_decision(ev.a, ev.token); break;
    case Action::dcc_warning: on_dcc_warning(ev.token); break;
    case Action::dcc_dissemination_complete: on_dissemination_complete(ev.token, ev.b); break;
    case Action::emergency_call: on_emergency_call(ev.token); break;
    case Action::sensor_failure: on_sensor_failure(ev.a); break;
    }
}

void Simulation::on_sample(int sensor_id, int index)
{
    auto& sensor = sensors_.at(sensor_id);
    if (!sensor.alive)
        return;
    const double hop = clusters_.contains(sensor.cluster) ? clusters_.at(sensor.cluster).hop_delay
                                                          : scenario_.clustering.hop_delay;
    auto det = sample(sensor, scenario_.hazard, engine_.now(), sensor_rng_.at(sensor_id), hop);
    if (det) {
        ordered_json d;
        d["sdcc"] = sensor.home_sdcc;
        d["value"] = det->value;
        d["modality"] = std::string(to_string(det->modality));
        d["arrives_at"] = det->at;
        d["event"] = det->event ? ordered_json(*det->event) : ordered_json(nullptr);
        trace_event(TraceKind::detection, "sensor:" + std::to_string(sensor_id), std::nullopt, std::move(d));
        sdccs_.at(sensor.home_sdcc).record(std::move(*det));
    }
    engine_.schedule(sensor.sample_period * (index + 1), Action::sensor_sample, sensor_id, index + 1);
}

void Simulation::on_window_close(int sdcc_id, int index)
{
    auto& sdcc = sdccs_.at(sdcc_id);
    AggregationContext ctx{sensors_, scenario_.kind_map, scenario_.severity};
    if (auto report = sdcc_aggregate(sdcc, engine_.now(), ctx, next_report_)) {
        ++next_report_;
        ordered_json d;
        d["area"] = report->origin_area;
        d["sdcc"] = sdcc_id;
        d["report_kind"] = std::string(to_string(report->kind));
        d["k"] = report->payload.k();
        d["tau"] = sdcc.tau;
        d["modalities"] = modality_list(report->payload.modalities);
        d["intensity"] = report->payload.intensity;
        d["hypothesis"] = std::string(to_string(report->payload.hypothesis));
        d["severity"] = std::string(to_string(report->severity));
        d["size_bytes"] = report->size_bytes;
        d["epicenter"] = ordered_json::array({report->payload.epicenter.x, report->payload.epicenter.y});
        d["events"] = string_list(report->truth_events);
        trace_event(TraceKind::report_emitted, sdcc_actor(sdcc_id).str(), report->id, std::move(d));
        emit_report(sdcc, std::move(*report));
    }
    const auto* spec = scenario_.sdcc(sdcc_id);
    engine_.schedule(spec->eval_period * (index + 1), Action::sdcc_window_close, sdcc_id, index + 1);
}

void Simulation::on_manual_insert(int sdcc_id, int index)
{
    auto& sdcc = sdccs_.at(sdcc_id);
    const auto& spec = scenario_.sdcc(sdcc_id)->manual_records.at(static_cast<std::size_t>(index));
    Report r;
    r.id = next_report_++;
    r.kind = ReportKind::manual_record;
    r.origin_area = sdcc.area;
    r.origin_sdcc = sdcc_id;
    r.created_at = engine_.now();
    r.size_bytes = spec.size_bytes;
    r.label = spec.label;
    r.add_hop(sdcc_actor(sdcc_id), engine_.now());
    ordered_json d;
    d["area"] = r.origin_area;
    d["sdcc"] = sdcc_id;
    d["report_kind"] = std::string(to_string(r.kind));
    d["label"] = r.label;
    d["severity"] = std::string(to_string(r.severity));
    d["size_bytes"] = r.size_bytes;
    d["events"] = ordered_json::array();
    trace_event(TraceKind::report_emitted, sdcc_actor(sdcc_id).str(), r.id, std::move(d));
    sdcc_insert_manual(sdcc, r);
    kick_where([&](const Link& l) { return l.sdcc == sdcc_id && l.kind != LinkKind::delivery; });
}

void Simulation::emit_report(Sdcc& sdcc, Report report)
{
    sdcc.outbox.push(std::move(report));
    const int id = sdcc.id;
    kick_where([&](const Link& l) { return l.sdcc == id && l.kind != LinkKind::delivery; });
}

void Simulation::on_contact_tick(int index)
{
    const SimTime now = engine_.now();
    std::vector<Station> stations;
    for (const auto& [id, s] : sdccs_) {
        if (direct_.contains(id))
            continue;
        stations.push_back(Station{sdcc_actor(id), s.position, scenario_.area(s.area)->radio});
    }
    for (const auto& [id, d] : dpcs_)
        stations.push_back(Station{dpc_actor(id), d.position, scenario_.area(d.area)->radio});
    std::vector<Mobile> mobiles;
    for (const auto& [id, m] : maps_)
        mobiles.push_back(Mobile{id, map_position(m, now), m.radio});

    std::set<ContactKey> open;
    for (const auto& [key, link] : contact_links_)
        open.insert(key);

    const auto mode = stations.size() * mobiles.size() >= options_.parallel_contact_threshold ? KernelMode::parallel
                                                                                              : KernelMode::serial;
    for (const auto& tr : check_contacts(stations, mobiles, open, mode)) {
        const auto& key = tr.key;
        const std::string station = key.station.str();
        if (!tr.open) {
            const int link_id = contact_links_.at(key);
            auto& link = links_.at(link_id);
            ordered_json d;
            d["map"] = key.map;
            d["station"] = station;
            if (link.contact.active) {
                d["aborted_report"] = link.contact.active->report;
                abort_transfer(link.contact, source_of(link), dest_of(link));
            } else {
                d["aborted_report"] = nullptr;
            }
            d["opened_at"] = link.contact.opened_at;
            trace_event(TraceKind::contact_close, map_actor(key.map).str(), std::nullopt, std::move(d));
            links_.erase(link_id);
            contact_links_.erase(key);
            continue;
        }
        Link link;
        link.map = key.map;
        if (key.station.role == ActorRole::sdcc) {
            link.kind = LinkKind::pickup;
            link.sdcc = key.station.id;
            link.contact.from = key.station;
            link.contact.to = map_actor(key.map);
        } else {
            link.kind = LinkKind::delivery;
            link.dpc = key.station.id;
            link.contact.from = map_actor(key.map);
            link.contact.to = key.station;
        }
        link.contact.opened_at = now;
        link.contact.rate = tr.rate;
        const int link_id = next_link_++;
        links_.emplace(link_id, std::move(link));
        contact_links_.emplace(key, link_id);

        ordered_json d;
        d["map"] = key.map;
        d["station"] = station;
        d["rate_mbps"] = tr.rate;
        d["distance"] = distance(map_position(maps_.at(key.map), now),
                                 key.station.role == ActorRole::sdcc ? sdccs_.at(key.station.id).position
                                                                     : dpcs_.at(key.station.id).position);
        trace_event(TraceKind::contact_open, map_actor(key.map).str(), std::nullopt, std::move(d));
    }
    // New contacts start in id order after all transitions are logged.
    for (const auto& [key, link_id] : contact_links_)
        kick(link_id);

    engine_.schedule(scenario_.timing.contact_tick * (index + 1), Action::contact_check_tick, index + 1);
}

ReportBuffer& Simulation::source_of(Link& link)
{
    switch (link.kind) {
    case LinkKind::pickup:
    case LinkKind::direct: return sdccs_.at(link.sdcc).outbox;
    case LinkKind::delivery: return maps_.at(link.map).buffer;
    }
    throw Error("bad link kind");
}

ReportBuffer& Simulation::dest_of(Link& link)
{
    switch (link.kind) {
    case LinkKind::pickup: return maps_.at(link.map).buffer;
    case LinkKind::direct:
    case LinkKind::delivery: return dpcs_.at(link.dpc).inbox;
    }
    throw Error("bad link kind");
}

Eligibility Simulation::eligibility_of(const Link& link) const
{
    if (link.kind != LinkKind::delivery)
        return {};
    const int dpc = link.dpc;
    return [this, dpc](const Report& r) {
        auto it = paired_.find(r.origin_sdcc);
        return it != paired_.end() && it->second.contains(dpc);
    };
}

std::string Simulation::link_name(LinkKind k) const
{
    switch (k) {
    case LinkKind::pickup: return "pickup";
    case LinkKind::delivery: return "delivery";
    case LinkKind::direct: return "direct";
    }
    return "?";
}

void Simulation::trace_drops(const Link& link, const std::vector<Report>& dropped)
{
    for (const auto& r : dropped) {
        ordered_json d;
        d["reason"] = "destination_full";
        d["from"] = link.contact.from.str();
        d["to"] = link.contact.to.str();
        d["size_bytes"] = r.size_bytes;
        trace_event(TraceKind::report_dropped, link.contact.from.str(), r.id, std::move(d));
    }
}

void Simulation::kick(int link_id)
{
    auto it = links_.find(link_id);
    if (it == links_.end())
        return;
    Link& link = it->second;
    if (!link.contact.active) {
        auto res = start_next(link.contact, source_of(link), dest_of(link), eligibility_of(link));
        trace_drops(link, res.dropped);
    }
    if (link.contact.active && !(link.scheduled && link.scheduled_token == link.contact.token)) {
        auto& act = link.contact.active.value();
        act.started_at = engine_.now();
        const double remaining = static_cast<double>(act.size_bytes) - act.sent_bytes;
        engine_.schedule(engine_.now() + link.contact.seconds_for(remaining), Action::transfer_complete, link_id, 0,
                         link.contact.token);
        link.scheduled = true;
        link.scheduled_token = link.contact.token;
    }
}

void Simulation::kick_where(const std::function<bool(const Link&)>& pred)
{
    std::vector<int> ids;
    for (const auto& [id, link] : links_)
        if (pred(link))
            ids.push_back(id);
    for (int id : ids)
        kick(id);
}

void Simulation::on_transfer_complete(int link_id, std::uint64_t token)
{
    auto it = links_.find(link_id);
    if (it == links_.end())
        return;
    Link& link = it->second;
    if (!link.contact.active || link.contact.token != token)
        return;
    const SimTime now = engine_.now();
    const auto act = *link.contact.active;
    auto& src = source_of(link);
    auto& dst = dest_of(link);
    const double dt = link.contact.seconds_for(static_cast<double>(act.size_bytes) - act.sent_bytes);
    // Only the active report completes here; the next one is scheduled by kick().
    auto res = transfer_step(link.contact, src, dst, dt, [&](const Report& r) { return r.id == act.report; });
    trace_drops(link, res.dropped);

    for (auto& delivered : res.delivered) {
        Report* r = dst.find(delivered.id);
        r->add_hop(link.contact.to, now);
        ordered_json d;
        d["from"] = link.contact.from.str();
        d["to"] = link.contact.to.str();
        d["link"] = link_name(link.kind);
        d["bytes"] = r->size_bytes;
        d["started_at"] = act.started_at;
        d["duration"] = now - act.started_at;
        d["rate_mbps"] = link.contact.rate;
        d["dest_occupancy"] = dst.used();
        d["source_occupancy"] = src.used();
        trace_event(TraceKind::transfer_complete, link.contact.to.str(), r->id, std::move(d));

        const Report arrived = *r;
        if (link.kind == LinkKind::pickup) {
            maybe_bypass(map_actor(link.map), arrived);
        } else {
            maybe_bypass(dpc_actor(link.dpc), arrived);
            const auto& dpc = dpcs_.at(link.dpc);
            engine_.schedule(now + dpc.processing_delay, Action::dpc_process_complete, link.dpc, 0, arrived.id);
        }
    }

    kick(link_id);
    if (link.kind == LinkKind::pickup) {
        const int map = link.map;
        kick_where([&](const Link& l) { return l.map == map && l.kind == LinkKind::delivery; });
    } else if (link.kind == LinkKind::delivery) {
        const int map = link.map;
        kick_where([&](const Link& l) { return l.map == map && l.kind == LinkKind::pickup; });
    }
}

void Simulation::maybe_bypass(ActorId at, const Report& report)
{
    if (report.severity != Severity::emergency || bypassed_.contains(report.id))
        return;
    bypassed_.insert(report.id);
    const SimTime when = bypass(at, report, engine_.now(), scenario_.timing.emergency_latency);
    const auto key = next_key_++;
    calls_.emplace(key, std::make_pair(at, report));
    engine_.schedule(when, Action::emergency_call, 0, 0, key);
}

void Simulation::on_emergency_call(std::uint64_t key)
{
    auto node = calls_.extract(key);
    const auto& [origin, report] = node.mapped();
    ordered_json d;
    d["origin"] = origin.str();
    d["area"] = report.origin_area;
    d["kind"] = std::string(to_string(report.payload.hypothesis));
    d["severity"] = std::string(to_string(report.severity));
    trace_event(TraceKind::emergency_call, origin.str(), report.id, std::move(d));
}

void Simulation::on_dpc_process(int dpc_id, ReportId id)
{
    auto& dpc = dpcs_.at(dpc_id);
    auto report = dpc.inbox.take(id);
    if (!report)
        throw Error("dpc " + std::to_string(dpc_id) + " lost report " + std::to_string(id));
    const auto stats = area_stats(*report);
    auto outcome = dpc_process(dpc, std::move(*report), engine_.now(), stats);
    apply_outcome(dpc, id, std::move(outcome), false);
}

void Simulation::on_reprocess_deadline(int dpc_id, ReportId id)
{
    auto& dpc = dpcs_.at(dpc_id);
    auto it = dpc.held.find(id);
    if (it == dpc.held.end())
        return;
    const auto stats = area_stats(it->second.report);
    auto outcome = dpc_retry(dpc, id, engine_.now(), stats);
    apply_outcome(dpc, id, std::move(outcome), true);
}

void Simulation::apply_outcome(Dpc& dpc, ReportId id, ProcessOutcome outcome, bool retry)
{
    const SimTime now = engine_.now();
    ordered_json d;
    d["disposition"] = std::string(to_string(outcome.disposition));
    d["confidence"] = outcome.confidence ? ordered_json(*outcome.confidence) : ordered_json(nullptr);
    d["threshold"] = dpc.confidence_threshold;
    d["retries"] = outcome.retries;
    d["retry"] = retry;
    if (outcome.merged_into) {
        d["into"] = *outcome.merged_into;
        d["from"] = id;
        d["via"] = "inbox";
    }
    if (outcome.forward) {
        d["report_kind"] = std::string(to_string(outcome.forward->kind));
        d["low_confidence"] = outcome.forward->low_confidence;
    }
    trace_event(TraceKind::dpc_disposition, dpc_actor(dpc.id).str(), id, std::move(d));

    if (outcome.disposition == Disposition::reprocess) {
        const auto& held = dpc.held.at(id);
        engine_.schedule(held.deadline, Action::dpc_reprocess_deadline, dpc.id, 0, id);
        for (auto& msg : peer_sync(dpc, held.report, now, scenario_.timing.inter_dpc_latency)) {
            const auto key = next_key_++;
            const SimTime at = msg.arrive_at;
            const int peer = msg.peer;
            peer_msgs_.emplace(key, std::move(msg));
            engine_.schedule(at, Action::peer_summary, peer, 0, key);
        }
        return;
    }
    if (outcome.forward) {
        Report r = std::move(*outcome.forward);
        const SimTime arrive = dpc_forward(dpc, r, now, scenario_.timing.dpc_cdc_latency);
        const ReportId rid = r.id;
        to_cdc_.emplace(rid, std::move(r));
        engine_.schedule(arrive, Action::cdc_decision, dpc.cdc, 0, rid);
    }
}

void Simulation::on_peer_summary(std::uint64_t key)
{
    auto node = peer_msgs_.extract(key);
    const auto& msg = node.mapped();
    auto& peer = dpcs_.at(msg.peer);
    if (auto into = dpc_merge_summary(peer, msg.summary)) {
        ordered_json d;
        d["disposition"] = std::string(to_string(Disposition::merged));
        d["into"] = *into;
        d["from"] = msg.summary.id;
        d["via"] = "peer";
        trace_event(TraceKind::dpc_disposition, dpc_actor(peer.id).str(), msg.summary.id, std::move(d));
    }
}

void Simulation::on_cdc_decision(int cdc_id, ReportId id)
{
    auto node = to_cdc_.extract(id);
    Report report = std::move(node.mapped());
    auto& cdc = cdcs_.at(cdc_id);
    const SimTime now = engine_.now();
    report.add_hop(ActorId{ActorRole::cdc, cdc_id}, now);
    ordered_json d;
    if (report.kind == ReportKind::manual_record) {
        cdc.archive.push_back(report);
        d["decision"] = std::string(to_string(Decision::archive_only));
        d["manual"] = true;
        d["label"] = report.label;
        trace_event(TraceKind::cdc_decision, "cdc:" + std::to_string(cdc_id), id, std::move(d));
        return;
    }
    auto decision = cdc_decide(cdc, report, now);
    d["decision"] = std::string(to_string(decision.decision));
    d["manual"] = false;
    d["similarity"] = decision.similarity;
    d["sigma"] = cdc.similarity_threshold;
    d["emergency"] = decision.emergency;
    d["low_confidence"] = report.low_confidence;
    d["confidence"] = report.confidence ? ordered_json(*report.confidence) : ordered_json(nullptr);
    d["area"] = decision.area;
    d["kind"] = std::string(to_string(decision.kind));
    trace_event(TraceKind::cdc_decision, "cdc:" + std::to_string(cdc_id), id, std::move(d));
    if (decision.decision == Decision::warn) {
        const auto key = next_key_++;
        warnings_.emplace(key, decision);
        engine_.schedule(now + scenario_.timing.cdc_dcc_latency, Action::dcc_warning, 0, 0, key);
    }
}

void Simulation::on_dcc_warning(std::uint64_t key)
{
    const auto& decision = warnings_.at(key);
    const auto diss = dcc_disseminate(dcc_, decision, engine_.now());
    ordered_json d;
    d["area"] = decision.area;
    d["kind"] = std::string(to_string(decision.kind));
    d["similarity"] = decision.similarity;
    d["emergency"] = decision.emergency;
    d["subscribers"] = dcc_.subscribers_per_area.at(decision.area);
    trace_event(TraceKind::warning_issued, "dcc:" + std::to_string(dcc_.id), decision.report, std::move(d));
    if (diss.sms_complete)
        engine_.schedule(*diss.sms_complete, Action::dcc_dissemination_complete, 0, 0, key);
    if (diss.internet_complete)
        engine_.schedule(*diss.internet_complete, Action::dcc_dissemination_complete, 0, 1, key);
}

void Simulation::on_dissemination_complete(std::uint64_t key, int channel)
{
    const auto& decision = warnings_.at(key);
    ordered_json d;
    d["channel"] = channel == 0 ? "sms" : "internet_messaging";
    d["area"] = decision.area;
    d["subscribers"] = dcc_.subscribers_per_area.at(decision.area);
    trace_event(TraceKind::dissemination_complete, "dcc:" + std::to_string(dcc_.id), decision.report, std::move(d));
}

void Simulation::on_sensor_failure(int sensor_id)
{
    auto& sensor = sensors_.at(sensor_id);
    if (!sensor.alive)
        return;
    sensor.alive = false;
    ordered_json d;
    d["cluster"] = sensor.cluster;
    auto it = clusters_.find(sensor.cluster);
    if (it != clusters_.end()) {
        auto next = reelect_head(it->second, sensor_id, sensors_, sdccs_.at(it->second.sdcc).position);
        if (next) {
            d["head"] = next->head;
            d["dissolved"] = false;
            it->second = std::move(*next);
        } else {
            d["head"] = nullptr;
            d["dissolved"] = true;
            clusters_.erase(it);
        }
    }
    trace_event(TraceKind::sensor_failure, "sensor:" + std::to_string(sensor_id), std::nullopt, std::move(d));
}

} // namespace dmcis
