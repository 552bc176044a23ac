#pragma once

// One deterministic run of a scenario: actors from all four levels driven by
// the event engine, every observable step appended to the trace.

#include "dmcis/engine.hpp"
#include "dmcis/level_four.hpp"
#include "dmcis/level_one.hpp"
#include "dmcis/level_three.hpp"
#include "dmcis/level_two.hpp"
#include "dmcis/rng.hpp"
#include "dmcis/scenario.hpp"
#include "dmcis/trace.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>

namespace dmcis {

struct RunOptions {
    std::optional<std::uint64_t> seed; // overrides the scenario seed
    // Matrices at least this large (stations x maps) use the OpenMP kernel.
    std::size_t parallel_contact_threshold = 4096;
};

class Simulation {
public:
    explicit Simulation(Scenario scenario, RunOptions options = {});

    // Fires everything up to and including `horizon`.
    std::size_t run_until(SimTime horizon);
    std::size_t run() { return run_until(scenario_.duration); }

    const Scenario& scenario() const { return scenario_; }
    const Trace& trace() const { return trace_; }
    const Engine& engine() const { return engine_; }
    SimTime now() const { return engine_.now(); }

    const SensorMap& sensors() const { return sensors_; }
    const std::map<int, Cluster>& clusters() const { return clusters_; }
    const std::map<int, Sdcc>& sdccs() const { return sdccs_; }
    const std::map<int, MapNode>& maps() const { return maps_; }
    const std::map<int, Dpc>& dpcs() const { return dpcs_; }
    const std::map<int, Cdc>& cdcs() const { return cdcs_; }
    const Dcc& dcc() const { return dcc_; }

    // SDCC that talks to a DPC over a permanent direct link, if any.
    std::optional<int> direct_dpc(int sdcc) const;

    // Reports still waiting in an SDCC outbox or riding in a MAP buffer.
    std::size_t buffered_reports() const;
    std::size_t open_contacts() const;

    AreaStats area_stats(const Report& report) const;

private:
    enum class LinkKind { pickup, delivery, direct };

    struct Link {
        LinkKind kind = LinkKind::pickup;
        Contact contact;
        int sdcc = 0;
        int map = 0;
        int dpc = 0;
        std::uint64_t scheduled_token = 0;
        bool scheduled = false;
    };

    void handle(const ScheduledEvent& ev);
    void on_sample(int sensor, int index);
    void on_window_close(int sdcc, int index);
    void on_manual_insert(int sdcc, int index);
    void on_contact_tick(int index);
    void on_transfer_complete(int link, std::uint64_t token);
    void on_dpc_process(int dpc, ReportId id);
    void on_reprocess_deadline(int dpc, ReportId id);
    void on_peer_summary(std::uint64_t msg);
    void on_cdc_decision(int cdc, ReportId id);
    void on_dcc_warning(std::uint64_t key);
    void on_dissemination_complete(std::uint64_t key, int channel);
    void on_emergency_call(std::uint64_t key);
    void on_sensor_failure(int sensor);

    void emit_report(Sdcc& sdcc, Report report);
    void kick(int link_id);
    void kick_where(const std::function<bool(const Link&)>& pred);
    ReportBuffer& source_of(Link& link);
    ReportBuffer& dest_of(Link& link);
    Eligibility eligibility_of(const Link& link) const;
    std::string link_name(LinkKind k) const;
    void trace_drops(const Link& link, const std::vector<Report>& dropped);
    void maybe_bypass(ActorId at, const Report& report);
    void apply_outcome(Dpc& dpc, ReportId id, ProcessOutcome outcome, bool retry);
    void trace_event(TraceKind kind, const std::string& actor, std::optional<ReportId> report,
                     nlohmann::ordered_json detail);

    Scenario scenario_;
    RunOptions options_;
    std::uint64_t seed_ = 0;
    Engine engine_;
    Trace trace_;

    SensorMap sensors_;
    std::map<int, Rng> sensor_rng_;
    std::map<int, Cluster> clusters_;
    std::map<int, Sdcc> sdccs_;
    std::map<int, MapNode> maps_;
    std::map<int, Dpc> dpcs_;
    std::map<int, Cdc> cdcs_;
    Dcc dcc_;

    std::map<int, int> direct_;              // sdcc -> dpc
    std::map<int, std::set<int>> paired_;    // sdcc -> dpcs
    std::map<int, Link> links_;
    std::map<ContactKey, int> contact_links_;
    int next_link_ = 1;
    ReportId next_report_ = 1;

    std::map<ReportId, Report> to_cdc_;
    std::uint64_t next_key_ = 1;
    std::map<std::uint64_t, PeerMessage> peer_msgs_;
    std::map<std::uint64_t, WarningDecision> warnings_;
    std::map<std::uint64_t, std::pair<ActorId, Report>> calls_;
    std::set<ReportId> bypassed_;
};

} // namespace dmcis
