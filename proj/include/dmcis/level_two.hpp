#pragma once

// Level two: vehicle-mounted access points patrolling fixed routes, ad hoc
// contacts with stations in radio range, channel-limited FIFO transfers, the
// delta direct-link rule and the fleet-size conditions.

#include "dmcis/buffer.hpp"
#include "dmcis/contact_kernel.hpp"
#include "dmcis/report.hpp"
#include "dmcis/validation.hpp"

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dmcis {

enum class RadioStandard { b, g, a };

std::string_view to_string(RadioStandard s);
std::optional<RadioStandard> parse_radio_standard(std::string_view s);

struct RadioProfile {
    RadioStandard standard = RadioStandard::b;
    double nominal_rate = 11.0; // Mbit/s
    double range = 250.0;       // m
    int channels = 3;
    double efficiency = 0.5;

    bool operator==(const RadioProfile&) const = default;
};

// 802.11b: 11 Mbit/s, 3 channels, 250 m. 802.11g: 54 Mbit/s, 3 channels,
// 250 m. 802.11a: 54 Mbit/s, 12 channels, 150 m. Efficiency 0.5.
RadioProfile default_profile(RadioStandard s);

struct MapNode {
    int id = 0;
    std::string area;
    std::vector<Position> route; // cyclic, closes back to route.front()
    double speed = 10.0;
    double phase_offset = 0.0; // seconds of travel already done at t = 0
    ReportBuffer buffer;
    RadioProfile radio = default_profile(RadioStandard::g);
};

double route_length(std::span<const Position> route);

// Constant-speed piecewise-linear position along the closed route.
Position map_position(const MapNode& map, SimTime t);

// False when the pair is within delta (strict) and can talk directly.
bool needs_ferry(const Position& sdcc, const Position& dpc, double delta);

struct ActiveTransfer {
    ReportId report = 0;
    std::uint64_t size_bytes = 0;
    double sent_bytes = 0.0;
    SimTime started_at = 0.0;
};

struct Contact {
    ActorId from; // data flows from -> to
    ActorId to;
    SimTime opened_at = 0.0;
    double rate = 0.0; // effective Mbit/s
    std::optional<ActiveTransfer> active;
    std::uint64_t token = 0; // bumps on every transfer start; stale completions are ignored

    double seconds_for(double bytes) const { return bytes * 8.0 / (rate * 1e6); }
};

// A fixed node (SDCC or DPC) as seen by the contact detector.
struct Station {
    ActorId actor;
    Position position;
    RadioProfile radio;
};

struct Mobile {
    int id = 0;
    Position position;
    RadioProfile radio;
};

struct ContactKey {
    ActorId station;
    int map = 0;
    auto operator<=>(const ContactKey&) const = default;
};

struct ContactTransition {
    ContactKey key;
    bool open = false;
    double rate = 0.0; // effective Mbit/s for opens
};

// Closes every open pair that drifted out of range, then opens in-range
// pairs in ascending (station, map) order while both ends have a free
// channel. Range is the smaller of the two radios; rate is the smaller
// nominal rate times the station's efficiency.
std::vector<ContactTransition> check_contacts(std::span<const Station> stations, std::span<const Mobile> maps,
                                              const std::set<ContactKey>& open,
                                              KernelMode mode = KernelMode::serial);

struct TransferResult {
    double bytes_moved = 0.0;
    std::vector<Report> delivered; // already pushed into the destination
    std::vector<Report> dropped;   // larger than the destination's total capacity
};

using Eligibility = std::function<bool(const Report&)>;

// Advances the contact by `dt` seconds. Whole reports move FIFO once their
// last byte is sent; a report bigger than the destination's whole capacity is
// dropped from the source. A head report that only lacks free space waits.
TransferResult transfer_step(Contact& contact, ReportBuffer& source, ReportBuffer& dest, double dt,
                             const Eligibility& eligible = {});

// Claims the next eligible report without sending bytes (dt = 0 step).
inline TransferResult start_next(Contact& contact, ReportBuffer& source, ReportBuffer& dest,
                                 const Eligibility& eligible = {})
{
    return transfer_step(contact, source, dest, 0.0, eligible);
}

// Drops any partial progress; the report stays at the source.
void abort_transfer(Contact& contact, ReportBuffer& source, ReportBuffer& dest);

struct FleetCounts {
    std::string area;
    int maps = 0;
    int sdccs = 0;
    int dpcs = 0;
    bool ferry_required = true; // some SDCC-DPC pair of the area is beyond delta
};

// J >= R and J >= T per area unless no pair of the area needs ferrying.
Violations validate_fleet(std::span<const FleetCounts> areas);

} // namespace dmcis
