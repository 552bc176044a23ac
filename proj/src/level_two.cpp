#include "dmcis/level_two.hpp"

#include "dmcis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dmcis {

std::string_view to_string(RadioStandard s)
{
    switch (s) {
    case RadioStandard::b: return "b";
    case RadioStandard::g: return "g";
    case RadioStandard::a: return "a";
    }
    return "?";
}

std::optional<RadioStandard> parse_radio_standard(std::string_view s)
{
    if (s == "b")
        return RadioStandard::b;
    if (s == "g")
        return RadioStandard::g;
    if (s == "a")
        return RadioStandard::a;
    return std::nullopt;
}

RadioProfile default_profile(RadioStandard s)
{
    switch (s) {
    case RadioStandard::b: return RadioProfile{s, 11.0, 250.0, 3, 0.5};
    case RadioStandard::g: return RadioProfile{s, 54.0, 250.0, 3, 0.5};
    case RadioStandard::a: return RadioProfile{s, 54.0, 150.0, 12, 0.5};
    }
    return RadioProfile{};
}

double route_length(std::span<const Position> route)
{
    if (route.size() < 2)
        return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < route.size(); ++i)
        total += distance(route[i], route[(i + 1) % route.size()]);
    return total;
}

Position map_position(const MapNode& map, SimTime t)
{
    if (map.route.empty())
        throw Error("map " + std::to_string(map.id) + " has an empty route");
    const double lap = route_length(map.route);
    if (lap <= 0.0 || map.speed <= 0.0)
        return map.route.front();
    double s = std::fmod(map.speed * (t + map.phase_offset), lap);
    if (s < 0.0)
        s += lap;
    const std::size_t n = map.route.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Position& a = map.route[i];
        const Position& b = map.route[(i + 1) % n];
        double seg = distance(a, b);
        if (s <= seg && seg > 0.0) {
            double f = s / seg;
            return Position{a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f};
        }
        s -= seg;
    }
    return map.route.front();
}

bool needs_ferry(const Position& sdcc, const Position& dpc, double delta)
{
    if (!(delta > 0.0))
        throw Error("delta must be positive");
    return !(distance(sdcc, dpc) < delta);
}

std::vector<ContactTransition> check_contacts(std::span<const Station> stations, std::span<const Mobile> maps,
                                              const std::set<ContactKey>& open, KernelMode mode)
{
    // Stations and maps are visited in ascending id order regardless of input order.
    std::vector<std::size_t> s_order(stations.size());
    std::vector<std::size_t> m_order(maps.size());
    for (std::size_t i = 0; i < s_order.size(); ++i)
        s_order[i] = i;
    for (std::size_t i = 0; i < m_order.size(); ++i)
        m_order[i] = i;
    std::sort(s_order.begin(), s_order.end(),
              [&](std::size_t x, std::size_t y) { return stations[x].actor < stations[y].actor; });
    std::sort(m_order.begin(), m_order.end(), [&](std::size_t x, std::size_t y) { return maps[x].id < maps[y].id; });

    std::vector<Position> sp, mp;
    std::vector<double> sr, mr;
    for (auto i : s_order) {
        sp.push_back(stations[i].position);
        sr.push_back(stations[i].radio.range);
    }
    for (auto i : m_order) {
        mp.push_back(maps[i].position);
        mr.push_back(maps[i].radio.range);
    }
    const auto matrix = in_range(RangeInput{sp, sr, mp, mr}, mode);
    const std::size_t nm = m_order.size();

    std::map<ActorId, std::size_t> s_row;
    std::map<int, std::size_t> m_col;
    for (std::size_t r = 0; r < s_order.size(); ++r)
        s_row[stations[s_order[r]].actor] = r;
    for (std::size_t c = 0; c < nm; ++c)
        m_col[maps[m_order[c]].id] = c;

    std::vector<ContactTransition> out;
    std::map<ActorId, int> station_busy;
    std::map<int, int> map_busy;
    for (const auto& key : open) {
        auto si = s_row.find(key.station);
        auto mi = m_col.find(key.map);
        bool still = si != s_row.end() && mi != m_col.end() && matrix[si->second * nm + mi->second];
        if (!still) {
            out.push_back(ContactTransition{key, false, 0.0});
            continue;
        }
        ++station_busy[key.station];
        ++map_busy[key.map];
    }

    for (std::size_t r = 0; r < s_order.size(); ++r) {
        const Station& st = stations[s_order[r]];
        for (std::size_t c = 0; c < nm; ++c) {
            const Mobile& mb = maps[m_order[c]];
            ContactKey key{st.actor, mb.id};
            if (!matrix[r * nm + c] || open.contains(key))
                continue;
            if (station_busy[st.actor] >= st.radio.channels || map_busy[mb.id] >= mb.radio.channels)
                continue;
            ++station_busy[st.actor];
            ++map_busy[mb.id];
            double rate = std::min(st.radio.nominal_rate, mb.radio.nominal_rate) * st.radio.efficiency;
            out.push_back(ContactTransition{key, true, rate});
        }
    }
    return out;
}

TransferResult transfer_step(Contact& contact, ReportBuffer& source, ReportBuffer& dest, double dt,
                             const Eligibility& eligible)
{
    if (dt < 0.0)
        throw Error("transfer_step with negative dt");
    TransferResult result;
    double budget = contact.rate * 1e6 * dt / 8.0;
    // Sub-microbyte residue from floating-point dt counts as complete.
    constexpr double kSlackBytes = 1e-6;

    for (;;) {
        if (!contact.active) {
            const Report* next = source.next_unclaimed(eligible);
            if (!next)
                break;
            if (dest.capacity() != ReportBuffer::kUnbounded && next->size_bytes > dest.capacity()) {
                result.dropped.push_back(*source.take(next->id));
                continue;
            }
            if (!dest.reserve(next->size_bytes))
                break;
            source.claim(next->id);
            ++contact.token;
            contact.active = ActiveTransfer{next->id, next->size_bytes, 0.0, 0.0};
        }
        auto& act = *contact.active;
        double remaining = static_cast<double>(act.size_bytes) - act.sent_bytes;
        if (budget + kSlackBytes >= remaining) {
            budget = std::max(0.0, budget - remaining);
            result.bytes_moved += remaining;
            auto report = source.take(act.report);
            if (!report)
                throw Error("active transfer lost its report");
            dest.release(act.size_bytes);
            dest.push(*report);
            result.delivered.push_back(std::move(*report));
            contact.active.reset();
            continue;
        }
        act.sent_bytes += budget;
        result.bytes_moved += budget;
        break;
    }
    return result;
}

void abort_transfer(Contact& contact, ReportBuffer& source, ReportBuffer& dest)
{
    if (!contact.active)
        return;
    source.unclaim(contact.active->report);
    dest.release(contact.active->size_bytes);
    contact.active.reset();
    ++contact.token;
}

Violations validate_fleet(std::span<const FleetCounts> areas)
{
    Violations out;
    for (const auto& a : areas) {
        if (!a.ferry_required)
            continue;
        if (a.maps < a.sdccs)
            out.push_back(Violation{condition::maps_vs_sdccs,
                                    "area " + a.area + ": J < R (" + std::to_string(a.maps) + " MAPs < "
                                        + std::to_string(a.sdccs) + " SDCCs)"});
        if (a.maps < a.dpcs)
            out.push_back(Violation{condition::maps_vs_dpcs,
                                    "area " + a.area + ": J < T (" + std::to_string(a.maps) + " MAPs < "
                                        + std::to_string(a.dpcs) + " DPCs)"});
    }
    return out;
}

} // namespace dmcis
