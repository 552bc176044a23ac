#include "dmcis/scenario.hpp"

#include "dmcis/errors.hpp"
#include "dmcis/level_four.hpp"
#include "dmcis/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dmcis {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Strict view of one JSON object: typed getters record which keys were read
// and finish() rejects anything left over.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ParseError("expected an object", path_.empty() ? "/" : path_);
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key)
    {
        if (!j_.contains(key))
            throw MissingField(child(key));
        seen_.insert(key);
        return j_.at(key);
    }

    std::string child(const std::string& key) const { return path_ + "/" + key; }

    double number(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_number())
            throw ParseError("expected a number", child(key));
        double d = v.get<double>();
        if (!std::isfinite(d))
            throw ParseError("expected a finite number", child(key));
        return d;
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::int64_t integer(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_number_integer())
            throw ParseError("expected an integer", child(key));
        return v.get<std::int64_t>();
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) { return has(key) ? integer(key) : fallback; }

    std::uint64_t unsigned_integer(const std::string& key)
    {
        const auto& v = raw(key);
        if (v.is_number_unsigned())
            return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
            return static_cast<std::uint64_t>(v.get<std::int64_t>());
        throw ParseError("expected a non-negative integer", child(key));
    }
    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback)
    {
        return has(key) ? unsigned_integer(key) : fallback;
    }

    std::string string(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_string())
            throw ParseError("expected a string", child(key));
        return v.get<std::string>();
    }
    std::string string(const std::string& key, const std::string& fallback) { return has(key) ? string(key) : fallback; }

    bool boolean(const std::string& key, bool fallback)
    {
        if (!has(key))
            return fallback;
        const auto& v = raw(key);
        if (!v.is_boolean())
            throw ParseError("expected a boolean", child(key));
        return v.get<bool>();
    }

    const json& array(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_array())
            throw ParseError("expected an array", child(key));
        return v;
    }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.contains(it.key()))
                throw UnknownKey(it.key(), path_.empty() ? "/" : path_);
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Position parse_position(const json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ParseError("expected a position [x, y]", path);
    Position p{v[0].get<double>(), v[1].get<double>()};
    if (!is_finite(p))
        throw ParseError("position must be finite", path);
    return p;
}

template <class T, class F>
T parse_enum(const std::string& text, F parse, const std::string& path, const char* what)
{
    auto v = parse(text);
    if (!v)
        throw ParseError(std::string("unknown ") + what + " \"" + text + "\"", path);
    return *v;
}

void require(bool ok, const std::string& message, const std::string& path)
{
    if (!ok)
        throw ParseError(message, path);
}

RadioProfile parse_radio(const json& v, const std::string& path)
{
    if (v.is_string())
        return default_profile(parse_enum<RadioStandard>(v.get<std::string>(), parse_radio_standard, path, "radio"));
    Reader r(v, path);
    auto profile = default_profile(
        parse_enum<RadioStandard>(r.string("standard"), parse_radio_standard, r.child("standard"), "radio"));
    profile.range = r.number("range", profile.range);
    profile.efficiency = r.number("efficiency", profile.efficiency);
    r.finish();
    require(profile.range > 0.0, "range must be positive", path + "/range");
    require(profile.efficiency > 0.0 && profile.efficiency <= 1.0, "efficiency must be in (0, 1]",
            path + "/efficiency");
    return profile;
}

HistoryRecord parse_history(const json& v, const std::string& path)
{
    Reader r(v, path);
    HistoryRecord h;
    h.area = r.string("area");
    h.kind = parse_enum<HazardKind>(r.string("kind"), parse_hazard_kind, r.child("kind"), "hazard kind");
    h.intensity = r.number("intensity");
    h.year_tag = static_cast<int>(r.integer("year", 0));
    h.outcome = parse_enum<Outcome>(r.string("outcome", "disaster_confirmed"), parse_outcome, r.child("outcome"),
                                    "outcome");
    r.finish();
    require(h.intensity >= 0.0, "intensity must be >= 0", path + "/intensity");
    return h;
}

std::vector<HistoryRecord> parse_history_list(Reader& r, const std::string& key)
{
    std::vector<HistoryRecord> out;
    if (!r.has(key))
        return out;
    const auto& arr = r.array(key);
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(parse_history(arr[i], r.child(key) + "/" + std::to_string(i)));
    return out;
}

MapSpec parse_map(const json& v, const std::string& path, bool in_fleet)
{
    Reader r(v, path);
    MapSpec m;
    if (!in_fleet)
        m.id = static_cast<int>(r.integer("id"));
    else
        require(!r.has("id"), "fleet prototypes take ids from the fleet", path + "/id");
    m.area = r.string("area", "");
    const auto& route = r.array("route");
    for (std::size_t i = 0; i < route.size(); ++i)
        m.route.push_back(parse_position(route[i], r.child("route") + "/" + std::to_string(i)));
    m.speed = r.number("speed", m.speed);
    if (!in_fleet)
        m.phase_offset = r.number("phase_offset", m.phase_offset);
    m.capacity = r.unsigned_integer("capacity", m.capacity);
    if (r.has("radio"))
        m.radio = parse_radio(r.raw("radio"), r.child("radio"));
    m.jitter = r.number("jitter", m.jitter);
    r.finish();
    require(m.route.size() >= 2, "route needs at least two waypoints", path + "/route");
    require(m.speed > 0.0, "speed must be positive", path + "/speed");
    require(m.capacity > 0, "capacity must be positive", path + "/capacity");
    require(m.jitter >= 0.0, "jitter must be >= 0", path + "/jitter");
    return m;
}

template <class Items, class GetId>
void check_unique(const Items& items, GetId get_id, const std::string& what, const std::string& path)
{
    std::set<decltype(get_id(items.front()))> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto id = get_id(items[i]);
        if (!seen.insert(id).second) {
            std::ostringstream msg;
            msg << "duplicate " << what << " id " << id;
            throw ParseError(msg.str(), path + "/" + std::to_string(i) + "/id");
        }
    }
}

int line_of(std::string_view text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

} // namespace

const AreaSpec* Scenario::area(std::string_view id) const
{
    for (const auto& a : areas)
        if (a.id == id)
            return &a;
    return nullptr;
}

const SdccSpec* Scenario::sdcc(int id) const
{
    for (const auto& s : sdccs)
        if (s.id == id)
            return &s;
    return nullptr;
}

const DpcSpec* Scenario::dpc(int id) const
{
    for (const auto& d : dpcs)
        if (d.id == id)
            return &d;
    return nullptr;
}

std::vector<MapSpec> expanded_maps(const Scenario& s)
{
    std::vector<MapSpec> out;
    if (s.fleet) {
        const auto& proto = s.fleet->prototype;
        const double lap = route_length(proto.route);
        for (int j = 1; j <= s.fleet->count; ++j) {
            MapSpec m = proto;
            m.id = j;
            m.phase_offset = lap / proto.speed * static_cast<double>(j - 1) / static_cast<double>(s.fleet->count);
            out.push_back(std::move(m));
        }
    } else {
        out = s.maps;
    }
    for (auto& m : out) {
        if (m.area.empty() && s.areas.size() == 1)
            m.area = s.areas.front().id;
        if (m.jitter > 0.0) {
            Rng rng(derive_seed(s.seed, static_cast<int>(ActorRole::map), m.id));
            for (auto& p : m.route) {
                p.x += (2.0 * rng.uniform() - 1.0) * m.jitter;
                p.y += (2.0 * rng.uniform() - 1.0) * m.jitter;
            }
        }
    }
    return out;
}

Scenario scenario_from_json(const json& doc)
{
    Reader top(doc, "");
    const auto schema = top.string("schema");
    require(schema == kScenarioSchema, "unsupported schema \"" + schema + "\", expected " + kScenarioSchema, "/schema");

    Scenario s;
    s.seed = top.unsigned_integer("seed", s.seed);
    s.duration = top.number("duration");
    require(s.duration > 0.0, "duration must be positive", "/duration");
    s.delta = top.number("delta");
    require(s.delta > 0.0, "delta must be positive", "/delta");

    {
        Reader r(top.raw("region"), "/region");
        s.region.min = parse_position(r.raw("min"), "/region/min");
        s.region.max = parse_position(r.raw("max"), "/region/max");
        r.finish();
        require(s.region.min.x <= s.region.max.x && s.region.min.y <= s.region.max.y, "region min exceeds max",
                "/region");
    }

    {
        const auto& arr = top.array("areas");
        require(!arr.empty(), "at least one area is required", "/areas");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string path = "/areas/" + std::to_string(i);
            Reader r(arr[i], path);
            AreaSpec a;
            a.id = r.string("id");
            require(!a.id.empty(), "area id must be non-empty", path + "/id");
            if (r.has("radio"))
                a.radio = parse_radio(r.raw("radio"), path + "/radio");
            a.subscribers = r.unsigned_integer("subscribers", 0);
            r.finish();
            s.areas.push_back(std::move(a));
        }
        check_unique(s.areas, [](const AreaSpec& a) { return a.id; }, "area", "/areas");
    }
    auto known_area = [&](const std::string& id, const std::string& path) {
        require(s.area(id) != nullptr, "unknown area \"" + id + "\"", path);
    };

    {
        const auto& arr = top.array("sdccs");
        require(!arr.empty(), "at least one SDCC is required", "/sdccs");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string path = "/sdccs/" + std::to_string(i);
            Reader r(arr[i], path);
            SdccSpec d;
            d.id = static_cast<int>(r.integer("id"));
            d.area = r.string("area");
            known_area(d.area, path + "/area");
            d.position = parse_position(r.raw("position"), path + "/position");
            d.tau = static_cast<int>(r.integer("tau"));
            d.window = r.number("window", d.window);
            d.refractory = r.number("refractory", d.refractory);
            d.eval_period = r.number("eval_period", d.eval_period);
            d.report_bytes = r.unsigned_integer("report_bytes", d.report_bytes);
            d.default_kind = parse_enum<HazardKind>(r.string("default_kind", "flood"), parse_hazard_kind,
                                                    path + "/default_kind", "hazard kind");
            if (r.has("manual_records")) {
                const auto& recs = r.array("manual_records");
                for (std::size_t k = 0; k < recs.size(); ++k) {
                    std::string rp = path + "/manual_records/" + std::to_string(k);
                    Reader mr(recs[k], rp);
                    ManualRecordSpec m;
                    m.at = mr.number("at", 0.0);
                    m.label = mr.string("label", m.label);
                    m.size_bytes = mr.unsigned_integer("size_bytes", m.size_bytes);
                    mr.finish();
                    require(m.at >= 0.0, "manual record time must be >= 0", rp + "/at");
                    require(m.size_bytes > 0, "size_bytes must be positive", rp + "/size_bytes");
                    d.manual_records.push_back(std::move(m));
                }
            }
            r.finish();
            require(d.tau >= 1, "tau must be >= 1", path + "/tau");
            require(d.window > 0.0, "window must be positive", path + "/window");
            require(d.refractory >= 0.0, "refractory must be >= 0", path + "/refractory");
            require(d.eval_period > 0.0, "eval_period must be positive", path + "/eval_period");
            require(d.report_bytes > 0, "report_bytes must be positive", path + "/report_bytes");
            s.sdccs.push_back(std::move(d));
        }
        check_unique(s.sdccs, [](const SdccSpec& d) { return d.id; }, "sdcc", "/sdccs");
    }

    {
        const auto& arr = top.array("sensors");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string path = "/sensors/" + std::to_string(i);
            Reader r(arr[i], path);
            SensorSpec n;
            n.id = static_cast<int>(r.integer("id"));
            n.position = parse_position(r.raw("position"), path + "/position");
            n.modality = parse_enum<Modality>(r.string("modality", "acoustic"), parse_modality, path + "/modality",
                                              "modality");
            n.threshold = r.number("threshold", n.threshold);
            n.period = r.number("period", n.period);
            n.sdcc = static_cast<int>(r.integer("sdcc"));
            r.finish();
            require(n.threshold > 0.0, "threshold must be positive", path + "/threshold");
            require(n.period > 0.0, "period must be positive", path + "/period");
            require(s.sdcc(n.sdcc) != nullptr, "unknown sdcc " + std::to_string(n.sdcc), path + "/sdcc");
            s.sensors.push_back(n);
        }
        check_unique(s.sensors, [](const SensorSpec& n) { return n.id; }, "sensor", "/sensors");
    }

    if (top.has("sensor_failures")) {
        const auto& arr = top.array("sensor_failures");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string path = "/sensor_failures/" + std::to_string(i);
            Reader r(arr[i], path);
            SensorFailureSpec f;
            f.sensor = static_cast<int>(r.integer("sensor"));
            f.at = r.number("at");
            r.finish();
            require(f.at >= 0.0, "failure time must be >= 0", path + "/at");
            bool exists = std::any_of(s.sensors.begin(), s.sensors.end(),
                                      [&](const SensorSpec& n) { return n.id == f.sensor; });
            require(exists, "unknown sensor " + std::to_string(f.sensor), path + "/sensor");
            s.sensor_failures.push_back(f);
        }
    }

    {
        const auto& arr = top.array("cdcs");
        require(!arr.empty(), "at least one CDC is required", "/cdcs");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string path = "/cdcs/" + std::to_string(i);
            Reader r(arr[i], path);
            CdcSpec c;
            c.id = static_cast<int>(r.integer("id"));
            c.reference_db = parse_history_list(r, "reference_db");
            c.similarity_threshold = r.number("similarity_threshold", c.similarity_threshold);
            r.finish();
            require(c.similarity_threshold > 0.0 && c.similarity_threshold <= 1.0,
                    "similarity_threshold must be in (0, 1]", path + "/similarity_threshold");
            s.cdcs.push_back(std::move(c));
        }
        check_unique(s.cdcs, [](const CdcSpec& c) { return c.id; }, "cdc", "/cdcs");
    }

    {
        const auto& arr = top.array("dpcs");
        require(!arr.empty(), "at least one DPC is required", "/dpcs");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string path = "/dpcs/" + std::to_string(i);
            Reader r(arr[i], path);
            DpcSpec d;
            d.id = static_cast<int>(r.integer("id"));
            d.area = r.string("area");
            known_area(d.area, path + "/area");
            d.position = parse_position(r.raw("position"), path + "/position");
            d.confidence_threshold = r.number("confidence_threshold", d.confidence_threshold);
            d.max_reprocess = static_cast<int>(r.integer("max_reprocess", d.max_reprocess));
            d.reprocess_wait = r.number("reprocess_wait", d.reprocess_wait);
            d.processing_delay = r.number("processing_delay", d.processing_delay);
            d.history = parse_history_list(r, "history");
            if (r.has("peers"))
                for (const auto& p : r.array("peers")) {
                    require(p.is_number_integer(), "peer ids are integers", path + "/peers");
                    d.peers.push_back(p.get<int>());
                }
            d.cdc = static_cast<int>(r.integer("cdc", s.cdcs.front().id));
            r.finish();
            require(d.confidence_threshold > 0.0 && d.confidence_threshold <= 1.0,
                    "confidence_threshold must be in (0, 1]", path + "/confidence_threshold");
            require(d.max_reprocess >= 0, "max_reprocess must be >= 0", path + "/max_reprocess");
            require(d.reprocess_wait > 0.0, "reprocess_wait must be positive", path + "/reprocess_wait");
            require(d.processing_delay >= 0.0, "processing_delay must be >= 0", path + "/processing_delay");
            bool cdc_ok = std::any_of(s.cdcs.begin(), s.cdcs.end(), [&](const CdcSpec& c) { return c.id == d.cdc; });
            require(cdc_ok, "unknown cdc " + std::to_string(d.cdc), path + "/cdc");
            s.dpcs.push_back(std::move(d));
        }
        check_unique(s.dpcs, [](const DpcSpec& d) { return d.id; }, "dpc", "/dpcs");
        for (std::size_t i = 0; i < s.dpcs.size(); ++i)
            for (int p : s.dpcs[i].peers)
                require(s.dpc(p) != nullptr && p != s.dpcs[i].id, "invalid peer " + std::to_string(p),
                        "/dpcs/" + std::to_string(i) + "/peers");
    }

    if (top.has("maps")) {
        const auto& v = top.raw("maps");
        if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i)
                s.maps.push_back(parse_map(v[i], "/maps/" + std::to_string(i), false));
            if (!s.maps.empty())
                check_unique(s.maps, [](const MapSpec& m) { return m.id; }, "map", "/maps");
        } else if (v.is_object()) {
            Reader r(v, "/maps");
            MapFleetSpec f;
            f.count = static_cast<int>(r.integer("count"));
            f.prototype = parse_map(r.raw("prototype"), "/maps/prototype", true);
            r.finish();
            require(f.count >= 0, "fleet count must be >= 0", "/maps/count");
            s.fleet = std::move(f);
        } else {
            throw ParseError("maps must be an array or a fleet object", "/maps");
        }
        auto check_map_area = [&](const MapSpec& m, const std::string& path) {
            if (m.area.empty())
                require(s.areas.size() == 1, "map area is required when there are several areas", path + "/area");
            else
                known_area(m.area, path + "/area");
        };
        if (s.fleet)
            check_map_area(s.fleet->prototype, "/maps/prototype");
        for (std::size_t i = 0; i < s.maps.size(); ++i)
            check_map_area(s.maps[i], "/maps/" + std::to_string(i));
    }

    {
        const json empty = json::object();
        Reader r(top.has("dcc") ? top.raw("dcc") : empty, "/dcc");
        s.dcc.id = static_cast<int>(r.integer("id", s.dcc.id));
        s.dcc.sms_rate = r.number("sms_rate", s.dcc.sms_rate);
        s.dcc.sms_base_latency = r.number("sms_base_latency", s.dcc.sms_base_latency);
        s.dcc.sms = r.boolean("sms", s.dcc.sms);
        s.dcc.internet_messaging = r.boolean("internet_messaging", s.dcc.internet_messaging);
        r.finish();
        require(s.dcc.sms_rate > 0.0, "sms_rate must be positive", "/dcc/sms_rate");
        require(s.dcc.sms_base_latency >= 0.0, "sms_base_latency must be >= 0", "/dcc/sms_base_latency");
    }

    if (top.has("pairs")) {
        const auto& arr = top.array("pairs");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string path = "/pairs/" + std::to_string(i);
            Reader r(arr[i], path);
            int sd = static_cast<int>(r.integer("sdcc"));
            int dp = static_cast<int>(r.integer("dpc"));
            r.finish();
            require(s.sdcc(sd) != nullptr, "unknown sdcc " + std::to_string(sd), path + "/sdcc");
            require(s.dpc(dp) != nullptr, "unknown dpc " + std::to_string(dp), path + "/dpc");
            s.pairs.emplace_back(sd, dp);
        }
    } else {
        for (const auto& sd : s.sdccs)
            for (const auto& dp : s.dpcs)
                if (dp.area == sd.area)
                    s.pairs.emplace_back(sd.id, dp.id);
    }

    if (top.has("hazard")) {
        Reader r(top.raw("hazard"), "/hazard");
        s.hazard.background_noise_sigma = r.number("noise_sigma", 0.0);
        require(s.hazard.background_noise_sigma >= 0.0, "noise_sigma must be >= 0", "/hazard/noise_sigma");
        if (r.has("events")) {
            const auto& arr = r.array("events");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                std::string path = "/hazard/events/" + std::to_string(i);
                Reader e(arr[i], path);
                HazardEvent ev;
                ev.id = e.string("id");
                ev.kind = parse_enum<HazardKind>(e.string("kind"), parse_hazard_kind, path + "/kind", "hazard kind");
                ev.epicenter = parse_position(e.raw("epicenter"), path + "/epicenter");
                ev.radius = e.number("radius");
                ev.onset = e.number("onset");
                ev.duration = e.number("duration");
                ev.peak_intensity = e.number("peak");
                ev.severity = parse_enum<Severity>(e.string("severity", "routine"), parse_severity,
                                                   path + "/severity", "severity");
                ev.ground_truth_warnable = e.boolean("warnable", ev.kind != HazardKind::false_spike);
                e.finish();
                require(ev.radius > 0.0, "radius must be positive", path + "/radius");
                require(ev.duration > 0.0, "duration must be positive", path + "/duration");
                require(ev.onset >= 0.0, "onset must be >= 0", path + "/onset");
                require(ev.peak_intensity >= 0.0, "peak must be >= 0", path + "/peak");
                require(!(ev.kind == HazardKind::false_spike && ev.ground_truth_warnable),
                        "false_spike events cannot be warnable", path + "/warnable");
                s.hazard.events.push_back(std::move(ev));
            }
            if (!s.hazard.events.empty())
                check_unique(s.hazard.events, [](const HazardEvent& e) { return e.id; }, "hazard event",
                             "/hazard/events");
        }
        if (r.has("severity_cuts")) {
            Reader c(r.raw("severity_cuts"), "/hazard/severity_cuts");
            for (std::size_t k = 0; k < kHazardKindCount; ++k) {
                auto kind = static_cast<HazardKind>(k);
                std::string key(to_string(kind));
                if (!c.has(key))
                    continue;
                const auto& v = c.raw(key);
                std::string path = "/hazard/severity_cuts/" + key;
                if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                    throw ParseError("expected [urgent, emergency]", path);
                SeverityCuts cuts{v[0].get<double>(), v[1].get<double>()};
                require(cuts.urgent >= 0.0 && cuts.urgent <= cuts.emergency, "cuts must satisfy 0 <= urgent <= emergency",
                        path);
                s.severity.set(kind, cuts);
            }
            c.finish();
        }
        if (r.has("kind_map")) {
            Reader c(r.raw("kind_map"), "/hazard/kind_map");
            for (std::size_t m = 0; m < kModalityCount; ++m) {
                auto modality = static_cast<Modality>(m);
                std::string key(to_string(modality));
                if (!c.has(key))
                    continue;
                s.kind_map[modality] = parse_enum<HazardKind>(c.string(key), parse_hazard_kind,
                                                              "/hazard/kind_map/" + key, "hazard kind");
            }
            c.finish();
        }
        r.finish();
    }

    if (top.has("timing")) {
        Reader r(top.raw("timing"), "/timing");
        auto& t = s.timing;
        t.contact_tick = r.number("contact_tick", t.contact_tick);
        t.inter_dpc_latency = r.number("inter_dpc_latency", t.inter_dpc_latency);
        t.dpc_cdc_latency = r.number("dpc_cdc_latency", t.dpc_cdc_latency);
        t.cdc_dcc_latency = r.number("cdc_dcc_latency", t.cdc_dcc_latency);
        t.emergency_latency = r.number("emergency_latency", t.emergency_latency);
        r.finish();
        require(t.contact_tick > 0.0, "contact_tick must be positive", "/timing/contact_tick");
        for (double v : {t.inter_dpc_latency, t.dpc_cdc_latency, t.cdc_dcc_latency, t.emergency_latency})
            require(v >= 0.0, "latencies must be >= 0", "/timing");
    }

    if (top.has("clustering")) {
        Reader r(top.raw("clustering"), "/clustering");
        s.clustering.k_per_cluster = static_cast<int>(r.integer("k_per_cluster", s.clustering.k_per_cluster));
        s.clustering.hop_delay = r.number("hop_delay", s.clustering.hop_delay);
        r.finish();
        require(s.clustering.k_per_cluster >= 1, "k_per_cluster must be >= 1", "/clustering/k_per_cluster");
        require(s.clustering.hop_delay >= 0.0, "hop_delay must be >= 0", "/clustering/hop_delay");
    }

    if (top.has("validation")) {
        Reader r(top.raw("validation"), "/validation");
        s.cdc_dominance_factor = r.number("cdc_dominance_factor", s.cdc_dominance_factor);
        r.finish();
        require(s.cdc_dominance_factor > 0.0, "cdc_dominance_factor must be positive",
                "/validation/cdc_dominance_factor");
    }

    top.finish();
    return s;
}

Scenario parse_scenario(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), "", line_of(text, e.byte));
    }
    return scenario_from_json(doc);
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open scenario " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

namespace {

ordered_json position_json(const Position& p)
{
    return ordered_json::array({p.x, p.y});
}

ordered_json radio_json(const RadioProfile& r)
{
    ordered_json j;
    j["standard"] = std::string(to_string(r.standard));
    j["range"] = r.range;
    j["efficiency"] = r.efficiency;
    return j;
}

ordered_json history_json(const std::vector<HistoryRecord>& list)
{
    ordered_json arr = ordered_json::array();
    for (const auto& h : list) {
        ordered_json j;
        j["area"] = h.area;
        j["kind"] = std::string(to_string(h.kind));
        j["intensity"] = h.intensity;
        j["year"] = h.year_tag;
        j["outcome"] = std::string(to_string(h.outcome));
        arr.push_back(std::move(j));
    }
    return arr;
}

ordered_json map_json(const MapSpec& m, bool in_fleet)
{
    ordered_json j;
    if (!in_fleet)
        j["id"] = m.id;
    j["area"] = m.area;
    ordered_json route = ordered_json::array();
    for (const auto& p : m.route)
        route.push_back(position_json(p));
    j["route"] = std::move(route);
    j["speed"] = m.speed;
    if (!in_fleet)
        j["phase_offset"] = m.phase_offset;
    j["capacity"] = m.capacity;
    j["radio"] = radio_json(m.radio);
    j["jitter"] = m.jitter;
    return j;
}

} // namespace

ordered_json scenario_to_json(const Scenario& s)
{
    ordered_json j;
    j["schema"] = kScenarioSchema;
    j["seed"] = s.seed;
    j["duration"] = s.duration;
    j["delta"] = s.delta;
    j["region"] = {{"min", position_json(s.region.min)}, {"max", position_json(s.region.max)}};

    ordered_json areas = ordered_json::array();
    for (const auto& a : s.areas) {
        ordered_json x;
        x["id"] = a.id;
        x["radio"] = radio_json(a.radio);
        x["subscribers"] = a.subscribers;
        areas.push_back(std::move(x));
    }
    j["areas"] = std::move(areas);

    ordered_json sdccs = ordered_json::array();
    for (const auto& d : s.sdccs) {
        ordered_json x;
        x["id"] = d.id;
        x["area"] = d.area;
        x["position"] = position_json(d.position);
        x["tau"] = d.tau;
        x["window"] = d.window;
        x["refractory"] = d.refractory;
        x["eval_period"] = d.eval_period;
        x["report_bytes"] = d.report_bytes;
        x["default_kind"] = std::string(to_string(d.default_kind));
        ordered_json recs = ordered_json::array();
        for (const auto& m : d.manual_records)
            recs.push_back(ordered_json{{"at", m.at}, {"label", m.label}, {"size_bytes", m.size_bytes}});
        x["manual_records"] = std::move(recs);
        sdccs.push_back(std::move(x));
    }
    j["sdccs"] = std::move(sdccs);

    ordered_json sensors = ordered_json::array();
    for (const auto& n : s.sensors) {
        ordered_json x;
        x["id"] = n.id;
        x["position"] = position_json(n.position);
        x["modality"] = std::string(to_string(n.modality));
        x["threshold"] = n.threshold;
        x["period"] = n.period;
        x["sdcc"] = n.sdcc;
        sensors.push_back(std::move(x));
    }
    j["sensors"] = std::move(sensors);

    ordered_json failures = ordered_json::array();
    for (const auto& f : s.sensor_failures)
        failures.push_back(ordered_json{{"sensor", f.sensor}, {"at", f.at}});
    j["sensor_failures"] = std::move(failures);

    if (s.fleet) {
        j["maps"] = ordered_json{{"count", s.fleet->count}, {"prototype", map_json(s.fleet->prototype, true)}};
    } else {
        ordered_json maps = ordered_json::array();
        for (const auto& m : s.maps)
            maps.push_back(map_json(m, false));
        j["maps"] = std::move(maps);
    }

    ordered_json dpcs = ordered_json::array();
    for (const auto& d : s.dpcs) {
        ordered_json x;
        x["id"] = d.id;
        x["area"] = d.area;
        x["position"] = position_json(d.position);
        x["confidence_threshold"] = d.confidence_threshold;
        x["max_reprocess"] = d.max_reprocess;
        x["reprocess_wait"] = d.reprocess_wait;
        x["processing_delay"] = d.processing_delay;
        x["history"] = history_json(d.history);
        x["peers"] = d.peers;
        x["cdc"] = d.cdc;
        dpcs.push_back(std::move(x));
    }
    j["dpcs"] = std::move(dpcs);

    ordered_json cdcs = ordered_json::array();
    for (const auto& c : s.cdcs) {
        ordered_json x;
        x["id"] = c.id;
        x["reference_db"] = history_json(c.reference_db);
        x["similarity_threshold"] = c.similarity_threshold;
        cdcs.push_back(std::move(x));
    }
    j["cdcs"] = std::move(cdcs);

    j["dcc"] = {{"id", s.dcc.id},
                {"sms_rate", s.dcc.sms_rate},
                {"sms_base_latency", s.dcc.sms_base_latency},
                {"sms", s.dcc.sms},
                {"internet_messaging", s.dcc.internet_messaging}};

    ordered_json pairs = ordered_json::array();
    for (const auto& [sd, dp] : s.pairs)
        pairs.push_back(ordered_json{{"sdcc", sd}, {"dpc", dp}});
    j["pairs"] = std::move(pairs);

    ordered_json hazard;
    hazard["noise_sigma"] = s.hazard.background_noise_sigma;
    ordered_json events = ordered_json::array();
    for (const auto& e : s.hazard.events) {
        ordered_json x;
        x["id"] = e.id;
        x["kind"] = std::string(to_string(e.kind));
        x["epicenter"] = position_json(e.epicenter);
        x["radius"] = e.radius;
        x["onset"] = e.onset;
        x["duration"] = e.duration;
        x["peak"] = e.peak_intensity;
        x["severity"] = std::string(to_string(e.severity));
        x["warnable"] = e.ground_truth_warnable;
        events.push_back(std::move(x));
    }
    hazard["events"] = std::move(events);
    ordered_json cuts;
    for (std::size_t k = 0; k < kHazardKindCount; ++k) {
        auto kind = static_cast<HazardKind>(k);
        const auto& c = s.severity.cuts(kind);
        cuts[std::string(to_string(kind))] = ordered_json::array({c.urgent, c.emergency});
    }
    hazard["severity_cuts"] = std::move(cuts);
    ordered_json kinds = ordered_json::object();
    for (const auto& [m, k] : s.kind_map)
        kinds[std::string(to_string(m))] = std::string(to_string(k));
    hazard["kind_map"] = std::move(kinds);
    j["hazard"] = std::move(hazard);

    j["timing"] = {{"contact_tick", s.timing.contact_tick},
                   {"inter_dpc_latency", s.timing.inter_dpc_latency},
                   {"dpc_cdc_latency", s.timing.dpc_cdc_latency},
                   {"cdc_dcc_latency", s.timing.cdc_dcc_latency},
                   {"emergency_latency", s.timing.emergency_latency}};
    j["clustering"] = {{"k_per_cluster", s.clustering.k_per_cluster}, {"hop_delay", s.clustering.hop_delay}};
    j["validation"] = {{"cdc_dominance_factor", s.cdc_dominance_factor}};
    return j;
}

std::string emit_scenario(const Scenario& s)
{
    return scenario_to_json(s).dump(2) + "\n";
}

Violations validate_scenario(const Scenario& s)
{
    Violations out;

    for (const auto& d : s.sdccs) {
        auto n = std::count_if(s.sensors.begin(), s.sensors.end(), [&](const SensorSpec& x) { return x.sdcc == d.id; });
        if (d.tau > n)
            out.push_back(Violation{condition::tau_exceeds_sensors,
                                    "sdcc " + std::to_string(d.id) + ": tau " + std::to_string(d.tau)
                                        + " exceeds its " + std::to_string(n) + " deployed sensors"});
    }

    const auto maps = expanded_maps(s);
    std::vector<FleetCounts> fleet;
    for (const auto& a : s.areas) {
        FleetCounts fc;
        fc.area = a.id;
        fc.maps = static_cast<int>(std::count_if(maps.begin(), maps.end(), [&](const MapSpec& m) { return m.area == a.id; }));
        fc.sdccs = static_cast<int>(std::count_if(s.sdccs.begin(), s.sdccs.end(), [&](const SdccSpec& d) { return d.area == a.id; }));
        fc.dpcs = static_cast<int>(std::count_if(s.dpcs.begin(), s.dpcs.end(), [&](const DpcSpec& d) { return d.area == a.id; }));
        fc.ferry_required = false;
        for (const auto& [sd, dp] : s.pairs) {
            const auto* sdcc = s.sdcc(sd);
            const auto* dpc = s.dpc(dp);
            if (sdcc && dpc && (sdcc->area == a.id || dpc->area == a.id)
                && needs_ferry(sdcc->position, dpc->position, s.delta))
                fc.ferry_required = true;
        }
        fleet.push_back(fc);
    }
    auto fleet_violations = validate_fleet(fleet);
    out.insert(out.end(), fleet_violations.begin(), fleet_violations.end());

    auto cdc_violations = validate_cdc_count(static_cast<int>(s.dpcs.size()), static_cast<int>(s.cdcs.size()),
                                             s.cdc_dominance_factor);
    out.insert(out.end(), cdc_violations.begin(), cdc_violations.end());

    auto outside = [&](const Position& p, const std::string& what) {
        if (!s.region.contains(p)) {
            std::ostringstream msg;
            msg << what << " at (" << p.x << ", " << p.y << ") lies outside the region";
            out.push_back(Violation{condition::containment, msg.str()});
        }
    };
    for (const auto& n : s.sensors)
        outside(n.position, "sensor " + std::to_string(n.id));
    for (const auto& d : s.sdccs)
        outside(d.position, "sdcc " + std::to_string(d.id));
    for (const auto& d : s.dpcs)
        outside(d.position, "dpc " + std::to_string(d.id));
    std::vector<MapSpec> declared = s.maps;
    if (s.fleet) {
        declared.push_back(s.fleet->prototype);
    }
    for (const auto& m : declared)
        for (const auto& p : m.route)
            outside(p, "waypoint of map " + (s.fleet ? std::string("fleet") : std::to_string(m.id)));

    for (const auto& d : s.sdccs) {
        bool paired = std::any_of(s.pairs.begin(), s.pairs.end(), [&](const auto& pr) { return pr.first == d.id; });
        if (!paired)
            out.push_back(Violation{condition::pairing, "sdcc " + std::to_string(d.id) + " has no paired DPC"});
    }
    return out;
}

nlohmann::json::json_pointer scenario_path(std::string_view dotted)
{
    if (!dotted.empty() && dotted.front() == '/')
        return nlohmann::json::json_pointer(std::string(dotted));
    std::string pointer;
    std::string token;
    auto flush = [&] {
        if (token.empty())
            throw ParseError("empty path segment in \"" + std::string(dotted) + "\"");
        pointer += "/" + token;
        token.clear();
    };
    for (std::size_t i = 0; i < dotted.size(); ++i) {
        char c = dotted[i];
        if (c == '.') {
            flush();
        } else if (c == '[') {
            flush();
            auto close = dotted.find(']', i);
            if (close == std::string_view::npos || close == i + 1)
                throw ParseError("unterminated index in \"" + std::string(dotted) + "\"");
            token = std::string(dotted.substr(i + 1, close - i - 1));
            for (char d : token)
                if (d < '0' || d > '9')
                    throw ParseError("non-numeric index in \"" + std::string(dotted) + "\"");
            flush();
            i = close;
            if (i + 1 < dotted.size() && dotted[i + 1] == '.')
                ++i;
        } else {
            token += c;
        }
    }
    if (!token.empty())
        flush();
    if (pointer.empty())
        throw ParseError("empty parameter path");
    return nlohmann::json::json_pointer(pointer);
}

} // namespace dmcis
