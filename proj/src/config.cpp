#include "cyborgnav/config.hpp"

#include "cyborgnav/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace cyborgnav {

using nlohmann::json;

void MarkerRig::validate() const
{
    if (front_marker < 0 || front_marker > 2)
        throw ConfigError("markers.front_marker must be 0, 1 or 2");
}

void ConfigDocument::validate() const
{
    base.validate();
    sweep.validate();
    markers.validate();
}

namespace {

// Reads the keys of one JSON object and complains about the ones nobody asked for.
class Section
{
public:
    Section(const json& parent, std::string name) : name_(std::move(name))
    {
        const auto it = parent.find(name_);
        if (it == parent.end())
            return;
        if (!it->is_object())
            throw ConfigError("section \"" + name_ + "\" must be an object");
        obj_ = &*it;
    }

    Section(const json& obj, std::string name, bool) : name_(std::move(name))
    {
        if (!obj.is_object())
            throw ConfigError("\"" + name_ + "\" must be an object");
        obj_ = &obj;
    }

    const json* find(const std::string& key)
    {
        seen_.insert(key);
        if (!obj_)
            return nullptr;
        const auto it = obj_->find(key);
        return it == obj_->end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number())
                throw ConfigError(where(key) + " must be a number");
            out = v->get<double>();
        }
    }

    template <class Int>
    void integer(const std::string& key, Int& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number_integer())
                throw ConfigError(where(key) + " must be an integer");
            if constexpr (std::is_unsigned_v<Int>) {
                if (!v->is_number_unsigned())
                    throw ConfigError(where(key) + " must be non-negative");
            }
            out = v->get<Int>();
        }
    }

    void boolean(const std::string& key, bool& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_boolean())
                throw ConfigError(where(key) + " must be true or false");
            out = v->get<bool>();
        }
    }

    template <class Enum, class Parse>
    void enumeration(const std::string& key, Enum& out, Parse parse)
    {
        if (const json* v = find(key)) {
            if (!v->is_string())
                throw ConfigError(where(key) + " must be a string");
            const auto e = parse(v->get<std::string>());
            if (!e)
                throw ConfigError(where(key) + ": unknown value \"" + v->get<std::string>() + "\"");
            out = *e;
        }
    }

    void numbers(const std::string& key, std::vector<double>& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_array())
                throw ConfigError(where(key) + " must be an array of numbers");
            std::vector<double> xs;
            for (const auto& x : *v) {
                if (!x.is_number())
                    throw ConfigError(where(key) + " must be an array of numbers");
                xs.push_back(x.get<double>());
            }
            out = std::move(xs);
        }
    }

    void finish() const
    {
        if (!obj_)
            return;
        for (const auto& item : obj_->items())
            if (!seen_.contains(item.key()))
                throw ConfigError("unknown key \"" + name_ + "." + item.key() + "\"");
    }

    std::string where(const std::string& key) const { return name_ + "." + key; }

private:
    std::string name_;
    const json* obj_{nullptr};
    std::set<std::string> seen_;
};

void read_turn_row(const json* v, const std::string& where, std::array<TurnStats, 4>& row)
{
    if (!v)
        return;
    if (!v->is_array() || v->size() != row.size())
        throw ConfigError(where + " must be an array of four {mean, sd} objects");
    for (std::size_t i = 0; i < row.size(); ++i) {
        Section s((*v)[i], where + "[" + std::to_string(i) + "]", true);
        s.number("mean", row[i].mean);
        s.number("sd", row[i].sd);
        s.finish();
    }
}

json write_turn_row(const std::array<TurnStats, 4>& row)
{
    json a = json::array();
    for (const auto& t : row)
        a.push_back({{"mean", t.mean}, {"sd", t.sd}});
    return a;
}

}  // namespace

ConfigDocument parse_config(std::string_view text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object())
        throw ConfigError("top level must be a JSON object");

    static const std::set<std::string> sections{"path", "arena", "beetle", "controller", "trial", "sweep", "markers"};
    for (const auto& item : root.items())
        if (!sections.contains(item.key()))
            throw ConfigError("unknown section \"" + item.key() + "\"");

    ConfigDocument doc;
    TrialConfig& t = doc.base;

    Section path(root, "path");
    path.number("amplitude", t.path.amplitude);
    path.number("wavelength", t.path.wavelength);
    path.number("x_start", t.path.x_start);
    path.number("x_end", t.path.x_end);
    path.number("endpoint_radius", t.path.endpoint_radius);
    path.finish();

    Section arena(root, "arena");
    arena.number("width", t.arena.width);
    arena.number("height", t.arena.height);
    arena.finish();

    Section beetle(root, "beetle");
    BeetleParams& b = t.beetle;
    if (const json* table = beetle.find("turn_table")) {
        Section tt(*table, "beetle.turn_table", true);
        read_turn_row(tt.find("left"), "beetle.turn_table.left", b.turn_table.left);
        read_turn_row(tt.find("right"), "beetle.turn_table.right", b.turn_table.right);
        tt.finish();
    }
    beetle.number("thrust_gain", b.thrust_gain);
    beetle.number("thrust_sd_fraction", b.thrust_sd_fraction);
    beetle.number("ramp_time", b.ramp_time);
    beetle.number("free_speed_mean", b.free_speed_mean);
    beetle.number("free_speed_relaxation", b.free_speed_relaxation);
    beetle.number("free_speed_noise", b.free_speed_noise);
    beetle.number("free_heading_noise", b.free_heading_noise);
    beetle.number("escape_run_gain", b.escape_run_gain);
    beetle.number("turn_drift_sd", b.turn_drift_sd);
    beetle.number("turn_drift_time", b.turn_drift_time);
    beetle.number("turn_tail_time", b.turn_tail_time);
    beetle.number("attenuation_rate", b.attenuation_rate);
    beetle.number("attenuation_floor", b.attenuation_floor);
    beetle.number("attenuation_reference_hz", b.attenuation_reference_hz);
    beetle.boolean("noise", b.noise);
    beetle.finish();

    Section ctl(root, "controller");
    ControllerConfig& c = t.controller;
    ctl.number("k_p", c.k_p);
    ctl.number("t_update", c.t_update);
    ctl.number("theta_threshold", c.theta_threshold);
    ctl.number("f_min", c.f_min);
    ctl.number("f_max", c.f_max);
    ctl.number("antenna_duration_ms", c.antenna_duration);
    ctl.number("antenna_pulse_width_ms", c.antenna_pulse_width);
    ctl.number("elytra_frequency_hz", c.elytra_frequency);
    ctl.number("elytra_duration_ms", c.elytra_duration);
    ctl.number("elytra_duty_pct", c.elytra_duty);
    ctl.number("amplitude_v", c.amplitude);
    ctl.finish();

    Section trial(root, "trial");
    trial.number("lookahead", t.lookahead);
    trial.number("arrival_radius", t.arrival_radius);
    trial.enumeration("retarget", t.retarget, parse_retarget);
    trial.number("timeout", t.timeout);
    trial.number("frame_dt", t.frame_dt);
    trial.integer("seed", t.seed);
    trial.enumeration("direction", t.direction, parse_direction);
    trial.number("dropout_rate", t.dropout_rate);
    trial.number("heading_jitter", t.heading_jitter);
    trial.finish();

    Section sweep(root, "sweep");
    sweep.integer("beetles", doc.sweep.beetles);
    sweep.numbers("k_p", doc.sweep.k_p);
    sweep.numbers("t_update", doc.sweep.t_update);
    sweep.integer("trials_per_session", doc.sweep.trials_per_session);
    sweep.integer("threads", doc.sweep.threads);
    sweep.finish();

    Section markers(root, "markers");
    markers.integer("front_marker", doc.markers.front_marker);
    markers.finish();

    doc.validate();
    return doc;
}

std::string serialize_config(const ConfigDocument& doc)
{
    const TrialConfig& t = doc.base;
    const BeetleParams& b = t.beetle;
    const ControllerConfig& c = t.controller;

    json root = json::object();
    root["path"] = {{"amplitude", t.path.amplitude},
                    {"wavelength", t.path.wavelength},
                    {"x_start", t.path.x_start},
                    {"x_end", t.path.x_end},
                    {"endpoint_radius", t.path.endpoint_radius}};
    root["arena"] = {{"width", t.arena.width}, {"height", t.arena.height}};
    root["beetle"] = {{"turn_table",
                       {{"left", write_turn_row(b.turn_table.left)}, {"right", write_turn_row(b.turn_table.right)}}},
                      {"thrust_gain", b.thrust_gain},
                      {"thrust_sd_fraction", b.thrust_sd_fraction},
                      {"ramp_time", b.ramp_time},
                      {"free_speed_mean", b.free_speed_mean},
                      {"free_speed_relaxation", b.free_speed_relaxation},
                      {"free_speed_noise", b.free_speed_noise},
                      {"free_heading_noise", b.free_heading_noise},
                      {"escape_run_gain", b.escape_run_gain},
                      {"turn_drift_sd", b.turn_drift_sd},
                      {"turn_drift_time", b.turn_drift_time},
                      {"turn_tail_time", b.turn_tail_time},
                      {"attenuation_rate", b.attenuation_rate},
                      {"attenuation_floor", b.attenuation_floor},
                      {"attenuation_reference_hz", b.attenuation_reference_hz},
                      {"noise", b.noise}};
    root["controller"] = {{"k_p", c.k_p},
                          {"t_update", c.t_update},
                          {"theta_threshold", c.theta_threshold},
                          {"f_min", c.f_min},
                          {"f_max", c.f_max},
                          {"antenna_duration_ms", c.antenna_duration},
                          {"antenna_pulse_width_ms", c.antenna_pulse_width},
                          {"elytra_frequency_hz", c.elytra_frequency},
                          {"elytra_duration_ms", c.elytra_duration},
                          {"elytra_duty_pct", c.elytra_duty},
                          {"amplitude_v", c.amplitude}};
    root["trial"] = {{"lookahead", t.lookahead},
                     {"arrival_radius", t.arrival_radius},
                     {"retarget", std::string(to_string(t.retarget))},
                     {"timeout", t.timeout},
                     {"frame_dt", t.frame_dt},
                     {"seed", t.seed},
                     {"direction", std::string(to_string(t.direction))},
                     {"dropout_rate", t.dropout_rate},
                     {"heading_jitter", t.heading_jitter}};
    root["sweep"] = {{"beetles", doc.sweep.beetles},
                     {"k_p", doc.sweep.k_p},
                     {"t_update", doc.sweep.t_update},
                     {"trials_per_session", doc.sweep.trials_per_session},
                     {"threads", doc.sweep.threads}};
    root["markers"] = {{"front_marker", doc.markers.front_marker}};
    return root.dump(2) + "\n";
}

ConfigDocument load_config(const std::filesystem::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("cannot read " + file.string());
    return parse_config(buf.str());
}

}  // namespace cyborgnav
