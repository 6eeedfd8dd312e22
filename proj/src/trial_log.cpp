#include "cyborgnav/trial_log.hpp"

#include "cyborgnav/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cyborgnav {

using json = nlohmann::ordered_json;  // keeps the documented field order

namespace {

json meta_line(const TrialTag& tag)
{
    json j = json::object();
    j["type"] = "meta";
    j["kp"] = tag.k_p;
    j["t_update"] = tag.t_update;
    j["direction"] = std::string(to_string(tag.direction));
    j["seed"] = tag.seed;
    j["beetle"] = tag.beetle;
    j["trial_index"] = tag.trial_index;
    return j;
}

json frame_line(const Frame& f)
{
    json j = json::object();
    j["type"] = "frame";
    j["t"] = f.t;
    j["x"] = f.pose.x;
    j["y"] = f.pose.y;
    j["heading"] = f.pose.heading;
    j["tracked"] = f.tracked;
    return j;
}

json stim_line(const StimulusCommand& s)
{
    json j = json::object();
    j["type"] = "stim";
    j["t"] = s.timestamp_s;
    j["channel"] = std::string(to_string(s.channel));
    j["freq_hz"] = s.frequency_hz;
    j["dur_ms"] = s.duration_ms;
    j["amp_v"] = s.amplitude_v;
    j["pulse_ms"] = s.pulse_width_ms;
    j["duty_pct"] = s.duty_pct;
    return j;
}

json outcome_line(const TrialRecord& r)
{
    json j = json::object();
    j["type"] = "outcome";
    j["reason"] = std::string(to_string(r.outcome));
    j["excluded"] = r.excluded ? json(std::string(to_string(*r.excluded))) : json(nullptr);
    return j;
}

[[noreturn]] void malformed(std::size_t line, const std::string& why)
{
    throw DataError("malformed log: line " + std::to_string(line) + ": " + why);
}

double number(const json& j, const char* key, std::size_t line)
{
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number())
        malformed(line, std::string("missing number \"") + key + "\"");
    return it->get<double>();
}

std::string text(const json& j, const char* key, std::size_t line)
{
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string())
        malformed(line, std::string("missing string \"") + key + "\"");
    return it->get<std::string>();
}

}  // namespace

void write_trial_log(std::ostream& out, const TrialRecord& record)
{
    out << meta_line(record.tag).dump() << '\n';
    std::size_t s = 0;
    for (const auto& f : record.frames) {
        out << frame_line(f).dump() << '\n';
        // stimuli are issued on the frame whose time they carry
        while (s < record.stimuli.size() && record.stimuli[s].timestamp_s <= f.t) {
            out << stim_line(record.stimuli[s]).dump() << '\n';
            ++s;
        }
    }
    for (; s < record.stimuli.size(); ++s)
        out << stim_line(record.stimuli[s]).dump() << '\n';
    out << outcome_line(record).dump() << '\n';
}

std::string trial_log_string(const TrialRecord& record)
{
    std::ostringstream out;
    write_trial_log(out, record);
    return out.str();
}

TrialRecord read_trial_log(std::istream& in)
{
    TrialRecord r;
    bool have_outcome = false;
    bool any_line = false;
    double last_t = -std::numeric_limits<double>::infinity();
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (raw.empty() || raw == "\r")
            continue;
        json j;
        try {
            j = json::parse(raw);
        } catch (const json::parse_error&) {
            malformed(line, "not JSON");
        }
        if (!j.is_object())
            malformed(line, "not an object");
        if (have_outcome)
            malformed(line, "content after the outcome line");
        const std::string type = text(j, "type", line);

        if (type == "meta") {
            if (any_line)
                malformed(line, "meta must be the first line");
            if (j.contains("kp"))
                r.tag.k_p = number(j, "kp", line);
            if (j.contains("t_update"))
                r.tag.t_update = number(j, "t_update", line);
            if (j.contains("direction")) {
                const auto d = parse_direction(text(j, "direction", line));
                if (!d)
                    malformed(line, "unknown direction");
                r.tag.direction = *d;
            }
            if (j.contains("seed")) {
                if (!j["seed"].is_number_unsigned())
                    malformed(line, "seed must be a non-negative integer");
                r.tag.seed = j["seed"].get<std::uint64_t>();
            }
            if (j.contains("beetle")) {
                if (!j["beetle"].is_number_integer())
                    malformed(line, "beetle must be an integer");
                r.tag.beetle = j["beetle"].get<int>();
            }
            if (j.contains("trial_index")) {
                if (!j["trial_index"].is_number_integer())
                    malformed(line, "trial_index must be an integer");
                r.tag.trial_index = j["trial_index"].get<int>();
            }
        } else if (type == "frame") {
            Frame f;
            f.t = number(j, "t", line);
            f.pose.x = number(j, "x", line);
            f.pose.y = number(j, "y", line);
            f.pose.heading = number(j, "heading", line);
            const auto tr = j.find("tracked");
            if (tr == j.end() || !tr->is_boolean())
                malformed(line, "missing boolean \"tracked\"");
            f.tracked = tr->get<bool>();
            if (!r.frames.empty() && !(f.t > r.frames.back().t))
                malformed(line, "frame times must increase");
            if (f.t < last_t)
                malformed(line, "line out of time order");
            last_t = f.t;
            r.frames.push_back(f);
        } else if (type == "stim") {
            StimulusCommand s;
            s.timestamp_s = number(j, "t", line);
            const auto ch = parse_channel(text(j, "channel", line));
            if (!ch)
                malformed(line, "unknown channel");
            s.channel = *ch;
            s.frequency_hz = number(j, "freq_hz", line);
            s.duration_ms = number(j, "dur_ms", line);
            const bool antenna = is_antenna(s.channel);
            s.amplitude_v = j.contains("amp_v") ? number(j, "amp_v", line) : 2.5;
            s.pulse_width_ms = j.contains("pulse_ms") ? number(j, "pulse_ms", line) : (antenna ? 2.0 : 0.0);
            s.duty_pct = j.contains("duty_pct") ? number(j, "duty_pct", line) : (antenna ? 0.0 : 50.0);
            if (s.timestamp_s < last_t)
                malformed(line, "line out of time order");
            last_t = s.timestamp_s;
            r.stimuli.push_back(s);
        } else if (type == "outcome") {
            const auto reason = parse_termination(text(j, "reason", line));
            if (!reason)
                malformed(line, "unknown termination reason");
            r.outcome = *reason;
            const auto ex = j.find("excluded");
            if (ex != j.end() && !ex->is_null()) {
                if (!ex->is_string())
                    malformed(line, "excluded must be a string or null");
                const auto e = parse_exclusion(ex->get<std::string>());
                if (!e)
                    malformed(line, "unknown exclusion");
                r.excluded = *e;
            }
            have_outcome = true;
        } else {
            malformed(line, "unknown line type \"" + type + "\"");
        }
        any_line = true;
    }
    if (in.bad())
        throw IoError("read failed");
    if (!have_outcome)
        throw DataError("malformed log: no outcome line");
    return r;
}

TrialRecord read_trial_log_string(const std::string& text)
{
    std::istringstream in(text);
    return read_trial_log(in);
}

void save_trial_log(const std::filesystem::path& file, const TrialRecord& record)
{
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + file.string());
    write_trial_log(out, record);
    out.flush();
    if (!out)
        throw IoError("cannot write " + file.string());
}

TrialRecord load_trial_log(const std::filesystem::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + file.string());
    try {
        return read_trial_log(in);
    } catch (const DataError& e) {
        throw DataError(file.filename().string() + ": " + e.what());
    }
}

}  // namespace cyborgnav
