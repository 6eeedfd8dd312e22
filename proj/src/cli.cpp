#include "cyborgnav/cli.hpp"

#include "cyborgnav/config.hpp"
#include "cyborgnav/errors.hpp"
#include "cyborgnav/markers.hpp"
#include "cyborgnav/svg.hpp"
#include "cyborgnav/trial_log.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace cyborgnav {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v, int decimals = 4)
{
    if (!std::isfinite(v))
        return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

void write_text(const fs::path& file, const std::string& content)
{
    if (file.has_parent_path())
        fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + file.string());
    out << content;
    out.flush();
    if (!out)
        throw IoError("cannot write " + file.string());
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create directory " + dir.string());
}

ConfigDocument config_from(const std::string& path)
{
    return path.empty() ? ConfigDocument{} : load_config(path);
}

std::string log_name(int beetle, double kp, double tu, int trial)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "b%02d_kp%.2f_tu%.2f_t%02d.jsonl", beetle, kp, tu, trial);
    return buf;
}

std::vector<fs::path> log_files(const fs::path& dir)
{
    if (!fs::is_directory(dir))
        throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".jsonl")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw DataError("no .jsonl logs under " + dir.string());
    return files;
}

// Weighted merge of per-session attenuation reports.
struct AttenuationTotals
{
    double first_ok = 0, first_n = 0, last_ok = 0, last_n = 0;
    double first_turn_sum = 0, first_turns = 0, last_turn_sum = 0, last_turns = 0;
    std::vector<double> group_sum, group_n;

    void add(const AttenuationReport& r)
    {
        if (r.first4_success_pct) {
            first_ok += *r.first4_success_pct / 100.0 * static_cast<double>(r.first4_trials);
            first_n += static_cast<double>(r.first4_trials);
        }
        if (r.last4_success_pct) {
            last_ok += *r.last4_success_pct / 100.0 * static_cast<double>(r.last4_trials);
            last_n += static_cast<double>(r.last4_trials);
        }
        if (r.first4_turn_mean) {
            first_turn_sum += *r.first4_turn_mean * static_cast<double>(r.first4_turns);
            first_turns += static_cast<double>(r.first4_turns);
        }
        if (r.last4_turn_mean) {
            last_turn_sum += *r.last4_turn_mean * static_cast<double>(r.last4_turns);
            last_turns += static_cast<double>(r.last4_turns);
        }
        for (std::size_t g = 0; g < r.thrust_group_means.size(); ++g) {
            if (group_sum.size() <= g) {
                group_sum.resize(g + 1, 0.0);
                group_n.resize(g + 1, 0.0);
            }
            if (r.thrust_group_sizes[g] == 0)
                continue;
            group_sum[g] += r.thrust_group_means[g] * static_cast<double>(r.thrust_group_sizes[g]);
            group_n[g] += static_cast<double>(r.thrust_group_sizes[g]);
        }
    }

    std::string csv() const
    {
        auto ratio = [](double a, double b) { return b > 0 ? a / b : std::nan(""); };
        std::string s = "measure,first4,last4\n";
        s += "success_rate_pct," + fmt(100.0 * ratio(first_ok, first_n), 2) + "," + fmt(100.0 * ratio(last_ok, last_n), 2) + "\n";
        s += "trials," + fmt(first_n, 0) + "," + fmt(last_n, 0) + "\n";
        s += "turn_deg_mean," + fmt(ratio(first_turn_sum, first_turns)) + "," + fmt(ratio(last_turn_sum, last_turns)) + "\n";
        s += "\nelytra_group,stimuli,thrust_boost_mms_mean\n";
        for (std::size_t g = 0; g < group_sum.size(); ++g)
            s += std::to_string(g + 1) + "," + fmt(group_n[g], 0) + "," + fmt(ratio(group_sum[g], group_n[g])) + "\n";
        return s;
    }
};

std::string turn_response_csv(const std::vector<InducedTurn>& turns)
{
    static const char* bins[] = {"10-16", "17-24", "25-32", "33-40"};
    std::string s = "bin_hz,antenna,n,removed,angle_deg_mean,angle_deg_sd\n";
    for (const auto& b : reconstruct_turn_response(turns)) {
        s += std::string(bins[b.bin]) + "," + (b.side == AntennaSide::left ? "left" : "right") + ",";
        if (b.stats)
            s += std::to_string(b.stats->n) + "," + std::to_string(b.stats->removed) + "," + fmt(b.stats->mean) + "," +
                 fmt(b.stats->sd) + "\n";
        else
            s += "0,0,,\n";
    }
    return s;
}

struct Options
{
    std::string config;
    std::string out;
    std::string logs;
    std::string input;
    std::optional<std::uint64_t> seed;
};

ConfigDocument seeded_config(const Options& o)
{
    ConfigDocument doc = config_from(o.config);
    doc.base.seed = resolve_seed(o.seed, std::getenv("CYBORGNAV_SEED"), doc.base.seed);
    return doc;
}

int cmd_simulate(const Options& o, std::ostream& out)
{
    const ConfigDocument doc = seeded_config(o);
    const TrialRecord r = flag_exclusions(run_trial(doc.base));
    if (o.out.empty())
        write_trial_log(out, r);
    else
        save_trial_log(o.out, r);
    return kExitOk;
}

int cmd_sweep(const Options& o)
{
    const ConfigDocument doc = seeded_config(o);
    doc.validate();
    const fs::path dir = o.out;
    ensure_dir(dir / "trials");

    std::vector<TrialEvaluation> evals;
    AttenuationTotals att;
    for_each_sweep_session(doc.base, doc.sweep, [&](SweepSession&& s) {
        for (const auto& r : s.trials) {
            save_trial_log(dir / "trials" / log_name(s.beetle, s.k_p, s.t_update, r.tag.trial_index), r);
            evals.push_back(evaluate_trial(r, doc.base.path));
        }
        const std::vector<TrialRecord>* one = &s.trials;
        att.add(attenuation_report(std::span(one, 1)));
    });
    const SweepSummary summary = summarize(evals);
    write_text(dir / "summary.csv", summary_csv(summary));
    write_text(dir / "histograms.csv", histogram_csv(summary));
    write_text(dir / "attenuation.csv", att.csv());
    write_text(dir / "config.json", serialize_config(doc));
    return kExitOk;
}

int cmd_analyze(const Options& o, std::ostream& out)
{
    const ConfigDocument doc = config_from(o.config);
    std::vector<TrialEvaluation> evals;
    for (const auto& f : log_files(o.logs))
        evals.push_back(evaluate_trial(load_trial_log(f), doc.base.path));
    const std::string csv = summary_csv(summarize(evals));
    if (o.out.empty())
        out << csv;
    else
        write_text(o.out, csv);
    return kExitOk;
}

int cmd_report(const Options& o)
{
    const ConfigDocument doc = config_from(o.config);
    const fs::path dir = o.out;
    ensure_dir(dir);

    std::vector<TrialEvaluation> evals;
    std::vector<InducedTurn> turns;
    AttenuationTotals att;
    std::map<std::pair<double, double>, std::vector<TrialRecord>> shown;  // successes, thinned frames
    std::vector<TrialRecord> session;
    auto same_session = [](const TrialTag& a, const TrialTag& b) {
        return a.beetle == b.beetle && a.k_p == b.k_p && a.t_update == b.t_update;
    };
    auto flush = [&] {
        if (!session.empty())
            att.add(attenuation_report(std::span(&session, 1)));
        session.clear();
    };

    for (const auto& f : log_files(o.logs)) {
        TrialRecord r = load_trial_log(f);
        evals.push_back(evaluate_trial(r, doc.base.path));
        if (!r.excluded) {
            const auto t = induced_turns(r);
            turns.insert(turns.end(), t.begin(), t.end());
        }
        if (!session.empty() && !same_session(session.front().tag, r.tag))
            flush();
        if (r.outcome == TerminationReason::success && !r.excluded) {
            TrialRecord thin;
            thin.tag = r.tag;
            for (std::size_t i = 0; i < r.frames.size(); i += 10)
                thin.frames.push_back(r.frames[i]);
            if (!r.frames.empty() && (r.frames.size() - 1) % 10 != 0)
                thin.frames.push_back(r.frames.back());
            shown[{r.tag.t_update, r.tag.k_p}].push_back(std::move(thin));
        }
        session.push_back(std::move(r));
    }
    flush();

    const SweepSummary summary = summarize(evals);
    write_text(dir / "summary.csv", summary_csv(summary));
    write_text(dir / "histograms.csv", histogram_csv(summary));
    write_text(dir / "turn_response.csv", turn_response_csv(turns));
    write_text(dir / "attenuation.csv", att.csv());
    for (const auto& h : summary.histograms) {
        char name[64];
        std::snprintf(name, sizeof name, "histogram_kp%.2f.svg", h.k_p);
        char title[96];
        std::snprintf(title, sizeof title, "Stimulation frequencies, Kp = %.2f (median %s Hz)", h.k_p,
                      h.median ? fmt(*h.median, 1).c_str() : "n/a");
        write_text(dir / name, histogram_svg(h, title));
    }
    for (const auto& [key, recs] : shown) {
        char name[64];
        std::snprintf(name, sizeof name, "trajectories_tu%.2f_kp%.2f.svg", key.first, key.second);
        char title[96];
        std::snprintf(title, sizeof title, "Successful trials, t_update = %.1f s, Kp = %.2f (n = %zu)", key.first,
                      key.second, recs.size());
        write_text(dir / name, trajectory_svg(recs, doc.base.path, doc.base.arena, title, 1));
    }
    return kExitOk;
}

int cmd_ingest(const Options& o, std::ostream& out)
{
    const ConfigDocument doc = config_from(o.config);
    TrialRecord r = record_from_frames(ingest_marker_file(o.input, doc.markers), doc.base.path, doc.base.arena);
    if (o.out.empty())
        write_trial_log(out, r);
    else
        save_trial_log(o.out, r);
    return kExitOk;
}

}  // namespace

std::string summary_csv(const SweepSummary& summary)
{
    std::string s =
        "t_update_s,kp,success_rate_pct,tracking_error_mm_mean,tracking_error_mm_sd,nav_time_s_mean,nav_time_s_sd,"
        "effort_mean,effort_sd,dist_mm_mean,dist_mm_sd,speed_mms_mean,speed_mms_sd\n";
    for (const auto& r : summary.rows) {
        s += fmt(r.t_update, 2) + "," + fmt(r.k_p, 2) + "," + fmt(r.success_rate, 2);
        for (const MeanSd* m : {&r.tracking_error, &r.navigation_time, &r.control_effort, &r.distance, &r.speed}) {
            s += "," + fmt(m->mean);
            s += "," + (m->n > 1 ? fmt(m->sd) : std::string());
        }
        s += "\n";
    }
    return s;
}

std::string histogram_csv(const SweepSummary& summary)
{
    std::string s = "kp,bin_lo_hz,bin_hi_hz,count,share,median_hz\n";
    for (const auto& h : summary.histograms)
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            const double share = h.total ? static_cast<double>(h.counts[i]) / static_cast<double>(h.total) : 0.0;
            s += fmt(h.k_p, 2) + "," + fmt(h.edges[i], 2) + "," + fmt(h.edges[i + 1], 2) + "," +
                 std::to_string(h.counts[i]) + "," + fmt(share, 6) + "," + (h.median ? fmt(*h.median, 4) : "") + "\n";
        }
    return s;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env, std::uint64_t config_seed)
{
    if (flag)
        return *flag;
    if (env && *env) {
        const std::string_view v(env);
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
        if (ec != std::errc{} || ptr != v.data() + v.size())
            throw ConfigError("CYBORGNAV_SEED must be an unsigned integer");
        return seed;
    }
    return config_seed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Closed-loop navigation simulator for stimulus-steered walking insects", "cyborgnav"};
    app.require_subcommand(1);
    Options o;

    auto* simulate = app.add_subcommand("simulate", "run one trial and write its JSONL log");
    simulate->add_option("--config", o.config, "config JSON (defaults when omitted)");
    simulate->add_option("--seed", o.seed, "master seed, overrides CYBORGNAV_SEED and the config");
    simulate->add_option("--out", o.out, "output .jsonl (stdout when omitted)");

    auto* sweep = app.add_subcommand("sweep", "run the Kp x t_update grid; logs plus summary.csv");
    sweep->add_option("--config", o.config, "config JSON (defaults when omitted)");
    sweep->add_option("--seed", o.seed, "master seed, overrides CYBORGNAV_SEED and the config");
    sweep->add_option("--out", o.out, "output directory")->required();

    auto* analyze = app.add_subcommand("analyze", "summarize a directory of JSONL logs as CSV");
    analyze->add_option("--logs", o.logs, "directory searched recursively for .jsonl")->required();
    analyze->add_option("--config", o.config, "config JSON for the path geometry");
    analyze->add_option("--out", o.out, "output CSV (stdout when omitted)");

    auto* report = app.add_subcommand("report", "CSV tables and SVG plots from JSONL logs");
    report->add_option("--logs", o.logs, "directory searched recursively for .jsonl")->required();
    report->add_option("--config", o.config, "config JSON for path and arena geometry");
    report->add_option("--out", o.out, "output directory")->required();

    auto* ingest = app.add_subcommand("ingest", "convert a marker CSV into a JSONL log");
    ingest->add_option("--input", o.input, "marker CSV")->required();
    ingest->add_option("--config", o.config, "config JSON (marker rig, path, arena)");
    ingest->add_option("--out", o.out, "output .jsonl (stdout when omitted)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitInvalid;
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(o, out);
        if (sweep->parsed())
            return cmd_sweep(o);
        if (analyze->parsed())
            return cmd_analyze(o, out);
        if (report->parsed())
            return cmd_report(o);
        return cmd_ingest(o, out);
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitInvalid;
    }
}

int run_cli(int argc, char** argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace cyborgnav
