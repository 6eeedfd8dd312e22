#include "cyborgnav/metrics.hpp"

#include "cyborgnav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace cyborgnav {

namespace {

constexpr double kTimeEps = 1e-9;

/// Index of the sample nearest to `when`, if one lies within half a frame.
template <typename T, typename TimeOf>
std::optional<std::size_t> nearest_index(const std::vector<T>& items, double when, TimeOf time_of)
{
    if (items.empty())
        return std::nullopt;
    double tol = 0.5e-2;
    if (items.size() > 1)
        tol = 0.5 * (time_of(items.back()) - time_of(items.front())) / static_cast<double>(items.size() - 1);
    tol += kTimeEps;
    auto it = std::lower_bound(items.begin(), items.end(), when,
                               [&](const T& item, double w) { return time_of(item) < w; });
    std::optional<std::size_t> best;
    double best_gap = std::numeric_limits<double>::infinity();
    for (auto cand : {it, it == items.begin() ? it : std::prev(it)}) {
        if (cand == items.end())
            continue;
        const double gap = std::abs(time_of(*cand) - when);
        if (gap < best_gap) {
            best_gap = gap;
            best = static_cast<std::size_t>(cand - items.begin());
        }
    }
    if (best_gap > tol)
        return std::nullopt;
    return best;
}

double span_seconds(const TrialRecord& record)
{
    if (record.frames.size() < 2)
        return 0.0;
    return record.frames.back().t - record.frames.front().t;
}

void require_success(const TrialRecord& record)
{
    if (record.outcome != TerminationReason::success)
        throw DataError("metric undefined for failed trial");
}

/// Traveled length over elapsed time between the frames nearest a and b.
std::optional<double> raw_rate(const std::vector<Frame>& frames, double a, double b)
{
    auto time_of = [](const Frame& f) { return f.t; };
    const auto ia = nearest_index(frames, a, time_of);
    const auto ib = nearest_index(frames, b, time_of);
    if (!ia || !ib || *ib <= *ia)
        return std::nullopt;
    double length = 0.0;
    for (std::size_t j = *ia; j < *ib; ++j)
        length += distance(frames[j].pose.position(), frames[j + 1].pose.position());
    return length / (frames[*ib].t - frames[*ia].t);
}

}  // namespace

std::vector<TimedSample> moving_average(std::span<const TimedSample> series, double window)
{
    std::vector<TimedSample> out;
    out.reserve(series.size());
    const double half = 0.5 * window + kTimeEps;
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series[i].t;
        while (series[lo].t < t - half)
            ++lo;
        if (hi < i)
            hi = i;
        while (hi + 1 < series.size() && series[hi + 1].t <= t + half)
            ++hi;
        double sum = 0.0;
        for (std::size_t j = lo; j <= hi; ++j)
            sum += series[j].value;
        out.push_back({t, sum / static_cast<double>(hi - lo + 1)});
    }
    return out;
}

std::vector<TimedPoint> filtered_positions(const TrialRecord& record, double window)
{
    std::vector<TimedSample> xs;
    std::vector<TimedSample> ys;
    xs.reserve(record.frames.size());
    ys.reserve(record.frames.size());
    for (const auto& f : record.frames) {
        if (!f.tracked)
            continue;
        xs.push_back({f.t, f.pose.x});
        ys.push_back({f.t, f.pose.y});
    }
    const auto fx = moving_average(xs, window);
    const auto fy = moving_average(ys, window);
    std::vector<TimedPoint> out(fx.size());
    for (std::size_t i = 0; i < fx.size(); ++i)
        out[i] = {fx[i].t, {fx[i].value, fy[i].value}};
    return out;
}

double tracking_error(const TrialRecord& record, const PathSpec& path)
{
    require_success(record);
    const auto filtered = filtered_positions(record);
    std::vector<Point2> pts;
    pts.reserve(filtered.size());
    for (const auto& s : filtered)
        pts.push_back(s.p);
    return area_between(pts, path) / path_arc_length(path);
}

double navigation_time(const TrialRecord& record)
{
    require_success(record);
    if (record.frames.empty())
        throw DataError("record has no frames");
    return record.frames.back().t;
}

std::size_t control_effort(const TrialRecord& record)
{
    require_success(record);
    return record.stimuli.size();
}

std::vector<TimedSample> distance_to_path_series(const TrialRecord& record, const PathSpec& path)
{
    std::vector<TimedSample> out;
    if (span_seconds(record) < 1.0 - kTimeEps)
        return out;
    const auto filtered = filtered_positions(record);
    if (filtered.empty())
        return out;
    auto time_of = [](const TimedPoint& s) { return s.t; };
    const double t_end = record.frames.back().t;
    for (long m = 0;; ++m) {
        const double tick = static_cast<double>(m) * kSeriesInterval;
        if (tick > t_end + kTimeEps)
            break;
        const auto i = nearest_index(filtered, tick, time_of);
        if (!i)
            continue;
        out.push_back({tick, project_onto_path(path, filtered[*i].p).distance});
    }
    return out;
}

std::vector<TimedSample> instantaneous_speed_series(const TrialRecord& record)
{
    std::vector<TimedSample> out;
    if (span_seconds(record) < 1.0 - kTimeEps)
        return out;
    const auto filtered = filtered_positions(record);
    const double half = 0.5 * kSpeedWindow + kTimeEps;
    const double t_end = record.frames.back().t;
    std::size_t lo = 0;
    for (long m = 0;; ++m) {
        const double tick = static_cast<double>(m) * kSeriesInterval;
        if (tick > t_end + kTimeEps)
            break;
        while (lo < filtered.size() && filtered[lo].t < tick - half)
            ++lo;
        std::size_t hi = lo;
        while (hi + 1 < filtered.size() && filtered[hi + 1].t <= tick + half)
            ++hi;
        if (lo >= filtered.size() || hi <= lo || filtered[lo].t > tick + half)
            continue;
        double length = 0.0;
        for (std::size_t j = lo; j < hi; ++j)
            length += distance(filtered[j].p, filtered[j + 1].p);
        out.push_back({tick, length / (filtered[hi].t - filtered[lo].t)});
    }
    return out;
}

std::optional<int> turn_bin(double frequency_hz) noexcept
{
    if (!(frequency_hz >= 10.0 - kTimeEps && frequency_hz <= 40.0 + kTimeEps))
        return std::nullopt;
    if (frequency_hz < 16.5)
        return 0;
    if (frequency_hz < 24.5)
        return 1;
    if (frequency_hz < 32.5)
        return 2;
    return 3;
}

std::vector<InducedTurn> induced_turns(const TrialRecord& record)
{
    std::vector<InducedTurn> out;
    auto time_of = [](const Frame& f) { return f.t; };
    for (const auto& s : record.stimuli) {
        const auto side = antenna_side(s.channel);
        if (!side)
            continue;
        const auto i0 = nearest_index(record.frames, s.timestamp_s, time_of);
        const auto i1 = nearest_index(record.frames, s.timestamp_s + kTurnMeasureWindow, time_of);
        if (!i0 || !i1 || *i1 <= *i0)
            continue;
        double change = 0.0;
        for (std::size_t j = *i0; j < *i1; ++j)
            change += normalize_deg(record.frames[j + 1].pose.heading - record.frames[j].pose.heading);
        out.push_back({s.frequency_hz, *side, change, s.timestamp_s});
    }
    return out;
}

GroupStats outlier_filtered_stats(std::span<const double> samples, double k)
{
    GroupStats g;
    if (samples.empty())
        return g;
    auto moments = [](std::span<const double> xs, double& mean, double& sd) {
        double sum = 0.0;
        for (double x : xs)
            sum += x;
        mean = sum / static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs)
            ss += (x - mean) * (x - mean);
        sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    };
    double mean = 0.0;
    double sd = 0.0;
    moments(samples, mean, sd);
    std::vector<double> kept;
    kept.reserve(samples.size());
    for (double x : samples)
        if (std::abs(x - mean) <= k * sd)
            kept.push_back(x);
    g.removed = samples.size() - kept.size();
    g.n = kept.size();
    moments(kept, g.mean, g.sd);
    return g;
}

std::vector<TurnResponseBin> reconstruct_turn_response(std::span<const InducedTurn> turns)
{
    std::array<std::array<std::vector<double>, 2>, kTurnBins> groups;
    for (const auto& t : turns) {
        const auto b = turn_bin(t.frequency_hz);
        if (!b)
            continue;
        groups[static_cast<std::size_t>(*b)][t.side == AntennaSide::left ? 0 : 1].push_back(t.angle);
    }
    std::vector<TurnResponseBin> out;
    for (int b = 0; b < kTurnBins; ++b) {
        for (int s = 0; s < 2; ++s) {
            TurnResponseBin bin;
            bin.bin = b;
            bin.side = s == 0 ? AntennaSide::left : AntennaSide::right;
            const auto& g = groups[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
            if (!g.empty())
                bin.stats = outlier_filtered_stats(g);
            out.push_back(bin);
        }
    }
    return out;
}

std::vector<TurnResponseBin> reconstruct_turn_response(std::span<const TrialRecord> records)
{
    std::vector<InducedTurn> all;
    for (const auto& r : records) {
        auto t = induced_turns(r);
        all.insert(all.end(), t.begin(), t.end());
    }
    return reconstruct_turn_response(all);
}

std::vector<ThrustBoost> thrust_boosts(const TrialRecord& record)
{
    std::vector<ThrustBoost> out;
    for (const auto& s : record.stimuli) {
        if (s.channel != StimulusChannel::elytra_both)
            continue;
        const auto before = raw_rate(record.frames, s.timestamp_s - 0.05, s.timestamp_s);
        const auto during = raw_rate(record.frames, s.timestamp_s + 0.1, s.timestamp_s + 0.2);
        if (!before || !during)
            continue;
        out.push_back({s.timestamp_s, *during - *before});
    }
    return out;
}

AttenuationReport attenuation_report(std::span<const std::vector<TrialRecord>> sessions)
{
    AttenuationReport rep;
    std::size_t first_n = 0, first_ok = 0, last_n = 0, last_ok = 0;
    std::vector<double> first_turns;
    std::vector<double> last_turns;
    std::vector<std::vector<double>> groups;

    for (const auto& session : sessions) {
        const std::size_t n = session.size();
        std::size_t elytra_index = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const TrialRecord& r = session[i];
            const bool first = i < 4;
            const bool last = n >= 8 && i >= n - 4;
            if (!r.excluded) {
                const bool ok = r.outcome == TerminationReason::success;
                if (first) {
                    ++first_n;
                    first_ok += ok ? 1 : 0;
                }
                if (last) {
                    ++last_n;
                    last_ok += ok ? 1 : 0;
                }
            }
            if (first || last) {
                for (const auto& t : induced_turns(r)) {
                    const double magnitude = t.side == AntennaSide::right ? t.angle : -t.angle;
                    (first ? first_turns : last_turns).push_back(magnitude);
                }
            }
            // Group index counts every elytra stimulus the beetle received.
            const auto boosts = thrust_boosts(r);
            std::size_t b = 0;
            for (const auto& s : r.stimuli) {
                if (s.channel != StimulusChannel::elytra_both)
                    continue;
                const std::size_t g = elytra_index / kThrustGroupSize;
                ++elytra_index;
                if (b < boosts.size() && boosts[b].onset == s.timestamp_s) {
                    if (groups.size() <= g)
                        groups.resize(g + 1);
                    groups[g].push_back(boosts[b].boost);
                    ++b;
                }
            }
        }
    }

    if (first_n > 0)
        rep.first4_success_pct = 100.0 * static_cast<double>(first_ok) / static_cast<double>(first_n);
    if (last_n > 0)
        rep.last4_success_pct = 100.0 * static_cast<double>(last_ok) / static_cast<double>(last_n);
    rep.first4_trials = first_n;
    rep.last4_trials = last_n;
    rep.first4_turns = first_turns.size();
    rep.last4_turns = last_turns.size();
    if (!first_turns.empty())
        rep.first4_turn_mean = mean_sd(first_turns).mean;
    if (!last_turns.empty())
        rep.last4_turn_mean = mean_sd(last_turns).mean;
    for (const auto& g : groups) {
        rep.thrust_group_sizes.push_back(g.size());
        rep.thrust_group_means.push_back(g.empty() ? std::numeric_limits<double>::quiet_NaN() : mean_sd(g).mean);
    }
    return rep;
}

MeanSd mean_sd(std::span<const double> xs)
{
    MeanSd m;
    m.n = xs.size();
    if (xs.empty()) {
        m.mean = std::numeric_limits<double>::quiet_NaN();
        m.sd = std::numeric_limits<double>::quiet_NaN();
        return m;
    }
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs)
        ss += (x - m.mean) * (x - m.mean);
    m.sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    return m;
}

TrialEvaluation evaluate_trial(const TrialRecord& record, const PathSpec& path)
{
    TrialEvaluation e;
    e.tag = record.tag;
    e.outcome = record.outcome;
    e.excluded = record.excluded;
    if (record.outcome == TerminationReason::success) {
        e.tracking_error = tracking_error(record, path);
        e.navigation_time = navigation_time(record);
        e.control_effort = control_effort(record);
    }
    for (const auto& s : distance_to_path_series(record, path))
        e.distance_samples.push_back(s.value);
    for (const auto& s : instantaneous_speed_series(record))
        e.speed_samples.push_back(s.value);
    for (const auto& s : record.stimuli)
        if (is_antenna(s.channel))
            e.antenna_frequencies.push_back(s.frequency_hz);
    return e;
}

namespace {

std::optional<double> median_of(std::vector<double> xs)
{
    if (xs.empty())
        return std::nullopt;
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

SweepSummary summarize(std::span<const TrialEvaluation> trials, const SummaryOptions& options)
{
    struct Acc
    {
        std::size_t trials = 0, excluded = 0, successes = 0;
        std::vector<double> te, nt, ce, dist, speed;
    };
    std::map<std::pair<double, double>, Acc> by_combo;
    std::map<double, std::vector<double>> freqs;

    for (const auto& e : trials) {
        Acc& a = by_combo[{e.tag.t_update, e.tag.k_p}];
        if (e.excluded) {
            ++a.excluded;
            continue;
        }
        ++a.trials;
        const bool ok = e.outcome == TerminationReason::success;
        if (ok) {
            ++a.successes;
            a.te.push_back(*e.tracking_error);
            a.nt.push_back(*e.navigation_time);
            a.ce.push_back(static_cast<double>(*e.control_effort));
        }
        if (ok || !options.series_successes_only) {
            a.dist.insert(a.dist.end(), e.distance_samples.begin(), e.distance_samples.end());
            a.speed.insert(a.speed.end(), e.speed_samples.begin(), e.speed_samples.end());
        }
        auto& f = freqs[e.tag.k_p];
        f.insert(f.end(), e.antenna_frequencies.begin(), e.antenna_frequencies.end());
    }

    SweepSummary out;
    for (const auto& [key, a] : by_combo) {
        SummaryRow row;
        row.t_update = key.first;
        row.k_p = key.second;
        row.trials = a.trials;
        row.excluded = a.excluded;
        row.successes = a.successes;
        row.success_rate = a.trials > 0 ? 100.0 * static_cast<double>(a.successes) / static_cast<double>(a.trials)
                                        : std::numeric_limits<double>::quiet_NaN();
        row.tracking_error = mean_sd(a.te);
        row.navigation_time = mean_sd(a.nt);
        row.control_effort = mean_sd(a.ce);
        row.distance = mean_sd(a.dist);
        row.speed = mean_sd(a.speed);
        out.rows.push_back(std::move(row));
    }

    const double width = options.histogram_bin_width > 0.0 ? options.histogram_bin_width : 2.5;
    const auto nbins = static_cast<std::size_t>(std::ceil(30.0 / width - 1e-9));
    for (const auto& [kp, fs] : freqs) {
        FrequencyHistogram h;
        h.k_p = kp;
        for (std::size_t i = 0; i <= nbins; ++i)
            h.edges.push_back(std::min(40.0, 10.0 + width * static_cast<double>(i)));
        h.counts.assign(nbins, 0);
        for (double f : fs) {
            auto idx = static_cast<long>(std::floor((f - 10.0) / width));
            idx = std::clamp(idx, 0L, static_cast<long>(nbins) - 1);
            ++h.counts[static_cast<std::size_t>(idx)];
        }
        h.total = fs.size();
        h.median = median_of(fs);
        out.histograms.push_back(std::move(h));
    }
    return out;
}

SweepSummary summarize_sweep(std::span<const SweepSession> sessions, const PathSpec& path,
                             const SummaryOptions& options)
{
    std::vector<TrialEvaluation> evals;
    for (const auto& s : sessions)
        for (const auto& r : s.trials)
            evals.push_back(evaluate_trial(r, path));
    return summarize(evals, options);
}

const SummaryRow* find_row(const SweepSummary& s, double k_p, double t_update) noexcept
{
    for (const auto& r : s.rows)
        if (std::abs(r.k_p - k_p) < 1e-9 && std::abs(r.t_update - t_update) < 1e-9)
            return &r;
    return nullptr;
}

}  // namespace cyborgnav
