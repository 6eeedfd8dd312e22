#include "cyborgnav/trial.hpp"

#include "cyborgnav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <numeric>
#include <thread>

namespace cyborgnav {

std::string_view to_string(TerminationReason r) noexcept
{
    switch (r) {
    case TerminationReason::success:
        return "success";
    case TerminationReason::out_of_bounds:
        return "out_of_bounds";
    case TerminationReason::timeout:
        return "timeout";
    }
    return "unknown";
}

std::string_view to_string(Exclusion e) noexcept
{
    return e == Exclusion::unilateral_runs ? "unilateral_runs" : "miss_tracking";
}

std::string_view to_string(TravelDirection d) noexcept
{
    return d == TravelDirection::forward ? "forward" : "reversed";
}

std::string_view to_string(RetargetPolicy p) noexcept
{
    return p == RetargetPolicy::on_arrival ? "on_arrival" : "every_update";
}

std::optional<TerminationReason> parse_termination(std::string_view s) noexcept
{
    if (s == "success")
        return TerminationReason::success;
    if (s == "out_of_bounds")
        return TerminationReason::out_of_bounds;
    if (s == "timeout")
        return TerminationReason::timeout;
    return std::nullopt;
}

std::optional<Exclusion> parse_exclusion(std::string_view s) noexcept
{
    if (s == "unilateral_runs")
        return Exclusion::unilateral_runs;
    if (s == "miss_tracking")
        return Exclusion::miss_tracking;
    return std::nullopt;
}

std::optional<TravelDirection> parse_direction(std::string_view s) noexcept
{
    if (s == "forward")
        return TravelDirection::forward;
    if (s == "reversed")
        return TravelDirection::reversed;
    return std::nullopt;
}

std::optional<RetargetPolicy> parse_retarget(std::string_view s) noexcept
{
    if (s == "on_arrival")
        return RetargetPolicy::on_arrival;
    if (s == "every_update")
        return RetargetPolicy::every_update;
    return std::nullopt;
}

void TrialConfig::validate() const
{
    controller.validate();
    beetle.validate();
    path.validate();
    arena.validate();
    if (!(lookahead > 0.0))
        throw ConfigError("trial.lookahead must be positive");
    if (!(arrival_radius > 0.0))
        throw ConfigError("trial.arrival_radius must be positive");
    if (!(timeout > 0.0))
        throw ConfigError("trial.timeout must be positive");
    if (!(frame_dt > 0.0 && frame_dt <= 0.02))
        throw ConfigError("trial.frame_dt must lie in (0, 0.02]");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
        throw ConfigError("trial.dropout_rate must lie in [0, 1)");
    if (!(heading_jitter >= 0.0 && heading_jitter <= 180.0))
        throw ConfigError("trial.heading_jitter must lie in [0, 180]");
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(parent ^ mix(stream + 0x632be59bd9b4e019ULL));
}

TrialRecord run_trial(const TrialConfig& config)
{
    StimulusHistory fresh;
    return run_trial(config, fresh);
}

TrialRecord run_trial(const TrialConfig& config, StimulusHistory& history)
{
    config.validate();

    Rng plant_rng(derive_seed(config.seed, 1));
    Rng tracker_rng(derive_seed(config.seed, 2));
    Rng init_rng(derive_seed(config.seed, 3));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const PathSpec& path = config.path;
    const TravelDirection dir = config.direction;
    const Point2 start = origin_center(path, dir);
    const Point2 goal = destination_center(path, dir);

    BeetleState state;
    state.pose.x = start.x;
    state.pose.y = start.y;
    double heading = path_tangent_deg(path, start.x, dir);
    if (config.heading_jitter > 0.0)
        heading += config.heading_jitter * (2.0 * unit(init_rng) - 1.0);
    state.pose.heading = normalize_deg(heading);
    state.linear_speed = config.beetle.free_speed_mean;
    state.antenna_stim_count = history.antenna;
    state.elytra_stim_count = history.elytra;
    state.antenna_load = history.antenna_load;

    TrialRecord record;
    record.tag.k_p = config.controller.k_p;
    record.tag.t_update = config.controller.t_update;
    record.tag.direction = dir;
    record.tag.seed = config.seed;

    const double dt = config.frame_dt;
    const double t_update = config.controller.t_update;
    constexpr double eps = 1e-9;
    long update_index = 0;
    std::optional<Point2> target;

    for (long k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        state.time = t;
        const Point2 pos = state.pose.position();

        std::optional<TerminationReason> outcome;
        if (distance(pos, goal) <= path.endpoint_radius)
            outcome = TerminationReason::success;
        else if (!arena_contains(config.arena, path, pos))
            outcome = TerminationReason::out_of_bounds;
        else if (t >= config.timeout - eps)
            outcome = TerminationReason::timeout;

        bool tracked = true;
        if (config.dropout_rate > 0.0)
            tracked = unit(tracker_rng) >= config.dropout_rate;
        if (outcome) {
            record.frames.push_back({t, state.pose, true});
            record.outcome = *outcome;
            break;
        }
        record.frames.push_back({t, state.pose, tracked});

        if (t + eps >= static_cast<double>(update_index) * t_update) {
            while (static_cast<double>(update_index) * t_update <= t + eps)
                ++update_index;
            if (tracked) {
                const PathProjection proj = project_onto_path(path, pos);
                const double along = dir == TravelDirection::forward ? 1.0 : -1.0;
                const bool regenerate = !target || config.retarget == RetargetPolicy::every_update ||
                                        distance(pos, *target) <= config.arrival_radius ||
                                        along * (proj.arc_param - target->x) >= 0.0;
                if (regenerate)
                    target = carrot_target(path, proj.foot, config.lookahead, dir);
                const StimulusCommand cmd = decide(config.controller, state.pose, *target, t);
                state = apply_stimulus(std::move(state), config.beetle, cmd, plant_rng);
                record.stimuli.push_back(cmd);
            }
        }

        state = step(std::move(state), config.beetle, dt, plant_rng);
    }

    history.antenna = state.antenna_stim_count;
    history.elytra = state.elytra_stim_count;
    history.antenna_load = state.antenna_load;
    return record;
}

std::optional<Exclusion> exclusion_for(const TrialRecord& record)
{
    std::optional<StimulusChannel> run_channel;
    int run = 0;
    for (const auto& s : record.stimuli) {
        if (!is_antenna(s.channel)) {
            run_channel.reset();
            run = 0;
            continue;
        }
        if (run_channel == s.channel) {
            ++run;
        } else {
            run_channel = s.channel;
            run = 1;
        }
        if (run >= kUnilateralRunLimit)
            return Exclusion::unilateral_runs;
    }
    if (!record.frames.empty()) {
        const auto untracked = std::count_if(record.frames.begin(), record.frames.end(),
                                             [](const Frame& f) { return !f.tracked; });
        if (static_cast<double>(untracked) > kMissTrackingLimit * static_cast<double>(record.frames.size()))
            return Exclusion::miss_tracking;
    }
    return std::nullopt;
}

TrialRecord flag_exclusions(TrialRecord record)
{
    record.excluded = exclusion_for(record);
    return record;
}

namespace {

std::vector<TrialRecord> run_session_impl(const TrialConfig& base, int n_trials, int beetle)
{
    if (n_trials < 1)
        throw ConfigError("a session needs at least one trial");
    std::vector<TrialRecord> out;
    out.reserve(static_cast<std::size_t>(n_trials));
    StimulusHistory history;
    for (int i = 0; i < n_trials; ++i) {
        TrialConfig cfg = base;
        cfg.seed = derive_seed(base.seed, static_cast<std::uint64_t>(i));
        cfg.direction = i % 2 == 0 ? base.direction : opposite(base.direction);
        TrialRecord r = flag_exclusions(run_trial(cfg, history));
        r.tag.beetle = beetle;
        r.tag.trial_index = i;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::vector<TrialRecord> run_session(const TrialConfig& base, int n_trials)
{
    return run_session_impl(base, n_trials, -1);
}

void SweepConfig::validate() const
{
    if (beetles < 1)
        throw ConfigError("sweep.beetles must be at least 1");
    if (k_p.empty() || t_update.empty())
        throw ConfigError("sweep grid must not be empty");
    for (double k : k_p)
        if (!(k > 0.0))
            throw ConfigError("sweep.k_p values must be positive");
    for (double t : t_update)
        if (!(t > 0.0))
            throw ConfigError("sweep.t_update values must be positive");
    if (trials_per_session < 1)
        throw ConfigError("sweep.trials_per_session must be at least 1");
}

void for_each_sweep_session(const TrialConfig& base, const SweepConfig& sweep,
                            const std::function<void(SweepSession&&)>& sink)
{
    base.validate();
    sweep.validate();

    struct Job
    {
        int beetle;
        int order;
        double k_p;
        double t_update;
        TrialConfig config;
    };

    std::vector<Job> jobs;
    const std::size_t combos = sweep.k_p.size() * sweep.t_update.size();
    for (int b = 0; b < sweep.beetles; ++b) {
        const std::uint64_t beetle_seed = derive_seed(base.seed, 1000 + static_cast<std::uint64_t>(b));
        std::vector<std::size_t> schedule(combos);
        std::iota(schedule.begin(), schedule.end(), std::size_t{0});
        Rng order_rng(beetle_seed);
        // Fisher-Yates with an explicit draw so the order does not depend on the
        // standard library's shuffle implementation.
        for (std::size_t i = combos; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(order_rng() % i);
            std::swap(schedule[i - 1], schedule[j]);
        }
        for (std::size_t o = 0; o < combos; ++o) {
            const std::size_t c = schedule[o];
            Job job{b, static_cast<int>(o), sweep.k_p[c / sweep.t_update.size()],
                    sweep.t_update[c % sweep.t_update.size()], base};
            job.config.controller.k_p = job.k_p;
            job.config.controller.t_update = job.t_update;
            job.config.seed = derive_seed(beetle_seed, static_cast<std::uint64_t>(o));
            job.config.direction = TravelDirection::forward;
            jobs.push_back(std::move(job));
        }
    }

    auto run_job = [&sweep](const Job& job) {
        SweepSession s;
        s.beetle = job.beetle;
        s.order = job.order;
        s.k_p = job.k_p;
        s.t_update = job.t_update;
        s.trials = run_session_impl(job.config, sweep.trials_per_session, job.beetle);
        return s;
    };

    unsigned threads = sweep.threads != 0 ? sweep.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, threads);
    if (threads == 1) {
        for (const auto& job : jobs)
            sink(run_job(job));
        return;
    }

    // Bounded window of in-flight sessions, drained in submission order.
    std::deque<std::future<SweepSession>> inflight;
    std::size_t next = 0;
    while (next < jobs.size() || !inflight.empty()) {
        while (next < jobs.size() && inflight.size() < threads) {
            inflight.push_back(std::async(std::launch::async, run_job, std::cref(jobs[next])));
            ++next;
        }
        sink(inflight.front().get());
        inflight.pop_front();
    }
}

std::vector<SweepSession> run_sweep(const TrialConfig& base, const SweepConfig& sweep)
{
    std::vector<SweepSession> out;
    for_each_sweep_session(base, sweep, [&out](SweepSession&& s) { out.push_back(std::move(s)); });
    return out;
}

}  // namespace cyborgnav
