#pragma once

#include "cyborgnav/controller.hpp"
#include "cyborgnav/geometry.hpp"
#include "cyborgnav/plant.hpp"
#include "cyborgnav/stimulus.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace cyborgnav {

enum class TerminationReason { success, out_of_bounds, timeout };
enum class Exclusion { unilateral_runs, miss_tracking };

std::string_view to_string(TerminationReason r) noexcept;
std::string_view to_string(Exclusion e) noexcept;
std::string_view to_string(TravelDirection d) noexcept;
std::optional<TerminationReason> parse_termination(std::string_view s) noexcept;
std::optional<Exclusion> parse_exclusion(std::string_view s) noexcept;
std::optional<TravelDirection> parse_direction(std::string_view s) noexcept;

/// When the carrot target is replaced. `on_arrival` keeps a target until the
/// beetle comes within arrival_radius of it; `every_update` recomputes it from
/// the current projection at every controller update.
enum class RetargetPolicy { on_arrival, every_update };
std::string_view to_string(RetargetPolicy p) noexcept;
std::optional<RetargetPolicy> parse_retarget(std::string_view s) noexcept;

struct TrialConfig
{
    ControllerConfig controller{};
    BeetleParams beetle{};
    PathSpec path{};
    ArenaSpec arena{};
    double lookahead{104.1};       ///< mm, carrot circle radius
    double arrival_radius{40.0};   ///< mm, target counts as reached inside this radius
    RetargetPolicy retarget{RetargetPolicy::on_arrival};
    double timeout{300.0};         ///< s
    double frame_dt{0.01};         ///< s
    std::uint64_t seed{1};
    TravelDirection direction{TravelDirection::forward};
    double dropout_rate{0.0};      ///< per-frame probability of a miss-tracked frame
    double heading_jitter{10.97};  ///< deg, initial heading offset drawn uniformly from +-jitter

    /// Throws ConfigError.
    void validate() const;

    bool operator==(const TrialConfig&) const = default;
};

struct Frame
{
    double t{0.0};
    Pose2D pose{};
    bool tracked{true};
};

/// Identifies the run a record came from.
struct TrialTag
{
    double k_p{0.0};
    double t_update{0.0};
    TravelDirection direction{TravelDirection::forward};
    std::uint64_t seed{0};
    int beetle{-1};
    int trial_index{0};
};

struct TrialRecord
{
    std::vector<Frame> frames;
    std::vector<StimulusCommand> stimuli;
    TerminationReason outcome{TerminationReason::timeout};
    std::optional<Exclusion> excluded;
    TrialTag tag{};
};

/// Stimulus counts carried by one beetle from trial to trial; they drive the
/// response attenuation.
struct StimulusHistory
{
    long antenna{0};
    long elytra{0};
    double antenna_load{0.0};
};

/// Derives an independent 64-bit seed from a parent seed and a stream index.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept;

/// One closed-loop trial: plant stepped every frame_dt, controller run every
/// t_update on the latest tracked pose. Terminates on reaching the destination
/// circle, leaving the arena, or timeout.
TrialRecord run_trial(const TrialConfig& config);
TrialRecord run_trial(const TrialConfig& config, StimulusHistory& history);

/// Marks runs of >= 15 consecutive same-side antenna stimuli (precedence) or
/// more than 20% untracked frames. Pure; recomputes the flag from scratch.
TrialRecord flag_exclusions(TrialRecord record);
std::optional<Exclusion> exclusion_for(const TrialRecord& record);

inline constexpr int kUnilateralRunLimit = 15;
inline constexpr double kMissTrackingLimit = 0.20;

/// n_trials trials of one beetle with alternating direction. Attenuation
/// counters persist across the session; exclusions are flagged.
std::vector<TrialRecord> run_session(const TrialConfig& base, int n_trials = 12);

struct SweepConfig
{
    int beetles{19};
    std::vector<double> k_p{0.25, 0.50, 0.75};
    std::vector<double> t_update{1.0, 1.5, 2.0};
    int trials_per_session{12};
    unsigned threads{0};  ///< 0 = hardware concurrency

    void validate() const;

    bool operator==(const SweepConfig& o) const
    {
        return beetles == o.beetles && k_p == o.k_p && t_update == o.t_update &&
               trials_per_session == o.trials_per_session;
    }
};

struct SweepSession
{
    int beetle{0};
    int order{0};  ///< position of this combination in the beetle's randomized schedule
    double k_p{0.0};
    double t_update{0.0};
    std::vector<TrialRecord> trials;
};

/// Runs every beetle through every (k_p, t_update) combination in a
/// seed-determined random order, one session per combination. Sessions are
/// delivered to `sink` in (beetle, order) order regardless of thread count.
/// The master seed is base.seed.
void for_each_sweep_session(const TrialConfig& base, const SweepConfig& sweep,
                            const std::function<void(SweepSession&&)>& sink);

std::vector<SweepSession> run_sweep(const TrialConfig& base, const SweepConfig& sweep);

}  // namespace cyborgnav
