#pragma once

#include "cyborgnav/geometry.hpp"
#include "cyborgnav/stimulus.hpp"

#include <array>
#include <optional>
#include <random>

namespace cyborgnav {

using Rng = std::mt19937_64;

enum class AntennaSide { left, right };

std::optional<AntennaSide> antenna_side(StimulusChannel c) noexcept;

struct TurnStats
{
    double mean{0.0};                    ///< deg, left turns positive
    double sd{0.0};                      ///< deg

    bool operator==(const TurnStats&) const = default;
};

/// Induced turning angle per stimulation-frequency bin and stimulated antenna.
/// Bins are 10-16, 17-24, 25-32 and 33-40 Hz; values between bin centers are
/// linearly interpolated and held flat outside the outermost centers.
struct TurnResponseTable
{
    static constexpr std::array<double, 4> bin_centers{13.0, 20.5, 28.5, 36.5};

    std::array<TurnStats, 4> left{{{-13.55, 7.25}, {-17.23, 9.88}, {-20.12, 9.95}, {-27.04, 13.84}}};
    std::array<TurnStats, 4> right{{{15.01, 10.46}, {17.60, 13.56}, {24.11, 15.51}, {28.50, 17.34}}};

    TurnStats at(double frequency_hz, AntennaSide side) const noexcept;
    void validate() const;

    bool operator==(const TurnResponseTable&) const = default;
};

/// Parameters of the simulated beetle. Defaults are the calibrated set.
struct BeetleParams
{
    TurnResponseTable turn_table{};
    double thrust_gain{40.0};            ///< mm/s, mean forward-speed increment per elytra stimulus
    double thrust_sd_fraction{0.25};     ///< sd of the increment as a fraction of thrust_gain
    double ramp_time{0.1};               ///< s
    double free_speed_mean{13.44};       ///< mm/s
    double free_speed_relaxation{1.132}; ///< 1/s
    double free_speed_noise{4.0};        ///< mm/s per sqrt(s)
    double free_heading_noise{1.472};    ///< deg per sqrt(s)
    double escape_run_gain{0.3555};      ///< mm/s per Hz during antenna responses
    double turn_drift_sd{21.49};         ///< deg/s, stationary sd of the free-walk turning rate
    double turn_drift_time{24.43};       ///< s, correlation time of that rate
    /// s; > 0: turning coasts on after the stimulus window, decaying with this
    /// time constant. The committed angle is rescaled so the heading change from
    /// onset to onset + 500 ms still matches the turn table.
    double turn_tail_time{0.8662};
    double attenuation_reference_hz{10.0};  ///< > 0: an antenna stimulus at f counts f / reference
    double attenuation_rate{0.002019};   ///< fraction lost per delivered stimulus
    double attenuation_floor{0.4775};    ///< lower bound of the gain, in (0, 1]
    bool noise{true};                    ///< false: every draw returns its mean

    void validate() const;

    bool operator==(const BeetleParams&) const = default;
};

enum class ResponseKind { turn, thrust };

/// A stimulus response in progress. Turns follow a trapezoidal angular-speed
/// profile (linear ramp over ramp_time, then a plateau) integrating to turn_angle
/// over the window; the forward-speed boost ramps over ramp_time and holds.
struct ActiveResponse
{
    ResponseKind kind{ResponseKind::thrust};
    double start_time{0.0};
    double end_time{0.0};
    double ramp_time{0.1};
    double turn_angle{0.0};              ///< deg, committed
    double plateau_rate{0.0};            ///< deg/s
    double speed_boost{0.0};             ///< mm/s
    double onset_speed{0.0};             ///< mm/s

    double angle_at(double elapsed) const noexcept;
    double rate_at(double elapsed) const noexcept;
    double speed_at(double elapsed) const noexcept;
};

struct UnilateralRun
{
    std::optional<AntennaSide> side;
    int count{0};
};

struct BeetleState
{
    double time{0.0};
    Pose2D pose{};
    double linear_speed{0.0};            ///< mm/s, never negative
    double angular_speed{0.0};           ///< deg/s
    std::optional<ActiveResponse> active;
    double drift_rate{0.0};              ///< deg/s, free-walk turning tendency
    double tail_rate{0.0};               ///< deg/s, residual turning after a turn response
    double quiet_until{0.0};             ///< s, no free heading wander before this (end of a turn's measuring span)
    long antenna_stim_count{0};
    long elytra_stim_count{0};
    double antenna_load{0.0};            ///< stimulus-equivalents driving antenna attenuation
    UnilateralRun consecutive_unilateral{};
};

/// g(n) = max(g_min, 1 - rate * n).
double attenuation_gain(const BeetleParams& params, long n_stimuli);
double attenuation_gain(const BeetleParams& params, double load);

/// Draws an induced turn angle (deg, left positive) for a stimulus on `side` at
/// `frequency_hz`. The mean is scaled by `gain`; the spread is not.
/// Throws DataError("frequency out of range") outside [10, 40] Hz.
double sample_turn_angle(const BeetleParams& params, double frequency_hz, AntennaSide side,
                         Rng& rng, double gain = 1.0);

BeetleState apply_antenna_stimulus(BeetleState state, const BeetleParams& params,
                                   const StimulusCommand& command, Rng& rng);
BeetleState apply_elytra_stimulus(BeetleState state, const BeetleParams& params,
                                  const StimulusCommand& command, Rng& rng);
/// Dispatches on the command channel.
BeetleState apply_stimulus(BeetleState state, const BeetleParams& params,
                           const StimulusCommand& command, Rng& rng);

/// Advances the plant by dt seconds (0 < dt <= 0.02). Position moves by the
/// speed and heading held at the start of the step; heading integrates the
/// response profile exactly.
BeetleState step(BeetleState state, const BeetleParams& params, double dt, Rng& rng);

}  // namespace cyborgnav
