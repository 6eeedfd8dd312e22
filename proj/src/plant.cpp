#include "cyborgnav/plant.hpp"

#include "cyborgnav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cyborgnav {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Turn-table angles are heading changes from onset to onset + 500 ms.
constexpr double kTurnMeasureSpan = 0.5;

// Heading change from a tail starting at `rate`, over `span` seconds.
double tail_angle(double rate, double tau, double span)
{
    return tau > 0.0 && span > 0.0 ? rate * tau * (1.0 - std::exp(-span / tau)) : 0.0;
}

double gauss(Rng& rng)
{
    std::normal_distribution<double> n01(0.0, 1.0);
    return n01(rng);
}

double interpolate(const std::array<TurnStats, 4>& row, double f, double TurnStats::*field)
{
    const auto& c = TurnResponseTable::bin_centers;
    if (f <= c.front())
        return row.front().*field;
    if (f >= c.back())
        return row.back().*field;
    std::size_t i = 0;
    while (f > c[i + 1])
        ++i;
    const double w = (f - c[i]) / (c[i + 1] - c[i]);
    return row[i].*field + w * (row[i + 1].*field - row[i].*field);
}

}  // namespace

std::optional<AntennaSide> antenna_side(StimulusChannel c) noexcept
{
    switch (c) {
    case StimulusChannel::left_antenna:
        return AntennaSide::left;
    case StimulusChannel::right_antenna:
        return AntennaSide::right;
    case StimulusChannel::elytra_both:
        break;
    }
    return std::nullopt;
}

TurnStats TurnResponseTable::at(double frequency_hz, AntennaSide side) const noexcept
{
    const auto& row = side == AntennaSide::left ? left : right;
    return {interpolate(row, frequency_hz, &TurnStats::mean), interpolate(row, frequency_hz, &TurnStats::sd)};
}

void TurnResponseTable::validate() const
{
    for (std::size_t i = 0; i < 4; ++i) {
        if (!(left[i].mean < 0.0) || !(right[i].mean > 0.0))
            throw ConfigError("turn table: left-antenna means must be negative, right-antenna means positive");
        if (!(left[i].sd >= 0.0) || !(right[i].sd >= 0.0))
            throw ConfigError("turn table: standard deviations must be non-negative");
        if (i > 0 && (!(std::abs(left[i].mean) > std::abs(left[i - 1].mean)) ||
                      !(std::abs(right[i].mean) > std::abs(right[i - 1].mean))))
            throw ConfigError("turn table: |mean| must increase with frequency");
    }
}

void BeetleParams::validate() const
{
    turn_table.validate();
    if (!(thrust_gain > 0.0))
        throw ConfigError("beetle.thrust_gain must be positive");
    const double rates[] = {thrust_sd_fraction, ramp_time,          free_speed_mean, free_speed_relaxation,
                            free_speed_noise,   free_heading_noise, escape_run_gain, attenuation_rate,
                            turn_drift_sd,      attenuation_reference_hz, turn_tail_time};
    for (double r : rates)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw ConfigError("beetle rates must be finite and non-negative");
    if (!(attenuation_floor > 0.0 && attenuation_floor <= 1.0))
        throw ConfigError("beetle.attenuation_floor must lie in (0, 1]");
    if (!(turn_drift_time > 0.0) || !std::isfinite(turn_drift_time))
        throw ConfigError("beetle.turn_drift_time must be positive");
}

double ActiveResponse::angle_at(double elapsed) const noexcept
{
    const double e = std::clamp(elapsed, 0.0, end_time - start_time);
    if (ramp_time <= 0.0)
        return plateau_rate * e;
    if (e <= ramp_time)
        return plateau_rate * e * e / (2.0 * ramp_time);
    return plateau_rate * (0.5 * ramp_time + (e - ramp_time));
}

double ActiveResponse::rate_at(double elapsed) const noexcept
{
    if (elapsed < 0.0 || elapsed > end_time - start_time)
        return 0.0;
    if (ramp_time <= 0.0)
        return plateau_rate;
    return plateau_rate * std::min(1.0, elapsed / ramp_time);
}

double ActiveResponse::speed_at(double elapsed) const noexcept
{
    const double e = std::clamp(elapsed, 0.0, end_time - start_time);
    const double ramp = ramp_time <= 0.0 ? 1.0 : std::min(1.0, e / ramp_time);
    return std::max(0.0, onset_speed + speed_boost * ramp);
}

double attenuation_gain(const BeetleParams& params, long n_stimuli)
{
    if (n_stimuli < 0)
        throw DataError("stimulus count must be non-negative");
    return attenuation_gain(params, static_cast<double>(n_stimuli));
}

double attenuation_gain(const BeetleParams& params, double load)
{
    if (!(load >= 0.0))
        throw DataError("stimulus count must be non-negative");
    return std::max(params.attenuation_floor, 1.0 - params.attenuation_rate * load);
}

double sample_turn_angle(const BeetleParams& params, double frequency_hz, AntennaSide side, Rng& rng,
                         double gain)
{
    if (!(frequency_hz >= 10.0 && frequency_hz <= 40.0))
        throw DataError("frequency out of range");
    const TurnStats s = params.turn_table.at(frequency_hz, side);
    const double mean = s.mean * gain;
    if (!params.noise)
        return mean;
    return mean + s.sd * gauss(rng);
}

BeetleState apply_antenna_stimulus(BeetleState state, const BeetleParams& params,
                                   const StimulusCommand& command, Rng& rng)
{
    const auto side = antenna_side(command.channel);
    if (!side)
        throw DataError("antenna stimulus requires an antenna channel");

    const double gain = attenuation_gain(params, state.antenna_load);
    const double angle = sample_turn_angle(params, command.frequency_hz, *side, rng, gain);
    const double window = command.duration_ms / 1000.0;
    if (!(window > 0.0))
        throw DataError("stimulus duration must be positive");

    ActiveResponse r;
    r.kind = ResponseKind::turn;
    r.start_time = state.time;
    r.end_time = state.time + window;
    r.ramp_time = params.ramp_time;
    r.turn_angle = angle;
    const double tau = params.ramp_time;
    // angle swept per unit plateau rate inside the window
    double per_rate = window;
    if (tau > 0.0)
        per_rate = window >= tau ? window - 0.5 * tau : window * window / (2.0 * tau);
    // the tail keeps the final rate, which is the plateau unless the window is shorter than the ramp
    const double end_fraction = tau > 0.0 ? std::min(1.0, window / tau) : 1.0;
    const double tail_per_rate = tail_angle(end_fraction, params.turn_tail_time, kTurnMeasureSpan - window);
    r.plateau_rate = angle / (per_rate + tail_per_rate);
    r.turn_angle = r.plateau_rate * per_rate;
    r.speed_boost = params.escape_run_gain * command.frequency_hz * gain;
    r.onset_speed = state.linear_speed;

    state.active = r;
    state.angular_speed = 0.0;
    state.tail_rate = 0.0;
    // the table spread is the whole observed spread over the measuring span
    state.quiet_until = r.start_time + kTurnMeasureSpan;
    ++state.antenna_stim_count;
    state.antenna_load += params.attenuation_reference_hz > 0.0
                              ? command.frequency_hz / params.attenuation_reference_hz
                              : 1.0;
    auto& run = state.consecutive_unilateral;
    if (run.side == side) {
        ++run.count;
    } else {
        run.side = side;
        run.count = 1;
    }
    return state;
}

BeetleState apply_elytra_stimulus(BeetleState state, const BeetleParams& params,
                                  const StimulusCommand& command, Rng& rng)
{
    if (command.channel != StimulusChannel::elytra_both)
        throw DataError("thrust stimulus requires the elytra channel");
    const double window = command.duration_ms / 1000.0;
    if (!(window > 0.0))
        throw DataError("stimulus duration must be positive");

    const double gain = attenuation_gain(params, state.elytra_stim_count);
    double boost = params.thrust_gain * gain;
    if (params.noise)
        boost += params.thrust_sd_fraction * params.thrust_gain * gauss(rng);

    ActiveResponse r;
    r.kind = ResponseKind::thrust;
    r.start_time = state.time;
    r.end_time = state.time + window;
    r.ramp_time = params.ramp_time;
    r.speed_boost = boost;
    r.onset_speed = state.linear_speed;

    state.active = r;
    state.angular_speed = 0.0;
    ++state.elytra_stim_count;
    state.consecutive_unilateral = {};
    return state;
}

BeetleState apply_stimulus(BeetleState state, const BeetleParams& params, const StimulusCommand& command,
                           Rng& rng)
{
    if (is_antenna(command.channel))
        return apply_antenna_stimulus(std::move(state), params, command, rng);
    return apply_elytra_stimulus(std::move(state), params, command, rng);
}

BeetleState step(BeetleState state, const BeetleParams& params, double dt, Rng& rng)
{
    if (!(dt > 0.0) || dt > 0.02 + 1e-12)
        throw DataError("invalid timestep");

    const double h0 = state.pose.heading * kDegToRad;
    state.pose.x += state.linear_speed * dt * std::cos(h0);
    state.pose.y += state.linear_speed * dt * std::sin(h0);

    const double t0 = state.time;
    const double t1 = t0 + dt;
    double heading = state.pose.heading;
    double free_time = dt;

    double turn_time = 0.0;  // part of the step covered by a turn response
    if (state.active) {
        const ActiveResponse& r = *state.active;
        const double seg_end = std::min(t1, r.end_time);
        const double ea = t0 - r.start_time;
        const double eb = seg_end - r.start_time;
        heading += r.angle_at(eb) - r.angle_at(ea);
        state.linear_speed = r.speed_at(eb);
        state.angular_speed = r.kind == ResponseKind::turn ? r.rate_at(eb) : 0.0;
        free_time = std::max(0.0, t1 - seg_end);
        if (r.kind == ResponseKind::turn)
            turn_time = dt - free_time;
        if (t1 >= r.end_time - 1e-9) {
            if (r.kind == ResponseKind::turn && params.turn_tail_time > 0.0)
                state.tail_rate = r.rate_at(r.end_time - r.start_time);
            state.active.reset();
            state.angular_speed = 0.0;
        }
    }

    // the tail runs through thrust responses and free walking alike
    const double tail_span = dt - turn_time;
    if (state.tail_rate != 0.0 && tail_span > 1e-12 && params.turn_tail_time > 0.0) {
        heading += tail_angle(state.tail_rate, params.turn_tail_time, tail_span);
        state.tail_rate *= std::exp(-tail_span / params.turn_tail_time);
        if (std::abs(state.tail_rate) < 1e-9)
            state.tail_rate = 0.0;
    }

    if (free_time > 1e-12) {
        heading += state.angular_speed * free_time;
        const double wander_time = std::min(free_time, std::max(0.0, t1 - state.quiet_until));
        const double k = params.free_speed_relaxation;
        const double decay = std::exp(-k * free_time);
        double v = params.free_speed_mean + (state.linear_speed - params.free_speed_mean) * decay;
        if (params.noise) {
            const double var = k > 0.0 ? (1.0 - decay * decay) / (2.0 * k) : free_time;
            v += params.free_speed_noise * std::sqrt(var) * gauss(rng);
            heading += params.free_heading_noise * std::sqrt(wander_time) * gauss(rng);
        }
        if (params.turn_drift_sd > 0.0) {
            heading += state.drift_rate * wander_time;
            const double rho = std::exp(-free_time / params.turn_drift_time);
            state.drift_rate *= rho;
            if (params.noise)
                state.drift_rate += params.turn_drift_sd * std::sqrt(1.0 - rho * rho) * gauss(rng);
        }
        state.linear_speed = std::max(0.0, v);
    }

    state.pose.heading = normalize_deg(heading);
    state.time = t1;
    return state;
}

}  // namespace cyborgnav
