#include "cyborgnav/controller.hpp"

#include "cyborgnav/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cyborgnav {

std::string_view to_string(StimulusChannel c) noexcept
{
    switch (c) {
    case StimulusChannel::left_antenna:
        return "left_antenna";
    case StimulusChannel::right_antenna:
        return "right_antenna";
    case StimulusChannel::elytra_both:
        return "elytra_both";
    }
    return "unknown";
}

std::optional<StimulusChannel> parse_channel(std::string_view s) noexcept
{
    if (s == "left_antenna")
        return StimulusChannel::left_antenna;
    if (s == "right_antenna")
        return StimulusChannel::right_antenna;
    if (s == "elytra_both")
        return StimulusChannel::elytra_both;
    return std::nullopt;
}

void ControllerConfig::validate() const
{
    if (!(k_p > 0.0))
        throw ConfigError("controller.k_p must be positive");
    if (!(t_update > 0.0))
        throw ConfigError("controller.t_update must be positive");
    if (!(theta_threshold > 0.0))
        throw ConfigError("controller.theta_threshold must be positive");
    if (!(f_min < f_max))
        throw ConfigError("controller.f_min must be less than controller.f_max");
    if (!(antenna_duration > 0.0) || !(elytra_duration > 0.0))
        throw ConfigError("stimulus durations must be positive");
    if (!(elytra_frequency > 0.0) || !(amplitude > 0.0))
        throw ConfigError("elytra frequency and amplitude must be positive");
}

double steering_frequency(const ControllerConfig& config, double theta_deg) noexcept
{
    return std::clamp(config.k_p * std::abs(theta_deg), config.f_min, config.f_max);
}

StimulusCommand decide_from_error(const ControllerConfig& config, double theta_deg, double now) noexcept
{
    StimulusCommand cmd;
    cmd.amplitude_v = config.amplitude;
    cmd.timestamp_s = now;
    if (std::abs(theta_deg) > config.theta_threshold) {
        cmd.channel = theta_deg > 0.0 ? StimulusChannel::right_antenna : StimulusChannel::left_antenna;
        cmd.frequency_hz = steering_frequency(config, theta_deg);
        cmd.duration_ms = config.antenna_duration;
        cmd.pulse_width_ms = config.antenna_pulse_width;
    } else {
        cmd.channel = StimulusChannel::elytra_both;
        cmd.frequency_hz = config.elytra_frequency;
        cmd.duration_ms = config.elytra_duration;
        cmd.duty_pct = config.elytra_duty;
    }
    return cmd;
}

StimulusCommand decide(const ControllerConfig& config, const Pose2D& pose, Point2 target, double now)
{
    return decide_from_error(config, heading_error(pose, target), now);
}

}  // namespace cyborgnav
