#pragma once

#include "cyborgnav/geometry.hpp"
#include "cyborgnav/stimulus.hpp"

namespace cyborgnav {

/// Gains and stimulus recipes of the central controller.
///
/// Steering uses f = clamp(k_p * |theta|, f_min, f_max) with theta in degrees.
/// This proportional law is a reconstruction: it is the simplest mapping that
/// skews the stimulation-frequency distribution low for small gains and high
/// for large gains. The stimulus recipes are fixed; only frequency varies.
struct ControllerConfig
{
    double k_p{0.5};               ///< Hz per degree
    double t_update{1.0};          ///< s
    double theta_threshold{25.0};  ///< deg
    double f_min{10.0};            ///< Hz
    double f_max{40.0};            ///< Hz
    double antenna_duration{400.0};   ///< ms
    double antenna_pulse_width{2.0};  ///< ms
    double elytra_frequency{20.0};    ///< Hz
    double elytra_duration{200.0};    ///< ms
    double elytra_duty{50.0};         ///< %
    double amplitude{2.5};            ///< V

    void validate() const;

    bool operator==(const ControllerConfig&) const = default;
};

double steering_frequency(const ControllerConfig& config, double theta_deg) noexcept;

/// Steer when |theta| exceeds the threshold, on the antenna contralateral to the
/// needed turn (a left turn, theta > 0, stimulates the right antenna); otherwise
/// issue the fixed elytra thrust stimulus.
StimulusCommand decide(const ControllerConfig& config, const Pose2D& pose, Point2 target, double now);

/// Same decision from a precomputed heading error.
StimulusCommand decide_from_error(const ControllerConfig& config, double theta_deg, double now) noexcept;

}  // namespace cyborgnav
