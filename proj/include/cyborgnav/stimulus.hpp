#pragma once

#include <optional>
#include <string_view>

namespace cyborgnav {

enum class StimulusChannel { left_antenna, right_antenna, elytra_both };

std::string_view to_string(StimulusChannel c) noexcept;
std::optional<StimulusChannel> parse_channel(std::string_view s) noexcept;

inline bool is_antenna(StimulusChannel c) noexcept { return c != StimulusChannel::elytra_both; }

/// One stimulus event as sent to the stimulator. Amplitude, pulse width and duty
/// cycle are carried for logging only; the plant responds to channel, frequency
/// and duration.
struct StimulusCommand
{
    StimulusChannel channel{StimulusChannel::elytra_both};
    double frequency_hz{20.0};
    double duration_ms{200.0};
    double amplitude_v{2.5};
    double pulse_width_ms{0.0};  ///< antenna channels
    double duty_pct{0.0};        ///< elytra channel
    double timestamp_s{0.0};

    bool operator==(const StimulusCommand&) const = default;
};

}  // namespace cyborgnav
