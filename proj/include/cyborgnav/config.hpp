#pragma once

#include "cyborgnav/trial.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace cyborgnav {

/// Which of the three rig markers points forward; the other two form the rear pair.
struct MarkerRig
{
    int front_marker{0};  ///< 0, 1 or 2

    void validate() const;

    bool operator==(const MarkerRig&) const = default;
};

/// Everything a run reads from its JSON config. Sections "path", "arena",
/// "beetle", "controller" map onto the matching members of `base`; "trial"
/// holds the remaining TrialConfig fields; "sweep" and "markers" stand alone.
/// Missing keys keep their defaults, unknown keys are rejected.
struct ConfigDocument
{
    TrialConfig base{};
    SweepConfig sweep{};
    MarkerRig markers{};

    void validate() const;

    bool operator==(const ConfigDocument&) const = default;
};

/// Throws ConfigError on malformed JSON, wrong types, unknown keys or failed
/// validation.
ConfigDocument parse_config(std::string_view text);
/// Complete document, every key present. parse_config(serialize_config(d)) == d.
std::string serialize_config(const ConfigDocument& doc);

/// Throws IoError when the file cannot be read.
ConfigDocument load_config(const std::filesystem::path& file);

}  // namespace cyborgnav
