#pragma once

#include "cyborgnav/trial.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace cyborgnav {

/// JSONL trial log. Line 1 is {"type":"meta",...} with the record's tag, then
/// frame and stim lines in time order (a stimulus follows the frame it was
/// issued on), then exactly one {"type":"outcome",...} line.
///
///   {"type":"frame","t":..,"x":..,"y":..,"heading":..,"tracked":true}
///   {"type":"stim","t":..,"channel":"left_antenna","freq_hz":..,"dur_ms":..,
///    "amp_v":..,"pulse_ms":..,"duty_pct":..}
///   {"type":"outcome","reason":"success","excluded":null}
///
/// Units are mm, s, deg. Numbers are written in shortest round-trip form, so
/// reading a log back gives the identical record.
void write_trial_log(std::ostream& out, const TrialRecord& record);
std::string trial_log_string(const TrialRecord& record);

/// Throws DataError("malformed log: ...") on bad lines, missing or repeated
/// outcome, or out-of-order times. The meta line is optional; the stim fields
/// after dur_ms default to the controller's recipes.
TrialRecord read_trial_log(std::istream& in);
TrialRecord read_trial_log_string(const std::string& text);

/// File helpers; throw IoError when the file cannot be opened or written.
void save_trial_log(const std::filesystem::path& file, const TrialRecord& record);
TrialRecord load_trial_log(const std::filesystem::path& file);

}  // namespace cyborgnav
