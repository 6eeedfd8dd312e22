#pragma once

#include "cyborgnav/metrics.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cyborgnav {

/// Exit codes: 0 success, 1 validation error (bad flags, config or data),
/// 2 i/o error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

/// Summary table, one row per (t_update, kp), columns
/// t_update_s,kp,success_rate_pct,tracking_error_mm_mean,tracking_error_mm_sd,
/// nav_time_s_mean,nav_time_s_sd,effort_mean,effort_sd,dist_mm_mean,dist_mm_sd,
/// speed_mms_mean,speed_mms_sd. Undefined statistics are left empty.
std::string summary_csv(const SweepSummary& summary);
/// kp,bin_lo_hz,bin_hi_hz,count,share,median_hz
std::string histogram_csv(const SweepSummary& summary);

/// Seed precedence: the --seed flag, then CYBORGNAV_SEED, then the config.
/// Throws ConfigError when the environment value is not an unsigned integer.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env, std::uint64_t config_seed);

}  // namespace cyborgnav
