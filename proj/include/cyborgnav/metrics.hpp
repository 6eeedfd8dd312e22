#pragma once

#include "cyborgnav/geometry.hpp"
#include "cyborgnav/plant.hpp"
#include "cyborgnav/trial.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cyborgnav {

struct TimedSample
{
    double t{0.0};
    double value{0.0};
};

struct TimedPoint
{
    double t{0.0};
    Point2 p{};
};

inline constexpr double kFilterWindow = 0.1;     ///< s
inline constexpr double kSeriesInterval = 0.5;   ///< s
inline constexpr double kSpeedWindow = 0.1;      ///< s
inline constexpr double kTurnMeasureWindow = 0.5;  ///< s, stimulus onset to onset + 400 ms + 100 ms settle
inline constexpr double kOutlierSigma = 2.7;

/// Centered moving average: each output is the mean of the input samples whose
/// time lies within +-window/2 of it. The window is truncated at the ends.
/// Samples must be time-ordered.
std::vector<TimedSample> moving_average(std::span<const TimedSample> series, double window = kFilterWindow);

/// Tracked frames of a record with x and y smoothed by moving_average.
std::vector<TimedPoint> filtered_positions(const TrialRecord& record, double window = kFilterWindow);

/// Area between the filtered trajectory and the path divided by the path's arc
/// length (mm). Throws DataError("metric undefined for failed trial").
double tracking_error(const TrialRecord& record, const PathSpec& path);
double navigation_time(const TrialRecord& record);
std::size_t control_effort(const TrialRecord& record);

/// Distance from the filtered position to the path every 0.5 s. Empty when the
/// record spans less than 1 s.
std::vector<TimedSample> distance_to_path_series(const TrialRecord& record, const PathSpec& path);
/// Mean speed (traveled length over elapsed time) inside the centered 100 ms
/// window around each 0.5 s tick. Empty when the record spans less than 1 s.
std::vector<TimedSample> instantaneous_speed_series(const TrialRecord& record);

/// Frequency bins 10-16, 17-24, 25-32, 33-40 Hz. Continuous frequencies split at
/// the half-integers 16.5, 24.5 and 32.5.
inline constexpr int kTurnBins = 4;
std::optional<int> turn_bin(double frequency_hz) noexcept;

struct InducedTurn
{
    double frequency_hz{0.0};
    AntennaSide side{AntennaSide::left};
    double angle{0.0};  ///< deg, left turns positive
    double onset{0.0};  ///< s
};

/// Heading change (unwrapped) from each antenna stimulus onset to onset + 0.5 s.
/// Stimuli whose window runs past the end of the record are skipped.
std::vector<InducedTurn> induced_turns(const TrialRecord& record);

struct GroupStats
{
    std::size_t n{0};        ///< samples kept
    std::size_t removed{0};
    double mean{0.0};
    double sd{0.0};
};

/// Single pass: statistics of the whole group, then drop samples farther than
/// k standard deviations from the mean, then statistics of what remains.
GroupStats outlier_filtered_stats(std::span<const double> samples, double k = kOutlierSigma);

struct TurnResponseBin
{
    int bin{0};
    AntennaSide side{AntennaSide::left};
    std::optional<GroupStats> stats;  ///< empty when the bin has no samples
};

/// Per (bin, side) induced-angle statistics, ordered bin-major, left side first.
std::vector<TurnResponseBin> reconstruct_turn_response(std::span<const InducedTurn> turns);
std::vector<TurnResponseBin> reconstruct_turn_response(std::span<const TrialRecord> records);

struct ThrustBoost
{
    double onset{0.0};
    double boost{0.0};  ///< mm/s, plateau speed minus speed just before onset
};
std::vector<ThrustBoost> thrust_boosts(const TrialRecord& record);

struct AttenuationReport
{
    std::optional<double> first4_success_pct;
    std::optional<double> last4_success_pct;
    std::size_t first4_trials{0};  ///< non-excluded trials behind the rates
    std::size_t last4_trials{0};
    std::optional<double> first4_turn_mean;  ///< contralateral turn magnitude, deg
    std::optional<double> last4_turn_mean;
    std::size_t first4_turns{0};
    std::size_t last4_turns{0};
    std::vector<double> thrust_group_means;  ///< per consecutive group of 20 elytra stimuli
    std::vector<std::size_t> thrust_group_sizes;
};

inline constexpr int kThrustGroupSize = 20;

/// Compares trials 1-4 with trials 9-12 of each session. Success rates count
/// non-excluded trials only.
AttenuationReport attenuation_report(std::span<const std::vector<TrialRecord>> sessions);

/// Metrics of one trial, enough to build the sweep summary without frames.
struct TrialEvaluation
{
    TrialTag tag{};
    TerminationReason outcome{TerminationReason::timeout};
    std::optional<Exclusion> excluded;
    std::optional<double> tracking_error;
    std::optional<double> navigation_time;
    std::optional<std::size_t> control_effort;
    std::vector<double> distance_samples;
    std::vector<double> speed_samples;
    std::vector<double> antenna_frequencies;
};

TrialEvaluation evaluate_trial(const TrialRecord& record, const PathSpec& path);

struct MeanSd
{
    std::size_t n{0};
    double mean{0.0};
    double sd{0.0};
};
MeanSd mean_sd(std::span<const double> xs);

struct SummaryRow
{
    double t_update{0.0};
    double k_p{0.0};
    std::size_t trials{0};    ///< non-excluded
    std::size_t excluded{0};
    std::size_t successes{0};
    double success_rate{0.0};  ///< %
    MeanSd tracking_error;
    MeanSd navigation_time;
    MeanSd control_effort;
    MeanSd distance;
    MeanSd speed;
};

struct FrequencyHistogram
{
    double k_p{0.0};
    std::vector<double> edges;  ///< bins.size() + 1 edges over [10, 40] Hz
    std::vector<std::size_t> counts;
    std::size_t total{0};
    std::optional<double> median;
};

struct SweepSummary
{
    std::vector<SummaryRow> rows;  ///< ordered by (t_update, k_p)
    std::vector<FrequencyHistogram> histograms;  ///< ordered by k_p
};

struct SummaryOptions
{
    bool series_successes_only{false};
    double histogram_bin_width{2.5};
};

SweepSummary summarize(std::span<const TrialEvaluation> trials, const SummaryOptions& options = {});
SweepSummary summarize_sweep(std::span<const SweepSession> sessions, const PathSpec& path,
                             const SummaryOptions& options = {});

const SummaryRow* find_row(const SweepSummary& s, double k_p, double t_update) noexcept;

}  // namespace cyborgnav
