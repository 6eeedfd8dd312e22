#pragma once

#include "cyborgnav/metrics.hpp"
#include "cyborgnav/trial.hpp"

#include <span>
#include <string>

namespace cyborgnav {

/// Arena, reference path, endpoint circles and the tracked trajectories of
/// `records`. Reversed trials are drawn point-mirrored through the path
/// midpoint so every trajectory runs left to right. Every `stride`-th frame
/// (and the last) is drawn. 1 px = 1 mm.
std::string trajectory_svg(std::span<const TrialRecord> records, const PathSpec& path, const ArenaSpec& arena,
                           const std::string& title, std::size_t stride = 10);

/// Bar chart of one stimulation-frequency histogram with its median marked.
std::string histogram_svg(const FrequencyHistogram& histogram, const std::string& title);

}  // namespace cyborgnav
