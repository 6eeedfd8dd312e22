#pragma once

#include "cyborgnav/config.hpp"
#include "cyborgnav/trial.hpp"

#include <filesystem>
#include <string_view>
#include <vector>

namespace cyborgnav {

/// Marker CSV, one row per capture frame:
///
///   frame,t_s,m1_x_mm,m1_y_mm,m1_z_mm,m2_x_mm,m2_y_mm,m2_z_mm,m3_x_mm,m3_y_mm,m3_z_mm
///
/// The header row is required; further columns after the nine marker
/// coordinates are ignored. An empty cell in any marker column marks the frame
/// as miss-tracked.
///
/// Position is the centroid of the three markers in the floor plane. Heading
/// points from the midpoint of the rear pair to the front marker. Miss-tracked
/// frames repeat the last tracked pose (the first tracked pose for leading
/// gaps).
///
/// Throws DataError("malformed marker file") when fewer than three marker
/// column triples are present or a cell is not a number, DataError("bad
/// timeline") when times do not strictly increase.
std::vector<Frame> ingest_markers(std::string_view csv, const MarkerRig& rig = {});
std::vector<Frame> ingest_marker_file(const std::filesystem::path& file, const MarkerRig& rig = {});

/// Outcome of a captured trial judged from its last frame: inside the circle
/// around the destination (the far end from the first frame) is success,
/// outside the arena is out_of_bounds, anything else is timeout.
TrialRecord record_from_frames(std::vector<Frame> frames, const PathSpec& path, const ArenaSpec& arena);

}  // namespace cyborgnav
