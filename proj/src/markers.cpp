#include "cyborgnav/markers.hpp"

#include "cyborgnav/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

namespace cyborgnav {

namespace {

constexpr std::size_t kMarkerColumns = 9;
constexpr std::size_t kFirstMarkerColumn = 2;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos)
            return cells;
        start = comma + 1;
    }
}

double parse_number(std::string_view cell)
{
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw DataError("malformed marker file");
    return v;
}

}  // namespace

std::vector<Frame> ingest_markers(std::string_view csv, const MarkerRig& rig)
{
    rig.validate();
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto nl = csv.find('\n', start);
        const auto line = trim(csv.substr(start, nl == std::string_view::npos ? nl : nl - start));
        if (!line.empty())
            lines.push_back(line);
        if (nl == std::string_view::npos)
            break;
        start = nl + 1;
    }
    if (lines.empty() || split(lines.front()).size() < kFirstMarkerColumn + kMarkerColumns)
        throw DataError("malformed marker file");

    const int front = rig.front_marker;
    const int rear_a = (front + 1) % 3;
    const int rear_b = (front + 2) % 3;

    std::vector<Frame> frames;
    std::optional<Pose2D> last;
    std::size_t leading_gap = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i]);
        if (cells.size() < kFirstMarkerColumn + kMarkerColumns)
            throw DataError("malformed marker file");
        Frame f;
        f.t = parse_number(cells[1]);
        if (!frames.empty() && !(f.t > frames.back().t))
            throw DataError("bad timeline");

        std::array<Point2, 3> m{};
        bool complete = true;
        for (int k = 0; k < 3; ++k) {
            const auto cx = cells[kFirstMarkerColumn + 3 * k];
            const auto cy = cells[kFirstMarkerColumn + 3 * k + 1];
            const auto cz = cells[kFirstMarkerColumn + 3 * k + 2];
            if (cx.empty() || cy.empty() || cz.empty()) {
                complete = false;
                continue;
            }
            m[k] = {parse_number(cx), parse_number(cy)};
            parse_number(cz);  // validated, then dropped: poses live in the floor plane
        }

        if (complete) {
            Pose2D p;
            p.x = (m[0].x + m[1].x + m[2].x) / 3.0;
            p.y = (m[0].y + m[1].y + m[2].y) / 3.0;
            const double rx = 0.5 * (m[rear_a].x + m[rear_b].x);
            const double ry = 0.5 * (m[rear_a].y + m[rear_b].y);
            p.heading = normalize_deg(std::atan2(m[front].y - ry, m[front].x - rx) * 180.0 / std::numbers::pi);
            f.pose = p;
            f.tracked = true;
            if (!last) {
                for (std::size_t g = frames.size() - leading_gap; g < frames.size(); ++g)
                    frames[g].pose = p;
            }
            last = p;
        } else {
            f.tracked = false;
            if (last)
                f.pose = *last;
            else
                ++leading_gap;
        }
        frames.push_back(f);
    }
    if (frames.empty())
        throw DataError("malformed marker file");
    if (!last)
        throw DataError("marker file has no tracked frame");
    return frames;
}

std::vector<Frame> ingest_marker_file(const std::filesystem::path& file, const MarkerRig& rig)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_markers(buf.str(), rig);
}

TrialRecord record_from_frames(std::vector<Frame> frames, const PathSpec& path, const ArenaSpec& arena)
{
    if (frames.empty())
        throw DataError("no frames");
    TrialRecord r;
    const Point2 first = frames.front().pose.position();
    const Point2 last = frames.back().pose.position();
    const bool forward = distance(first, origin_center(path, TravelDirection::forward)) <=
                         distance(first, origin_center(path, TravelDirection::reversed));
    r.tag.direction = forward ? TravelDirection::forward : TravelDirection::reversed;
    if (distance(last, destination_center(path, r.tag.direction)) <= path.endpoint_radius)
        r.outcome = TerminationReason::success;
    else if (!arena_contains(arena, path, last))
        r.outcome = TerminationReason::out_of_bounds;
    else
        r.outcome = TerminationReason::timeout;
    r.frames = std::move(frames);
    return flag_exclusions(std::move(r));
}

}  // namespace cyborgnav
