#include "cyborgnav/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace cyborgnav {

namespace {

// Fixed two-decimal formatting keeps the output byte-stable.
std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string trajectory_svg(std::span<const TrialRecord> records, const PathSpec& path, const ArenaSpec& arena,
                           const std::string& title, std::size_t stride)
{
    stride = std::max<std::size_t>(stride, 1);
    constexpr double margin = 20.0;
    constexpr double title_h = 24.0;
    const double cx = 0.5 * (path.x_start + path.x_end);
    const double w = arena.width + 2.0 * margin;
    const double h = arena.height + 2.0 * margin + title_h;
    // world (mm, y up) to image (px, y down)
    auto px = [&](double x) { return x - cx + 0.5 * arena.width + margin; };
    auto py = [&](double y) { return title_h + margin + 0.5 * arena.height - y; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(margin) + "\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" + escape(title) +
         "</text>\n";
    s += "<rect x=\"" + num(margin) + "\" y=\"" + num(title_h + margin) + "\" width=\"" + num(arena.width) +
         "\" height=\"" + num(arena.height) + "\" fill=\"none\" stroke=\"#888\"/>\n";

    s += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
        const double x = path.x_start + (path.x_end - path.x_start) * i / n;
        const Point2 p = path_point(path, x);
        s += num(px(p.x)) + "," + num(py(p.y)) + (i < n ? " " : "");
    }
    s += "\"/>\n";
    for (const Point2 c : {origin_center(path, TravelDirection::forward), destination_center(path, TravelDirection::forward)})
        s += "<circle cx=\"" + num(px(c.x)) + "\" cy=\"" + num(py(c.y)) + "\" r=\"" + num(path.endpoint_radius) +
             "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";

    std::size_t k = 0;
    for (const auto& r : records) {
        const bool mirror = r.tag.direction == TravelDirection::reversed;
        std::string pts;
        std::size_t m = 0;
        for (std::size_t i = 0; i < r.frames.size(); ++i) {
            const Frame& f = r.frames[i];
            if (!f.tracked || (i % stride != 0 && i + 1 != r.frames.size()))
                continue;
            const double x = mirror ? 2.0 * cx - f.pose.x : f.pose.x;
            const double y = mirror ? -f.pose.y : f.pose.y;
            if (m++ > 0)
                pts += ' ';
            pts += num(px(x)) + "," + num(py(y));
        }
        const char* color = kColors[k++ % std::size(kColors)];
        s += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1\" stroke-opacity=\"0.7\" points=\"" + pts + "\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string histogram_svg(const FrequencyHistogram& hist, const std::string& title)
{
    constexpr double w = 480.0, h = 300.0;
    constexpr double left = 50.0, right = 20.0, top = 34.0, bottom = 40.0;
    const double pw = w - left - right;
    const double ph = h - top - bottom;
    const double lo = hist.edges.empty() ? 10.0 : hist.edges.front();
    const double hi = hist.edges.empty() ? 40.0 : hist.edges.back();
    auto px = [&](double f) { return left + (f - lo) / (hi - lo) * pw; };

    double top_share = 0.0;
    for (std::size_t c : hist.counts)
        top_share = std::max(top_share, hist.total ? static_cast<double>(c) / static_cast<double>(hist.total) : 0.0);
    const double ymax = top_share > 0.0 ? top_share : 1.0;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(left) + "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" + escape(title) +
         "</text>\n";
    for (std::size_t i = 0; i < hist.counts.size() && i + 1 < hist.edges.size(); ++i) {
        const double share = hist.total ? static_cast<double>(hist.counts[i]) / static_cast<double>(hist.total) : 0.0;
        const double bh = share / ymax * ph;
        s += "<rect x=\"" + num(px(hist.edges[i])) + "\" y=\"" + num(top + ph - bh) + "\" width=\"" +
             num(px(hist.edges[i + 1]) - px(hist.edges[i])) + "\" height=\"" + num(bh) +
             "\" fill=\"#4c78a8\" stroke=\"white\"/>\n";
    }
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
         num(top + ph) + "\" stroke=\"black\"/>\n";
    for (double f = lo; f <= hi + 1e-9; f += 5.0)
        s += "<text x=\"" + num(px(f)) + "\" y=\"" + num(top + ph + 16) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" + num(f).substr(0, num(f).size() - 3) +
             "</text>\n";
    s += "<text x=\"" + num(left + 0.5 * pw) + "\" y=\"" + num(h - 6) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">stimulation frequency (Hz)</text>\n";
    if (hist.median)
        s += "<line x1=\"" + num(px(*hist.median)) + "\" y1=\"" + num(top) + "\" x2=\"" + num(px(*hist.median)) +
             "\" y2=\"" + num(top + ph) + "\" stroke=\"#d62728\" stroke-dasharray=\"5 3\"/>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace cyborgnav
