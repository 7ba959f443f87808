#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "udn/errors.hpp"
#include "udn/scenario.hpp"

namespace udn {

// Self-contained line/scatter SVG plots so figure output needs no plotting
// stack. The CSV next to it is the authoritative artifact; this is a quick
// look. Rendering is fully deterministic; the timestamp comment is optional.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label, bool log_x, bool log_y)
        : title_(std::move(title)),
          x_label_(std::move(x_label)),
          y_label_(std::move(y_label)),
          log_x_(log_x),
          log_y_(log_y) {}

    void add_series(std::string name, std::vector<std::pair<double, double>> pts,
                    bool dashed = false) {
        series_.push_back({std::move(name), std::move(pts), dashed});
    }

    void set_timestamp(std::string ts) { timestamp_ = std::move(ts); }

    std::string render() const {
        const double W = 860, H = 600;
        const double ml = 80, mr = 220, mt = 50, mb = 60;
        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
        double y0 = x0, y1 = -x0;
        for (const auto& s : series_)
            for (auto [x, y] : s.pts) {
                if (!usable(x, log_x_) || !usable(y, log_y_)) continue;
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
        if (!(x0 <= x1) || !(y0 <= y1)) {
            x0 = log_x_ ? 1.0 : 0.0;
            x1 = log_x_ ? 10.0 : 1.0;
            y0 = log_y_ ? 1.0 : 0.0;
            y1 = log_y_ ? 10.0 : 1.0;
        }
        if (x0 == x1) { x1 = x0 + (log_x_ ? x0 : 1.0); }
        if (y0 == y1) { y1 = y0 + (log_y_ ? y0 : 1.0); }
        if (!log_y_) {
            const double pad = 0.05 * (y1 - y0);
            y0 -= pad;
            y1 += pad;
        }

        auto tx = [&](double x) {
            const double u = log_x_ ? (std::log10(x) - std::log10(x0)) / (std::log10(x1) - std::log10(x0))
                                    : (x - x0) / (x1 - x0);
            return ml + u * (W - ml - mr);
        };
        auto ty = [&](double y) {
            const double u = log_y_ ? (std::log10(y) - std::log10(y0)) / (std::log10(y1) - std::log10(y0))
                                    : (y - y0) / (y1 - y0);
            return H - mb - u * (H - mt - mb);
        };

        std::string out;
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
               num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
        if (!timestamp_.empty()) out += "<!-- generated " + timestamp_ + " -->\n";
        out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out += "<text x=\"" + num(0.5 * W) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
               "font-family=\"sans-serif\">" + escape(title_) + "</text>\n";

        // frame
        out += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(W - ml - mr) +
               "\" height=\"" + num(H - mt - mb) + "\" fill=\"none\" stroke=\"#333\"/>\n";

        // ticks
        for (double v : ticks(x0, x1, log_x_)) {
            const double px = tx(v);
            out += "<line x1=\"" + num(px) + "\" y1=\"" + num(H - mb) + "\" x2=\"" + num(px) +
                   "\" y2=\"" + num(H - mb + 5) + "\" stroke=\"#333\"/>\n";
            out += "<text x=\"" + num(px) + "\" y=\"" + num(H - mb + 20) +
                   "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" +
                   tick_label(v) + "</text>\n";
        }
        for (double v : ticks(y0, y1, log_y_)) {
            const double py = ty(v);
            out += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(ml) +
                   "\" y2=\"" + num(py) + "\" stroke=\"#333\"/>\n";
            out += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(py + 4) +
                   "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" +
                   tick_label(v) + "</text>\n";
        }
        out += "<text x=\"" + num(ml + 0.5 * (W - ml - mr)) + "\" y=\"" + num(H - 15) +
               "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" +
               escape(x_label_) + "</text>\n";
        out += "<text x=\"20\" y=\"" + num(mt + 0.5 * (H - mt - mb)) +
               "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 20 " +
               num(mt + 0.5 * (H - mt - mb)) + ")\">" + escape(y_label_) + "</text>\n";

        static const char* palette[] = {"#1f77b4", "#2ca02c", "#d62728", "#ff7f0e",
                                        "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
        for (std::size_t i = 0; i < series_.size(); ++i) {
            const auto& s = series_[i];
            const char* color = palette[i % 8];
            std::string pts;
            for (auto [x, y] : s.pts) {
                if (!usable(x, log_x_) || !usable(y, log_y_)) {
                    // break the line at missing points
                    if (!pts.empty()) out += polyline(pts, color, s.dashed);
                    pts.clear();
                    continue;
                }
                if (!pts.empty()) pts += ' ';
                pts += num(tx(x)) + "," + num(ty(y));
            }
            if (!pts.empty()) out += polyline(pts, color, s.dashed);
            for (auto [x, y] : s.pts) {
                if (!usable(x, log_x_) || !usable(y, log_y_)) continue;
                out += "<circle cx=\"" + num(tx(x)) + "\" cy=\"" + num(ty(y)) +
                       "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
            }
            const double ly = mt + 18 + 18.0 * static_cast<double>(i);
            out += "<line x1=\"" + num(W - mr + 14) + "\" y1=\"" + num(ly) + "\" x2=\"" +
                   num(W - mr + 44) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
                   "\" stroke-width=\"2\"" + (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
            out += "<text x=\"" + num(W - mr + 50) + "\" y=\"" + num(ly + 4) +
                   "\" font-size=\"12\" font-family=\"sans-serif\">" + escape(s.name) + "</text>\n";
        }
        out += "</svg>\n";
        return out;
    }

private:
    struct Series {
        std::string name;
        std::vector<std::pair<double, double>> pts;
        bool dashed = false;
    };

    static bool usable(double v, bool log_axis) {
        return std::isfinite(v) && (!log_axis || v > 0.0);
    }

    static std::string num(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return buf;
    }

    static std::string tick_label(double v) { return detail::format_double(v); }

    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '<') out += "&lt;";
            else if (c == '>') out += "&gt;";
            else if (c == '&') out += "&amp;";
            else out += c;
        }
        return out;
    }

    static std::string polyline(const std::string& pts, const char* color, bool dashed) {
        return "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.8\"" + (dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    }

    static std::vector<double> ticks(double lo, double hi, bool log_axis) {
        std::vector<double> out;
        if (log_axis) {
            const int e0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
            const int e1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
            for (int e = e0; e <= e1; ++e) out.push_back(std::pow(10.0, e));
            if (out.empty()) out = {lo, hi};
            return out;
        }
        const double span = hi - lo;
        const double raw = span / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0})
            if (mag * m >= raw) {
                step = mag * m;
                break;
            }
        const double first = std::ceil(lo / step) * step;
        for (double v = first; v <= hi + 1e-9 * span; v += step) out.push_back(v);
        return out;
    }

    std::string title_, x_label_, y_label_;
    bool log_x_, log_y_;
    std::vector<Series> series_;
    std::string timestamp_;
};

}  // namespace udn
