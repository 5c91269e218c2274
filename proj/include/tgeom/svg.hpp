#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "tgeom/error.hpp"

namespace tgeom::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool scatter = false;
    std::string color = "#1f77b4";
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

} // namespace detail

/// Single-panel chart with linear axes. Non-finite samples are dropped.
inline std::string plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                        const std::string& ylabel, int width = 640, int height = 420) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    std::size_t n = 0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw Error(Errc::invalid_parameter, "series x/y length mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
            ++n;
        }
    }
    if (n == 0) throw Error(Errc::parse_error, "nothing to plot");
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return mt + ph - (y - y0) / (y1 - y0) * ph; };

    using detail::num;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
                      std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           detail::escape(title) + "</text>\n";
    out += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
        char lx[32], ly[32];
        std::snprintf(lx, sizeof lx, "%.4g", fx);
        std::snprintf(ly, sizeof ly, "%.4g", fy);
        out += "<text x=\"" + num(sx(fx)) + "\" y=\"" + num(mt + ph + 16) + "\" text-anchor=\"middle\">" + lx + "</text>\n";
        out += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(sy(fy) + 4) + "\" text-anchor=\"end\">" + ly + "</text>\n";
    }
    out += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 10.0) + "\" text-anchor=\"middle\">" +
           detail::escape(xlabel) + "</text>\n";
    out += "<text transform=\"translate(16," + num(mt + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           detail::escape(ylabel) + "</text>\n";

    double legend_y = mt + 14;
    for (const auto& s : series) {
        if (s.scatter) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                out += "<circle cx=\"" + num(sx(s.x[i])) + "\" cy=\"" + num(sy(s.y[i])) + "\" r=\"1.5\" fill=\"" +
                       s.color + "\"/>\n";
            }
        } else {
            out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                out += num(sx(s.x[i])) + "," + num(sy(s.y[i])) + " ";
            }
            out += "\"/>\n";
        }
        out += "<text x=\"" + num(ml + pw - 8) + "\" y=\"" + num(legend_y) + "\" text-anchor=\"end\" fill=\"" + s.color +
               "\">" + detail::escape(s.label) + "</text>\n";
        legend_y += 16;
    }
    out += "</svg>\n";
    return out;
}

} // namespace tgeom::svg
