#include "trotter/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace trotter::svg {

namespace {

constexpr double WIDTH = 720, HEIGHT = 480;
constexpr double ML = 70, MR = 20, MT = 40, MB = 55;

const char* PALETTE[] = {"#2a9d8f", "#e76f51", "#4361ee", "#f4a261", "#7209b7", "#333333"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

}  // namespace

void write_chart(const std::filesystem::path& path, const std::string& title,
                 const std::string& x_label, const std::string& y_label,
                 const std::vector<Series>& series, bool log_y) {
    Range rx, ry;
    for (const Series& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            const double y = s.y[i];
            if (log_y && y <= 0.0) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
            rx.grow(s.x[i]);
            ry.grow(log_y ? std::log10(y) : y);
        }
    if (!(rx.lo <= rx.hi) || !(ry.lo <= ry.hi))
        throw std::runtime_error("svg: no finite data to plot");
    if (rx.hi == rx.lo) rx.hi = rx.lo + 1.0;
    if (ry.hi == ry.lo) ry.hi = ry.lo + 1.0;
    const double pad = 0.05 * (ry.hi - ry.lo);
    ry.lo -= pad;
    ry.hi += pad;

    auto px = [&](double x) { return ML + (x - rx.lo) / (rx.hi - rx.lo) * (WIDTH - ML - MR); };
    auto py = [&](double y) {
        const double v = log_y ? std::log10(y) : y;
        return HEIGHT - MB - (v - ry.lo) / (ry.hi - ry.lo) * (HEIGHT - MT - MB);
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << WIDTH << "\" height=\""
        << HEIGHT << "\" viewBox=\"0 0 " << WIDTH << " " << HEIGHT << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << WIDTH / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">"
        << title << "</text>\n";

    // Axes box and ticks.
    out << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << WIDTH - ML - MR
        << "\" height=\"" << HEIGHT - MT - MB
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / 5.0;
        out << "<text x=\"" << px(fx) << "\" y=\"" << HEIGHT - MB + 18
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fx
            << "</text>\n";
        const double fy = ry.lo + (ry.hi - ry.lo) * i / 5.0;
        out << "<text x=\"" << ML - 8 << "\" y=\""
            << HEIGHT - MB - (HEIGHT - MT - MB) * i / 5.0 + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
            << (log_y ? "1e" + std::to_string(int(std::round(fy))) : std::to_string(fy).substr(0, 7))
            << "</text>\n";
    }
    out << "<text x=\"" << WIDTH / 2 << "\" y=\"" << HEIGHT - 12
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << HEIGHT / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 18 "
        << HEIGHT / 2 << ")\">" << y_label << "</text>\n";

    for (size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = PALETTE[si % 6];
        if (s.points_only) {
            for (size_t i = 0; i < s.x.size(); ++i) {
                if (log_y && s.y[i] <= 0.0) continue;
                out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
                    << "\" r=\"3\" fill=\"" << color << "\"/>\n";
            }
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (size_t i = 0; i < s.x.size(); ++i) {
                if (log_y && s.y[i] <= 0.0) continue;
                out << px(s.x[i]) << "," << py(s.y[i]) << " ";
            }
            out << "\"/>\n";
        }
        out << "<text x=\"" << WIDTH - MR - 8 << "\" y=\"" << MT + 18 + 16 * double(si)
            << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\" fill=\""
            << color << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace trotter::svg
