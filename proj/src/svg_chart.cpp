#include "gridshaver/svg_chart.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace gridshaver {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 180.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c",
                                                "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// 1, 2 or 5 times a power of ten.
double nice_step(double span, int ticks) {
    const double raw = span / ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

}  // namespace

void LineChart::render(std::ostream& out) const {
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = 0.0;
    double y1 = reference_y.value_or(0.0);
    for (const auto& s : series) {
        for (double x : s.x) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
        }
        for (double y : s.y) {
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!(x1 > x0)) {
        x0 = 0.0;
        x1 = 1.0;
    }
    if (!(y1 > y0)) y1 = y0 + 1.0;
    const double y_step = nice_step(y1 - y0, 6);
    y0 = std::floor(y0 / y_step) * y_step;
    y1 = std::ceil(y1 * 1.05 / y_step) * y_step;
    const double x_step = nice_step(x1 - x0, 8);

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title) << "</text>\n";

    for (double y = y0; y <= y1 + 1e-9 * y_step; y += y_step) {
        out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << sy(y)
            << "\" y2=\"" << sy(y) << "\" stroke=\"#e0e0e0\"/>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(y) + 4
            << "\" text-anchor=\"end\">" << y << "</text>\n";
    }
    for (double x = std::ceil(x0 / x_step) * x_step; x <= x1 + 1e-9 * x_step; x += x_step) {
        out << "<text x=\"" << sx(x) << "\" y=\"" << kTop + ph + 18
            << "\" text-anchor=\"middle\">" << x << "</text>\n";
    }
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    out << "<text transform=\"translate(18," << kTop + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";

    if (reference_y) {
        out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << sy(*reference_y)
            << "\" y2=\"" << sy(*reference_y)
            << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
        out << "<text x=\"" << kLeft + pw + 6 << "\" y=\"" << sy(*reference_y) + 4 << "\">"
            << escape(reference_label) << "</text>\n";
    }

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % kColors.size()];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) out << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
        out << "\"/>\n";
        const double ly = kTop + 16.0 + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << kLeft + pw + 10 << "\" x2=\"" << kLeft + pw + 34 << "\" y1=\"" << ly
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kLeft + pw + 40 << "\" y=\"" << ly + 4 << "\">" << escape(s.name)
            << "</text>\n";
    }
    out << "</svg>\n";
}

void LineChart::save(const std::filesystem::path& path) const {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    render(file);
    if (!file) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace gridshaver
