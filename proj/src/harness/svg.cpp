#include "covertlink/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace covertlink::sim {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<SvgSeries>& series, const SvgOptions& opts) {
    if (series.empty()) throw std::invalid_argument("render_svg: no series");

    const int ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = opts.width - ml - mr;
    const double ph = opts.height - mt - mb;

    auto ty = [&](double y) { return opts.log_y ? std::log10(std::max(y, opts.log_floor)) : y; };

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
        for (double v : s.y) { ymin = std::min(ymin, ty(v)); ymax = std::max(ymax, ty(v)); }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    if (opts.log_y) { ymin = std::floor(ymin); ymax = std::ceil(ymax); }
    else {
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad; ymax += pad;
    }

    auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    auto py = [&](double y) { return mt + ph * (1.0 - (ty(y) - ymin) / (ymax - ymin)); };
    auto py_t = [&](double yt) { return mt + ph * (1.0 - (yt - ymin) / (ymax - ymin)); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
       << opts.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << opts.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
       << opts.title << "</text>\n";

    // gridlines and ticks
    const int nx = 8;
    for (int i = 0; i <= nx; ++i) {
        const double x = xmin + (xmax - xmin) * i / nx;
        os << "<line x1=\"" << num(px(x)) << "\" y1=\"" << mt << "\" x2=\"" << num(px(x))
           << "\" y2=\"" << mt + ph << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(px(x)) << "\" y=\"" << mt + ph + 16
           << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
    }
    if (opts.log_y) {
        for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e) {
            os << "<line x1=\"" << ml << "\" y1=\"" << num(py_t(e)) << "\" x2=\"" << ml + pw
               << "\" y2=\"" << num(py_t(e)) << "\" stroke=\"#dddddd\"/>\n";
            os << "<text x=\"" << ml - 6 << "\" y=\"" << num(py_t(e) + 4)
               << "\" text-anchor=\"end\">1e" << e << "</text>\n";
        }
    } else {
        const int ny = 6;
        for (int i = 0; i <= ny; ++i) {
            const double yt = ymin + (ymax - ymin) * i / ny;
            os << "<line x1=\"" << ml << "\" y1=\"" << num(py_t(yt)) << "\" x2=\"" << ml + pw
               << "\" y2=\"" << num(py_t(yt)) << "\" stroke=\"#dddddd\"/>\n";
            os << "<text x=\"" << ml - 6 << "\" y=\"" << num(py_t(yt) + 4)
               << "\" text-anchor=\"end\">" << num(yt) << "</text>\n";
        }
    }
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << num(pw) << "\" height=\""
       << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opts.height - 12
       << "\" text-anchor=\"middle\">" << opts.xlabel << "</text>\n";
    os << "<text x=\"16\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << mt + ph / 2 << ")\">" << opts.ylabel << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        const char* color = kPalette[s % 8];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < ser.x.size(); ++i)
            os << num(px(ser.x[i])) << ',' << num(py(ser.y[i])) << ' ';
        os << "\"/>\n";
        for (std::size_t i = 0; i < ser.x.size(); ++i)
            os << "<circle cx=\"" << num(px(ser.x[i])) << "\" cy=\"" << num(py(ser.y[i]))
               << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        os << "<text x=\"" << ml + pw - 8 << "\" y=\"" << mt + 16 + 16 * static_cast<int>(s)
           << "\" text-anchor=\"end\" fill=\"" << color << "\">" << ser.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const std::string& path, const std::vector<SvgSeries>& series,
               const SvgOptions& opts) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_svg: cannot open " + path);
    f << render_svg(series, opts);
}

}  // namespace covertlink::sim
