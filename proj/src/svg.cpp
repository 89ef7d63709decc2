#include "topovol/svg.hpp"
#include "topovol/csv.hpp"
#include "topovol/date.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace topovol {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

SvgFigure::SvgFigure(std::string title, int width, int height)
    : title_(std::move(title)), width_(width), height_(height) {}

void SvgFigure::add_line(const std::vector<double>& x, const std::vector<double>& y,
                         const std::string& color, const std::string& label) {
    lines_.push_back({x, y, color, label});
}

void SvgFigure::add_band(const std::vector<double>& x, const std::vector<double>& lo,
                         const std::vector<double>& hi, const std::string& fill,
                         const std::string& label) {
    bands_.push_back({x, lo, hi, fill, label});
}

void SvgFigure::add_vline(double x, const std::string& color, const std::string& label) {
    vlines_.push_back({x, color, label});
}

void SvgFigure::add_hline(double y, const std::string& color, bool dashed) {
    hlines_.push_back({y, color, dashed});
}

void SvgFigure::add_stems(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& color) {
    stems_.push_back({x, y, color});
}

void SvgFigure::add_box(double pos, double lo_whisker, double q1, double median,
                        double q3, double hi_whisker, const std::string& label) {
    boxes_.push_back({pos, lo_whisker, q1, median, q3, hi_whisker, label});
}

std::string SvgFigure::render(const std::string& provenance) const {
    const double ml = 64, mr = 18, mt = 34, mb = 46; // margins
    const double pw = width_ - ml - mr;              // plot area
    const double ph = height_ - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto eat = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
        for (double v : xs) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
        for (double v : ys) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    };
    for (const auto& l : lines_) eat(l.x, l.y);
    for (const auto& b : bands_) { eat(b.x, b.lo); eat(b.x, b.hi); }
    for (const auto& s : stems_) { eat(s.x, s.y); eat(s.x, {0.0}); }
    for (const auto& b : boxes_) {
        xmin = std::min(xmin, b.pos - 0.6); xmax = std::max(xmax, b.pos + 0.6);
        ymin = std::min(ymin, b.lo); ymax = std::max(ymax, b.hi);
    }
    for (const auto& h : hlines_) { ymin = std::min(ymin, h.y); ymax = std::max(ymax, h.y); }
    if (!std::isfinite(xmin)) { xmin = 0; xmax = 1; }
    if (!std::isfinite(ymin)) { ymin = 0; ymax = 1; }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
       << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_
       << "\">\n";
    if (!provenance.empty()) os << "<!-- " << escape_xml(provenance) << " -->\n";
    os << "<rect width=\"" << width_ << "\" height=\"" << height_ << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << width_ / 2 << "\" y=\"20\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"14\">"
       << escape_xml(title_) << "</text>\n";

    // frame
    os << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
       << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // y ticks
    for (int i = 0; i <= 4; ++i) {
        const double v = ymin + (ymax - ymin) * i / 4.0;
        const double y = py(v);
        os << "<line x1=\"" << fmt(ml - 4) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(ml)
           << "\" y2=\"" << fmt(y) << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(y + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << fmt_tick(v) << "</text>\n";
    }
    // x ticks
    if (boxes_.empty()) {
        for (int i = 0; i <= 5; ++i) {
            const double v = xmin + (xmax - xmin) * i / 5.0;
            const double x = px(v);
            os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
               << fmt(x) << "\" y2=\"" << fmt(mt + ph + 4) << "\" stroke=\"#444\"/>\n";
            std::string label = date_axis_
                                    ? Date(static_cast<std::int32_t>(std::lround(v))).to_string()
                                    : fmt_tick(v);
            os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(mt + ph + 18)
               << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
               << label << "</text>\n";
        }
    } else {
        for (const auto& b : boxes_) {
            os << "<text x=\"" << fmt(px(b.pos)) << "\" y=\"" << fmt(mt + ph + 18)
               << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
               << escape_xml(b.label) << "</text>\n";
        }
    }

    for (const auto& b : bands_) {
        os << "<path d=\"M";
        for (std::size_t i = 0; i < b.x.size(); ++i)
            os << (i ? " L" : "") << fmt(px(b.x[i])) << " " << fmt(py(b.lo[i]));
        for (std::size_t i = b.x.size(); i-- > 0;)
            os << " L" << fmt(px(b.x[i])) << " " << fmt(py(b.hi[i]));
        os << " Z\" fill=\"" << b.fill << "\" stroke=\"none\" opacity=\"0.35\"/>\n";
    }
    for (const auto& h : hlines_) {
        os << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(py(h.y)) << "\" x2=\""
           << fmt(ml + pw) << "\" y2=\"" << fmt(py(h.y)) << "\" stroke=\"" << h.color
           << "\"" << (h.dashed ? " stroke-dasharray=\"5 4\"" : "") << "/>\n";
    }
    for (const auto& s : stems_) {
        for (std::size_t i = 0; i < s.x.size(); ++i)
            os << "<line x1=\"" << fmt(px(s.x[i])) << "\" y1=\"" << fmt(py(0.0))
               << "\" x2=\"" << fmt(px(s.x[i])) << "\" y2=\"" << fmt(py(s.y[i]))
               << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    }
    for (const auto& l : lines_) {
        if (l.x.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << l.color
           << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < l.x.size(); ++i)
            os << fmt(px(l.x[i])) << "," << fmt(py(l.y[i])) << " ";
        os << "\"/>\n";
    }
    for (const auto& v : vlines_) {
        os << "<line x1=\"" << fmt(px(v.x)) << "\" y1=\"" << fmt(mt) << "\" x2=\""
           << fmt(px(v.x)) << "\" y2=\"" << fmt(mt + ph) << "\" stroke=\"" << v.color
           << "\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>\n";
    }
    for (const auto& b : boxes_) {
        const double half = 0.28;
        const double xc = px(b.pos), xl = px(b.pos - half), xr = px(b.pos + half);
        os << "<line x1=\"" << fmt(xc) << "\" y1=\"" << fmt(py(b.lo)) << "\" x2=\""
           << fmt(xc) << "\" y2=\"" << fmt(py(b.q1)) << "\" stroke=\"#333\"/>\n";
        os << "<line x1=\"" << fmt(xc) << "\" y1=\"" << fmt(py(b.q3)) << "\" x2=\""
           << fmt(xc) << "\" y2=\"" << fmt(py(b.hi)) << "\" stroke=\"#333\"/>\n";
        os << "<rect x=\"" << fmt(xl) << "\" y=\"" << fmt(py(b.q3)) << "\" width=\""
           << fmt(xr - xl) << "\" height=\"" << fmt(py(b.q1) - py(b.q3))
           << "\" fill=\"#9ecae1\" stroke=\"#333\"/>\n";
        os << "<line x1=\"" << fmt(xl) << "\" y1=\"" << fmt(py(b.med)) << "\" x2=\""
           << fmt(xr) << "\" y2=\"" << fmt(py(b.med))
           << "\" stroke=\"#08306b\" stroke-width=\"2\"/>\n";
    }

    // legend
    double ly = mt + 14;
    auto legend_entry = [&](const std::string& color, const std::string& label) {
        if (label.empty()) return;
        os << "<rect x=\"" << fmt(ml + 8) << "\" y=\"" << fmt(ly - 9)
           << "\" width=\"18\" height=\"4\" fill=\"" << color << "\"/>\n";
        os << "<text x=\"" << fmt(ml + 32) << "\" y=\"" << fmt(ly)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(label)
           << "</text>\n";
        ly += 15;
    };
    for (const auto& b : bands_) legend_entry(b.fill, b.label);
    for (const auto& l : lines_) legend_entry(l.color, l.label);
    for (const auto& v : vlines_) legend_entry(v.color, v.label);

    os << "</svg>\n";
    return os.str();
}

void SvgFigure::save(const std::string& path, const std::string& provenance) const {
    write_file(path, render(provenance));
}

} // namespace topovol
