#include "stirred/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "stirred/flow_geometry.hpp"

namespace stirred::io {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string header(const std::string& title) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";
    return s;
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    std::string s;
    const double xa = f.px(f.x0), xb = f.px(f.x1), ya = f.py(f.y0), yb = f.py(f.y1);
    s += "<rect x=\"" + num(xa) + "\" y=\"" + num(yb) + "\" width=\"" + num(xb - xa) + "\" height=\"" +
         num(ya - yb) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = f.x0 + (f.x1 - f.x0) * k / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * k / 4.0;
        s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(ya + 16) + "\" text-anchor=\"middle\">" + tick(xv) +
             "</text>\n";
        s += "<text x=\"" + num(xa - 6) + "\" y=\"" + num(f.py(yv) + 4) + "\" text-anchor=\"end\">" + tick(yv) +
             "</text>\n";
    }
    s += "<text x=\"" + num((xa + xb) / 2) + "\" y=\"" + num(kHeight - 18) + "\" text-anchor=\"middle\">" +
         escape(xlabel) + "</text>\n";
    s += "<text x=\"18\" y=\"" + num((ya + yb) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num((ya + yb) / 2) + ")\">" + escape(ylabel) + "</text>\n";
    return s;
}

std::string polyline(const Frame& f, const std::vector<double>& x, const std::vector<double>& y,
                     const char* colour) {
    std::string s = "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        s += num(f.px(x[i])) + "," + num(f.py(y[i])) + " ";
    }
    s += "\"/>\n";
    return s;
}

std::string legend(const std::vector<Series>& series) {
    std::string s;
    double y = kTop + 10;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* colour = kColours[i % std::size(kColours)];
        const double x = kWidth - kRight + 12;
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x + 20) + "\" y2=\"" + num(y) +
             "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(x + 26) + "\" y=\"" + num(y + 4) + "\">" + escape(series[i].label) + "</text>\n";
        y += 18;
    }
    return s;
}

}  // namespace

std::string svg_line_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                          const std::string& ylabel) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    std::string doc = header(title);
    if (!(x0 <= x1)) {
        doc += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight / 2) +
               "\" text-anchor=\"middle\" font-size=\"18\">no data</text>\n</svg>\n";
        return doc;
    }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) y1 = y0 + 1.0;
    const Frame f{x0, x1, y0, y1};
    doc += axes(f, xlabel, ylabel);
    for (std::size_t i = 0; i < series.size(); ++i)
        doc += polyline(f, series[i].x, series[i].y, kColours[i % std::size(kColours)]);
    doc += legend(series);
    doc += "</svg>\n";
    return doc;
}

std::vector<Series> lily_pad_nullclines(double c, int samples) {
    Series g1{"gamma_1 (eta_1 = 0)", {}, {}};
    Series g2{"gamma_2 (eta_2 = 0)", {}, {}};
    // Root of g on v in [0, u] by bisection, if g changes sign there.
    auto trace = [&](Series& out, auto g) {
        for (int i = 1; i <= samples; ++i) {
            const double u = static_cast<double>(i) / samples;
            double lo = 1e-12, hi = u;
            double glo = g(u, lo), ghi = g(u, hi);
            if (glo == 0.0) {
                out.x.push_back(u);
                out.y.push_back(lo);
                continue;
            }
            if ((glo > 0) == (ghi > 0)) continue;
            for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(u, mid);
                if ((gm > 0) == (glo > 0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            out.x.push_back(u);
            out.y.push_back(0.5 * (lo + hi));
        }
    };
    trace(g1, [c](double u, double v) { return cstar::eta(u, v, c).u; });
    trace(g2, [c](double u, double v) { return cstar::eta(u, v, c).v / v; });
    return {g1, g2};
}

std::string svg_phase_portrait(double c, int arrows) {
    const auto nullclines = lily_pad_nullclines(c);
    std::string doc = header("lily-pad reaction field, c = " + tick(c));
    const Frame f{0.0, 1.0, 0.0, 1.0};
    doc += axes(f, "u", "v");
    const double len = 0.4 / std::max(1, arrows);
    for (int i = 0; i <= arrows; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double u = static_cast<double>(i) / std::max(1, arrows);
            const double v = static_cast<double>(j) / std::max(1, arrows);
            const auto e = cstar::eta(u, v, c);
            const double n = std::hypot(e.u, e.v);
            if (n == 0.0) continue;
            const double u1 = u + len * e.u / n, v1 = v + len * e.v / n;
            doc += "<line x1=\"" + num(f.px(u)) + "\" y1=\"" + num(f.py(v)) + "\" x2=\"" + num(f.px(u1)) +
                   "\" y2=\"" + num(f.py(v1)) + "\" stroke=\"#999999\"/>\n";
            doc += "<circle cx=\"" + num(f.px(u1)) + "\" cy=\"" + num(f.py(v1)) + "\" r=\"1.5\" fill=\"#999999\"/>\n";
        }
    }
    for (std::size_t i = 0; i < nullclines.size(); ++i)
        doc += polyline(f, nullclines[i].x, nullclines[i].y, kColours[i]);
    doc += legend(nullclines);
    doc += "</svg>\n";
    return doc;
}

}  // namespace stirred::io
