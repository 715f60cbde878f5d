#pragma once
//
// Time-series output: CSV with round-trip decimal formatting and small SVG line plots.
//

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "mcflab/flowsim/common.hpp"

namespace mcflab::flowsim {

/// 17 significant digits; non-finite values print as "nan" / "inf" / "-inf".
inline std::string format_real(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline constexpr const char* kCsvHeader = "t,min_phi,max_two_dilation,max_lambda,sup_A2";

inline std::string records_to_csv(const std::vector<MonitorRecord>& recs)
{
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : recs) {
        out += format_real(r.t) + "," + format_real(r.min_phi) + "," + format_real(r.max_two_dilation) + "," + format_real(r.max_lambda) + "," +
               format_real(r.sup_A2) + "\n";
    }
    return out;
}

/// One polyline plot of y(t); non-finite samples break the line.
inline std::string svg_line_plot(const std::vector<double>& t, const std::vector<double>& y, const std::string& title, const std::string& ylabel)
{
    constexpr double W = 640, Hh = 400, L = 70, R = 20, T = 40, B = 50;
    double t0 = 0, t1 = 1, y0 = 0, y1 = 1;
    bool any = false;
    for (std::size_t k = 0; k < t.size() && k < y.size(); ++k) {
        if (!std::isfinite(y[k])) continue;
        if (!any) {
            t0 = t1 = t[k];
            y0 = y1 = y[k];
            any = true;
        }
        t0 = std::min(t0, t[k]);
        t1 = std::max(t1, t[k]);
        y0 = std::min(y0, y[k]);
        y1 = std::max(y1, y[k]);
    }
    if (t1 == t0) t1 = t0 + 1;
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    auto X = [&](double v) { return L + (v - t0) / (t1 - t0) * (W - L - R); };
    auto Y = [&](double v) { return T + (y1 - v) / (y1 - y0) * (Hh - T - B); };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return std::string(buf);
    };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << Hh << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << Hh - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double tv = t0 + (t1 - t0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
        s << "<text x=\"" << X(tv) << "\" y=\"" << Hh - B + 18 << "\" text-anchor=\"middle\">" << fmt(tv) << "</text>\n";
        s << "<text x=\"" << L - 6 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << Hh - 10 << "\" text-anchor=\"middle\">t</text>\n";
    s << "<text x=\"16\" y=\"" << (T + Hh - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (T + Hh - B) / 2 << ")\">" << ylabel
      << "</text>\n";
    std::string pts;
    auto flush = [&] {
        if (!pts.empty()) s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
        pts.clear();
    };
    for (std::size_t k = 0; k < t.size() && k < y.size(); ++k) {
        if (!std::isfinite(y[k])) {
            flush();
            continue;
        }
        pts += fmt(X(t[k])) + "," + fmt(Y(y[k])) + " ";
    }
    flush();
    s << "</svg>\n";
    return s.str();
}

inline std::string svg_min_phi(const std::vector<MonitorRecord>& recs, const std::string& name)
{
    std::vector<double> t, y;
    for (const auto& r : recs) {
        t.push_back(r.t);
        y.push_back(r.min_phi);
    }
    return svg_line_plot(t, y, name + ": min Phi", "min Phi");
}

inline std::string svg_max_lambda(const std::vector<MonitorRecord>& recs, const std::string& name)
{
    std::vector<double> t, y;
    for (const auto& r : recs) {
        t.push_back(r.t);
        y.push_back(r.max_lambda);
    }
    return svg_line_plot(t, y, name + ": max lambda", "max lambda");
}

}  // namespace mcflab::flowsim
