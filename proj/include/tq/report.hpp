#pragma once
// Output emitters: CSV with a config-echo comment header, and a small
// self-contained SVG line plot. All numeric formatting goes through
// fixed printf formats so repeated runs are byte-identical.

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "params.hpp"

namespace tq {

inline std::string fmt_num(double v, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// Ordered key/value metadata block echoed at the top of every output file.
using MetaBlock = std::vector<std::pair<std::string, std::string>>;

inline void write_meta(std::ostream& out, const MetaBlock& meta) {
    for (const auto& [k, v] : meta) out << "# " << k << " = " << v << "\n";
}

inline void write_profile_csv(std::ostream& out, const std::vector<ExcitationProfile>& profiles,
                              const MetaBlock& meta, double cq_hz, double rf_hz) {
    write_meta(out, meta);
    out << "t_us,amplitude,engine,regime,C_Q_Hz,omega1_Hz_over_2pi\n";
    for (const auto& p : profiles)
        for (size_t i = 0; i < p.times.size(); ++i)
            out << fmt_num(p.times[i] * 1e6) << ',' << fmt_num(p.amplitudes[i], "%.12g") << ','
                << p.engine << ',' << p.regime << ',' << fmt_num(cq_hz) << ','
                << fmt_num(rf_hz) << "\n";
}

struct ComparisonRow {
    std::string engine_a, engine_b;
    double rms = 0.0, max_abs = 0.0;
    double extremum_t_us = 0.0, extremum_amp = 0.0;  // of engine_b
    bool diverged = false;
};

inline ComparisonRow compare_profiles(const ExcitationProfile& ref, const ExcitationProfile& x) {
    ComparisonRow r;
    r.engine_a = ref.engine;
    r.engine_b = x.engine;
    r.rms = rms_difference(ref, x);
    r.max_abs = max_abs_difference(ref, x);
    r.diverged = x.diverged;
    double best = -1.0;
    for (size_t i = 0; i < x.times.size(); ++i)
        if (std::abs(x.amplitudes[i]) > best) {
            best = std::abs(x.amplitudes[i]);
            r.extremum_t_us = x.times[i] * 1e6;
            r.extremum_amp = x.amplitudes[i];
        }
    return r;
}

inline void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows,
                                 const MetaBlock& meta) {
    write_meta(out, meta);
    out << "engine_ref,engine,rms,max_abs,extremum_t_us,extremum_amplitude,diverged\n";
    for (const auto& r : rows)
        out << r.engine_a << ',' << r.engine_b << ',' << fmt_num(r.rms, "%.6g") << ','
            << fmt_num(r.max_abs, "%.6g") << ',' << fmt_num(r.extremum_t_us, "%.6g") << ','
            << fmt_num(r.extremum_amp, "%.6g") << ',' << (r.diverged ? 1 : 0) << "\n";
}

// Minimal standalone line plot; one polyline per profile.
inline void write_profile_svg(std::ostream& out, const std::vector<ExcitationProfile>& profiles,
                              const std::string& title) {
    const int w = 860, h = 520, ml = 70, mr = 20, mt = 40, mb = 50;
    double tmin = 1e300, tmax = -1e300, amin = 1e300, amax = -1e300;
    for (const auto& p : profiles)
        for (size_t i = 0; i < p.times.size(); ++i) {
            tmin = std::min(tmin, p.times[i] * 1e6);
            tmax = std::max(tmax, p.times[i] * 1e6);
            amin = std::min(amin, p.amplitudes[i]);
            amax = std::max(amax, p.amplitudes[i]);
        }
    if (amax <= amin) { amax = amin + 1.0; }
    if (tmax <= tmin) { tmax = tmin + 1.0; }
    const double pad = 0.05 * (amax - amin);
    amin -= pad;
    amax += pad;
    auto px = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * (w - ml - mr); };
    auto py = [&](double a) { return h - mb - (a - amin) / (amax - amin) * (h - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double tv = tmin + (tmax - tmin) * i / 5.0;
        const double av = amin + (amax - amin) * i / 5.0;
        out << "<text x=\"" << fmt_num(px(tv), "%.1f") << "\" y=\"" << h - mb + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt_num(tv, "%.4g")
            << "</text>\n";
        out << "<text x=\"" << ml - 6 << "\" y=\"" << fmt_num(py(av) + 4.0, "%.1f")
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_num(av, "%.3g") << "</text>\n";
    }
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">pulse duration (us)</text>\n"
        << "<text x=\"18\" y=\"" << (mt + h - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << (mt + h - mb) / 2 << ")\">TQ amplitude</text>\n";
    int ci = 0;
    for (const auto& p : profiles) {
        const char* col = colors[ci % 5];
        out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.2\" points=\"";
        for (size_t i = 0; i < p.times.size(); ++i)
            out << fmt_num(px(p.times[i] * 1e6), "%.2f") << ','
                << fmt_num(py(p.amplitudes[i]), "%.2f") << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << w - mr - 8 << "\" y=\"" << mt + 16 * (ci + 1)
            << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << col << "\">" << p.engine
            << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

}  // namespace tq
