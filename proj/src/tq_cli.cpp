// Command-line front end: excitation profiles, engine comparisons, powder
// runs, orientation-set generation and regime classification.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical divergence
// (outputs are still written in the divergence case).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tq/floquet.hpp"
#include "tq/oracle.hpp"
#include "tq/params.hpp"
#include "tq/powder.hpp"
#include "tq/regime1.hpp"
#include "tq/regime2.hpp"
#include "tq/report.hpp"

namespace {

struct Cli {
    std::vector<double> cq_hz{2e6};
    double eta = 0.0;
    double rf_hz = 1e5;
    double phase_deg = 0.0;
    double t_start_us = 0.0, t_stop_us = 500.0, t_step_us = 1.0;
    std::vector<std::string> engines;
    std::string crystal_file;
    std::string crystal_gen;  // scheme:count
    std::vector<int> orders;
    std::string out_path;
    std::string svg_path;
};

tq::ExperimentParams make_params(const Cli& c, double cq) {
    return tq::ExperimentParams::single_crystal(cq, c.rf_hz, c.phase_deg * tq::pi / 180.0, c.eta);
}

std::vector<double> make_grid(const Cli& c) {
    tq::TimeGrid g{c.t_start_us * 1e-6, c.t_stop_us * 1e-6, c.t_step_us * 1e-6};
    return g.points();
}

tq::CrystalSet resolve_crystal(const Cli& c) {
    if (!c.crystal_file.empty()) return tq::load_crystal_file(c.crystal_file);
    if (!c.crystal_gen.empty()) {
        const auto colon = c.crystal_gen.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--crystal-gen expects scheme:count");
        return tq::generate_crystal_set(c.crystal_gen.substr(0, colon),
                                        std::stol(c.crystal_gen.substr(colon + 1)));
    }
    throw CLI::ValidationError("a crystal source (--crystal-file or --crystal-gen) is required");
}

tq::ExcitationProfile run_engine(const std::string& name, const tq::ExperimentParams& p,
                                 const std::vector<double>& t, const std::vector<int>& orders) {
    using namespace tq;
    if (name == "oracle") return tq_signal_exact(p, t);
    if (name == "regime1:caseI") return tq_signal_regime1(p, Regime1Case::I, t);
    if (name == "regime1:caseII") return tq_signal_regime1(p, Regime1Case::II, t);
    if (name == "regime1:caseIVb") return tq_signal_regime1_numeric(p, 2, t);
    if (name == "regime1:con1") return strong_coupling_limit(p, t);
    if (name == "regime1:s2") return tq_signal_s2_simplified(p, t);
    if (name == "regime2:caseII") return tq_signal_regime2_dressed(p, t);
    if (name == "regime2:fourterm") return tq_signal_regime2(p, t);
    if (name == "regime2:con3") return weak_coupling_limit(p, t);
    if (name == "floquet:regime1" || name == "floquet:regime2") {
        std::vector<int> sched = orders;
        if (sched.empty())
            sched = regime1_schedule(std::abs(p.omega_q_eff) / std::max(p.omega1, 1.0));
        const bool r1 = name == "floquet:regime1";
        FloquetSignalEngine engine(r1 ? build_floquet_regime1(p) : build_floquet_regime2(p),
                                   sched);
        return engine.profile(t, name, r1 ? "RegimeI" : "RegimeII");
    }
    throw CLI::ValidationError("unknown engine: " + name);
}

tq::MetaBlock base_meta(const Cli& c, double cq) {
    tq::MetaBlock m;
    m.emplace_back("C_Q_Hz", tq::fmt_num(cq));
    m.emplace_back("eta", tq::fmt_num(c.eta));
    m.emplace_back("omega1_Hz_over_2pi", tq::fmt_num(c.rf_hz));
    m.emplace_back("phase_deg", tq::fmt_num(c.phase_deg));
    m.emplace_back("t_start_us", tq::fmt_num(c.t_start_us));
    m.emplace_back("t_stop_us", tq::fmt_num(c.t_stop_us));
    m.emplace_back("t_step_us", tq::fmt_num(c.t_step_us));
    m.emplace_back("detection_sign", "-i");
    m.emplace_back("fourier_truncation", std::to_string(tq::default_fourier_truncation));
    if (!c.orders.empty()) {
        std::string s;
        for (int o : c.orders) s += (s.empty() ? "" : ",") + std::to_string(o);
        m.emplace_back("orders", s);
    }
    return m;
}

void write_outputs(const Cli& c, const std::vector<tq::ExcitationProfile>& profiles,
                   const tq::MetaBlock& meta, double cq, const std::string& title) {
    if (!c.out_path.empty()) {
        std::ofstream out(c.out_path);
        if (!out) throw CLI::ValidationError("cannot write output file: " + c.out_path);
        tq::write_profile_csv(out, profiles, meta, cq, c.rf_hz);
    } else {
        tq::write_profile_csv(std::cout, profiles, meta, cq, c.rf_hz);
    }
    if (!c.svg_path.empty()) {
        std::ofstream svg(c.svg_path);
        if (!svg) throw CLI::ValidationError("cannot write SVG file: " + c.svg_path);
        tq::write_profile_svg(svg, profiles, title);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Triple-quantum excitation simulator for spin-3/2 quadrupolar nuclei"};
    app.set_config("--config", "", "flat key=value configuration file");
    app.require_subcommand(1);

    Cli c;
    auto add_common = [&](CLI::App* sub, bool needs_engines) {
        sub->add_option("--cq-hz", c.cq_hz, "quadrupolar coupling constant(s), Hz")
            ->capture_default_str();
        sub->add_option("--eta", c.eta, "asymmetry parameter")->capture_default_str();
        sub->add_option("--rf-hz", c.rf_hz, "RF amplitude omega1/2pi, Hz")->capture_default_str();
        sub->add_option("--phase-deg", c.phase_deg, "RF phase, degrees")->capture_default_str();
        sub->add_option("--t-start-us", c.t_start_us, "grid start, us")->capture_default_str();
        sub->add_option("--t-stop-us", c.t_stop_us, "grid stop, us")->capture_default_str();
        sub->add_option("--t-step-us", c.t_step_us, "grid step, us")->capture_default_str();
        sub->add_option("--orders", c.orders, "transformation order schedule N1[,N2...]")
            ->delimiter(',');
        sub->add_option("--out", c.out_path, "output CSV path (default stdout)");
        sub->add_option("--svg", c.svg_path, "also emit an SVG plot to this path");
        if (needs_engines)
            sub->add_option("--engine", c.engines, "engine id (repeatable)")->take_all();
    };

    auto* profile = app.add_subcommand("profile", "excitation profile for one or more engines");
    add_common(profile, true);
    auto* compare = app.add_subcommand("compare", "compare engines against the first one given");
    add_common(compare, true);
    auto* classify = app.add_subcommand("classify", "regime classification of a crystal set");
    add_common(classify, false);
    classify->add_option("--crystal-file", c.crystal_file, "orientation file");
    classify->add_option("--crystal-gen", c.crystal_gen, "generator scheme:count");
    auto* gen = app.add_subcommand("gen-crystal", "generate a deterministic orientation set");
    gen->add_option("--crystal-gen", c.crystal_gen, "generator scheme:count")->required();
    gen->add_option("--out", c.out_path, "output crystal file")->required();
    auto* powder = app.add_subcommand("powder", "orientation-averaged profile");
    add_common(powder, true);
    powder->add_option("--crystal-file", c.crystal_file, "orientation file");
    powder->add_option("--crystal-gen", c.crystal_gen, "generator scheme:count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        bool diverged = false;
        if (profile->parsed() || compare->parsed()) {
            if (c.engines.empty()) c.engines = {"oracle"};
            if (compare->parsed() && c.engines.size() < 2)
                throw CLI::ValidationError("compare needs at least two --engine values");
            const double cq = c.cq_hz.front();
            const auto p = make_params(c, cq);
            const auto t = make_grid(c);
            std::vector<tq::ExcitationProfile> profiles;
            for (const auto& e : c.engines) profiles.push_back(run_engine(e, p, t, c.orders));
            for (const auto& pr : profiles) diverged = diverged || pr.diverged;
            tq::MetaBlock meta = base_meta(c, cq);
            if (diverged) meta.emplace_back("divergence_warning", "1");
            if (compare->parsed()) {
                std::vector<tq::ComparisonRow> rows;
                for (size_t i = 1; i < profiles.size(); ++i)
                    rows.push_back(tq::compare_profiles(profiles.front(), profiles[i]));
                std::ostringstream csv;
                tq::write_comparison_csv(csv, rows, meta);
                if (!c.out_path.empty()) {
                    std::ofstream out(c.out_path);
                    out << csv.str();
                } else {
                    std::cout << csv.str();
                }
                for (const auto& r : rows)
                    std::cerr << r.engine_b << " vs " << r.engine_a << ": rms " << r.rms
                              << ", max " << r.max_abs
                              << (r.diverged ? " [diverged/out-of-regime]" : "") << "\n";
                if (!c.svg_path.empty()) {
                    std::ofstream svg(c.svg_path);
                    tq::write_profile_svg(svg, profiles, "engine comparison");
                }
            } else {
                write_outputs(c, profiles, meta, cq, "excitation profile");
            }
        } else if (classify->parsed()) {
            const auto set = resolve_crystal(c);
            std::ostringstream csv;
            tq::MetaBlock meta;
            meta.emplace_back("crystal_source", set.source);
            meta.emplace_back("orientations", std::to_string(set.orientations.size()));
            tq::write_meta(csv, meta);
            csv << "omega1_over_2pi_Hz,C_Q_Hz,nRegimeI,nRegimeII,fracRegimeI,fracRegimeII\n";
            for (double cq : c.cq_hz) {
                const auto p = make_params(c, cq);
                const auto cls = tq::classify(set, p);
                csv << tq::fmt_num(c.rf_hz) << ',' << tq::fmt_num(cq) << ',' << cls.n_regime1
                    << ',' << cls.n_regime2 << ',' << tq::fmt_num(cls.frac_regime1(), "%.6f")
                    << ',' << tq::fmt_num(cls.frac_regime2(), "%.6f") << "\n";
            }
            if (!c.out_path.empty()) {
                std::ofstream out(c.out_path);
                out << csv.str();
            } else {
                std::cout << csv.str();
            }
        } else if (gen->parsed()) {
            const auto colon = c.crystal_gen.find(':');
            if (colon == std::string::npos)
                throw CLI::ValidationError("--crystal-gen expects scheme:count");
            const auto set = tq::generate_crystal_set(c.crystal_gen.substr(0, colon),
                                                      std::stol(c.crystal_gen.substr(colon + 1)));
            tq::save_crystal_file(set, c.out_path);
        } else if (powder->parsed()) {
            if (c.engines.empty()) c.engines = {"oracle"};
            const auto set = resolve_crystal(c);
            const double cq = c.cq_hz.front();
            const auto p = make_params(c, cq);
            const auto t = make_grid(c);
            tq::MetaBlock meta = base_meta(c, cq);
            meta.emplace_back("crystal_source", set.source);
            meta.emplace_back("orientations", std::to_string(set.orientations.size()));
            std::vector<tq::ExcitationProfile> profiles;
            for (const auto& e : c.engines) {
                if (e == "oracle") {
                    profiles.push_back(tq::powder_oracle(set, p, t));
                } else if (e == "hybrid") {
                    auto res = tq::hybrid_profile(p, set, t);
                    meta.emplace_back("hybrid_nRegimeI", std::to_string(res.population.n_regime1));
                    meta.emplace_back("hybrid_nRegimeII",
                                      std::to_string(res.population.n_regime2));
                    profiles.push_back(std::move(res.profile));
                } else if (e == "regime1:con1") {
                    auto fn = [&t](const tq::ExperimentParams& q) {
                        return tq::strong_coupling_limit(q, t);
                    };
                    profiles.push_back(tq::powder_average(fn, set, p, t));
                } else {
                    throw CLI::ValidationError("unsupported powder engine: " + e);
                }
            }
            for (const auto& pr : profiles) diverged = diverged || pr.diverged;
            if (diverged) meta.emplace_back("divergence_warning", "1");
            write_outputs(c, profiles, meta, cq, "powder excitation profile");
        }
        return diverged ? 3 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
