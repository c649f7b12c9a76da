#pragma once
// Orientation machinery: rank-2 Wigner rotations, per-crystallite quadrupolar
// frequencies, crystal-set generation and file I/O, regime classification,
// weighted powder averaging and the hybrid per-orientation dispatch.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "floquet.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "regime1.hpp"
#include "regime2.hpp"

namespace tq {

using Mat5 = Eigen::Matrix<cplx, 5, 5>;
using Mat5d = Eigen::Matrix<double, 5, 5>;

// Reduced rank-2 Wigner matrix d^2_{q,q'}(beta); rows/cols index q = +2..-2.
inline Mat5d wigner_d2(double beta) {
    const double c = std::cos(beta), s = std::sin(beta);
    const double ch = std::cos(beta / 2.0), sh = std::sin(beta / 2.0);
    const double r38 = std::sqrt(3.0 / 8.0);
    Mat5d d;
    d(0, 0) = ch * ch * ch * ch;
    d(0, 1) = -2.0 * ch * ch * ch * sh;
    d(0, 2) = r38 * s * s;
    d(0, 3) = -2.0 * ch * sh * sh * sh;
    d(0, 4) = sh * sh * sh * sh;
    d(1, 0) = 2.0 * ch * ch * ch * sh;
    d(1, 1) = ch * ch * (2.0 * c - 1.0);
    d(1, 2) = -2.0 * r38 * s * c;
    d(1, 3) = sh * sh * (2.0 * c + 1.0);
    d(1, 4) = -2.0 * ch * sh * sh * sh;
    d(2, 0) = r38 * s * s;
    d(2, 1) = 2.0 * r38 * s * c;
    d(2, 2) = 0.5 * (3.0 * c * c - 1.0);
    d(2, 3) = -2.0 * r38 * s * c;
    d(2, 4) = r38 * s * s;
    d(3, 0) = 2.0 * ch * sh * sh * sh;
    d(3, 1) = sh * sh * (2.0 * c + 1.0);
    d(3, 2) = 2.0 * r38 * s * c;
    d(3, 3) = ch * ch * (2.0 * c - 1.0);
    d(3, 4) = -2.0 * ch * ch * ch * sh;
    d(4, 0) = sh * sh * sh * sh;
    d(4, 1) = 2.0 * ch * sh * sh * sh;
    d(4, 2) = r38 * s * s;
    d(4, 3) = 2.0 * ch * ch * ch * sh;
    d(4, 4) = ch * ch * ch * ch;
    return d;
}

// Full rank-2 Wigner matrix D^2_{q,q'} = e^{-i q alpha} d^2_{q,q'}(beta) e^{-i q' gamma}.
inline Mat5 wigner_D2(double alpha, double beta, double gamma) {
    const Mat5d d = wigner_d2(beta);
    Mat5 out;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const int q = 2 - i, qp = 2 - j;
            out(i, j) = std::exp(-iu * (q * alpha + qp * gamma)) * d(i, j);
        }
    return out;
}

struct EulerAngles {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

// Orientation-dependent quadrupolar frequency: the lab-frame q=0 component of
// the EFG tensor after the two-step (principal -> molecular -> lab) rotation.
inline double omega_q_oriented(double omega_q, double eta, const EulerAngles& pm,
                               const EulerAngles& ml) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must be in [0,1]");
    const Mat5 dpm = wigner_D2(pm.alpha, pm.beta, pm.gamma);
    const Mat5 dml = wigner_D2(ml.alpha, ml.beta, ml.gamma);
    const Eigen::Matrix<cplx, 5, 1> dq0 = dpm * dml.col(2);  // D_{q,0}(PL)
    const cplx val = omega_q * (dq0(2) + eta / std::sqrt(6.0) * (dq0(4) + dq0(0)));
    if (std::abs(val.imag()) > 1e-9 * (1.0 + std::abs(omega_q)))
        throw std::logic_error("oriented quadrupolar frequency has spurious imaginary part");
    return val.real();
}

struct Orientation {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;  // radians
    double weight = 1.0;
};

struct CrystalSet {
    std::vector<Orientation> orientations;
    std::string source;

    void normalize() {
        double sum = 0.0;
        for (const auto& o : orientations) {
            if (!(o.weight >= 0.0) || !std::isfinite(o.weight))
                throw std::invalid_argument("orientation weights must be finite and >= 0");
            sum += o.weight;
        }
        if (sum <= 0.0) throw std::invalid_argument("crystal set has zero total weight");
        for (auto& o : orientations) o.weight /= sum;
    }
};

inline CrystalSet generate_crystal_set(const std::string& scheme, long count) {
    if (count < 1) throw std::invalid_argument("orientation count must be >= 1");
    CrystalSet set;
    set.source = scheme + ":" + std::to_string(count);
    if (count == 1) {
        set.orientations.push_back({0.0, 0.0, 0.0, 1.0});
        return set;
    }
    if (scheme == "grid") {
        // (alpha, beta) product grid: nb beta rows at band midpoints with
        // sin(beta) area weights, na uniform alpha columns; nb is the divisor
        // of count closest to sqrt(count).
        long nb = 1;
        for (long d = 1; d * d <= count; ++d)
            if (count % d == 0) nb = d;
        // nb is the largest divisor <= sqrt(count); compare with its partner
        const long partner = count / nb;
        if (std::abs(double(partner) - std::sqrt(double(count))) <
            std::abs(double(nb) - std::sqrt(double(count))))
            nb = partner;
        const long na = count / nb;
        for (long ib = 0; ib < nb; ++ib) {
            const double beta = pi * (ib + 0.5) / double(nb);
            const double w = std::sin(beta);
            for (long ia = 0; ia < na; ++ia)
                set.orientations.push_back({2.0 * pi * ia / double(na), beta, 0.0, w});
        }
    } else if (scheme == "zcw" || scheme == "repulsion") {
        // Deterministic quasi-uniform sphere coverings with equal weights:
        // golden-angle alpha progression against a uniform (zcw) or bit-
        // reversed (repulsion-like) cos(beta) sequence.
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        for (long i = 0; i < count; ++i) {
            double u;
            if (scheme == "zcw") {
                u = (i + 0.5) / double(count);
            } else {
                // van der Corput radical inverse, base 2
                u = 0.0;
                double f = 0.5;
                for (long n = i + 1; n > 0; n /= 2, f *= 0.5) u += f * (n % 2);
            }
            const double beta = std::acos(1.0 - 2.0 * u);
            double a = std::fmod(double(i) * golden, 1.0) * 2.0 * pi;
            set.orientations.push_back({a, beta, 0.0, 1.0});
        }
    } else {
        throw std::invalid_argument("unsupported crystal generation scheme: " + scheme);
    }
    set.normalize();
    return set;
}

inline CrystalSet load_crystal_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open crystal file: " + path);
    CrystalSet set;
    set.source = path;
    std::string line;
    long lineno = 0, declared = -1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;  // blank
        if (first == "count") {
            if (!(ss >> declared) || declared < 1)
                throw std::runtime_error("crystal file line " + std::to_string(lineno) +
                                         ": malformed count header");
            continue;
        }
        double vals[4];
        int n = 0;
        try {
            vals[n++] = std::stod(first);
        } catch (const std::exception&) {
            throw std::runtime_error("crystal file line " + std::to_string(lineno) +
                                     ": malformed field");
        }
        double v;
        while (n < 4 && (ss >> v)) vals[n++] = v;
        std::string extra;
        if (ss >> extra)
            throw std::runtime_error("crystal file line " + std::to_string(lineno) +
                                     ": too many fields");
        if (n < 3)
            throw std::runtime_error("crystal file line " + std::to_string(lineno) +
                                     ": expected alpha beta [gamma] weight");
        Orientation o;
        o.alpha = vals[0] * pi / 180.0;
        o.beta = vals[1] * pi / 180.0;
        o.gamma = (n == 4) ? vals[2] * pi / 180.0 : 0.0;
        o.weight = vals[n - 1];
        set.orientations.push_back(o);
    }
    if (set.orientations.empty()) throw std::runtime_error("crystal file is empty: " + path);
    if (declared >= 0 && declared != long(set.orientations.size()))
        throw std::runtime_error("crystal file count header mismatch");
    set.normalize();
    return set;
}

inline void save_crystal_file(const CrystalSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write crystal file: " + path);
    char buf[160];
    std::snprintf(buf, sizeof buf, "count %zu\n", set.orientations.size());
    out << buf;
    for (const auto& o : set.orientations) {
        std::snprintf(buf, sizeof buf, "%.10g %.10g %.10g %.10g\n", o.alpha * 180.0 / pi,
                      o.beta * 180.0 / pi, o.gamma * 180.0 / pi, o.weight);
        out << buf;
    }
}

enum class RegimeTag { RegimeI, RegimeII };

// Dispatch rule: Regime II iff |omega_q_oriented| < omega1 (ties go to Regime I).
inline RegimeTag classify_orientation(double omega_q_or, double omega1) {
    return std::abs(omega_q_or) < omega1 ? RegimeTag::RegimeII : RegimeTag::RegimeI;
}

struct Classification {
    long n_regime1 = 0, n_regime2 = 0;
    double frac_regime1() const { return double(n_regime1) / double(n_regime1 + n_regime2); }
    double frac_regime2() const { return double(n_regime2) / double(n_regime1 + n_regime2); }
};

inline double orientation_omega_q(const ExperimentParams& p, const Orientation& o) {
    return omega_q_oriented(p.omega_q(), p.eta, {}, {o.alpha, o.beta, o.gamma});
}

inline Classification classify(const CrystalSet& set, const ExperimentParams& p) {
    Classification c;
    for (const auto& o : set.orientations) {
        if (classify_orientation(orientation_omega_q(p, o), p.omega1) == RegimeTag::RegimeI)
            ++c.n_regime1;
        else
            ++c.n_regime2;
    }
    return c;
}

namespace detail {
inline void parallel_for(size_t n, const std::function<void(size_t)>& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = unsigned(std::min<size_t>(hw, n));
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}
}  // namespace detail

// Weighted orientation average of a per-orientation profile function.
// Per-orientation work runs in parallel, memoized over identical effective
// quadrupolar frequencies; the final reduction is an ordered compensated sum,
// so results are deterministic for a fixed set ordering.
inline ExcitationProfile powder_average(
    const std::function<ExcitationProfile(const ExperimentParams&)>& profile_fn,
    const CrystalSet& set, const ExperimentParams& p, const std::vector<double>& t) {
    const size_t n = set.orientations.size();
    std::vector<double> wq(n);
    for (size_t i = 0; i < n; ++i) wq[i] = orientation_omega_q(p, set.orientations[i]);

    // unique effective frequencies (bitwise identity)
    std::map<double, size_t> unique_idx;
    std::vector<size_t> which(n);
    std::vector<double> unique_wq;
    for (size_t i = 0; i < n; ++i) {
        auto [it, inserted] = unique_idx.try_emplace(wq[i], unique_wq.size());
        if (inserted) unique_wq.push_back(wq[i]);
        which[i] = it->second;
    }

    std::vector<ExcitationProfile> sub(unique_wq.size());
    bool diverged = false;
    detail::parallel_for(unique_wq.size(), [&](size_t u) {
        sub[u] = profile_fn(p.oriented(unique_wq[u]));
    });
    for (const auto& s : sub) diverged = diverged || s.diverged;

    ExcitationProfile out;
    out.times = t;
    out.engine = sub.empty() ? "" : sub.front().engine;
    out.regime = "powder";
    out.diverged = diverged;
    out.amplitudes.assign(t.size(), 0.0);
    std::vector<double> comp(t.size(), 0.0);  // Kahan compensation
    for (size_t i = 0; i < n; ++i) {
        const auto& amp = sub[which[i]].amplitudes;
        const double w = set.orientations[i].weight;
        for (size_t k = 0; k < t.size(); ++k) {
            const double y = w * amp[k] - comp[k];
            const double s = out.amplitudes[k] + y;
            comp[k] = (s - out.amplitudes[k]) - y;
            out.amplitudes[k] = s;
        }
    }
    return out;
}

inline ExcitationProfile powder_oracle(const CrystalSet& set, const ExperimentParams& p,
                                       const std::vector<double>& t) {
    auto fn = [&t](const ExperimentParams& q) { return tq_signal_exact(q, t); };
    ExcitationProfile out = powder_average(fn, set, p, t);
    out.engine = "oracle";
    return out;
}

struct HybridOptions {
    // Regime-I engine: adaptive multi-pass numeric fold (default) or the
    // one-transformation closed form.
    bool regime1_numeric = true;
    int nf = default_fourier_truncation;
    int bch_order = 40;
};

struct HybridResult {
    ExcitationProfile profile;
    Classification population;
};

// Per-orientation dispatch: Regime-I orientations evolve under the
// quadrupole-interaction-frame effective Hamiltonian, Regime-II orientations
// under the dressed tilted-frame engine; each crystallite uses its own
// effective quadrupolar frequency as the frame frequency.
inline HybridResult hybrid_profile(const ExperimentParams& p, const CrystalSet& set,
                                   const std::vector<double>& t, HybridOptions opt = {}) {
    HybridResult res;
    res.population = classify(set, p);
    auto fn = [&](const ExperimentParams& q) -> ExcitationProfile {
        ExperimentParams local = q;
        local.delta = 0.0;  // crystallite-local interaction frame
        if (classify_orientation(q.omega_q_eff, q.omega1) == RegimeTag::RegimeII)
            return tq_signal_regime2_dressed(local, t);
        if (!opt.regime1_numeric)
            return tq_signal_regime1(local, Regime1Case::II, t);
        const double ratio = std::abs(local.omega_q_eff) / local.omega1;
        FloquetSignalEngine engine(build_floquet_regime1(local),
                                   regime1_schedule(ratio, opt.bch_order), opt.nf);
        return engine.profile(t, "hybrid:numeric", "RegimeI");
    };
    res.profile = powder_average(fn, set, p, t);
    res.profile.engine = "hybrid";
    return res;
}

}  // namespace tq
