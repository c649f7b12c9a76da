#pragma once
// Experiment parameters and unit conversions. User-facing quantities are in
// Hz-family units (C_Q in Hz, RF amplitude as nu_1 = omega_1/2pi in Hz);
// everything internal is rad/s.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "spin.hpp"

namespace tq {

// First-order quadrupolar splitting frequency 3*(2pi)C_Q / (2I(2I-1));
// for I = 3/2 this is pi*C_Q.
inline double quad_frequency(double cq_hz) {
    const double j = spin_quantum_number;
    return 3.0 * (2.0 * pi) * cq_hz / (2.0 * j * (2.0 * j - 1.0));
}

struct ExperimentParams {
    double cq_hz = 0.0;     // quadrupolar coupling constant, Hz
    double eta = 0.0;       // asymmetry parameter in [0, 1]
    double omega1 = 0.0;    // RF amplitude, rad/s
    double phi1 = 0.0;      // RF phase, rad
    double omega_q_eff = 0.0;  // effective quadrupolar frequency Omega_Q, rad/s
    double delta = 0.0;        // quadrupolar offset omega_Q - Omega_Q, rad/s

    static ExperimentParams single_crystal(double cq_hz, double rf_hz, double phi1 = 0.0,
                                           double eta = 0.0) {
        ExperimentParams p;
        p.cq_hz = cq_hz;
        p.eta = eta;
        p.omega1 = 2.0 * pi * rf_hz;
        p.phi1 = phi1;
        p.omega_q_eff = quad_frequency(cq_hz);
        p.delta = 0.0;
        p.validate();
        return p;
    }

    // Same coupling constant, but the site's effective quadrupolar frequency
    // replaced by the orientation-dependent value.
    ExperimentParams oriented(double omega_q_oriented) const {
        ExperimentParams p = *this;
        p.omega_q_eff = omega_q_oriented;
        p.delta = quad_frequency(cq_hz) - omega_q_oriented;
        return p;
    }

    double omega_q() const { return quad_frequency(cq_hz); }

    void validate() const {
        if (cq_hz < 0.0) throw std::invalid_argument("C_Q must be >= 0");
        if (omega1 < 0.0) throw std::invalid_argument("omega1 must be >= 0");
        if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must be in [0,1]");
    }
};

struct TimeGrid {
    double start = 0.0, stop = 500e-6, step = 1e-6;  // seconds

    std::vector<double> points() const {
        if (step <= 0.0) throw std::invalid_argument("time step must be > 0");
        if (stop < start) throw std::invalid_argument("time stop must be >= start");
        std::vector<double> t;
        const long n = std::lround((stop - start) / step);
        t.reserve(n + 1);
        for (long i = 0; i <= n; ++i) t.push_back(start + i * step);
        return t;
    }
};

struct ExcitationProfile {
    std::vector<double> times;       // pulse durations, s
    std::vector<double> amplitudes;  // real TQ amplitudes (phi1 = 0 convention)
    std::string engine;              // engine id for metadata echo
    std::string regime;              // regime tag
    bool diverged = false;           // any convergence warning raised while computing
};

inline double rms_difference(const ExcitationProfile& a, const ExcitationProfile& b) {
    if (a.times.size() != b.times.size()) throw std::invalid_argument("mismatched time grids");
    double acc = 0.0;
    for (size_t i = 0; i < a.amplitudes.size(); ++i) {
        const double d = a.amplitudes[i] - b.amplitudes[i];
        acc += d * d;
    }
    return std::sqrt(acc / double(a.amplitudes.size()));
}

inline double max_abs_difference(const ExcitationProfile& a, const ExcitationProfile& b) {
    if (a.times.size() != b.times.size()) throw std::invalid_argument("mismatched time grids");
    double m = 0.0;
    for (size_t i = 0; i < a.amplitudes.size(); ++i)
        m = std::max(m, std::abs(a.amplitudes[i] - b.amplitudes[i]));
    return m;
}

}  // namespace tq
