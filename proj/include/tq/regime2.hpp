#pragma once
// Weak-coupling (RF-dominated) engine in the tilted frame: closed-form
// effective coefficients as functions of xi = sqrt(3) Omega_Q / (4 omega1),
// the dressed analytic propagator built from them, the printed four-term
// leading-order signal, and the weak-coupling limit.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "floquet.hpp"
#include "params.hpp"

namespace tq {

struct Regime2Closed {
    double xi = 0.0;
    double g1r = 0.0, g2r = 0.0, g3r = 0.0;  // diagonal effective terms, rad/s
    double gdr = 0.0, gtr = 0.0;             // residual off-diagonal terms, rad/s
};

// Alternating series xi/(2*0!) - xi^3/(4*2!) + xi^5/(6*4!) - ...
inline double r2_series(double xi) {
    double acc = 0.0, sign = 1.0, pw = xi, fact = 1.0;
    for (int n = 0; n <= 40; ++n) {
        acc += sign * pw / ((2.0 * n + 2.0) * fact);
        sign = -sign;
        pw *= xi * xi;
        fact *= (2.0 * n + 1.0) * (2.0 * n + 2.0);  // (2n)! -> (2n+2)!
        if (std::abs(pw) < 1e-300) break;
    }
    return acc;
}

// Alternating series xi^2/(3*1!) - xi^4/(5*3!) + ...
inline double r2_dq_series(double xi) {
    double acc = 0.0, sign = 1.0, pw = xi * xi, fact = 1.0;
    for (int n = 1; n <= 40; ++n) {
        acc += sign * pw / ((2.0 * n + 1.0) * fact);
        sign = -sign;
        pw *= xi * xi;
        fact *= (2.0 * n) * (2.0 * n + 1.0);
        if (std::abs(pw) < 1e-300) break;
    }
    return acc;
}

inline Regime2Closed regime2_coeffs(const ExperimentParams& p) {
    if (p.omega1 == 0.0)
        throw std::invalid_argument("tilted-frame coefficients singular at zero RF amplitude");
    Regime2Closed c;
    const double om = p.omega_q_eff;
    c.xi = std::sqrt(3.0) * om / (4.0 * p.omega1);
    const double series = r2_series(c.xi);
    c.g1r = std::sqrt(3.0) * om * series;
    c.g2r = (om / 2.0) * std::cos(c.xi);
    c.g3r = (std::sqrt(3.0) * om / 2.0) * series;
    c.gdr = (std::sqrt(3.0) * om / (2.0 * std::sqrt(2.0))) * r2_dq_series(c.xi);
    c.gtr = -(om / (2.0 * std::sqrt(2.0))) * std::sin(c.xi);
    return c;
}

// Dressed analytic engine. The effective tilted-frame diagonal is
//   h = (-G1R/sqrt5) T^(1)0 + G2R T^(2)0 + (G1R/(2 sqrt5)) T^(3)0
// (the closed-form series enters the T^(1)0/T^(3)0 terms with opposite
// relative signs, as extracted from the numeric fold), and the fast satellite
// oscillation is restored by dressing with the first-transformation
// generator S(t) = sum_m e^{i m w1 t} S_m, S_m = i A_m / (-m w1) for the
// m = +-2 harmonics of the tilted quadrupolar term.
class Regime2DressedEngine {
public:
    explicit Regime2DressedEngine(const ExperimentParams& p) : p_(p) {
        const Regime2Closed c = regime2_coeffs(p);
        const PeriodicHamiltonian ham = build_floquet_regime2(p);
        const TensorBasis& T = tensors();
        const Mat4 heff = (-c.g1r / std::sqrt(5.0)) * T(1, 0) + c.g2r * T(2, 0) +
                          (c.g1r / (2.0 * std::sqrt(5.0))) * T(3, 0);
        hdiag_ = heff.diagonal().real();
        for (const auto& [m, a] : ham.harmonics)
            if (m != 0) dress_[m] = Mat4(iu * a / (-double(m) * p.omega1));
        rho0_ = ham.rho0;
        detect_harmonics_ = harmonic_split(ham.detect, ham.frame_diag);
        Mat4 s0 = Mat4::Zero();
        for (const auto& [m, s] : dress_) s0 += s;
        exp_is0_ = unitary_exp(s0, +1.0);
    }

    cplx amplitude(double t) const {
        Mat4 st = Mat4::Zero();
        for (const auto& [m, s] : dress_) st += std::exp(iu * double(m) * p_.omega1 * t) * Mat4(s);
        Eigen::Vector4cd ph;
        for (int i = 0; i < 4; ++i) ph(i) = std::exp(-iu * hdiag_(i) * t);
        const Mat4 u = unitary_exp(st, -1.0) * Mat4(ph.asDiagonal()) * exp_is0_;
        const Mat4 sigma = u * rho0_ * u.adjoint();
        Mat4 det_t = Mat4::Zero();
        for (const auto& [m, dm] : detect_harmonics_)
            det_t += std::exp(iu * double(m) * p_.omega1 * t) * dm;
        return -iu * (sigma * det_t).trace();
    }

private:
    static Mat4 unitary_exp(const Mat4& herm, double sign) {
        Eigen::SelfAdjointEigenSolver<Mat4> es(herm);
        Eigen::Vector4cd ph;
        for (int i = 0; i < 4; ++i) ph(i) = std::exp(sign * iu * es.eigenvalues()(i));
        return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    }

    ExperimentParams p_;
    Eigen::Vector4d hdiag_;
    std::map<int, Mat4> dress_;
    Mat4 rho0_, exp_is0_;
    std::map<int, Mat4> detect_harmonics_;
};

inline ExcitationProfile tq_signal_regime2_dressed(const ExperimentParams& p,
                                                   const std::vector<double>& t) {
    Regime2DressedEngine engine(p);
    ExcitationProfile out;
    out.times = t;
    out.engine = "regime2:caseII";
    out.regime = "RegimeII";
    for (double ti : t) out.amplitudes.push_back(engine.amplitude(ti).real());
    return out;
}

// Printed leading-order four-term signal. The tilted-frame detection carries
// a quadrupole-independent frame artifact; the calibrated form subtracts the
// Omega_Q = 0 evaluation, which fixes the proportionality constant to 1 by
// matching the weak-coupling limit's satellite sidebands and makes the
// zero-coupling signal identically zero.
inline double regime2_four_term_raw(const ExperimentParams& p, double t) {
    const double w1 = p.omega1, om = p.omega_q_eff;
    const double th_tq = 3.0 * w1 * t + 3.0 * om * om * t / (16.0 * w1);
    const double th_ct = w1 * t + 3.0 * om * om * t / (16.0 * w1);
    const double split = (om / 2.0) * (1.0 - 3.0 * om * om / (32.0 * w1 * w1)) * t;
    return -0.125 * std::sin(th_tq) + 0.125 * std::sin(th_ct) -
           0.375 * std::sin(w1 * t + split) - 0.375 * std::sin(w1 * t - split);
}

inline ExcitationProfile tq_signal_regime2(const ExperimentParams& p,
                                           const std::vector<double>& t) {
    if (p.omega1 == 0.0) throw std::invalid_argument("Regime-II signal needs omega1 > 0");
    ExperimentParams p0 = p;
    p0.omega_q_eff = 0.0;
    ExcitationProfile out;
    out.times = t;
    out.engine = "regime2:fourterm";
    out.regime = "RegimeII";
    const cplx ph = std::pow(std::exp(-iu * p.phi1), 3);
    for (double ti : t)
        out.amplitudes.push_back(
            (ph * (regime2_four_term_raw(p, ti) - regime2_four_term_raw(p0, ti))).real());
    return out;
}

// Weak-coupling limit: Phi^3 (3/2) sin(omega1 t) sin^2(Omega_Q t / 4).
inline cplx weak_coupling_limit_point(const ExperimentParams& p, double t) {
    const double s = std::sin(p.omega_q_eff * t / 4.0);
    return std::pow(std::exp(-iu * p.phi1), 3) * 1.5 * std::sin(p.omega1 * t) * s * s;
}

inline ExcitationProfile weak_coupling_limit(const ExperimentParams& p,
                                             const std::vector<double>& t) {
    ExcitationProfile out;
    out.times = t;
    out.engine = "regime2:con3";
    out.regime = "RegimeII";
    for (double ti : t) out.amplitudes.push_back(weak_coupling_limit_point(p, ti).real());
    return out;
}

}  // namespace tq
