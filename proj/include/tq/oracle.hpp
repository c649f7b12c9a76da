#pragma once
// Exact reference engine: eigendecomposition propagation of the on-resonance
// rotating-frame Hamiltonian H/hbar = -omega1*Ix(phi1) - Omega_Q*T^(2)0,
// starting from rho0 = Iz, detecting the triple-quantum coherence T^(3)-3.

#include <Eigen/Dense>
#include <vector>

#include "params.hpp"
#include "spin.hpp"

namespace tq {

inline Mat4 rotating_frame_hamiltonian(const ExperimentParams& p) {
    return -p.omega1 * op_ix_phase(p.phi1) - p.omega_q_eff * tensors()(2, 0);
}

// U rho0 U^dagger with U = exp(-iHt), H Hermitian.
inline Mat4 propagate(const Mat4& h, const Mat4& rho0, double t) {
    if ((h - Mat4(h.adjoint())).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + h.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("propagate: Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat4> es(h);
    const auto& v = es.eigenvectors();
    Eigen::Vector4cd ph;
    for (int i = 0; i < 4; ++i) ph(i) = std::exp(-iu * es.eigenvalues()(i) * t);
    const Mat4 u = v * ph.asDiagonal() * v.adjoint();
    return u * rho0 * u.adjoint();
}

// Complex TQ amplitude -i * Tr[rho(t) T^(3)-3]; real for phi1 = 0.
class ExactEngine {
public:
    explicit ExactEngine(const ExperimentParams& p)
        : detect_(tensors()(3, -3)), es_(rotating_frame_hamiltonian(p)) {}

    cplx amplitude(double t) const {
        const auto& v = es_.eigenvectors();
        Eigen::Vector4cd ph;
        for (int i = 0; i < 4; ++i) ph(i) = std::exp(-iu * es_.eigenvalues()(i) * t);
        const Mat4 u = v * ph.asDiagonal() * v.adjoint();
        const Mat4 rho = u * op_iz() * u.adjoint();
        return -iu * (rho * detect_).trace();
    }

private:
    Mat4 detect_;
    Eigen::SelfAdjointEigenSolver<Mat4> es_;
};

inline ExcitationProfile tq_signal_exact(const ExperimentParams& p, const std::vector<double>& t) {
    ExactEngine engine(p);
    ExcitationProfile out;
    out.engine = "oracle";
    out.regime = "exact";
    out.times = t;
    out.amplitudes.reserve(t.size());
    for (double ti : t) out.amplitudes.push_back(engine.amplitude(ti).real());
    return out;
}

// Hilbert-Schmidt projections of rho onto the full tensor basis, grouped by
// coherence order q. Diagnostic only.
inline std::map<int, double> coherence_amplitudes(const Mat4& rho) {
    std::map<int, double> out;
    const TensorBasis& T = tensors();
    for (int k = 0; k <= 3; ++k)
        for (int q = -k; q <= k; ++q) out[q] += std::abs(hs_inner(T(k, q), rho));
    return out;
}

}  // namespace tq
