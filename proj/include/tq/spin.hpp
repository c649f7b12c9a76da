#pragma once
// Spin-3/2 operator algebra: irreducible spherical tensor basis and the
// fictitious spin-1/2 (single-transition) operators built from it.
// Basis ordering is descending magnetic quantum number m = +3/2 ... -3/2,
// so +n coherences sit on the n-th upper diagonal.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tq {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr cplx iu{0.0, 1.0};

inline constexpr double spin_quantum_number = 1.5;

inline Mat4 op_iz() {
    Mat4 m = Mat4::Zero();
    m.diagonal() << 1.5, 0.5, -0.5, -1.5;
    return m;
}

inline Mat4 op_iplus() {
    const double j = spin_quantum_number;
    Mat4 m = Mat4::Zero();
    for (int i = 1; i < 4; ++i) {
        const double mz = j - i;  // column state
        m(i - 1, i) = std::sqrt(j * (j + 1) - mz * (mz + 1));
    }
    return m;
}

inline Mat4 op_iminus() { return op_iplus().adjoint(); }
inline Mat4 op_ix() { return 0.5 * (op_iplus() + op_iminus()); }
inline Mat4 op_iy() { return -0.5 * iu * (op_iplus() - op_iminus()); }

// RF field operator along phase phi in the rotating frame: Ix cos(phi) + Iy sin(phi).
inline Mat4 op_ix_phase(double phi) {
    return std::cos(phi) * op_ix() + std::sin(phi) * op_iy();
}

inline cplx hs_inner(const Mat4& a, const Mat4& b) { return (a.adjoint() * b).trace(); }

// Unit-Frobenius-norm spherical tensors T^{(k)q}, Condon-Shortley phases.
// Built from the stretched state (-1)^k (I+)^k / ||.|| by ladder lowering:
// [I-, T^{k}q] = sqrt(k(k+1)-q(q-1)) T^{k,q-1}.
class TensorBasis {
public:
    TensorBasis() {
        const Mat4 im = op_iminus();
        for (int k = 0; k <= 3; ++k) {
            Mat4 top = Mat4::Identity();
            const Mat4 ip = op_iplus();
            for (int p = 0; p < k; ++p) top = ip * top;
            top *= (k % 2 == 0) ? 1.0 : -1.0;
            top /= std::sqrt(hs_inner(top, top).real());
            at(k, k) = top;
            for (int q = k; q > -k; --q) {
                const double c = std::sqrt(double(k * (k + 1) - q * (q - 1)));
                at(k, q - 1) = (im * at(k, q) - at(k, q) * im) / c;
            }
        }
    }

    const Mat4& operator()(int k, int q) const {
        if (k < 0 || k > 3 || q < -k || q > k) throw std::out_of_range("tensor index");
        return store_[idx(k, q)];
    }

private:
    static int idx(int k, int q) { return k * k + (k + q); }
    Mat4& at(int k, int q) { return store_[idx(k, q)]; }
    std::array<Mat4, 16> store_;
};

inline const TensorBasis& tensors() {
    static const TensorBasis basis;
    return basis;
}

// The tabulated single-transition combinations assume tensors with an extra
// (-i)^(k-1) phase per rank relative to the Condon-Shortley set above. With
// that phase each combination collapses to exactly one transition element
// (or a z-type diagonal for the zero-coherence set); without it the operators
// are merely coherence-pure. The phase only exists in this tabulated layer --
// dynamics code works with the plain basis.
inline Mat4 tabulated_tensor(int k, int q) {
    return std::pow(-iu, k - 1) * tensors()(k, q);
}

// Single-transition operators, literal tabulated tensor combinations over
// tabulated_tensor(). As printed they are i * (Hermitian transition operator).
enum class TransitionOp {
    ZQ_A, ZQ_B, ZQ_C, ZQ_D,
    RF_A_plus, RF_B_plus, RF_C_plus,
    RF_A_minus, RF_B_minus, RF_C_minus,
    D1_plus, D2_plus, D1_minus, D2_minus,
    T_plus, T_minus,
};

inline Mat4 transition_op(TransitionOp label) {
    const auto T = [](int k, int q) { return tabulated_tensor(k, q); };
    const double r25 = std::sqrt(2.0 / 5.0), r35 = std::sqrt(3.0 / 5.0);
    const double r310 = 3.0 / std::sqrt(10.0), r32 = std::sqrt(1.5);
    switch (label) {
        case TransitionOp::ZQ_A: return iu / std::sqrt(5.0) * (T(1, 0) - 2.0 * T(3, 0));
        case TransitionOp::ZQ_B: return iu / std::sqrt(5.0) * (2.0 * T(1, 0) + T(3, 0));
        case TransitionOp::ZQ_C: return iu / std::sqrt(5.0) * (T(1, 0) + 3.0 * T(3, 0));
        case TransitionOp::ZQ_D: return iu / std::sqrt(5.0) * (3.0 * T(1, 0) - T(3, 0));
        case TransitionOp::RF_A_plus: return iu * r310 * T(1, 1) + r32 * T(2, 1) - iu * r35 * T(3, 1);
        case TransitionOp::RF_B_plus: return iu * r310 * T(1, 1) - r32 * T(2, 1) - iu * r35 * T(3, 1);
        case TransitionOp::RF_C_plus: return iu * r25 * T(1, 1) + iu * r35 * T(3, 1);
        case TransitionOp::RF_A_minus: return -iu * r310 * T(1, -1) - r32 * T(2, -1) + iu * r35 * T(3, -1);
        case TransitionOp::RF_B_minus: return -iu * r310 * T(1, -1) + r32 * T(2, -1) + iu * r35 * T(3, -1);
        case TransitionOp::RF_C_minus: return -iu * r25 * T(1, -1) - iu * r35 * T(3, -1);
        case TransitionOp::D1_plus: return T(2, 2) + iu * T(3, 2);
        case TransitionOp::D2_plus: return T(2, 2) - iu * T(3, 2);
        case TransitionOp::D1_minus: return T(2, -2) - iu * T(3, -2);
        case TransitionOp::D2_minus: return T(2, -2) + iu * T(3, -2);
        case TransitionOp::T_plus: return T(3, 3);
        case TransitionOp::T_minus: return T(3, -3);
    }
    throw std::invalid_argument("unknown transition operator");
}

// Coherence order of a transition operator (commutator eigenvalue under Iz).
inline int transition_order(TransitionOp label) {
    switch (label) {
        case TransitionOp::ZQ_A: case TransitionOp::ZQ_B:
        case TransitionOp::ZQ_C: case TransitionOp::ZQ_D: return 0;
        case TransitionOp::RF_A_plus: case TransitionOp::RF_B_plus:
        case TransitionOp::RF_C_plus: return 1;
        case TransitionOp::RF_A_minus: case TransitionOp::RF_B_minus:
        case TransitionOp::RF_C_minus: return -1;
        case TransitionOp::D1_plus: case TransitionOp::D2_plus: return 2;
        case TransitionOp::D1_minus: case TransitionOp::D2_minus: return -2;
        case TransitionOp::T_plus: return 3;
        case TransitionOp::T_minus: return -3;
    }
    throw std::invalid_argument("unknown transition operator");
}

// Symmetric / antisymmetric transition combinations at RF phase phi1.
// Phase factor convention: Phi^n = exp(-i n phi1).
enum class ComboOp {
    CT_S, CT_AS,
    ST_S_rot, ST_AS_rot, ST_S_counter, ST_AS_counter,
    D_S_rot, D_AS_rot, D_S_counter, D_AS_counter,
    T_S, T_AS,
};

inline Mat4 combo_op(ComboOp label, double phi1) {
    const cplx ph = std::exp(-iu * phi1);
    auto mix = [&](TransitionOp p, TransitionOp m, int n, double sign) {
        return std::pow(ph, n) * transition_op(p) + sign * std::pow(ph, -n) * transition_op(m);
    };
    switch (label) {
        case ComboOp::CT_S: return mix(TransitionOp::RF_C_plus, TransitionOp::RF_C_minus, 1, +1.0);
        case ComboOp::CT_AS: return mix(TransitionOp::RF_C_plus, TransitionOp::RF_C_minus, 1, -1.0);
        case ComboOp::ST_S_rot:
            return std::pow(ph, -1) * transition_op(TransitionOp::RF_A_minus) +
                   ph * transition_op(TransitionOp::RF_B_plus);
        case ComboOp::ST_AS_rot:
            return std::pow(ph, -1) * transition_op(TransitionOp::RF_A_minus) -
                   ph * transition_op(TransitionOp::RF_B_plus);
        case ComboOp::ST_S_counter: return mix(TransitionOp::RF_A_plus, TransitionOp::RF_B_minus, 1, +1.0);
        case ComboOp::ST_AS_counter: return mix(TransitionOp::RF_A_plus, TransitionOp::RF_B_minus, 1, -1.0);
        case ComboOp::D_S_rot: return mix(TransitionOp::D1_plus, TransitionOp::D1_minus, 2, +1.0);
        case ComboOp::D_AS_rot: return mix(TransitionOp::D1_plus, TransitionOp::D1_minus, 2, -1.0);
        case ComboOp::D_S_counter: return mix(TransitionOp::D2_plus, TransitionOp::D2_minus, 2, +1.0);
        case ComboOp::D_AS_counter: return mix(TransitionOp::D2_plus, TransitionOp::D2_minus, 2, -1.0);
        case ComboOp::T_S: return mix(TransitionOp::T_plus, TransitionOp::T_minus, 3, +1.0);
        case ComboOp::T_AS: return mix(TransitionOp::T_plus, TransitionOp::T_minus, 3, -1.0);
    }
    throw std::invalid_argument("unknown combination operator");
}

// On-resonance frame consistency: conjugating the rotating-frame RF term
// -w1 (Ix cos(phi1) + Iy sin(phi1)) with U2 = exp(-i wq t T^(2)0) must equal
// i * [ -w1 CT_S - (w1/2)(ST_S^(counter) e^{+i wq t} + ST_S^(rot) e^{-i wq t}) ].
// Returns the max elementwise residual over the sampled times.
inline double verify_frame_reduction(double omega1, double phi1, double omega_q,
                                     const std::vector<double>& times) {
    const Mat4 hrf = -omega1 * op_ix_phase(phi1);
    const Mat4 central = -omega1 * combo_op(ComboOp::CT_S, phi1);
    const Mat4 counter = -(omega1 / 2.0) * combo_op(ComboOp::ST_S_counter, phi1);
    const Mat4 rot = -(omega1 / 2.0) * combo_op(ComboOp::ST_S_rot, phi1);
    const Eigen::Vector4d d = tensors()(2, 0).diagonal().real();
    double worst = 0.0;
    for (double t : times) {
        Eigen::Vector4cd u;
        for (int i = 0; i < 4; ++i) u(i) = std::exp(-iu * omega_q * d(i) * t);
        const Mat4 umat = u.asDiagonal();
        const Mat4 lhs = umat * hrf * umat.adjoint();
        const Mat4 rhs = iu * (central + std::exp(iu * omega_q * t) * counter +
                               std::exp(-iu * omega_q * t) * rot);
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace tq
