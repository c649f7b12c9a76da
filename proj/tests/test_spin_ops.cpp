// Operator algebra: tensor basis against an independent Clebsch-Gordan
// construction, grading/orthonormality invariants, the tabulated
// single-transition operators and their symmetric/antisymmetric
// combinations, and the interaction-frame reduction identity.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "tq/spin.hpp"

using namespace tq;

namespace {

double fact(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// <j1 m1; j2 m2 | J M> by the Racah sum formula. Arguments are doubled
// (2*j, 2*m) so half-integer spins stay integral.
double clebsch(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
    if (tm1 + tm2 != tM) return 0.0;
    auto f2 = [](int twice) {
        REQUIRE(twice % 2 == 0);
        return fact(twice / 2);
    };
    const double delta = f2(tj1 + tj2 - tJ) * f2(tj1 - tj2 + tJ) * f2(-tj1 + tj2 + tJ) /
                         f2(tj1 + tj2 + tJ + 2);
    const double pref = std::sqrt((tJ + 1.0) * delta) *
                        std::sqrt(f2(tJ + tM) * f2(tJ - tM) * f2(tj1 - tm1) * f2(tj1 + tm1) *
                                  f2(tj2 - tm2) * f2(tj2 + tm2));
    double sum = 0.0;
    for (int k = 0; k <= (tj1 + tj2 - tJ) / 2; ++k) {
        const int a = tj1 + tj2 - tJ - 2 * k, b = tj1 - tm1 - 2 * k, c = tj2 + tm2 - 2 * k;
        const int d = tJ - tj2 + tm1 + 2 * k, e = tJ - tj1 - tm2 + 2 * k;
        if (a < 0 || b < 0 || c < 0 || d < 0 || e < 0) continue;
        sum += ((k % 2) ? -1.0 : 1.0) /
               (fact(k) * f2(a) * f2(b) * f2(c) * f2(d) * f2(e));
    }
    return pref * sum;
}

// Independent tensor construction: (T^k_q)_{m',m} = sqrt((2k+1)/4) <j m; k q | j m'>.
Mat4 cg_tensor(int k, int q) {
    Mat4 t = Mat4::Zero();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const int tmp = 3 - 2 * r, tm = 3 - 2 * c;  // doubled m values, descending
            t(r, c) = std::sqrt((2.0 * k + 1.0) / 4.0) * clebsch(3, tm, 2 * k, 2 * q, 3, tmp);
        }
    return t;
}

double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

const std::vector<TransitionOp> all_transition_ops = {
    TransitionOp::ZQ_A, TransitionOp::ZQ_B, TransitionOp::ZQ_C, TransitionOp::ZQ_D,
    TransitionOp::RF_A_plus, TransitionOp::RF_B_plus, TransitionOp::RF_C_plus,
    TransitionOp::RF_A_minus, TransitionOp::RF_B_minus, TransitionOp::RF_C_minus,
    TransitionOp::D1_plus, TransitionOp::D2_plus, TransitionOp::D1_minus,
    TransitionOp::D2_minus, TransitionOp::T_plus, TransitionOp::T_minus,
};

Mat4 unit(int r, int c, cplx v) {
    Mat4 m = Mat4::Zero();
    m(r, c) = v;
    return m;
}

}  // namespace

TEST_CASE("tensor basis matches the Clebsch-Gordan construction") {
    for (int k = 0; k <= 3; ++k)
        for (int q = -k; q <= k; ++q) {
            INFO("k=" << k << " q=" << q);
            CHECK(max_abs(tensors()(k, q) - cg_tensor(k, q)) < 1e-14);
        }
}

TEST_CASE("tensor basis is Hilbert-Schmidt orthonormal") {
    for (int k = 0; k <= 3; ++k)
        for (int q = -k; q <= k; ++q)
            for (int k2 = 0; k2 <= 3; ++k2)
                for (int q2 = -k2; q2 <= k2; ++q2) {
                    const cplx ip = hs_inner(tensors()(k, q), tensors()(k2, q2));
                    const double expect = (k == k2 && q == q2) ? 1.0 : 0.0;
                    CHECK(std::abs(ip - expect) < 1e-12);
                }
}

TEST_CASE("pinned tensor identities") {
    Mat4 t20 = Mat4::Zero();
    t20.diagonal() << 0.5, -0.5, -0.5, 0.5;
    CHECK(max_abs(tensors()(2, 0) - t20) < 1e-12);
    const Mat4 ix = std::sqrt(2.5) * (tensors()(1, -1) - tensors()(1, 1));
    CHECK(max_abs(ix - op_ix()) < 1e-12);
    CHECK(max_abs(tensors()(1, 0) - Mat4(op_iz() / std::sqrt(5.0))) < 1e-12);
}

TEST_CASE("coherence grading and adjoint symmetry") {
    const Mat4 iz = op_iz();
    for (int k = 0; k <= 3; ++k)
        for (int q = -k; q <= k; ++q) {
            const Mat4& t = tensors()(k, q);
            CHECK(max_abs(iz * t - t * iz - double(q) * t) < 1e-12);
            const double sgn = (q % 2) ? -1.0 : 1.0;
            CHECK(max_abs(Mat4(t.adjoint()) - sgn * tensors()(k, -q)) < 1e-12);
        }
}

TEST_CASE("transition operators reduce to single transitions") {
    const double r3 = std::sqrt(3.0), r2 = std::sqrt(2.0);
    struct Row {
        TransitionOp op;
        Mat4 expect;
    };
    Mat4 zq_a = Mat4::Zero(), zq_b = Mat4::Zero(), zq_c = Mat4::Zero(), zq_d = Mat4::Zero();
    zq_a.diagonal() << 0.5 * iu, -0.5 * iu, 0.5 * iu, -0.5 * iu;
    zq_b.diagonal() << 0.5 * iu, 0.5 * iu, -0.5 * iu, -0.5 * iu;
    zq_c.diagonal() << 0.0, iu, -iu, 0.0;
    zq_d.diagonal() << iu, 0.0, 0.0, -iu;
    const std::vector<Row> table = {
        {TransitionOp::ZQ_A, zq_a},
        {TransitionOp::ZQ_B, zq_b},
        {TransitionOp::ZQ_C, zq_c},
        {TransitionOp::ZQ_D, zq_d},
        {TransitionOp::RF_C_plus, unit(1, 2, -iu)},
        {TransitionOp::RF_C_minus, unit(2, 1, -iu)},
        {TransitionOp::RF_B_plus, unit(0, 1, -iu * r3)},
        {TransitionOp::RF_B_minus, unit(1, 0, -iu * r3)},
        {TransitionOp::RF_A_plus, unit(2, 3, -iu * r3)},
        {TransitionOp::RF_A_minus, unit(3, 2, -iu * r3)},
        {TransitionOp::D1_plus, unit(0, 2, -iu * r2)},
        {TransitionOp::D1_minus, unit(3, 1, -iu * r2)},
        {TransitionOp::D2_plus, unit(1, 3, -iu * r2)},
        {TransitionOp::D2_minus, unit(2, 0, -iu * r2)},
        {TransitionOp::T_plus, unit(0, 3, 1.0)},
        {TransitionOp::T_minus, unit(3, 0, -1.0)},
    };
    REQUIRE(table.size() == all_transition_ops.size());
    for (const auto& row : table) {
        INFO("op index " << int(row.op));
        CHECK(max_abs(transition_op(row.op) - row.expect) < 1e-12);
    }
}

TEST_CASE("transition operators carry their stated coherence order") {
    const Mat4 iz = op_iz();
    for (TransitionOp op : all_transition_ops) {
        const Mat4 o = transition_op(op);
        const double n = double(transition_order(op));
        CHECK(max_abs(iz * o - o * iz - n * o) < 1e-12);
    }
}

TEST_CASE("combination operators expand into transition operator sums") {
    const double phi = 0.71;
    const cplx ph = std::exp(-iu * phi);
    CHECK(max_abs(combo_op(ComboOp::CT_S, phi) -
                  Mat4(ph * transition_op(TransitionOp::RF_C_plus) +
                       transition_op(TransitionOp::RF_C_minus) / ph)) < 1e-14);
    CHECK(max_abs(combo_op(ComboOp::ST_S_rot, phi) -
                  Mat4(transition_op(TransitionOp::RF_A_minus) / ph +
                       ph * transition_op(TransitionOp::RF_B_plus))) < 1e-14);
    CHECK(max_abs(combo_op(ComboOp::ST_S_counter, phi) -
                  Mat4(ph * transition_op(TransitionOp::RF_A_plus) +
                       transition_op(TransitionOp::RF_B_minus) / ph)) < 1e-14);
    CHECK(max_abs(Mat4(combo_op(ComboOp::ST_S_rot, phi) + combo_op(ComboOp::ST_AS_rot, phi)) -
                  Mat4(2.0 / ph * transition_op(TransitionOp::RF_A_minus))) < 1e-14);
    CHECK(max_abs(combo_op(ComboOp::T_S, phi) -
                  Mat4(std::pow(ph, 3) * transition_op(TransitionOp::T_plus) +
                       std::pow(ph, -3) * transition_op(TransitionOp::T_minus))) < 1e-14);
}

TEST_CASE("combination adjoint structure") {
    for (double phi : {0.0, 1.234}) {
        // single-frequency combinations: i * CT_S / T_S Hermitian, the
        // antisymmetric partners Hermitian as printed
        for (ComboOp op : {ComboOp::CT_S, ComboOp::T_S}) {
            const Mat4 h = iu * combo_op(op, phi);
            CHECK(max_abs(h - Mat4(h.adjoint())) < 1e-12);
        }
        for (ComboOp op : {ComboOp::CT_AS, ComboOp::T_AS}) {
            const Mat4 h = combo_op(op, phi);
            CHECK(max_abs(h - Mat4(h.adjoint())) < 1e-12);
        }
        // rotating and counter-rotating partners pair under the adjoint;
        // the sign tracks where the minus sits in the antisymmetric forms
        const std::vector<std::tuple<ComboOp, ComboOp, double>> pairs = {
            {ComboOp::ST_S_rot, ComboOp::ST_S_counter, +1.0},
            {ComboOp::ST_AS_rot, ComboOp::ST_AS_counter, +1.0},
            {ComboOp::D_S_rot, ComboOp::D_S_counter, +1.0},
            {ComboOp::D_AS_rot, ComboOp::D_AS_counter, -1.0},
        };
        for (const auto& [rot, counter, sign] : pairs)
            CHECK(max_abs(Mat4(combo_op(rot, phi).adjoint()) + sign * combo_op(counter, phi)) <
                  1e-12);
    }
}

TEST_CASE("frame reduction holds for random parameter sets") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> uw1(1e4, 1e6), uphi(0.0, 2.0 * pi), uwq(1e5, 1e7),
        ut(0.0, 5e-5);
    for (int trial = 0; trial < 10; ++trial) {
        const double w1 = uw1(rng), phi = uphi(rng), wq = uwq(rng);
        std::vector<double> times;
        for (int i = 0; i < 6; ++i) times.push_back(ut(rng));
        const double residual = verify_frame_reduction(w1, phi, wq, times);
        INFO("w1=" << w1 << " phi=" << phi << " wq=" << wq);
        CHECK(residual < 1e-10 * w1);
    }
}
