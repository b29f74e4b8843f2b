#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "dense.hpp"
#include "qrom/errors.hpp"
#include "qrom/qsim.hpp"
#include "qrom/rng.hpp"

using namespace qrom;
using namespace qrom::qsim;

namespace {

double max_diff(const dense::Vec &a, const dense::Vec &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

oracle::OracleTable random_table(unsigned n, unsigned m, std::uint64_t seed) {
    return oracle::sample_oracle(n, m, seed);
}

} // namespace

TEST_CASE("uniform preparation") {
    SUBCASE("n=1 m=1") {
        auto s = prepare_uniform(1, 1);
        const double h = 1 / std::sqrt(2.0);
        CHECK(std::abs(s[0] - cplx(h)) < 1e-15);
        CHECK(std::abs(s[1]) < 1e-15);
        CHECK(std::abs(s[2] - cplx(h)) < 1e-15);
        CHECK(std::abs(s[3]) < 1e-15);
    }
    SUBCASE("empty X register") {
        auto s = prepare_uniform(0, 1);
        CHECK(s.dim() == 2);
        CHECK(std::abs(s[0] - cplx(1)) < 1e-15);
    }
    SUBCASE("n=3 m=2") {
        auto s = prepare_uniform(3, 2);
        int nonzero = 0;
        for (std::uint64_t i = 0; i < s.dim(); ++i) {
            if (std::abs(s[i]) > 1e-15) {
                ++nonzero;
                CHECK((i & 3) == 0);
                CHECK(std::abs(s[i] - cplx(1 / std::sqrt(8.0))) < 1e-15);
            }
        }
        CHECK(nonzero == 8);
    }
}

TEST_CASE("state construction validates norm and length") {
    CHECK_THROWS(StateVector::from_amplitudes({1.0, 1.0}));
    CHECK_THROWS(StateVector::from_amplitudes({1.0, 0.0, 0.0}));
    CHECK_NOTHROW(StateVector::from_amplitudes({0.0, 1.0}));
}

TEST_CASE("oracle application") {
    SUBCASE("zero oracle is identity") {
        auto v = dense::random_state(32, 1);
        auto s = dense::to_state(v);
        auto out = apply_oracle(s, RegisterLayout::standard(3, 2), oracle::OracleTable::constant(3, 2, 0));
        CHECK(max_diff(dense::to_vec(out), v) < 1e-15);
    }
    SUBCASE("identity function copies x") {
        std::vector<std::uint64_t> t(8);
        for (std::uint64_t x = 0; x < 8; ++x) t[x] = x;
        oracle::OracleTable O(3, 3, t);
        for (std::uint64_t x = 0; x < 8; ++x) {
            auto out = apply_oracle(StateVector::basis(6, x << 3), RegisterLayout::standard(3, 3), O);
            CHECK(std::abs(out[(x << 3) | x] - cplx(1)) < 1e-15);
        }
    }
    SUBCASE("matches dense permutation matrices") {
        for (unsigned n = 1; n <= 4; ++n)
            for (unsigned m = 1; n + m <= 6; ++m)
                for (std::uint64_t seed = 0; seed < 5; ++seed) {
                    auto O = random_table(n, m, seed * 31 + n * 7 + m);
                    auto v = dense::random_state(std::uint64_t{1} << (n + m), seed + 100);
                    auto out = apply_oracle(dense::to_state(v), RegisterLayout::standard(n, m), O);
                    dense::Vec expect = dense::oracle_matrix(O) * v;
                    CHECK(max_diff(dense::to_vec(out), expect) < 1e-12);
                }
    }
    SUBCASE("involution and linearity") {
        auto O = random_table(3, 2, 9);
        auto L = RegisterLayout::standard(3, 2);
        auto a = dense::random_state(32, 3), b = dense::random_state(32, 4);
        auto twice = apply_oracle(apply_oracle(dense::to_state(a), L, O), L, O);
        CHECK(max_diff(dense::to_vec(twice), a) < 1e-12);
        dense::Vec mix = (0.6 * a + dense::cplx(0, 0.8) * b);
        mix /= mix.norm();
        auto lhs = dense::to_vec(apply_oracle(dense::to_state(mix), L, O));
        dense::Vec rhs = dense::oracle_matrix(O) * mix;
        CHECK(max_diff(lhs, rhs) < 1e-12);
    }
    SUBCASE("non-standard layout") {
        RegisterLayout L{{0, 2}, {1}};
        auto O = random_table(2, 1, 5);
        auto v = dense::random_state(8, 6);
        auto out = dense::to_vec(apply_oracle(dense::to_state(v), L, O));
        auto P = dense::permutation_matrix(8, [&](std::uint64_t i) {
            const std::uint64_t x = (i & 1) | ((i >> 2 & 1) << 1);
            return i ^ ((O(x) & 1) << 1);
        });
        CHECK(max_diff(out, P * v) < 1e-12);
    }
}

TEST_CASE("permutations") {
    auto L = RegisterLayout::standard(3, 1);
    auto v = dense::random_state(16, 11);
    auto s = dense::to_state(v);
    CHECK(max_diff(dense::to_vec(apply_permutation(s, L, Permutation::identity(3))), v) < 1e-15);

    auto add1 = Permutation::add_constant(3, 1);
    CHECK(add1.is_cyclic());
    auto t = s;
    for (int k = 0; k < 8; ++k) t = apply_permutation(t, L, add1);
    CHECK(max_diff(dense::to_vec(t), v) < 1e-12);

    auto back = apply_permutation(apply_permutation(s, L, add1), L, add1.inverse());
    CHECK(max_diff(dense::to_vec(back), v) < 1e-12);

    auto P = dense::permutation_matrix(16, [&](std::uint64_t i) { return (add1(i >> 1) << 1) | (i & 1); });
    CHECK(max_diff(dense::to_vec(apply_permutation(s, L, add1)), P * v) < 1e-12);

    CHECK_THROWS(Permutation(2, {0, 0, 1, 2}));
    CHECK_FALSE(Permutation(2, {1, 0, 3, 2}).is_cyclic());
}

TEST_CASE("single-qubit gates and cnot match dense matrices") {
    Rng rng(7);
    std::normal_distribution<double> nd;
    // Random unitary from a QR decomposition.
    Eigen::Matrix2cd A;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) A(i, j) = cplx(nd(rng), nd(rng));
    Eigen::Matrix2cd Q = A.householderQr().householderQ();
    Gate1 u{Q(0, 0), Q(0, 1), Q(1, 0), Q(1, 1)};
    auto v = dense::random_state(16, 12);
    for (unsigned q = 0; q < 4; ++q) {
        auto out = dense::to_vec(apply_1q(dense::to_state(v), q, u));
        CHECK(max_diff(out, dense::single_qubit_matrix(4, q, u) * v) < 1e-12);
    }
    auto out = dense::to_vec(apply_cnot(dense::to_state(v), 1, 3));
    auto P = dense::permutation_matrix(16, [](std::uint64_t i) { return (i >> 1 & 1) ? i ^ 8 : i; });
    CHECK(max_diff(out, P * v) < 1e-12);
}

TEST_CASE("projectors") {
    auto s = prepare_uniform(3, 2);
    CHECK(project_prob(s, Projector::identity()) == doctest::Approx(1.0));
    std::vector<cplx> e0(s.dim(), 0.0);
    e0[0] = 1.0;
    CHECK(project_prob(s, Projector::span({e0})) == doctest::Approx(1.0 / 8));

    // X-register projector against a dense construction.
    auto L = RegisterLayout::standard(2, 1);
    auto v = dense::random_state(8, 21);
    std::vector<cplx> xv{0.5, 0.5, cplx(0, 0.5), -0.5};
    Eigen::VectorXcd px(4);
    for (int i = 0; i < 4; ++i) px(i) = xv[static_cast<std::size_t>(i)];
    Eigen::MatrixXcd Px = px * px.adjoint();
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(8, 8);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int y = 0; y < 2; ++y) full(a * 2 + y, b * 2 + y) = Px(a, b);
    const double expect = (v.adjoint() * full * v)(0, 0).real();
    CHECK(project_prob(dense::to_state(v), Projector::on_x(L, {xv})) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("balanced set projector eigenvectors") {
    const unsigned n = 3;
    auto L = RegisterLayout::standard(n, 1);
    std::vector<bool> in_S{true, false, false, true, false, false, false, false};
    const double sS = std::sqrt(2.0), sC = std::sqrt(6.0);
    std::vector<cplx> plus(16, 0.0), minus(16, 0.0);
    for (std::uint64_t x = 0; x < 8; ++x) {
        const double a = in_S[x] ? 1 / sS : 1 / sC;
        plus[x << 1] = a / std::sqrt(2.0);
        minus[x << 1] = (in_S[x] ? a : -a) / std::sqrt(2.0);
    }
    auto P = Projector::set_balanced(L, in_S);
    CHECK(project_prob(StateVector::from_amplitudes(plus), P) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(project_prob(StateVector::from_amplitudes(minus), P) == doctest::Approx(0.0).epsilon(1e-12));

    std::vector<cplx> S(16, 0.0), C(16, 0.0);
    for (std::uint64_t x = 0; x < 8; ++x) (in_S[x] ? S : C)[x << 1] = in_S[x] ? 1 / sS : 1 / sC;
    Mixture rho{{{2.0 / 8, StateVector::from_amplitudes(S)}, {6.0 / 8, StateVector::from_amplitudes(C)}}};
    CHECK(project_prob(rho, P) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("qubit cap") {
    CHECK(qubit_cap() == kDefaultQubitCap);
    CHECK_THROWS_AS(StateVector(kDefaultQubitCap + 1), CapExceeded);
    setenv("QROM_QUBIT_CAP", "4", 1);
    CHECK(qubit_cap() == 4);
    CHECK_THROWS_AS(prepare_uniform(3, 2), CapExceeded);
    CHECK_NOTHROW(prepare_uniform(2, 2));
    unsetenv("QROM_QUBIT_CAP");
}
