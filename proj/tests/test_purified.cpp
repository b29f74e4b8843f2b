#include <doctest.h>

#include <cmath>

#include "qrom/purified.hpp"

using namespace qrom;
using namespace qrom::oracle;

namespace {
const qsim::Gate1 kX{0.0, 1.0, 1.0, 0.0};
}

TEST_CASE("initial state") {
    auto po = purified_init(0, 1, 1);
    REQUIRE(po.is_pure());
    REQUIRE(po.num_qubits() == 2);
    for (auto a : po.branches()[0]) CHECK(std::abs(a - qsim::cplx(0.5)) < 1e-15);
    CHECK(po.trace() == doctest::Approx(1.0));

    auto big = purified_init(2, 2, 1);
    CHECK(big.num_qubits() == 6);
    auto outcomes = big.measurement_outcomes();
    CHECK(outcomes.size() == 16);
    for (auto &o : outcomes) CHECK(o.probability == doctest::Approx(1.0 / 16).epsilon(1e-12));
    // Each cell alone is uniform in the computational basis.
    auto rho_cell = big.reduced_density({2});
    CHECK(std::abs(rho_cell(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(rho_cell(1, 1) - 0.5) < 1e-12);
}

TEST_CASE("query is an involution and reads the cell") {
    const unsigned n = 2, m = 1;
    qsim::RegisterLayout L{{1, 2}, {0}};
    for (std::uint64_t x = 0; x < 4; ++x) {
        auto po = purified_init(3, n, m);
        for (unsigned k = 0; k < n; ++k)
            if (x >> k & 1) po.apply_1q(1 + k, kX);
        const auto before = po.branches()[0];
        po.query(L);
        CHECK(epsilon_x(po, x) == doctest::Approx(1.0 - 0.5).epsilon(1e-12));
        for (std::uint64_t other = 0; other < 4; ++other)
            if (other != x) CHECK(epsilon_x(po, other) == doctest::Approx(0.0));
        for (auto &o : po.measurement_outcomes()) {
            // Adversary state is exactly |x>|F(x)>.
            const std::uint64_t idx = (x << 1) | o.table(x);
            CHECK(std::abs(o.adversary_state(static_cast<Eigen::Index>(idx),
                                             static_cast<Eigen::Index>(idx)) - 1.0) < 1e-12);
        }
        po.query(L);
        double diff = 0;
        for (std::size_t i = 0; i < before.size(); ++i)
            diff = std::max(diff, std::abs(before[i] - po.branches()[0][i]));
        CHECK(diff < 1e-12);
    }
}

TEST_CASE("reprogramming") {
    auto po = purified_init(1, 1, 1);
    CHECK(epsilon_x(po, 0) == doctest::Approx(0.0));
    auto re = purified_reprogram(po, 0);
    CHECK((re.density_matrix() - po.density_matrix()).norm() < 1e-12);
    auto twice = purified_reprogram(re, 0);
    CHECK((twice.density_matrix() - re.density_matrix()).norm() < 1e-12);

    // Classical query at x = 0 then reprogram: Y is maximally mixed.
    qsim::RegisterLayout L{{1}, {0}};
    auto q = purified_query(purified_init(2, 1, 1), L);
    auto r = purified_reprogram(q, 0);
    auto rho = r.reduced_density({0});
    CHECK(std::abs(rho(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(rho(1, 1) - 0.5) < 1e-12);
    CHECK(std::abs(rho(0, 1)) < 1e-12);
    CHECK(r.trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("superposition oracle matches the classical average") {
    Rng rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
        auto c = random_circuit(rng, 2, 1, 1, 4);
        auto po = run_purified(c, 2, 1);
        const double d = trace_distance(po.adversary_density(), classical_average(c, 2, 1));
        CHECK(d <= 1e-9);
    }
}

TEST_CASE("query circuits keep support small") {
    Rng rng(5);
    for (unsigned q = 1; q <= 3; ++q) {
        auto c = random_query_circuit(rng, 3, 1, 0, q, 2);
        CHECK(c.query_count() == q);
        auto po = run_purified(c, 3, 1);
        CHECK(po.max_non_phi0_cells() <= q);
    }
}
