#include <benchmark/benchmark.h>

#include "qrom/attack.hpp"
#include "qrom/bounds.hpp"
#include "qrom/faultlab.hpp"
#include "qrom/purified.hpp"
#include "qrom/schnorr.hpp"

using namespace qrom;

static void BM_OracleQuery(benchmark::State &state) {
    const unsigned n = static_cast<unsigned>(state.range(0));
    auto O = oracle::sample_oracle(n, 1, 1);
    auto s = qsim::prepare_uniform(n, 1);
    const auto L = qsim::RegisterLayout::standard(n, 1);
    for (auto _ : state) {
        qsim::apply_oracle_inplace(s, L, O);
        benchmark::DoNotOptimize(s.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.dim()));
}
BENCHMARK(BM_OracleQuery)->Arg(10)->Arg(16)->Arg(20);

static void BM_AttackExact(benchmark::State &state) {
    const unsigned n = static_cast<unsigned>(state.range(0));
    const unsigned q = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(reprogame::attack_exact_advantage(n, 1, q, 7));
}
BENCHMARK(BM_AttackExact)->Args({10, 8})->Args({14, 128})->Unit(benchmark::kMillisecond);

static void BM_PurifiedVsClassical(benchmark::State &state) {
    Rng rng(3);
    auto c = oracle::random_circuit(rng, 3, 1, 0, 4);
    for (auto _ : state) {
        auto po = oracle::run_purified(c, 3, 1);
        benchmark::DoNotOptimize(oracle::trace_distance(po.adversary_density(), oracle::classical_average(c, 3, 1)));
    }
}
BENCHMARK(BM_PurifiedVsClassical)->Unit(benchmark::kMillisecond);

static void BM_SimulationEquality(benchmark::State &state) {
    const sigcore::SchnorrId id(sigcore::SchnorrGroup::toy17());
    auto keys = id.keygen(3);
    const auto m = sigcore::Bits::from_uint(0x5A, 8);
    for (auto _ : state) benchmark::DoNotOptimize(faultlab::simulation_equality(id, keys, m, {9}));
}
BENCHMARK(BM_SimulationEquality)->Unit(benchmark::kMillisecond);

static void BM_FsSignVerify(benchmark::State &state) {
    const sigcore::SchnorrId id(sigcore::SchnorrGroup::safe_prime(62));
    sigcore::HashOracle H(16, id.challenge_bits(), 5);
    Rng rng(1);
    auto keys = id.keygen(rng);
    const auto m = sigcore::Bits::from_uint(42, 16);
    for (auto _ : state) {
        auto sig = sigcore::fs_sign(id, H, keys, m, sigcore::FsVariant::PkInHash, rng);
        benchmark::DoNotOptimize(sigcore::fs_verify(id, H, keys.pk, m, sig, sigcore::FsVariant::PkInHash));
    }
}
BENCHMARK(BM_FsSignVerify);

static void BM_BoundEvaluate(benchmark::State &state) {
    const auto mode = static_cast<bounds::Mode>(state.range(0));
    auto pm = bounds::parse_params_string("q_s=2^64;q_H=2^128;alpha=2^-257;succ_cma0=0;adv_hvzk=0");
    for (auto _ : state) benchmark::DoNotOptimize(bounds::evaluate("fs_cma", pm, mode));
}
BENCHMARK(BM_BoundEvaluate)->Arg(0)->Arg(1)->Arg(2);
BENCHMARK_MAIN();
