#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "qrom/schnorr.hpp"
#include "qrom/subset_scheme.hpp"

using namespace qrom;
using namespace qrom::sigcore;

namespace {

const SchnorrId &schnorr17() {
    static const SchnorrId id(SchnorrGroup::toy17());
    return id;
}

Bits msg16(std::uint64_t v) { return Bits::from_uint(v & 0xFFFF, 16); }

std::uint64_t naive_pow(std::uint64_t g, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r = r * g % p;
    return r;
}

} // namespace

TEST_CASE("number theory helpers") {
    CHECK(is_prime(103));
    CHECK(is_prime(17));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561));
    CHECK(is_prime(18446744073709551557ULL));
    CHECK(powmod(5, 16, 17) == 1);
    CHECK(bit_length(16) == 5);
    CHECK_THROWS(SchnorrGroup::make(104, 17, 2));
    CHECK_THROWS(SchnorrGroup::make(103, 15, 2));
    const auto G = SchnorrGroup::toy17();
    CHECK(G.P == 103);
    CHECK(G.q == 17);
    CHECK(G.g != 1);
    CHECK(naive_pow(G.g, 17, 103) == 1);
    auto big = SchnorrGroup::safe_prime(20);
    CHECK(big.P == 2 * big.q + 1);
    CHECK(big.P < (1u << 20));
}

TEST_CASE("schnorr toy parameters") {
    const auto &id = schnorr17();
    const auto wd = id.widths();
    CHECK(wd.pk == 7);
    CHECK(wd.w == 7);
    CHECK(wd.sk == 5);
    CHECK(wd.st == 5);
    CHECK(wd.z == 5);
    CHECK(wd.c == 5);
    CHECK(id.challenge_count() == 16);
    CHECK(id.challenge(0).to_uint() == 1);
    CHECK(id.challenge(15).to_uint() == 16);
    CHECK_FALSE(id.in_challenge_space(Bits::from_uint(0, 5)));
    CHECK_FALSE(id.in_challenge_space(Bits::from_uint(17, 5)));
    CHECK(id.metadata().alpha == doctest::Approx(1.0 / 17));
    CHECK_FALSE(id.metadata().subset_revealing);
    CHECK(id.metadata().validity_aware);
}

TEST_CASE("schnorr arithmetic against naive exponentiation") {
    const auto &id = schnorr17();
    const auto g = id.group().g;
    for (std::uint64_t kc = 0; kc < id.keygen_coin_count(); ++kc) {
        auto keys = id.keygen(kc);
        const auto sk = keys.sk.to_uint();
        CHECK(keys.pk.to_uint() == naive_pow(g, sk, 103));
        CHECK(id.dlog(keys.pk.to_uint()) == sk);
        for (std::uint64_t a = 0; a < 17; ++a) {
            auto cm = id.commit(keys.sk, a);
            CHECK(cm.w.to_uint() == naive_pow(g, a, 103));
            for (std::uint64_t k = 0; k < 16; ++k) {
                auto c = id.challenge(k);
                auto z = id.respond(keys.sk, cm.w, c, cm.st);
                REQUIRE(z.has_value());
                CHECK(z->to_uint() == (a + (k + 1) * sk) % 17);
                CHECK(id.verify(keys.pk, cm.w, c, *z));
            }
            CHECK_FALSE(id.respond(keys.sk, cm.w, Bits::from_uint(0, 5), cm.st).has_value());
        }
    }
}

TEST_CASE("transcripts and simulation") {
    const auto &id = schnorr17();
    Rng rng(1);
    auto keys = id.keygen(rng);
    for (int i = 0; i < 50; ++i) {
        auto t = get_trans(id, keys.sk, rng);
        CHECK(id.verify(keys.pk, t.w, t.c, *t.z));
        auto s = id.sim(keys.pk, rng);
        CHECK(id.verify(keys.pk, s.w, s.c, *s.z));
    }
    auto c = id.challenge(6);
    auto fixed = get_trans_challenge(id, keys.sk, c, rng);
    CHECK(fixed.c == c);
    for (std::uint64_t k = 0; k < 16; ++k) {
        auto ck = id.challenge(k);
        CHECK(tv_distance(special_honest_transcripts(id, keys, ck),
                          special_simulated_transcripts(id, keys.pk, ck)) == 0);
    }
}

TEST_CASE("perfect HVZK over every key") {
    const auto &id = schnorr17();
    for (std::uint64_t kc = 0; kc < id.keygen_coin_count(); ++kc) {
        auto keys = id.keygen(kc);
        auto h = honest_transcripts(id, keys);
        CHECK(h.size() == 16 * 17);
        CHECK(tv_distance(h, simulated_transcripts(id, keys.pk)) == 0);
    }
    SubsetRevealingId sub;
    for (std::uint64_t kc = 0; kc < sub.keygen_coin_count(); ++kc) {
        auto keys = sub.keygen(kc);
        CHECK(tv_distance(honest_transcripts(sub, keys), simulated_transcripts(sub, keys.pk)) == 0);
    }
}

TEST_CASE("multi-transcript HVZK") {
    const auto &id = schnorr17();
    auto keys = id.keygen(4);
    for (unsigned t = 1; t <= 2; ++t)
        CHECK(tv_distance(honest_transcripts(id, keys, t), simulated_transcripts(id, keys.pk, t)) == 0);
    SubsetRevealingId sub;
    auto sk = sub.keygen(2);
    for (unsigned t = 1; t <= 3; ++t)
        CHECK(tv_distance(honest_transcripts(sub, sk, t), simulated_transcripts(sub, sk.pk, t)) == 0);
}

TEST_CASE("tv distance detects a difference") {
    Distribution a{{"x", Rational(1, 2)}, {"y", Rational(1, 2)}};
    Distribution b{{"x", Rational(1, 4)}, {"z", Rational(3, 4)}};
    CHECK(tv_distance(a, b) == Rational(3, 4));
    CHECK(tv_distance(a, a) == 0);
}

TEST_CASE("declared alpha bounds commitment probabilities") {
    auto check = [](const IdScheme &id) {
        for (std::uint64_t kc = 0; kc < id.keygen_coin_count(); ++kc) {
            auto keys = id.keygen(kc);
            std::map<std::string, std::uint64_t> count;
            for (std::uint64_t r = 0; r < id.commit_coin_count(); ++r) ++count[id.commit(keys.sk, r).w.hex()];
            std::uint64_t mx = 0;
            for (auto &[w, n] : count) mx = std::max(mx, n);
            CHECK(static_cast<double>(mx) / static_cast<double>(id.commit_coin_count()) <= id.metadata().alpha + 1e-15);
        }
    };
    check(schnorr17());
    check(SubsetRevealingId{});
}

TEST_CASE("subset-revealing fixture") {
    SubsetRevealingId id;
    const auto wd = id.widths();
    CHECK(wd.pk == 0);
    CHECK(id.challenge_count() == 2);
    CHECK(id.commit_coin_count() == 64);
    CHECK(id.keygen_coin_count() == 4);
    CHECK(id.metadata().alpha == doctest::Approx(1.0 / 16));
    CHECK(id.metadata().subset_revealing);
    CHECK_FALSE(id.in_challenge_space(Bits::from_uint(2, 2)));
    for (std::uint64_t c = 0; c < 2; ++c) {
        auto set = id.derive_set(id.challenge(c));
        REQUIRE(set.has_value());
        CHECK(*set == std::vector<std::size_t>{c});
    }
    for (std::uint64_t kc = 0; kc < 4; ++kc) {
        auto keys = id.keygen(kc);
        for (std::uint64_t r = 0; r < 64; ++r) {
            auto cm = id.commit(keys.sk, r);
            for (std::uint64_t k = 0; k < 2; ++k) {
                auto c = id.challenge(k);
                auto z = id.respond(keys.sk, cm.w, c, cm.st);
                REQUIRE(z.has_value());
                CHECK(*z == cm.st.slice(k * id.st_component_width(), id.st_component_width()));
                CHECK(id.verify(keys.pk, cm.w, c, *z));
            }
        }
    }
}

TEST_CASE("fiat-shamir correctness and soundness at toy size") {
    const auto &id = schnorr17();
    HashOracle H(16, id.challenge_bits(), 7);
    Rng rng(8);
    auto keys = id.keygen(rng);
    for (int i = 0; i < 100; ++i) {
        auto m = msg16(rng());
        auto sig = fs_sign(id, H, keys, m, FsVariant::PkInHash, rng);
        CHECK(fs_verify(id, H, keys.pk, m, sig, FsVariant::PkInHash));
        CHECK(FsSignature::parse(sig.serialize(), id.widths()) == sig);
    }
    // Every tampered w with the same z verifies only by coincidence of the challenge.
    auto m = msg16(0x1234);
    auto sig = fs_sign(id, H, keys, m, FsVariant::Standard, 3);
    int accepted = 0, total = 0;
    for (std::uint64_t w = 1; w < 103; ++w) {
        if (w == sig.w.to_uint()) continue;
        FsSignature t{Bits::from_uint(w, 7), sig.z};
        accepted += fs_verify(id, H, keys.pk, m, t, FsVariant::Standard);
        ++total;
    }
    CHECK(static_cast<double>(accepted) / total <= 1.0 / 16 + 0.1);
}

TEST_CASE("pk in hash separates key pairs") {
    const auto &id = schnorr17();
    HashOracle H(16, id.challenge_bits(), 11);
    int differ = 0, pairs = 0;
    for (std::uint64_t a = 0; a < 16; ++a)
        for (std::uint64_t b = a + 1; b < 16; ++b) {
            auto ka = id.keygen(a), kb = id.keygen(b);
            auto w = id.commit(ka.sk, 5).w;
            auto m = msg16(a * 16 + b);
            differ += fs_challenge(id, H, w, m, ka.pk, FsVariant::PkInHash) !=
                      fs_challenge(id, H, w, m, kb.pk, FsVariant::PkInHash);
            ++pairs;
        }
    // Equal challenges happen with probability 1/16 per pair.
    CHECK(differ >= pairs * 3 / 4);
    CHECK(fs_hash_input(Bits::from_uint(1, 7), msg16(2), Bits::from_uint(3, 7), FsVariant::PkInHash).to_uint() ==
          (1u | (2u << 7) | (3u << 23)));
}

TEST_CASE("hash-and-sign") {
    const auto &id = schnorr17();
    HashOracle Hin(16, id.challenge_bits(), 21);
    FsScheme inner(id, Hin, FsVariant::PkInHash, 8);
    HashOracle H(8, 8, 22);
    HtsScheme hts(inner, H, 32, 16);
    Rng rng(23);
    auto keys = hts.keygen(rng);
    for (int i = 0; i < 100; ++i) {
        auto m = msg16(rng());
        auto [z, s] = hts_sign(hts, keys, m, rng);
        CHECK(hts_verify(hts, keys.pk, m, z, s));
    }
    auto [z1, s1] = hts_sign(hts, keys, msg16(5), rng);
    auto [z2, s2] = hts_sign(hts, keys, msg16(5), rng);
    CHECK(z1 != z2);

    // A second (z', m') with the same inner message inherits the signature.
    const Bits m = msg16(77);
    auto [z, s] = hts_sign(hts, keys, m, rng);
    const Bits target = hts.inner_message(z, m);
    bool found = false;
    for (std::uint64_t v = 0; v < 4096 && !found; ++v) {
        Bits mp = msg16(v);
        if (mp == m) continue;
        if (hts.inner_message(z, mp) == target) {
            CHECK(hts_verify(hts, keys.pk, mp, z, s));
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("hedged signing") {
    const auto &id = schnorr17();
    HashOracle H(16, id.challenge_bits(), 31);
    FsScheme fs(id, H, FsVariant::PkInHash, 16);
    HashOracle G(16, 64, 32);
    auto keys = id.keygen(6);
    const Bits m = msg16(99), n1 = msg16(1), n2 = msg16(2);
    CHECK(r2h_sign(fs, G, keys, m, n1) == r2h_sign(fs, G, keys, m, n1));
    CHECK(r2h_input(keys.sk, m, n1).to_uint() == (keys.sk.to_uint() | (99ull << 5) | (1ull << 21)));
    const auto r = G.base().table()(G.base().index_of(r2h_input(keys.sk, m, n1))) % 17;
    CHECK(r2h_coins(fs, G, keys.sk, m, n1) == r);
    CHECK(r2h_sign(fs, G, keys, m, n1) == fs.sign_with_coins(keys, m, r));
    std::set<std::uint64_t> coins;
    for (std::uint64_t n = 0; n < 40; ++n) coins.insert(r2h_coins(fs, G, keys.sk, m, msg16(n)));
    CHECK(coins.size() > 5);
    CHECK(fs.verify(keys.pk, m, r2h_sign(fs, G, keys, m, n2)));
}

TEST_CASE("overlay oracle") {
    HashOracle H(8, 4, 41);
    const Bits p = Bits::from_uint(0x35, 12), q = Bits::from_uint(0x36, 12);
    const auto base_q = H.query(q);
    const auto base_p = H.query(p);
    H.program(p, (base_p + 1) % 16);
    H.program(p, (base_p + 2) % 16);
    CHECK(H.query(p) == (base_p + 2) % 16);
    CHECK(H.query(q) == base_q);
    CHECK(H.queries() == 4);
    CHECK_THROWS(H.program(p, 16));
}

TEST_CASE("recorded signing vectors") {
    // key_coin,message,commit_coin,pk,sk,w,c,z for fs over schnorr17 with the pk-in-hash input.
    const auto &id = schnorr17();
    HashOracle H(16, id.challenge_bits(), 2024);
    std::ostringstream fresh;
    fresh << "key_coin,message,commit_coin,pk,sk,w,c,z\n";
    for (std::uint64_t k = 0; k < 16; ++k) {
        auto keys = id.keygen(k);
        const std::uint64_t mv = (k * 4099 + 7) & 0xFFFF, cc = (k * 7) % 17;
        auto m = msg16(mv);
        auto sig = fs_sign(id, H, keys, m, FsVariant::PkInHash, cc);
        auto c = fs_challenge(id, H, sig.w, m, keys.pk, FsVariant::PkInHash);
        fresh << k << ',' << mv << ',' << cc << ',' << keys.pk.to_uint() << ',' << keys.sk.to_uint() << ','
              << sig.w.to_uint() << ',' << c.to_uint() << ',' << sig.z->to_uint() << '\n';
    }
    const std::string path = std::string(QROM_TEST_DATA) + "/fs_schnorr17.csv";
    if (std::getenv("QROM_WRITE_VECTORS")) {
        std::ofstream(path) << fresh.str();
    }
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream stored;
    stored << in.rdbuf();
    CHECK(stored.str() == fresh.str());

    // Independent arithmetic on every stored row.
    std::string line;
    std::getline(stored, line);
    int rows = 0;
    const auto g = id.group().g;
    while (std::getline(stored, line)) {
        std::stringstream ls(line);
        std::uint64_t v[8];
        char comma;
        ls >> v[0];
        for (int i = 1; i < 8; ++i) ls >> comma >> v[i];
        CHECK(v[3] == naive_pow(g, v[4], 103));
        CHECK(v[5] == naive_pow(g, v[2], 103));
        CHECK(v[7] == (v[2] + v[6] * v[4]) % 17);
        ++rows;
    }
    CHECK(rows == 16);
}
