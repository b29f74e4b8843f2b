#include "qrom/sigcore.hpp"

#include <set>

namespace qrom::sigcore {

KeyPair IdScheme::keygen(Rng &rng) const {
    return keygen(uniform_below(rng, keygen_coin_count()));
}

Commitment IdScheme::commit(const Bits &sk, Rng &rng) const {
    return commit(sk, uniform_below(rng, commit_coin_count()));
}

Transcript IdScheme::sim(const Bits &pk, std::uint64_t challenge_index, std::uint64_t coin) const {
    const Bits c = challenge(challenge_index);
    auto [w, z] = special_sim(pk, c, coin);
    return Transcript{std::move(w), c, std::move(z)};
}

Transcript IdScheme::sim(const Bits &pk, Rng &rng) const {
    const auto k = uniform_below(rng, challenge_count());
    return sim(pk, k, uniform_below(rng, sim_coin_count()));
}

Transcript get_trans_challenge(const IdScheme &id, const Bits &sk, const Bits &c,
                               std::uint64_t commit_coin) {
    auto [w, st] = id.commit(sk, commit_coin);
    auto z = id.respond(sk, w, c, st);
    return Transcript{std::move(w), c, std::move(z)};
}

Transcript get_trans_challenge(const IdScheme &id, const Bits &sk, const Bits &c, Rng &rng) {
    return get_trans_challenge(id, sk, c, uniform_below(rng, id.commit_coin_count()));
}

Transcript get_trans(const IdScheme &id, const Bits &sk, Rng &rng) {
    const Bits c = id.challenge(uniform_below(rng, id.challenge_count()));
    return get_trans_challenge(id, sk, c, rng);
}

std::string transcript_key(const Transcript &t) {
    return t.w.hex() + ":" + t.c.hex() + ":" + (t.z ? t.z->hex() : std::string("bot"));
}

namespace {
constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 24;

Distribution power(const Distribution &single, unsigned t) {
    if (t == 0)
        throw std::invalid_argument("tuple length must be positive");
    Distribution acc = single;
    for (unsigned k = 1; k < t; ++k) {
        if (acc.size() * single.size() > kEnumerationLimit)
            throw std::invalid_argument("tuple distribution too large to enumerate");
        Distribution next;
        for (const auto &[ka, pa] : acc)
            for (const auto &[kb, pb] : single)
                next[ka + "|" + kb] += pa * pb;
        acc = std::move(next);
    }
    return acc;
}

void check_enumerable(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0 || a > kEnumerationLimit / b)
        throw std::invalid_argument("distribution too large to enumerate");
}
} // namespace

Distribution special_honest_transcripts(const IdScheme &id, const KeyPair &keys, const Bits &c) {
    const auto coins = id.commit_coin_count();
    check_enumerable(coins, 1);
    Distribution d;
    const Rational p(1, static_cast<long long>(coins));
    for (std::uint64_t r = 0; r < coins; ++r)
        d[transcript_key(get_trans_challenge(id, keys.sk, c, r))] += p;
    return d;
}

Distribution honest_transcripts(const IdScheme &id, const KeyPair &keys, unsigned t) {
    const auto nc = id.challenge_count();
    check_enumerable(nc, id.commit_coin_count());
    Distribution single;
    const Rational w(1, static_cast<long long>(nc));
    for (std::uint64_t k = 0; k < nc; ++k)
        for (const auto &[key, p] : special_honest_transcripts(id, keys, id.challenge(k)))
            single[key] += w * p;
    return power(single, t);
}

Distribution special_simulated_transcripts(const IdScheme &id, const Bits &pk, const Bits &c) {
    const auto coins = id.sim_coin_count();
    check_enumerable(coins, 1);
    Distribution d;
    const Rational p(1, static_cast<long long>(coins));
    for (std::uint64_t r = 0; r < coins; ++r) {
        auto [w, z] = id.special_sim(pk, c, r);
        d[transcript_key(Transcript{w, c, z})] += p;
    }
    return d;
}

Distribution simulated_transcripts(const IdScheme &id, const Bits &pk, unsigned t) {
    const auto nc = id.challenge_count();
    check_enumerable(nc, id.sim_coin_count());
    Distribution single;
    const Rational w(1, static_cast<long long>(nc));
    for (std::uint64_t k = 0; k < nc; ++k)
        for (const auto &[key, p] : special_simulated_transcripts(id, pk, id.challenge(k)))
            single[key] += w * p;
    return power(single, t);
}

Rational tv_distance(const Distribution &a, const Distribution &b) {
    Rational acc = 0;
    std::set<std::string> keys;
    for (const auto &[k, p] : a)
        keys.insert(k);
    for (const auto &[k, p] : b)
        keys.insert(k);
    for (const auto &k : keys) {
        auto ia = a.find(k);
        auto ib = b.find(k);
        Rational pa = ia == a.end() ? Rational(0) : ia->second;
        Rational pb = ib == b.end() ? Rational(0) : ib->second;
        acc += pa > pb ? pa - pb : pb - pa;
    }
    return acc / 2;
}

TableOracle::TableOracle(oracle::OracleTable table, std::uint64_t compress_key)
    : table_(std::move(table)), key_(compress_key) {}

std::uint64_t TableOracle::index_of(const Bits &point) const {
    return point.digest(key_) & (table_.size() - 1);
}

std::uint64_t TableOracle::evaluate(const Bits &point) { return table_.lookup(index_of(point)); }

void OverlayOracle::program(const Bits &point, std::uint64_t value) {
    const unsigned bits = out_bits();
    if (bits < 64 && (value >> bits) != 0)
        throw std::out_of_range("programmed value exceeds oracle output width");
    overlay_.emplace_back(point, value);
}

void OverlayOracle::erase(const Bits &point, std::uint64_t value) {
    std::erase_if(overlay_, [&](const auto &e) { return e.first == point && e.second == value; });
}

std::optional<std::uint64_t> OverlayOracle::overlay_value(const Bits &point) const {
    for (auto it = overlay_.rbegin(); it != overlay_.rend(); ++it)
        if (it->first == point)
            return it->second;
    return std::nullopt;
}

std::uint64_t OverlayOracle::evaluate(const Bits &point) {
    if (auto v = overlay_value(point))
        return *v;
    return base_->query(point);
}

HashOracle::HashOracle(unsigned domain_bits, unsigned out_bits, std::uint64_t seed)
    : table_(oracle::sample_oracle(domain_bits, out_bits, derive_seed(seed, 0x48)),
             derive_seed(seed, 0x4B)),
      overlay_(table_) {}

Bits fs_hash_input(const Bits &w, const Bits &m, const Bits &pk, FsVariant variant) {
    Bits in = w;
    in.append(m);
    if (variant == FsVariant::PkInHash)
        in.append(pk);
    return in;
}

Bits FsSignature::serialize() const {
    if (!z)
        throw SigningError("cannot serialize a rejected signature");
    Bits out = w;
    out.append(*z);
    return out;
}

FsSignature FsSignature::parse(const Bits &bits, const Widths &widths) {
    if (bits.width() != widths.w + widths.z)
        throw std::invalid_argument("signature has the wrong width");
    return FsSignature{bits.slice(0, widths.w), bits.slice(widths.w, widths.z)};
}

std::string FsSignature::hex() const {
    return w.hex() + ":" + (z ? z->hex() : std::string("bot"));
}

Bits fs_challenge(const IdScheme &id, RandomOracle &H, const Bits &w, const Bits &m,
                  const Bits &pk, FsVariant variant) {
    if (H.out_bits() != id.challenge_bits())
        throw std::invalid_argument("hash output width must equal log2 |C|");
    return id.challenge(H.query(fs_hash_input(w, m, pk, variant)));
}

FsSignature fs_sign(const IdScheme &id, RandomOracle &H, const KeyPair &keys, const Bits &m,
                    FsVariant variant, std::uint64_t commit_coin) {
    auto [w, st] = id.commit(keys.sk, commit_coin);
    const Bits c = fs_challenge(id, H, w, m, keys.pk, variant);
    auto z = id.respond(keys.sk, w, c, st);
    if (!z)
        throw SigningError("respond rejected the challenge");
    return FsSignature{std::move(w), std::move(z)};
}

FsSignature fs_sign(const IdScheme &id, RandomOracle &H, const KeyPair &keys, const Bits &m,
                    FsVariant variant, Rng &rng) {
    return fs_sign(id, H, keys, m, variant, uniform_below(rng, id.commit_coin_count()));
}

bool fs_verify(const IdScheme &id, RandomOracle &H, const Bits &pk, const Bits &m,
               const FsSignature &sig, FsVariant variant) {
    if (!sig.z)
        return false;
    const auto wd = id.widths();
    if (sig.w.width() != wd.w || sig.z->width() != wd.z)
        return false;
    const Bits c = fs_challenge(id, H, sig.w, m, pk, variant);
    return id.verify(pk, sig.w, c, *sig.z);
}

Bits SignatureScheme::sign(const KeyPair &keys, const Bits &m, Rng &rng) {
    return sign_with_coins(keys, m, uniform_below(rng, coin_count()));
}

FsScheme::FsScheme(const IdScheme &id, RandomOracle &H, FsVariant variant,
                   std::size_t message_bits)
    : id_(&id), H_(&H), variant_(variant), message_bits_(message_bits) {}

std::string FsScheme::name() const {
    return "fs-" + id_->name() + (variant_ == FsVariant::PkInHash ? "-pk" : "");
}

Bits FsScheme::sign_with_coins(const KeyPair &keys, const Bits &m, std::uint64_t coins) {
    if (m.width() != message_bits_)
        throw std::invalid_argument("message has the wrong width");
    return fs_sign(*id_, *H_, keys, m, variant_, coins).serialize();
}

bool FsScheme::verify(const Bits &pk, const Bits &m, const Bits &sig) {
    const auto wd = id_->widths();
    if (m.width() != message_bits_ || sig.width() != wd.w + wd.z)
        return false;
    return fs_verify(*id_, *H_, pk, m, FsSignature::parse(sig, wd), variant_);
}

HtsScheme::HtsScheme(SignatureScheme &inner, RandomOracle &H, std::size_t z_bits,
                     std::size_t message_bits)
    : inner_(&inner), H_(&H), z_bits_(z_bits), message_bits_(message_bits) {
    if (H.out_bits() != inner.message_bits())
        throw std::invalid_argument("hash output width must equal the inner message width");
}

std::string HtsScheme::name() const { return "hts-" + inner_->name(); }

Bits HtsScheme::inner_message(const Bits &z, const Bits &m) {
    Bits in = z;
    in.append(m);
    return Bits::from_uint(H_->query(in), inner_->message_bits());
}

std::pair<Bits, Bits> HtsScheme::sign_parts(const KeyPair &keys, const Bits &m, const Bits &z,
                                            std::uint64_t coins) {
    if (m.width() != message_bits_ || z.width() != z_bits_)
        throw std::invalid_argument("message or randomizer has the wrong width");
    return {z, inner_->sign_with_coins(keys, inner_message(z, m), coins)};
}

Bits HtsScheme::sign_with_coins(const KeyPair &keys, const Bits &m, std::uint64_t coins) {
    // Deterministic variant: z derived from the coins; sign() draws z uniformly.
    Rng rng = make_rng(coins);
    Bits z(z_bits_);
    for (std::size_t i = 0; i < z_bits_; ++i)
        z.set(i, rng() & 1);
    auto [zz, s] = sign_parts(keys, m, z, coins % inner_->coin_count());
    zz.append(s);
    return zz;
}

Bits HtsScheme::sign(const KeyPair &keys, const Bits &m, Rng &rng) {
    auto [z, s] = hts_sign(*this, keys, m, rng);
    z.append(s);
    return z;
}

bool HtsScheme::verify(const Bits &pk, const Bits &m, const Bits &sig) {
    if (sig.width() <= z_bits_ || m.width() != message_bits_)
        return false;
    const Bits z = sig.slice(0, z_bits_);
    const Bits s = sig.slice(z_bits_, sig.width() - z_bits_);
    return inner_->verify(pk, inner_message(z, m), s);
}

std::pair<Bits, Bits> hts_sign(HtsScheme &sig, const KeyPair &keys, const Bits &m, Rng &rng) {
    Bits z(sig.z_bits());
    for (std::size_t i = 0; i < z.width(); ++i)
        z.set(i, rng() & 1);
    return sig.sign_parts(keys, m, z, uniform_below(rng, sig.coin_count()));
}

bool hts_verify(HtsScheme &sig, const Bits &pk, const Bits &m, const Bits &z,
                const Bits &inner_sig) {
    Bits s = z;
    s.append(inner_sig);
    return sig.verify(pk, m, s);
}

Bits r2h_input(const Bits &sk, const Bits &m, const Bits &nonce) {
    Bits in = sk;
    in.append(m);
    in.append(nonce);
    return in;
}

std::uint64_t r2h_coins(const SignatureScheme &sig, RandomOracle &G, const Bits &sk,
                        const Bits &m, const Bits &nonce) {
    return G.query(r2h_input(sk, m, nonce)) % sig.coin_count();
}

Bits r2h_sign(SignatureScheme &sig, RandomOracle &G, const KeyPair &keys, const Bits &m,
              const Bits &nonce) {
    return sig.sign_with_coins(keys, m, r2h_coins(sig, G, keys.sk, m, nonce));
}

} // namespace qrom::sigcore
