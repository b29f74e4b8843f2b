#include "qrom/faultlab.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "qrom/errors.hpp"

namespace qrom::faultlab {

using sigcore::FsVariant;
using sigcore::fs_hash_input;

ExcludedIndex::ExcludedIndex(int i)
    : std::invalid_argument("fault index " + std::to_string(i) +
                            " is excluded (derivation, serialization or nonce-input fault)") {}

std::string FaultFn::describe() const {
    switch (kind) {
    case Kind::Id:
        return "id";
    case Kind::Flip:
        return "flip:" + std::to_string(bit);
    case Kind::Set:
        return "set:" + std::to_string(bit) + ":" + (value ? "1" : "0");
    }
    return "id";
}

FaultFn FaultFn::parse(const std::string &text) {
    if (text == "id")
        return id();
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':'))
        parts.push_back(item);
    try {
        if (parts.size() == 2 && parts[0] == "flip")
            return flip(std::stoul(parts[1]));
        if (parts.size() == 3 && parts[0] == "set" && (parts[2] == "0" || parts[2] == "1"))
            return set(std::stoul(parts[1]), parts[2] == "1");
    } catch (const std::logic_error &) {
    }
    throw std::invalid_argument("bad fault function: " + text);
}

Bits fault_apply(const FaultFn &phi, const Bits &x) {
    Bits out = x;
    switch (phi.kind) {
    case FaultFn::Kind::Id:
        break;
    case FaultFn::Kind::Flip:
        out.flip(phi.bit);
        break;
    case FaultFn::Kind::Set:
        out.set(phi.bit, phi.value);
        break;
    }
    return out;
}

std::string target_name(Target t) {
    switch (t) {
    case Target::Sk:
        return "sk";
    case Target::W:
        return "w";
    case Target::St:
        return "st";
    case Target::M:
        return "m";
    case Target::Pk:
        return "pk";
    case Target::C:
        return "c";
    case Target::Z:
        return "z";
    }
    return "?";
}

void validate_index(int i) {
    switch (i) {
    case 1:
    case 4:
    case 5:
    case 6:
    case 7:
    case 9:
        return;
    case 0:
    case 2:
    case 3:
    case 8:
    case 10:
        throw ExcludedIndex(i);
    default:
        throw std::invalid_argument("unknown fault index " + std::to_string(i));
    }
}

std::vector<Field> fault_layout(int i, const sigcore::Widths &wd, std::size_t mb) {
    validate_index(i);
    switch (i) {
    case 1:
        return {{Target::Sk, 0, wd.sk}};
    case 4:
        return {{Target::W, 0, wd.w}, {Target::St, wd.w, wd.st}};
    case 5:
        return {{Target::W, 0, wd.w}, {Target::M, wd.w, mb}, {Target::Pk, wd.w + mb, wd.pk}};
    case 6:
        return {{Target::C, 0, wd.c}};
    case 7:
        return {{Target::Sk, 0, wd.sk}, {Target::C, wd.sk, wd.c}, {Target::St, wd.sk + wd.c, wd.st}};
    default:
        return {{Target::W, 0, wd.w}, {Target::Z, wd.w, wd.z}};
    }
}

FaultSpec FaultSpec::on_field(int i, Target t, FaultFn local, const sigcore::Widths &wd,
                              std::size_t mb) {
    for (const auto &f : fault_layout(i, wd, mb)) {
        if (f.target != t)
            continue;
        if (local.kind != FaultFn::Kind::Id && local.bit >= f.width)
            throw std::out_of_range("fault bit outside the target field");
        if (local.kind != FaultFn::Kind::Id)
            local.bit += f.offset;
        return FaultSpec{i, local};
    }
    throw std::invalid_argument("target not faultable at index " + std::to_string(i));
}

std::string FaultSpec::describe() const { return std::to_string(index) + "/" + fn.describe(); }

std::optional<Field> target_of(const FaultSpec &spec, const sigcore::Widths &wd, std::size_t mb) {
    const auto layout = fault_layout(spec.index, wd, mb);
    if (spec.fn.kind == FaultFn::Kind::Id)
        return std::nullopt;
    for (const auto &f : layout)
        if (spec.fn.bit >= f.offset && spec.fn.bit < f.offset + f.width)
            return f;
    throw std::out_of_range("fault bit outside the faulted tuple");
}

std::vector<FaultSpec> one_bit_faults(int i, const sigcore::Widths &wd, std::size_t mb) {
    std::size_t total = 0;
    for (const auto &f : fault_layout(i, wd, mb))
        total += f.width;
    std::vector<FaultSpec> out;
    for (std::size_t j = 0; j < total; ++j) {
        out.push_back(FaultSpec{i, FaultFn::flip(j)});
        out.push_back(FaultSpec{i, FaultFn::set(j, false)});
        out.push_back(FaultSpec{i, FaultFn::set(j, true)});
    }
    return out;
}

namespace {

// Applies spec to the concatenation of parts when spec.index == i.
std::vector<Bits> fault_tuple(int i, const FaultSpec &spec, std::vector<Bits> parts) {
    if (spec.index != i || spec.fn.kind == FaultFn::Kind::Id)
        return parts;
    const Bits faulted = fault_apply(spec.fn, Bits::concat(parts));
    std::size_t off = 0;
    for (auto &p : parts) {
        const std::size_t w = p.width();
        p = faulted.slice(off, w);
        off += w;
    }
    return parts;
}

FaultFn localize(const FaultFn &fn, const Field &f) {
    FaultFn out = fn;
    out.bit -= f.offset;
    return out;
}

SignOutput pipeline(const IdScheme &id, RandomOracle &H, const KeyPair &keys, const Bits &m,
                    const FaultSpec &spec, sigcore::Commitment com) {
    if (H.out_bits() != id.challenge_bits())
        throw std::invalid_argument("hash output width must equal log2 |C|");
    auto ws = fault_tuple(4, spec, {com.w, com.st});
    const Bits w = ws[0], st = ws[1];
    auto hin = fault_tuple(5, spec, {w, m, keys.pk});
    const Bits point = fs_hash_input(hin[0], hin[1], hin[2], FsVariant::PkInHash);
    const std::uint64_t v = H.query(point);
    const Bits c = fault_tuple(6, spec, {id.challenge(v)})[0];
    auto rin = fault_tuple(7, spec, {keys.sk, c, st});
    auto z = id.respond(rin[0], w, rin[1], rin[2]);
    FsSignature sig{w, std::move(z)};
    if (spec.index == 9 && spec.fn.kind != FaultFn::Kind::Id) {
        if (!sig.z)
            throw std::logic_error("index-9 fault on a rejected signature");
        auto wz = fault_tuple(9, spec, {sig.w, *sig.z});
        sig = FsSignature{wz[0], wz[1]};
    }
    return SignOutput{std::move(sig), hin[1], point, v};
}

void check_signing_index(const FaultSpec &spec) {
    validate_index(spec.index);
    if (spec.index == 1)
        throw UnsupportedFault("index 1 exists only in the nonce-based signing oracle");
}

} // namespace

SignOutput faultsign(const IdScheme &id, RandomOracle &H, const KeyPair &keys, const Bits &m,
                     const FaultSpec &spec, std::uint64_t commit_coin) {
    check_signing_index(spec);
    return pipeline(id, H, keys, m, spec, id.commit(keys.sk, commit_coin));
}

SignOutput faultsign(const IdScheme &id, RandomOracle &H, const KeyPair &keys, const Bits &m,
                     const FaultSpec &spec, Rng &rng) {
    return faultsign(id, H, keys, m, spec, uniform_below(rng, id.commit_coin_count()));
}

std::uint64_t nonce_commit_coin(const IdScheme &id, RandomOracle &G, const Bits &sk,
                                const Bits &m, const Bits &nonce, const FaultSpec &spec) {
    const Bits key = fault_tuple(1, spec, {sk})[0];
    return G.query(sigcore::r2h_input(key, m, nonce)) % id.commit_coin_count();
}

SignOutput nonce_faultsign(const IdScheme &id, RandomOracle &H, RandomOracle &G,
                           const KeyPair &keys, const Bits &m, const Bits &nonce,
                           const FaultSpec &spec) {
    validate_index(spec.index);
    const std::uint64_t r = nonce_commit_coin(id, G, keys.sk, m, nonce, spec);
    return pipeline(id, H, keys, m, spec, id.commit(keys.sk, r));
}

bool fault_simulatable(const IdScheme &id, const FaultSpec &spec, std::size_t mb) {
    validate_index(spec.index);
    if (spec.index == 1)
        return false;
    const auto f = target_of(spec, id.widths(), mb);
    if (!f)
        return true;
    if (f->target == Target::St || (spec.index == 7 && f->target == Target::Sk))
        return id.metadata().subset_revealing;
    return true;
}

namespace {

// Applies a state fault to the components of z revealed for challenge c.
Bits fault_revealed(const IdScheme &id, const FaultFn &local, const Bits &c, Bits z) {
    const auto set = id.derive_set(c);
    const std::size_t cw = id.st_component_width();
    if (!set || cw == 0)
        throw UnsupportedFault("state faults need a subset-revealing scheme");
    const std::size_t comp = local.bit / cw;
    auto it = std::find(set->begin(), set->end(), comp);
    if (it == set->end())
        return z;
    FaultFn moved = local;
    moved.bit = static_cast<std::size_t>(it - set->begin()) * cw + local.bit % cw;
    return fault_apply(moved, z);
}

} // namespace

SignOutput sim_signature(const IdScheme &id, ProgrammableRO &H, const Bits &pk, const Bits &m,
                         const FaultSpec &spec, std::uint64_t challenge_index,
                         std::uint64_t sim_coin) {
    validate_index(spec.index);
    if (!fault_simulatable(id, spec, m.width()))
        throw UnsupportedFault("fault " + spec.describe() + " is not simulatable for " + id.name());
    const Bits c = id.challenge(challenge_index);
    const auto field = target_of(spec, id.widths(), m.width());
    const Target t = field ? field->target : Target::Z;
    const bool faulted = field.has_value();

    auto program = [&](const Bits &w, const Bits &mm, const Bits &kk) {
        Bits point = fs_hash_input(w, mm, kk, FsVariant::PkInHash);
        H.program(point, challenge_index);
        return point;
    };

    // Challenge faults at 6 and 7: simulate for the faulted challenge.
    if (faulted && (spec.index == 6 || (spec.index == 7 && t == Target::C))) {
        const Bits chat = fault_apply(localize(spec.fn, *field), c);
        auto [w, z] = id.special_sim(pk, chat, sim_coin);
        std::optional<Bits> zz = z;
        if (!id.in_challenge_space(chat))
            zz.reset();
        Bits point = program(w, m, pk);
        return SignOutput{FsSignature{w, zz}, m, point, challenge_index};
    }

    auto [w, z] = id.special_sim(pk, c, sim_coin);

    if (faulted && spec.index == 5) {
        auto hin = fault_tuple(5, spec, {w, m, pk});
        Bits point = program(hin[0], hin[1], hin[2]);
        return SignOutput{FsSignature{w, z}, hin[1], point, challenge_index};
    }
    if (faulted && spec.index == 4 && t == Target::W) {
        const Bits what = fault_apply(localize(spec.fn, *field), w);
        Bits point = program(what, m, pk);
        return SignOutput{FsSignature{what, z}, m, point, challenge_index};
    }
    if (faulted && (spec.index == 4 || spec.index == 7) && t == Target::St) {
        Bits point = program(w, m, pk);
        Bits zf = fault_revealed(id, localize(spec.fn, *field), c, z);
        return SignOutput{FsSignature{w, zf}, m, point, challenge_index};
    }

    // Index 9, identity faults, and sk faults on subset-revealing schemes.
    Bits point = program(w, m, pk);
    FsSignature sig{w, z};
    if (faulted && spec.index == 9) {
        auto wz = fault_tuple(9, spec, {w, z});
        sig = FsSignature{wz[0], wz[1]};
    }
    return SignOutput{std::move(sig), m, point, challenge_index};
}

SignOutput sim_signature(const IdScheme &id, ProgrammableRO &H, const Bits &pk, const Bits &m,
                         const FaultSpec &spec, Rng &rng) {
    const auto k = uniform_below(rng, id.challenge_count());
    return sim_signature(id, H, pk, m, spec, k, uniform_below(rng, id.sim_coin_count()));
}

namespace {

class FixedAnswer : public RandomOracle {
  public:
    FixedAnswer(unsigned bits, std::uint64_t value) : bits_(bits), value_(value) {}
    unsigned out_bits() const override { return bits_; }

  protected:
    std::uint64_t evaluate(const Bits &) override { return value_; }

  private:
    unsigned bits_;
    std::uint64_t value_;
};

class Recorder : public ProgrammableRO {
  public:
    explicit Recorder(unsigned bits) : bits_(bits) {}
    unsigned out_bits() const override { return bits_; }
    void program(const Bits &point, std::uint64_t value) override {
        programmed.emplace_back(point, value);
    }
    std::vector<std::pair<Bits, std::uint64_t>> programmed;

  protected:
    std::uint64_t evaluate(const Bits &) override {
        throw std::logic_error("simulation must not query the oracle");
    }

  private:
    unsigned bits_;
};

std::string event_key(const SignOutput &o) {
    return o.sig.hex() + "|" + o.hash_point.hex() + "|" + std::to_string(o.hash_value) + "|" +
           o.lm_entry.hex();
}

constexpr std::uint64_t kEnumLimit = std::uint64_t{1} << 22;

} // namespace

sigcore::Distribution faultsign_distribution(const IdScheme &id, const KeyPair &keys,
                                             const Bits &m, const FaultSpec &spec) {
    const std::uint64_t coins = id.commit_coin_count(), nc = id.challenge_count();
    if (coins * nc > kEnumLimit)
        throw std::invalid_argument("signing randomness too large to enumerate");
    const sigcore::Rational p(1, static_cast<long long>(coins * nc));
    sigcore::Distribution d;
    for (std::uint64_t r = 0; r < coins; ++r) {
        for (std::uint64_t v = 0; v < nc; ++v) {
            FixedAnswer H(id.challenge_bits(), v);
            d[event_key(faultsign(id, H, keys, m, spec, r))] += p;
        }
    }
    return d;
}

sigcore::Distribution sim_signature_distribution(const IdScheme &id, const Bits &pk,
                                                 const Bits &m, const FaultSpec &spec) {
    const std::uint64_t coins = id.sim_coin_count(), nc = id.challenge_count();
    if (coins * nc > kEnumLimit)
        throw std::invalid_argument("simulator randomness too large to enumerate");
    const sigcore::Rational p(1, static_cast<long long>(coins * nc));
    sigcore::Distribution d;
    for (std::uint64_t k = 0; k < nc; ++k) {
        for (std::uint64_t r = 0; r < coins; ++r) {
            Recorder H(id.challenge_bits());
            auto out = sim_signature(id, H, pk, m, spec, k, r);
            if (H.programmed.size() != 1 || H.programmed.front().first != out.hash_point)
                throw InvariantViolation("simulation must program exactly one point");
            d[event_key(out)] += p;
        }
    }
    return d;
}

std::vector<SimEqualityRow> simulation_equality(const IdScheme &id, const KeyPair &keys,
                                                const Bits &m, const std::vector<int> &indices) {
    std::vector<SimEqualityRow> rows;
    for (int i : indices) {
        std::vector<FaultSpec> specs{FaultSpec::identity(i)};
        for (const auto &s : one_bit_faults(i, id.widths(), m.width()))
            specs.push_back(s);
        for (const auto &s : specs) {
            if (!fault_simulatable(id, s, m.width()))
                continue;
            const auto f = target_of(s, id.widths(), m.width());
            const auto a = faultsign_distribution(id, keys, m, s);
            const auto b = sim_signature_distribution(id, keys.pk, m, s);
            FaultFn local = f ? localize(s.fn, *f) : s.fn;
            rows.push_back(SimEqualityRow{i, f ? target_name(f->target) : "-", local.describe(),
                                          sigcore::tv_distance(a, b), a.size()});
        }
    }
    return rows;
}

std::string game_name(GameKind g) {
    switch (g) {
    case GameKind::UfCma:
        return "uf-cma";
    case GameKind::UfCma0:
        return "uf-cma0";
    case GameKind::UfRma:
        return "uf-rma";
    case GameKind::UfFCma:
        return "uf-f-cma";
    case GameKind::UfNFCma:
        return "uf-n-f-cma";
    }
    return "?";
}

GameKind parse_game(const std::string &name) {
    for (auto g : {GameKind::UfCma, GameKind::UfCma0, GameKind::UfRma, GameKind::UfFCma,
                   GameKind::UfNFCma})
        if (game_name(g) == name)
            return g;
    throw std::invalid_argument("unknown game: " + name);
}

std::set<int> default_phi(GameKind kind, const IdScheme &id) {
    std::set<int> phi = id.metadata().subset_revealing ? std::set<int>{4, 5, 6, 7, 9}
                                                       : std::set<int>{5, 6, 9};
    if (kind == GameKind::UfNFCma)
        phi.insert(1);
    return phi;
}

Bits AdversaryInterface::challenge(const Bits &w, const Bits &m) {
    return id().challenge(hash(fs_hash_input(w, m, pk(), FsVariant::PkInHash)));
}

namespace {

enum Stream : std::uint64_t { kKeys = 1, kHash, kG, kSign, kAdv, kRma };

class RealGame : public AdversaryInterface {
  public:
    RealGame(const GameSpec &spec, const IdScheme &id, std::uint64_t seed, GameTranscript &t)
        : spec_(spec), id_(id), t_(t),
          H_(spec.hash_domain_bits, id.challenge_bits(), derive_seed(seed, kHash)),
          G_(spec.hash_domain_bits, 64, derive_seed(seed, kG)),
          sign_rng_(make_rng(derive_seed(seed, kSign))),
          adv_rng_(make_rng(derive_seed(seed, kAdv))) {
        Rng krng = make_rng(derive_seed(seed, kKeys));
        keys_ = id.keygen(krng);
        if (spec.kind == GameKind::UfRma) {
            Rng rrng = make_rng(derive_seed(seed, kRma));
            for (std::size_t k = 0; k < spec.rma_count; ++k) {
                Bits m(spec.message_bits);
                for (std::size_t b = 0; b < m.width(); ++b)
                    m.set(b, rrng() & 1);
                auto out = faultlab::faultsign(id_, H_, keys_, m, FaultSpec::identity(9), rrng);
                t_.lm.push_back(m);
                t_.rma.emplace_back(m, out.sig);
            }
        }
    }

    const IdScheme &id() const override { return id_; }
    const Bits &pk() const override { return keys_.pk; }
    std::size_t message_bits() const override { return spec_.message_bits; }
    std::size_t nonce_bits() const override { return spec_.nonce_bits; }

    std::uint64_t hash(const Bits &point) override {
        ++t_.q_h;
        return H_.query(point);
    }

    std::optional<FsSignature> sign(const Bits &m) override {
        if (spec_.kind != GameKind::UfCma)
            throw ProtocolViolation("signing oracle not available in " + game_name(spec_.kind));
        check_message(m);
        auto out = faultlab::faultsign(id_, H_, keys_, m, FaultSpec::identity(9), sign_rng_);
        record(0, out);
        return out.sig;
    }

    std::optional<FsSignature> faultsign(const Bits &m, const FaultSpec &spec) override {
        if (spec_.kind != GameKind::UfFCma)
            throw ProtocolViolation("fault signing oracle not available in " + game_name(spec_.kind));
        check_message(m);
        validate_index(spec.index);
        if (!spec_.phi.count(spec.index))
            return std::nullopt;
        auto out = faultlab::faultsign(id_, H_, keys_, m, spec, sign_rng_);
        record(spec.index, out);
        return out.sig;
    }

    std::optional<FsSignature> nfsign(const Bits &m, const Bits &nonce,
                                      const FaultSpec &spec) override {
        if (spec_.kind != GameKind::UfNFCma)
            throw ProtocolViolation("nonce signing oracle not available in " + game_name(spec_.kind));
        check_message(m);
        if (nonce.width() != spec_.nonce_bits)
            throw ProtocolViolation("nonce has the wrong width");
        validate_index(spec.index);
        if (spec_.enforce_nonce_restriction) {
            Bits key = m;
            key.append(nonce);
            if (!nonces_.insert(key).second)
                throw ProtocolViolation("repeated (message, nonce) query");
        }
        if (!spec_.phi.count(spec.index))
            return std::nullopt;
        auto out = nonce_faultsign(id_, H_, G_, keys_, m, nonce, spec);
        record(spec.index, out);
        return out.sig;
    }

    const std::vector<std::pair<Bits, FsSignature>> &rma_pairs() const override { return t_.rma; }
    Rng &coins() override { return adv_rng_; }

    sigcore::HashOracle &H() { return H_; }
    const KeyPair &keys() const { return keys_; }

  private:
    void check_message(const Bits &m) const {
        if (m.width() != spec_.message_bits)
            throw ProtocolViolation("message has the wrong width");
    }
    void record(int index, const SignOutput &out) {
        t_.lm.push_back(out.lm_entry);
        ++t_.q_s;
        ++t_.q_s_index[index];
    }

    const GameSpec &spec_;
    const IdScheme &id_;
    GameTranscript &t_;
    sigcore::HashOracle H_;
    sigcore::HashOracle G_;
    Rng sign_rng_;
    Rng adv_rng_;
    KeyPair keys_;
    std::set<Bits> nonces_;
};

bool in_list(const std::vector<Bits> &lm, const Bits &m) {
    return std::find(lm.begin(), lm.end(), m) != lm.end();
}

} // namespace

GameTranscript run_game(const GameSpec &spec, const IdScheme &id, const Adversary &A,
                        std::uint64_t seed) {
    GameTranscript t;
    t.game = spec.kind;
    t.seed = seed;
    RealGame g(spec, id, seed, t);
    t.forgery = A(g);
    if (t.forgery) {
        t.fresh = !in_list(t.lm, t.forgery->m);
        t.verified = t.forgery->m.width() == spec.message_bits &&
                     sigcore::fs_verify(id, g.H(), g.pk(), t.forgery->m, t.forgery->sig,
                                        FsVariant::PkInHash);
    }
    t.outcome = (t.fresh && t.verified) ? 1 : 0;
    t.overlay = g.H().overlay().overlay();
    return t;
}

namespace {

class SimulatedCma : public AdversaryInterface {
  public:
    SimulatedCma(const IdScheme &id, RandomOracle &H, const Bits &pk, Rng &coins, std::size_t mb)
        : id_(id), Hp_(H), pk_(pk), coins_(coins), mb_(mb) {}

    const IdScheme &id() const override { return id_; }
    const Bits &pk() const override { return pk_; }
    std::size_t message_bits() const override { return mb_; }
    std::size_t nonce_bits() const override { return 0; }
    std::uint64_t hash(const Bits &point) override { return Hp_.query(point); }

    std::optional<FsSignature> sign(const Bits &m) override {
        if (m.width() != mb_)
            throw ProtocolViolation("message has the wrong width");
        auto out = sim_signature(id_, Hp_, pk_, m, FaultSpec::identity(9), coins_);
        lm.push_back(m);
        return out.sig;
    }
    std::optional<FsSignature> faultsign(const Bits &, const FaultSpec &) override {
        throw ProtocolViolation("fault signing oracle not available in uf-cma");
    }
    std::optional<FsSignature> nfsign(const Bits &, const Bits &, const FaultSpec &) override {
        throw ProtocolViolation("nonce signing oracle not available in uf-cma");
    }
    const std::vector<std::pair<Bits, FsSignature>> &rma_pairs() const override { return none_; }
    Rng &coins() override { return coins_; }

    sigcore::OverlayOracle &Hp() { return Hp_; }
    std::vector<Bits> lm;

  private:
    const IdScheme &id_;
    sigcore::OverlayOracle Hp_;
    Bits pk_;
    Rng &coins_;
    std::size_t mb_;
    std::vector<std::pair<Bits, FsSignature>> none_;
};

} // namespace

ReductionOutcome reduction_b_cma0(const IdScheme &id, RandomOracle &H, const Bits &pk,
                                  const Adversary &A, Rng &coins, std::size_t mb) {
    SimulatedCma sim(id, H, pk, coins, mb);
    ReductionOutcome r;
    auto forgery = A(sim);
    r.overlay = sim.Hp().overlay();
    r.lm = sim.lm;
    if (!forgery)
        return r;
    const bool fresh = !in_list(sim.lm, forgery->m);
    r.a_wins_simulated = fresh && forgery->m.width() == mb &&
                         sigcore::fs_verify(id, sim.Hp(), pk, forgery->m, forgery->sig,
                                            FsVariant::PkInHash);
    if (!fresh) {
        r.aborted = true;
        return r;
    }
    r.forgery = forgery;
    r.b_wins = forgery->m.width() == mb &&
               sigcore::fs_verify(id, H, pk, forgery->m, forgery->sig, FsVariant::PkInHash);
    return r;
}

ReductionOutcome reduction_episode(const IdScheme &id, const Adversary &A, std::uint64_t seed,
                                   std::size_t mb, unsigned hash_domain_bits) {
    Rng krng = make_rng(derive_seed(seed, kKeys));
    const KeyPair keys = id.keygen(krng);
    sigcore::TableOracle H(oracle::sample_oracle(hash_domain_bits, id.challenge_bits(),
                                                 derive_seed(seed, kHash)),
                           derive_seed(seed, kG));
    Rng coins = make_rng(derive_seed(seed, kAdv));
    return reduction_b_cma0(id, H, keys.pk, A, coins, mb);
}

std::vector<Bits> candidate_keys(const Bits &sk_prime) {
    std::vector<Bits> out{sk_prime};
    std::set<Bits> seen{sk_prime};
    auto add = [&](Bits b) {
        if (seen.insert(b).second)
            out.push_back(std::move(b));
    };
    for (std::size_t j = 0; j < sk_prime.width(); ++j) {
        add(fault_apply(FaultFn::flip(j), sk_prime));
        add(fault_apply(FaultFn::set(j, false), sk_prime));
        add(fault_apply(FaultFn::set(j, true), sk_prime));
    }
    return out;
}

KeySearchResult reduction_b2_keysearch(const IdScheme &id, RandomOracle &H, const Bits &pk,
                                       const std::vector<Bits> &candidates, const Bits &m,
                                       Rng &rng) {
    KeySearchResult res;
    for (const auto &cand : candidates) {
        ++res.attempts;
        const KeyPair keys{pk, cand};
        auto [w, st] = id.commit(cand, rng);
        const Bits c = sigcore::fs_challenge(id, H, w, m, pk, FsVariant::PkInHash);
        auto z = id.respond(cand, w, c, st);
        if (!z)
            continue;
        FsSignature sig{w, z};
        if (sigcore::fs_verify(id, H, pk, m, sig, FsVariant::PkInHash)) {
            res.forgery = Forgery{m, sig};
            return res;
        }
    }
    return res;
}

std::optional<KeyPair> recover_key(const IdScheme &id, const Bits &pk) {
    const std::uint64_t n = id.keygen_coin_count();
    if (n > (std::uint64_t{1} << 24))
        throw std::invalid_argument("key space too large for brute-force recovery");
    for (std::uint64_t c = 0; c < n; ++c) {
        auto kp = id.keygen(c);
        if (kp.pk == pk)
            return kp;
    }
    return std::nullopt;
}

AdversaryScript AdversaryScript::parse_string(const std::string &text) {
    std::istringstream is(text);
    return parse(is);
}

AdversaryScript AdversaryScript::parse(std::istream &is) {
    AdversaryScript s;
    std::string line;
    std::size_t lineno = 0;
    bool have_output = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string w; ls >> w;)
            tok.push_back(w);
        if (tok.empty())
            continue;
        auto fail = [&](const std::string &why) {
            throw std::invalid_argument("script line " + std::to_string(lineno) + ": " + why);
        };
        if (have_output)
            fail("nothing may follow the output line");
        Op op;
        op.kind = tok[0];
        try {
            if (tok[0] == "sign" && tok.size() == 2) {
                op.msg = tok[1];
            } else if (tok[0] == "faultsign" && tok.size() == 4) {
                op.msg = tok[1];
                op.index = std::stoi(tok[2]);
                op.fn = FaultFn::parse(tok[3]);
            } else if (tok[0] == "nfsign" && tok.size() == 5) {
                op.msg = tok[1];
                op.nonce = tok[2];
                op.index = std::stoi(tok[3]);
                op.fn = FaultFn::parse(tok[4]);
            } else if (tok[0] == "hash" && tok.size() == 3) {
                op.w_hex = tok[1];
                op.msg = tok[2];
            } else if (tok[0] == "output" && tok.size() >= 2) {
                have_output = true;
                if (tok[1] == "forge-keyrecovery" && tok.size() == 3) {
                    s.output = OutputKind::ForgeKeyRecovery;
                    s.output_msg = tok[2];
                } else if (tok[1] == "replay" && tok.size() == 3) {
                    s.output = OutputKind::Replay;
                    s.output_k = std::stoul(tok[2]);
                } else if (tok[1] == "transplant" && tok.size() == 4) {
                    s.output = OutputKind::Transplant;
                    s.output_k = std::stoul(tok[2]);
                    s.output_msg = tok[3];
                } else if (tok[1] == "none" && tok.size() == 2) {
                    s.output = OutputKind::None;
                } else {
                    fail("bad output line");
                }
                continue;
            } else {
                fail("unknown or malformed operation '" + tok[0] + "'");
            }
        } catch (const std::invalid_argument &e) {
            if (std::string(e.what()).rfind("script line", 0) == 0)
                throw;
            fail(e.what());
        } catch (const std::out_of_range &e) {
            fail(e.what());
        }
        s.ops.push_back(op);
    }
    return s;
}

namespace {
Bits resolve_value(const std::string &tok, std::size_t width, Rng &rng) {
    if (tok == "rand") {
        Bits b(width);
        for (std::size_t i = 0; i < width; ++i)
            b.set(i, rng() & 1);
        return b;
    }
    return Bits::from_uint(std::stoull(tok, nullptr, 0), width);
}
} // namespace

Adversary AdversaryScript::compile() const {
    return [script = *this](AdversaryInterface &I) -> std::optional<Forgery> {
        const IdScheme &id = I.id();
        std::vector<std::pair<Bits, FsSignature>> received = I.rma_pairs();
        auto keep = [&](const Bits &m, const std::optional<FsSignature> &s) {
            if (s && !s->is_bottom())
                received.emplace_back(m, *s);
        };
        for (const auto &op : script.ops) {
            const Bits m = resolve_value(op.msg, I.message_bits(), I.coins());
            if (op.kind == "sign") {
                keep(m, I.sign(m));
            } else if (op.kind == "faultsign") {
                keep(m, I.faultsign(m, FaultSpec{op.index, op.fn}));
            } else if (op.kind == "nfsign") {
                const Bits nonce = resolve_value(op.nonce, I.nonce_bits(), I.coins());
                keep(m, I.nfsign(m, nonce, FaultSpec{op.index, op.fn}));
            } else if (op.kind == "hash") {
                I.challenge(Bits::from_hex(op.w_hex, id.widths().w), m);
            }
        }
        switch (script.output) {
        case OutputKind::None:
            return std::nullopt;
        case OutputKind::ForgeKeyRecovery: {
            auto keys = recover_key(id, I.pk());
            if (!keys)
                return std::nullopt;
            const Bits m = resolve_value(script.output_msg, I.message_bits(), I.coins());
            auto [w, st] = id.commit(keys->sk, I.coins());
            const Bits c = I.challenge(w, m);
            auto z = id.respond(keys->sk, w, c, st);
            return Forgery{m, FsSignature{w, z}};
        }
        case OutputKind::Replay:
            if (script.output_k >= received.size())
                return std::nullopt;
            return Forgery{received[script.output_k].first, received[script.output_k].second};
        case OutputKind::Transplant: {
            if (script.output_k >= received.size())
                return std::nullopt;
            const Bits m = resolve_value(script.output_msg, I.message_bits(), I.coins());
            return Forgery{m, received[script.output_k].second};
        }
        }
        return std::nullopt;
    };
}

} // namespace qrom::faultlab
