#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrom/sigcore.hpp"

namespace qrom::faultlab {

using sigcore::Bits;
using sigcore::FsSignature;
using sigcore::IdScheme;
using sigcore::KeyPair;
using sigcore::RandomOracle;
using sigcore::ProgrammableRO;

// Indices 0, 2, 3, 8 and 10 exist in the numbering but are not modelled.
class ExcludedIndex : public std::invalid_argument {
  public:
    explicit ExcludedIndex(int i);
};

class UnsupportedFault : public std::invalid_argument {
  public:
    explicit UnsupportedFault(const std::string &what) : std::invalid_argument(what) {}
};

class ProtocolViolation : public std::runtime_error {
  public:
    explicit ProtocolViolation(const std::string &what) : std::runtime_error(what) {}
};

// One-bit fault function; bit 0 is the least significant bit.
struct FaultFn {
    enum class Kind { Id, Flip, Set };
    Kind kind = Kind::Id;
    std::size_t bit = 0;
    bool value = false;

    static FaultFn id() { return {}; }
    static FaultFn flip(std::size_t j) { return {Kind::Flip, j, false}; }
    static FaultFn set(std::size_t j, bool b) { return {Kind::Set, j, b}; }

    // "id", "flip:<j>", "set:<j>:<b>".
    std::string describe() const;
    static FaultFn parse(const std::string &text);
};

Bits fault_apply(const FaultFn &phi, const Bits &x);

enum class Target { Sk, W, St, M, Pk, C, Z };
std::string target_name(Target t);

struct Field {
    Target target;
    std::size_t offset;
    std::size_t width;
};

// Faultable indices: 1 (sk into G), 4 (w, st), 5 (w, m, pk), 6 (c), 7 (sk, c, st), 9 (w, z).
void validate_index(int i);
std::vector<Field> fault_layout(int i, const sigcore::Widths &wd, std::size_t message_bits);

// The bit index of fn addresses the serialization of the index's tuple.
struct FaultSpec {
    int index = 9;
    FaultFn fn;

    static FaultSpec identity(int i) { return FaultSpec{i, FaultFn::id()}; }
    // Builds a spec from a field-local bit position.
    static FaultSpec on_field(int i, Target t, FaultFn local, const sigcore::Widths &wd,
                              std::size_t message_bits);
    std::string describe() const;
};

// Field hit by spec; nullopt for the identity.
std::optional<Field> target_of(const FaultSpec &spec, const sigcore::Widths &wd,
                               std::size_t message_bits);

// Every flip and set fault on every bit of index i (identity excluded).
std::vector<FaultSpec> one_bit_faults(int i, const sigcore::Widths &wd,
                                      std::size_t message_bits);

struct SignOutput {
    FsSignature sig;
    Bits lm_entry;   // message recorded in L_M
    Bits hash_point; // queried or programmed point
    std::uint64_t hash_value;
};

// FAULTSIGN with explicit commit coins; H is queried exactly once. Hash
// inputs are (w, m, pk).
SignOutput faultsign(const IdScheme &id, RandomOracle &H, const KeyPair &keys, const Bits &m,
                     const FaultSpec &spec, std::uint64_t commit_coin);
SignOutput faultsign(const IdScheme &id, RandomOracle &H, const KeyPair &keys, const Bits &m,
                     const FaultSpec &spec, Rng &rng);
// Hedged variant: coins from G(f1(sk), m, nonce); Commit still uses the true sk.
SignOutput nonce_faultsign(const IdScheme &id, RandomOracle &H, RandomOracle &G,
                           const KeyPair &keys, const Bits &m, const Bits &nonce,
                           const FaultSpec &spec);
std::uint64_t nonce_commit_coin(const IdScheme &id, RandomOracle &G, const Bits &sk,
                                const Bits &m, const Bits &nonce, const FaultSpec &spec);

// simSignature_i for i in {4, 5, 6, 7, 9}: uniform challenge index, special
// simulator, index-specific fault handling, one programming of H.
SignOutput sim_signature(const IdScheme &id, ProgrammableRO &H, const Bits &pk, const Bits &m,
                         const FaultSpec &spec, std::uint64_t challenge_index,
                         std::uint64_t sim_coin);
SignOutput sim_signature(const IdScheme &id, ProgrammableRO &H, const Bits &pk, const Bits &m,
                         const FaultSpec &spec, Rng &rng);

// Exact joint distribution of (sigma, point, value, L_M entry) by enumeration.
sigcore::Distribution faultsign_distribution(const IdScheme &id, const KeyPair &keys,
                                             const Bits &m, const FaultSpec &spec);
sigcore::Distribution sim_signature_distribution(const IdScheme &id, const Bits &pk,
                                                 const Bits &m, const FaultSpec &spec);

struct SimEqualityRow {
    int index;
    std::string target;
    std::string phi;
    sigcore::Rational tv;
    std::size_t support;
};
// Every admissible one-bit fault (plus identity) at each index, for one key and message.
std::vector<SimEqualityRow> simulation_equality(const IdScheme &id, const KeyPair &keys,
                                                const Bits &m, const std::vector<int> &indices);
bool fault_simulatable(const IdScheme &id, const FaultSpec &spec, std::size_t message_bits);

enum class GameKind { UfCma, UfCma0, UfRma, UfFCma, UfNFCma };
std::string game_name(GameKind g);
GameKind parse_game(const std::string &name);

struct GameSpec {
    GameKind kind = GameKind::UfCma;
    std::size_t rma_count = 0;         // N for UF-RMA
    std::set<int> phi = {4, 5, 6, 7, 9}; // admissible indices for the fault games
    bool enforce_nonce_restriction = true;
    std::size_t message_bits = 16;
    std::size_t nonce_bits = 16;
    unsigned hash_domain_bits = 16;
};

// Admissible indices: {5,6,9} in general, {4,5,6,7,9} for subset-revealing schemes,
// plus index 1 in the nonce game.
std::set<int> default_phi(GameKind kind, const IdScheme &id);

struct Forgery {
    Bits m;
    FsSignature sig;
};

// Oracle interface handed to adversaries.
class AdversaryInterface {
  public:
    virtual ~AdversaryInterface() = default;
    virtual const IdScheme &id() const = 0;
    virtual const Bits &pk() const = 0;
    virtual std::size_t message_bits() const = 0;
    virtual std::size_t nonce_bits() const = 0;
    virtual std::uint64_t hash(const Bits &point) = 0;
    virtual std::optional<FsSignature> sign(const Bits &m) = 0;
    virtual std::optional<FsSignature> faultsign(const Bits &m, const FaultSpec &spec) = 0;
    virtual std::optional<FsSignature> nfsign(const Bits &m, const Bits &nonce,
                                              const FaultSpec &spec) = 0;
    virtual const std::vector<std::pair<Bits, FsSignature>> &rma_pairs() const = 0;
    virtual Rng &coins() = 0;

    // c = H(w, m, pk) through the hash oracle.
    Bits challenge(const Bits &w, const Bits &m);
};

using Adversary = std::function<std::optional<Forgery>(AdversaryInterface &)>;

struct GameTranscript {
    GameKind game = GameKind::UfCma;
    std::uint64_t seed = 0;
    std::vector<Bits> lm;
    std::uint64_t q_s = 0;
    std::map<int, std::uint64_t> q_s_index; // 0 counts unfaulted signing queries
    std::uint64_t q_h = 0;
    std::vector<std::pair<Bits, std::uint64_t>> overlay;
    std::vector<std::pair<Bits, FsSignature>> rma;
    std::optional<Forgery> forgery;
    bool fresh = false;
    bool verified = false;
    int outcome = 0;
};

GameTranscript run_game(const GameSpec &spec, const IdScheme &id, const Adversary &A,
                        std::uint64_t seed);

// Adversary B against UF-CMA0: runs A with simulated signing and an overlay
// H' over H; aborts when A's message was signed.
struct ReductionOutcome {
    bool aborted = false;
    std::optional<Forgery> forgery; // what B outputs
    bool a_wins_simulated = false;  // A's forgery is fresh and verifies under H'
    bool b_wins = false;            // B's forgery verifies under H
    std::vector<std::pair<Bits, std::uint64_t>> overlay;
    std::vector<Bits> lm;
};

ReductionOutcome reduction_b_cma0(const IdScheme &id, RandomOracle &H, const Bits &pk,
                                  const Adversary &A, Rng &coins, std::size_t message_bits = 16);
// One seeded UF-CMA0 episode with fresh keys and oracle.
ReductionOutcome reduction_episode(const IdScheme &id, const Adversary &A, std::uint64_t seed,
                                   std::size_t message_bits = 16,
                                   unsigned hash_domain_bits = 16);

// {sk'} with every single flip_j(sk') and set_j(sk', b), deduplicated in order.
std::vector<Bits> candidate_keys(const Bits &sk_prime);

struct KeySearchResult {
    std::optional<Forgery> forgery;
    std::size_t attempts = 0;
};
// Signs m under each candidate and returns the first pair verifying under pk.
KeySearchResult reduction_b2_keysearch(const IdScheme &id, RandomOracle &H, const Bits &pk,
                                       const std::vector<Bits> &candidates, const Bits &m,
                                       Rng &rng);

// Declarative adversary: oracle calls then one output line.
//   sign <msg>
//   faultsign <msg> <index> <phi>
//   nfsign <msg> <nonce> <index> <phi>
//   hash <w-hex> <msg>
//   output forge-keyrecovery <msg> | replay <k> | transplant <k> <msg> | none
// <msg> and <nonce> are integers (decimal or 0x hex) or "rand"; <phi> is a
// FaultFn description addressing the index's serialized tuple.
struct AdversaryScript {
    struct Op {
        std::string kind;
        std::string msg;
        std::string nonce;
        int index = 0;
        FaultFn fn;
        std::string w_hex;
    };
    enum class OutputKind { None, ForgeKeyRecovery, Replay, Transplant };

    std::vector<Op> ops;
    OutputKind output = OutputKind::None;
    std::size_t output_k = 0;
    std::string output_msg;

    static AdversaryScript parse(std::istream &is);
    static AdversaryScript parse_string(const std::string &text);
    Adversary compile() const;
};

// Brute-force key recovery over the keygen coins (toy parameters only).
std::optional<KeyPair> recover_key(const IdScheme &id, const Bits &pk);

} // namespace qrom::faultlab
