#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qrom/bits.hpp"
#include "qrom/oracle.hpp"
#include "qrom/rng.hpp"

namespace qrom::sigcore {

using Bits = BitString;
using Rational = boost::multiprecision::cpp_rational;

class SigningError : public std::runtime_error {
  public:
    explicit SigningError(const std::string &what) : std::runtime_error(what) {}
};

struct KeyPair {
    Bits pk;
    Bits sk;
};

struct Transcript {
    Bits w;
    Bits c;
    std::optional<Bits> z; // nullopt is the rejection symbol
};

struct Commitment {
    Bits w;
    Bits st;
};

struct Widths {
    std::size_t pk, sk, w, st, c, z;
};

struct SchemeMetadata {
    double alpha;           // upper bound on the probability of any single commitment
    bool subset_revealing;  // derive_set available
    bool validity_aware;    // respond rejects c outside C
    bool statistical_hvzk;
    double delta_hvzk;
    double delta_shvzk;
};

// Identification scheme with explicit coins so distributions can be enumerated.
// The challenge space C holds challenge_count() values; challenge(k) encodes
// the k-th one in a widths().c-bit field that may also hold values outside C.
class IdScheme {
  public:
    virtual ~IdScheme() = default;

    virtual std::string name() const = 0;
    virtual Widths widths() const = 0;
    virtual SchemeMetadata metadata() const = 0;

    virtual std::uint64_t keygen_coin_count() const = 0;
    virtual KeyPair keygen(std::uint64_t coin) const = 0;
    virtual std::uint64_t commit_coin_count() const = 0;
    virtual Commitment commit(const Bits &sk, std::uint64_t coin) const = 0;
    virtual std::optional<Bits> respond(const Bits &sk, const Bits &w, const Bits &c,
                                        const Bits &st) const = 0;
    virtual bool verify(const Bits &pk, const Bits &w, const Bits &c, const Bits &z) const = 0;

    // log2 |C|; hash outputs index C directly.
    virtual unsigned challenge_bits() const = 0;
    std::uint64_t challenge_count() const { return std::uint64_t{1} << challenge_bits(); }
    virtual Bits challenge(std::uint64_t k) const = 0;
    virtual bool in_challenge_space(const Bits &c) const = 0;

    // Special simulator (w, z) for a given challenge. Defined for every c-field
    // value so that faulted challenges can be simulated; z is meaningless when
    // c lies outside C.
    virtual std::uint64_t sim_coin_count() const = 0;
    virtual std::pair<Bits, Bits> special_sim(const Bits &pk, const Bits &c,
                                              std::uint64_t coin) const = 0;

    // Subset-revealing schemes: st is a sequence of components of
    // st_component_width() bits and z concatenates the components listed by
    // derive_set(c), in order.
    virtual std::optional<std::vector<std::size_t>> derive_set(const Bits &) const {
        return std::nullopt;
    }
    virtual std::size_t st_component_width() const { return 0; }

    KeyPair keygen(Rng &rng) const;
    Commitment commit(const Bits &sk, Rng &rng) const;
    // Transcript with a uniform challenge from the simulator.
    Transcript sim(const Bits &pk, std::uint64_t challenge_index, std::uint64_t coin) const;
    Transcript sim(const Bits &pk, Rng &rng) const;
};

Transcript get_trans(const IdScheme &id, const Bits &sk, Rng &rng);
Transcript get_trans_challenge(const IdScheme &id, const Bits &sk, const Bits &c, Rng &rng);
Transcript get_trans_challenge(const IdScheme &id, const Bits &sk, const Bits &c,
                               std::uint64_t commit_coin);

// Exact transcript distributions by enumeration. Keys are the concatenated hex
// of t transcripts.
using Distribution = std::map<std::string, Rational>;
Distribution honest_transcripts(const IdScheme &id, const KeyPair &keys, unsigned t = 1);
Distribution special_honest_transcripts(const IdScheme &id, const KeyPair &keys, const Bits &c);
Distribution simulated_transcripts(const IdScheme &id, const Bits &pk, unsigned t = 1);
Distribution special_simulated_transcripts(const IdScheme &id, const Bits &pk, const Bits &c);
Rational tv_distance(const Distribution &a, const Distribution &b);
std::string transcript_key(const Transcript &t);

// Random oracle over encoded tuples.
class RandomOracle {
  public:
    virtual ~RandomOracle() = default;
    virtual unsigned out_bits() const = 0;
    std::uint64_t query(const Bits &point) {
        ++queries_;
        return evaluate(point);
    }
    std::uint64_t queries() const { return queries_; }

  protected:
    virtual std::uint64_t evaluate(const Bits &point) = 0;

  private:
    std::uint64_t queries_ = 0;
};

class ProgrammableRO : public RandomOracle {
  public:
    virtual void program(const Bits &point, std::uint64_t value) = 0;
};

// Eager table over an n-bit digest of the encoded tuple.
class TableOracle : public RandomOracle {
  public:
    TableOracle(oracle::OracleTable table, std::uint64_t compress_key);
    unsigned out_bits() const override { return table_.m(); }
    const oracle::OracleTable &table() const { return table_; }
    std::uint64_t index_of(const Bits &point) const;

  protected:
    std::uint64_t evaluate(const Bits &point) override;

  private:
    oracle::OracleTable table_;
    std::uint64_t key_;
};

// Ordered overlay keyed by the full encoded tuple over a base oracle; the
// last entry for a point wins and every other point reads through.
class OverlayOracle : public ProgrammableRO {
  public:
    explicit OverlayOracle(RandomOracle &base) : base_(&base) {}
    unsigned out_bits() const override { return base_->out_bits(); }
    void program(const Bits &point, std::uint64_t value) override;
    void erase(const Bits &point, std::uint64_t value);
    std::optional<std::uint64_t> overlay_value(const Bits &point) const;
    const std::vector<std::pair<Bits, std::uint64_t>> &overlay() const { return overlay_; }

  protected:
    std::uint64_t evaluate(const Bits &point) override;

  private:
    RandomOracle *base_;
    std::vector<std::pair<Bits, std::uint64_t>> overlay_;
};

// Owning table oracle plus overlay.
class HashOracle : public ProgrammableRO {
  public:
    HashOracle(unsigned domain_bits, unsigned out_bits, std::uint64_t seed);
    HashOracle(const HashOracle &) = delete;
    HashOracle &operator=(const HashOracle &) = delete;

    unsigned out_bits() const override { return table_.out_bits(); }
    void program(const Bits &point, std::uint64_t value) override { overlay_.program(point, value); }
    const TableOracle &base() const { return table_; }
    TableOracle &base() { return table_; }
    const OverlayOracle &overlay() const { return overlay_; }

  protected:
    std::uint64_t evaluate(const Bits &point) override { return overlay_.query(point); }

  private:
    TableOracle table_;
    OverlayOracle overlay_;
};

enum class FsVariant { Standard, PkInHash };

// Fixed-width concatenation; the first field occupies the low bits.
Bits fs_hash_input(const Bits &w, const Bits &m, const Bits &pk, FsVariant variant);

struct FsSignature {
    Bits w;
    std::optional<Bits> z;

    bool is_bottom() const { return !z.has_value(); }
    // w || z, w in the low bits; requires z.
    Bits serialize() const;
    static FsSignature parse(const Bits &bits, const Widths &widths);
    std::string hex() const;
    friend bool operator==(const FsSignature &a, const FsSignature &b) {
        return a.w == b.w && a.z == b.z;
    }
};

Bits fs_challenge(const IdScheme &id, RandomOracle &H, const Bits &w, const Bits &m,
                  const Bits &pk, FsVariant variant);
FsSignature fs_sign(const IdScheme &id, RandomOracle &H, const KeyPair &keys, const Bits &m,
                    FsVariant variant, std::uint64_t commit_coin);
FsSignature fs_sign(const IdScheme &id, RandomOracle &H, const KeyPair &keys, const Bits &m,
                    FsVariant variant, Rng &rng);
bool fs_verify(const IdScheme &id, RandomOracle &H, const Bits &pk, const Bits &m,
               const FsSignature &sig, FsVariant variant);

class SignatureScheme {
  public:
    virtual ~SignatureScheme() = default;
    virtual std::string name() const = 0;
    virtual std::size_t message_bits() const = 0;
    virtual KeyPair keygen(Rng &rng) const = 0;
    virtual std::uint64_t coin_count() const = 0;
    virtual Bits sign_with_coins(const KeyPair &keys, const Bits &m, std::uint64_t coins) = 0;
    virtual Bits sign(const KeyPair &keys, const Bits &m, Rng &rng);
    virtual bool verify(const Bits &pk, const Bits &m, const Bits &sig) = 0;
};

class FsScheme : public SignatureScheme {
  public:
    FsScheme(const IdScheme &id, RandomOracle &H, FsVariant variant, std::size_t message_bits);
    std::string name() const override;
    std::size_t message_bits() const override { return message_bits_; }
    KeyPair keygen(Rng &rng) const override { return id_->keygen(rng); }
    std::uint64_t coin_count() const override { return id_->commit_coin_count(); }
    Bits sign_with_coins(const KeyPair &keys, const Bits &m, std::uint64_t coins) override;
    bool verify(const Bits &pk, const Bits &m, const Bits &sig) override;
    const IdScheme &id() const { return *id_; }

  private:
    const IdScheme *id_;
    RandomOracle *H_;
    FsVariant variant_;
    std::size_t message_bits_;
};

// Hash-and-sign: sigma = (z, Sign(sk, H(z || m))) with z uniform in {0,1}^z_bits.
class HtsScheme : public SignatureScheme {
  public:
    HtsScheme(SignatureScheme &inner, RandomOracle &H, std::size_t z_bits,
              std::size_t message_bits);
    std::string name() const override;
    std::size_t message_bits() const override { return message_bits_; }
    std::size_t z_bits() const { return z_bits_; }
    KeyPair keygen(Rng &rng) const override { return inner_->keygen(rng); }
    std::uint64_t coin_count() const override { return inner_->coin_count(); }
    Bits sign_with_coins(const KeyPair &keys, const Bits &m, std::uint64_t coins) override;
    Bits sign(const KeyPair &keys, const Bits &m, Rng &rng) override;
    bool verify(const Bits &pk, const Bits &m, const Bits &sig) override;

    Bits inner_message(const Bits &z, const Bits &m);
    std::pair<Bits, Bits> sign_parts(const KeyPair &keys, const Bits &m, const Bits &z,
                                     std::uint64_t coins);

  private:
    SignatureScheme *inner_;
    RandomOracle *H_;
    std::size_t z_bits_;
    std::size_t message_bits_;
};

std::pair<Bits, Bits> hts_sign(HtsScheme &sig, const KeyPair &keys, const Bits &m, Rng &rng);
bool hts_verify(HtsScheme &sig, const Bits &pk, const Bits &m, const Bits &z, const Bits &inner_sig);

// Hedged signing: commit coins r = G(sk, m, nonce) mod coin_count.
Bits r2h_input(const Bits &sk, const Bits &m, const Bits &nonce);
std::uint64_t r2h_coins(const SignatureScheme &sig, RandomOracle &G, const Bits &sk,
                        const Bits &m, const Bits &nonce);
Bits r2h_sign(SignatureScheme &sig, RandomOracle &G, const KeyPair &keys, const Bits &m,
              const Bits &nonce);

} // namespace qrom::sigcore
