#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrom/oracle.hpp"
#include "qrom/qsim.hpp"
#include "qrom/rng.hpp"

namespace qrom::reprogame {

class GameProtocolError : public std::runtime_error {
  public:
    explicit GameProtocolError(const std::string &what) : std::runtime_error(what) {}
};

// Domain X = X1 x X2 encoded as x = (x1 << n2) | x2.
struct ReproConfig {
    unsigned n1 = 0;
    unsigned n2 = 0;
    unsigned m = 1;
    unsigned R = 1;
    int b = 0;
    std::uint64_t seed = 0;

    unsigned n() const { return n1 + n2; }
    void validate() const;
};

// Explicit finite distribution over (x, x') pairs; x has x_bits bits.
class ReproDistribution {
  public:
    struct Entry {
        std::uint64_t x;
        std::uint64_t x_prime;
        double p;
    };

    ReproDistribution(unsigned x_bits, std::vector<Entry> entries, std::string id = "p");
    static ReproDistribution uniform(unsigned x_bits, std::string id = "uniform");

    unsigned x_bits() const { return x_bits_; }
    const std::string &id() const { return id_; }
    const std::vector<Entry> &entries() const { return entries_; }
    double p_max() const { return p_max_; }
    double marginal_x(std::uint64_t x) const;
    // p(x' | x) as (x', probability) pairs.
    std::vector<std::pair<std::uint64_t, double>> conditional(std::uint64_t x) const;

    const Entry &sample(Rng &rng) const;

  private:
    unsigned x_bits_;
    std::string id_;
    std::vector<Entry> entries_;
    std::vector<double> cumulative_;
    double p_max_ = 0.0;
};

struct ReprogramRecord {
    std::string distribution; // "basic" for the X2-indexed form
    std::uint64_t x;
    std::uint64_t x_prime;
    std::uint64_t y;
    std::uint64_t queries_in_phase; // q_r: queries since the previous reprogram
    std::uint64_t queries_before;   // cumulative count before this call
};

struct GameTranscript {
    ReproConfig config;
    std::vector<ReprogramRecord> reprograms;
    std::vector<std::uint64_t> phase_queries; // one entry per phase, R_used + 1 entries
    std::uint64_t total_queries = 0;
    int output = 0;
};

// Capabilities handed to a distinguisher.
class GameHandle {
  public:
    GameHandle(const ReproConfig &cfg);

    unsigned n() const { return cfg_.n(); }
    unsigned n1() const { return cfg_.n1; }
    unsigned n2() const { return cfg_.n2; }
    unsigned m() const { return cfg_.m; }
    unsigned R() const { return cfg_.R; }

    std::uint64_t query(std::uint64_t x);
    // Applies U_{O_b} to a state the distinguisher owns.
    void query(qsim::StateVector &state, const qsim::RegisterLayout &layout);

    // Basic form: samples x1 and y, reprograms (x1, x2) when b = 1, returns x1.
    std::uint64_t reprogram(std::uint64_t x2);
    // General form: samples (x, x') from p over the whole domain.
    std::pair<std::uint64_t, std::uint64_t> reprogram(const ReproDistribution &p);

    Rng &coins() { return coins_; }
    const GameTranscript &transcript() const { return transcript_; }
    GameTranscript &transcript() { return transcript_; }

  private:
    void record(std::string dist, std::uint64_t x, std::uint64_t xp, std::uint64_t y);

    ReproConfig cfg_;
    oracle::OracleTable O_;
    Rng sampler_;
    Rng coins_;
    GameTranscript transcript_;
    std::uint64_t phase_count_ = 0;
};

using Distinguisher = std::function<int(GameHandle &)>;

int run_repro_game(const ReproConfig &cfg, const Distinguisher &D,
                   GameTranscript *transcript = nullptr);
// Re-runs under the transcript's config and checks bit and reprogram records.
bool replay_matches(const Distinguisher &D, const GameTranscript &transcript);

struct AdvantageEstimate {
    double advantage;
    double half_width; // sum of the two Wilson 95% half-widths
    double p0;         // Pr[D outputs 1 | b = 0]
    double p1;
    std::uint64_t trials;
};

// Trial t runs both games under the same derived seed.
AdvantageEstimate estimate_advantage(ReproConfig cfg, const Distinguisher &D,
                                     std::uint64_t trials);

double wilson_half_width(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

Distinguisher constant_distinguisher(int bit);
// Queries a random guess g, reprograms, and re-queries g when x1 = g.
Distinguisher guess_distinguisher();

} // namespace qrom::reprogame
