#include "qrom/reprogame.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qrom::reprogame {

namespace {
constexpr std::uint64_t kOracleStream = 1;
constexpr std::uint64_t kSamplerStream = 2;
constexpr std::uint64_t kCoinStream = 3;

std::uint64_t uniform_bits(Rng &rng, unsigned bits) {
    if (bits >= 64)
        return rng();
    return uniform_below(rng, std::uint64_t{1} << bits);
}
} // namespace

void ReproConfig::validate() const {
    if (b != 0 && b != 1)
        throw std::invalid_argument("hidden bit must be 0 or 1");
    if (m == 0 || m > 64)
        throw std::invalid_argument("output width must be in [1, 64]");
    if (n() > 30)
        throw std::invalid_argument("domain too large for an eager table");
}

ReproDistribution::ReproDistribution(unsigned x_bits, std::vector<Entry> entries,
                                     std::string id)
    : x_bits_(x_bits), id_(std::move(id)), entries_(std::move(entries)) {
    if (entries_.empty())
        throw GameProtocolError("malformed distribution: no support");
    double total = 0.0;
    std::map<std::uint64_t, double> marg;
    for (const auto &e : entries_) {
        if (e.p < 0.0 || !std::isfinite(e.p))
            throw GameProtocolError("malformed distribution: bad probability");
        if (x_bits < 64 && (e.x >> x_bits) != 0)
            throw GameProtocolError("malformed distribution: point out of range");
        total += e.p;
        cumulative_.push_back(total);
        marg[e.x] += e.p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw GameProtocolError("malformed distribution: probabilities do not sum to 1");
    for (const auto &[x, p] : marg)
        p_max_ = std::max(p_max_, p);
}

ReproDistribution ReproDistribution::uniform(unsigned x_bits, std::string id) {
    if (x_bits > 24)
        throw std::invalid_argument("explicit uniform table too large");
    const std::uint64_t size = std::uint64_t{1} << x_bits;
    std::vector<Entry> e;
    e.reserve(size);
    for (std::uint64_t x = 0; x < size; ++x)
        e.push_back(Entry{x, 0, 1.0 / static_cast<double>(size)});
    return ReproDistribution(x_bits, std::move(e), std::move(id));
}

double ReproDistribution::marginal_x(std::uint64_t x) const {
    double p = 0.0;
    for (const auto &e : entries_)
        if (e.x == x)
            p += e.p;
    return p;
}

std::vector<std::pair<std::uint64_t, double>> ReproDistribution::conditional(std::uint64_t x) const {
    const double px = marginal_x(x);
    std::vector<std::pair<std::uint64_t, double>> out;
    if (px <= 0.0)
        return out;
    for (const auto &e : entries_)
        if (e.x == x)
            out.emplace_back(e.x_prime, e.p / px);
    return out;
}

const ReproDistribution::Entry &ReproDistribution::sample(Rng &rng) const {
    const double u = uniform01(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                           entries_.size() - 1);
    return entries_[idx];
}

GameHandle::GameHandle(const ReproConfig &cfg)
    : cfg_(cfg),
      O_(oracle::sample_oracle(cfg.n(), cfg.m, derive_seed(cfg.seed, kOracleStream))),
      sampler_(make_rng(derive_seed(cfg.seed, kSamplerStream))),
      coins_(make_rng(derive_seed(cfg.seed, kCoinStream))) {
    transcript_.config = cfg;
}

std::uint64_t GameHandle::query(std::uint64_t x) {
    ++phase_count_;
    ++transcript_.total_queries;
    return O_.lookup(x);
}

void GameHandle::query(qsim::StateVector &state, const qsim::RegisterLayout &layout) {
    ++phase_count_;
    ++transcript_.total_queries;
    qsim::apply_oracle_inplace(state, layout, O_);
}

void GameHandle::record(std::string dist, std::uint64_t x, std::uint64_t xp, std::uint64_t y) {
    if (cfg_.b == 1)
        O_.set(x, y);
    transcript_.reprograms.push_back(ReprogramRecord{std::move(dist), x, xp, y, phase_count_,
                                                     transcript_.total_queries});
    transcript_.phase_queries.push_back(phase_count_);
    phase_count_ = 0;
}

std::uint64_t GameHandle::reprogram(std::uint64_t x2) {
    if (transcript_.reprograms.size() >= cfg_.R)
        throw GameProtocolError("reprogram budget exceeded");
    if (cfg_.n2 < 64 && (x2 >> cfg_.n2) != 0)
        throw GameProtocolError("x2 out of range");
    const std::uint64_t x1 = uniform_bits(sampler_, cfg_.n1);
    const std::uint64_t y = uniform_bits(sampler_, cfg_.m);
    record("basic", (x1 << cfg_.n2) | x2, x2, y);
    return x1;
}

std::pair<std::uint64_t, std::uint64_t> GameHandle::reprogram(const ReproDistribution &p) {
    if (transcript_.reprograms.size() >= cfg_.R)
        throw GameProtocolError("reprogram budget exceeded");
    if (p.x_bits() != cfg_.n())
        throw GameProtocolError("malformed distribution: domain width mismatch");
    const auto &e = p.sample(sampler_);
    const std::uint64_t y = uniform_bits(sampler_, cfg_.m);
    record(p.id(), e.x, e.x_prime, y);
    return {e.x, e.x_prime};
}

int run_repro_game(const ReproConfig &cfg, const Distinguisher &D, GameTranscript *transcript) {
    cfg.validate();
    GameHandle h(cfg);
    const int out = D(h) ? 1 : 0;
    auto &t = h.transcript();
    t.phase_queries.push_back(t.total_queries -
                              (t.reprograms.empty() ? 0 : t.reprograms.back().queries_before));
    t.output = out;
    if (transcript)
        *transcript = t;
    return out;
}

bool replay_matches(const Distinguisher &D, const GameTranscript &transcript) {
    GameTranscript again;
    run_repro_game(transcript.config, D, &again);
    if (again.output != transcript.output || again.total_queries != transcript.total_queries ||
        again.reprograms.size() != transcript.reprograms.size())
        return false;
    for (std::size_t k = 0; k < again.reprograms.size(); ++k) {
        const auto &a = again.reprograms[k], &b = transcript.reprograms[k];
        if (a.distribution != b.distribution || a.x != b.x || a.x_prime != b.x_prime ||
            a.y != b.y || a.queries_in_phase != b.queries_in_phase)
            return false;
    }
    return true;
}

double wilson_half_width(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0)
        return 1.0;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    return z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
}

AdvantageEstimate estimate_advantage(ReproConfig cfg, const Distinguisher &D,
                                     std::uint64_t trials) {
    if (trials < 100)
        throw std::invalid_argument("estimate_advantage needs at least 100 trials");
    std::uint64_t ones0 = 0, ones1 = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        ReproConfig c = cfg;
        c.seed = derive_seed(cfg.seed, 0x1000 + t);
        c.b = 0;
        ones0 += static_cast<std::uint64_t>(run_repro_game(c, D));
        c.b = 1;
        ones1 += static_cast<std::uint64_t>(run_repro_game(c, D));
    }
    const double n = static_cast<double>(trials);
    AdvantageEstimate e;
    e.p0 = static_cast<double>(ones0) / n;
    e.p1 = static_cast<double>(ones1) / n;
    e.advantage = std::abs(e.p1 - e.p0);
    e.half_width = wilson_half_width(ones0, trials) + wilson_half_width(ones1, trials);
    e.trials = trials;
    return e;
}

Distinguisher constant_distinguisher(int bit) {
    return [bit](GameHandle &) { return bit; };
}

Distinguisher guess_distinguisher() {
    return [](GameHandle &g) {
        const std::uint64_t guess = uniform_bits(g.coins(), g.n1());
        const std::uint64_t x = guess << g.n2();
        const std::uint64_t before = g.query(x);
        const std::uint64_t x1 = g.reprogram(0);
        if (x1 != guess)
            return 0;
        return g.query(x) != before ? 1 : 0;
    };
}

} // namespace qrom::reprogame
