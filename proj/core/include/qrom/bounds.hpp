#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace qrom::bounds {

using Rational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_100;

// Nonnegative number stored as its base-2 logarithm; zero is -inf.
class Log2Num {
  public:
    Log2Num() : l_(-std::numeric_limits<double>::infinity()) {}
    explicit Log2Num(double linear);
    static Log2Num from_log2(double l) {
        Log2Num x;
        x.l_ = l;
        return x;
    }
    double log2() const { return l_; }
    double linear() const { return std::exp2(l_); }
    bool is_zero() const { return std::isinf(l_) && l_ < 0; }

    friend Log2Num operator+(Log2Num a, Log2Num b);
    friend Log2Num operator*(Log2Num a, Log2Num b) { return from_log2(a.l_ + b.l_); }
    friend Log2Num operator/(Log2Num a, Log2Num b);
    friend Log2Num sqrt(Log2Num a) { return from_log2(a.l_ / 2); }
    friend bool operator<(Log2Num a, Log2Num b) { return a.l_ < b.l_; }

  private:
    double l_;
};

// Exact rational while possible; irrational square roots fall back to 100-digit floats.
class ExactNum {
  public:
    ExactNum() : r_(0) {}
    ExactNum(int v) : r_(v) {}
    explicit ExactNum(Rational r) : r_(std::move(r)) {}
    explicit ExactNum(BigFloat f) : f_(std::move(f)) {}

    bool is_rational() const { return r_.has_value(); }
    const Rational &rational() const { return *r_; }
    BigFloat to_float() const;
    double log2() const;
    double linear() const { return static_cast<double>(to_float()); }

    friend ExactNum operator+(const ExactNum &a, const ExactNum &b);
    friend ExactNum operator*(const ExactNum &a, const ExactNum &b);
    friend ExactNum operator/(const ExactNum &a, const ExactNum &b);
    friend ExactNum sqrt(const ExactNum &a);
    friend bool operator<(const ExactNum &a, const ExactNum &b) { return a.to_float() < b.to_float(); }

  private:
    std::optional<Rational> r_;
    BigFloat f_;
};

// Plain double arithmetic.
struct Lin {
    double v = 0;
    Lin() = default;
    Lin(double x) : v(x) {}
    double log2() const { return std::log2(v); }
    double linear() const { return v; }
    friend Lin operator+(Lin a, Lin b) { return a.v + b.v; }
    friend Lin operator*(Lin a, Lin b) { return a.v * b.v; }
    friend Lin operator/(Lin a, Lin b) { return a.v / b.v; }
    friend Lin sqrt(Lin a) { return std::sqrt(a.v); }
    friend bool operator<(Lin a, Lin b) { return a.v < b.v; }
};

// A parameter value: log2 always, exact rational when the input was exact.
struct Param {
    double log2 = -std::numeric_limits<double>::infinity();
    std::optional<Rational> exact;

    static Param zero() { return Param{-std::numeric_limits<double>::infinity(), Rational(0)}; }
    static Param of(double v);   // exact conversion of the double
    static Param pow2(double e); // exact when e is an integer
    static Param rational(const Rational &r);
    // Accepts "2^e", "a/b", or a decimal number (optionally with exponent).
    static Param parse(const std::string &text);
    double linear() const { return std::exp2(log2); }
    std::string str() const;
};

using ParamMap = std::map<std::string, Param>;

enum class Mode { Linear, Log, Exact };
std::string mode_name(Mode m);

struct Term {
    std::string name;
    double log2;
    double linear;
};

struct BoundResult {
    std::string id;
    std::string label;     // applicability note, e.g. the admissible fault set
    double value = 0;      // linear, clamped to [0,1]
    double log2_value = 0; // log2 of the unclamped sum
    double raw = 0;        // unclamped linear sum (may overflow to inf)
    bool clamped = false;
    std::vector<Term> terms;
    std::vector<std::pair<std::string, double>> notes; // companion quantities
    std::optional<BigFloat> precise;                   // Exact mode only
};

enum class ParamKind { Count, Size, Probability, Exponent };

struct ParamSpec {
    std::string name;
    ParamKind kind;
    int direction; // +1 nondecreasing, -1 nonincreasing, 0 not monotone
};

struct BoundSpec {
    std::string id;
    std::string doc;
    std::vector<ParamSpec> params;
};

const std::vector<BoundSpec> &registry();
const BoundSpec &find_bound(const std::string &id);

// Evaluates bound `id`. Every declared parameter is required; unknown keys are rejected.
BoundResult evaluate(const std::string &id, const ParamMap &params, Mode mode = Mode::Log);

ParamMap parse_params(std::istream &is);
ParamMap parse_params_string(const std::string &text);

// Sweep syntax: "key=v1,v2,...", "key=a..b" (integers) or "key=2^a..2^b[:step]" (powers of two).
struct Sweep {
    std::string key;
    std::vector<Param> values;
};
Sweep parse_sweep(const std::string &text);

BoundResult eval_prop1(const Param &R, const Param &q, const Param &size_x1, Mode mode = Mode::Log);
BoundResult eval_prop2(const Param &R, const Param &q, const Param &p_max, Mode mode = Mode::Log);

struct ScheduleRow {
    Param q_hat;
    Param p_max;
};
// Exact sum over the schedule. When all rows share p_max the note
// "prop2_simplification" holds (3R/2) sqrt(q p_max) with q = max q_hat, and
// dominance is enforced whenever q p_max < 1 (InvariantViolation otherwise).
BoundResult eval_thm1(const std::vector<ScheduleRow> &schedule, Mode mode = Mode::Log);

BoundResult eval_metcr(const Param &q_s, const Param &q_h, const Param &size_m,
                       const Param &size_z, Mode mode = Mode::Log);
BoundResult eval_nmetcr(const Param &q_s, const Param &q_h, const Param &size_m,
                        const Param &size_z, Mode mode = Mode::Log);
BoundResult eval_rma_to_cma(const Param &q_s, const Param &q_h, const Param &size_m,
                            const Param &size_z, const Param &succ_rma, Mode mode = Mode::Log);
// adv_hvzk is the multi-HVZK advantage; the statistical form uses q_s * delta.
BoundResult eval_fs_cma(const Param &q_s, const Param &q_h, const Param &alpha,
                        const Param &succ_cma0, const Param &adv_hvzk, Mode mode = Mode::Log);
BoundResult eval_fs_cma_statistical(const Param &q_s, const Param &q_h, const Param &alpha,
                                    const Param &succ_cma0, const Param &delta_hvzk,
                                    Mode mode = Mode::Log);
// The flag only changes the reported fault set.
BoundResult eval_uf_f_cma(const Param &q_s, const Param &q_h, const Param &alpha,
                          const Param &succ_cma0, const Param &adv_hvzk, bool subset_revealing,
                          Mode mode = Mode::Log);
BoundResult eval_uf_nf_cma(const Param &q_g, const Param &succ_b1, const Param &succ_b2,
                           Mode mode = Mode::Log);
BoundResult eval_uf_nf_cma_seeded(const Param &ell, const Param &q_s, const Param &q_g,
                                  const Param &succ_fcma, Mode mode = Mode::Log);
// Value is the upper bound; the note "lower" carries the attack's guaranteed advantage.
BoundResult attack_bound_pair(unsigned n, unsigned m, unsigned q);

// log2 of the commitment min-entropy alpha at which (3 q_s/2) sqrt((q_h+q_s+1) alpha) = target.
double solve_alpha_log2(const Param &q_s, const Param &q_h, double target = 1.0);

struct FootnoteSizing {
    double log2_alpha;      // about -257.17
    double extra_bits;      // -log2_alpha
    double extra_bytes;     // extra_bits / 8
    double check_term;      // reprogramming term re-evaluated at alpha
    unsigned rounded_bytes; // 32
    unsigned signature_bytes;
    double percent;         // rounded_bytes / signature_bytes * 100
};
FootnoteSizing dilithium_footnote(unsigned signature_bytes = 2044);

} // namespace qrom::bounds
