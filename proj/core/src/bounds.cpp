#include "qrom/bounds.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "qrom/attack.hpp"
#include "qrom/errors.hpp"

namespace qrom::bounds {

namespace mp = boost::multiprecision;
using mp::cpp_int;

// ---- Log2Num ----

Log2Num::Log2Num(double linear) {
    if (!(linear >= 0))
        throw std::domain_error("Log2Num needs a nonnegative value");
    l_ = std::log2(linear);
}

Log2Num operator+(Log2Num a, Log2Num b) {
    if (a.is_zero())
        return b;
    if (b.is_zero())
        return a;
    const double hi = std::max(a.l_, b.l_), lo = std::min(a.l_, b.l_);
    return Log2Num::from_log2(hi + std::log1p(std::exp2(lo - hi)) / std::log(2.0));
}

Log2Num operator/(Log2Num a, Log2Num b) {
    if (b.is_zero())
        throw std::domain_error("division by zero");
    return Log2Num::from_log2(a.l_ - b.l_);
}

// ---- ExactNum ----

BigFloat ExactNum::to_float() const {
    if (r_)
        return BigFloat(mp::numerator(*r_)) / BigFloat(mp::denominator(*r_));
    return f_;
}

double ExactNum::log2() const {
    const BigFloat f = to_float();
    if (f == 0)
        return -std::numeric_limits<double>::infinity();
    return static_cast<double>(mp::log(f) / mp::log(BigFloat(2)));
}

ExactNum operator+(const ExactNum &a, const ExactNum &b) {
    if (a.r_ && b.r_)
        return ExactNum(Rational(*a.r_ + *b.r_));
    return ExactNum(BigFloat(a.to_float() + b.to_float()));
}

ExactNum operator*(const ExactNum &a, const ExactNum &b) {
    if (a.r_ && b.r_)
        return ExactNum(Rational(*a.r_ * *b.r_));
    return ExactNum(BigFloat(a.to_float() * b.to_float()));
}

ExactNum operator/(const ExactNum &a, const ExactNum &b) {
    if (b.r_ ? *b.r_ == 0 : b.f_ == 0)
        throw std::domain_error("division by zero");
    if (a.r_ && b.r_)
        return ExactNum(Rational(*a.r_ / *b.r_));
    return ExactNum(BigFloat(a.to_float() / b.to_float()));
}

namespace {
std::optional<cpp_int> exact_isqrt(const cpp_int &v) {
    const cpp_int s = mp::sqrt(v);
    if (s * s == v)
        return s;
    return std::nullopt;
}
} // namespace

ExactNum sqrt(const ExactNum &a) {
    if (a.r_) {
        if (*a.r_ < 0)
            throw std::domain_error("sqrt of a negative value");
        auto n = exact_isqrt(mp::numerator(*a.r_));
        auto d = exact_isqrt(mp::denominator(*a.r_));
        if (n && d)
            return ExactNum(Rational(*n, *d));
    }
    return ExactNum(BigFloat(mp::sqrt(a.to_float())));
}

// ---- Param ----

namespace {

double rational_log2(const Rational &r) {
    if (r == 0)
        return -std::numeric_limits<double>::infinity();
    // log2(a/b) = msb(a) - msb(b) + log2 of the normalized mantissas
    const cpp_int &a = mp::numerator(r), &b = mp::denominator(r);
    const long ea = static_cast<long>(mp::msb(a)), eb = static_cast<long>(mp::msb(b));
    const BigFloat ma = BigFloat(a) / mp::pow(BigFloat(2), ea);
    const BigFloat mb = BigFloat(b) / mp::pow(BigFloat(2), eb);
    return static_cast<double>(ea - eb) +
           static_cast<double>(mp::log(ma / mb) / mp::log(BigFloat(2)));
}

Rational pow2_rational(long e) {
    const cpp_int one = 1;
    if (e >= 0)
        return Rational(cpp_int(one << e));
    return Rational(one, cpp_int(one << -e));
}

std::string trim(const std::string &s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

Param Param::of(double v) {
    if (!(v >= 0) || std::isinf(v))
        throw std::invalid_argument("parameter must be finite and nonnegative");
    Param p;
    p.exact = Rational(v);
    p.log2 = std::log2(v);
    return p;
}

Param Param::pow2(double e) {
    if (std::isnan(e) || std::isinf(e))
        throw std::invalid_argument("exponent must be finite");
    Param p;
    p.log2 = e;
    if (std::floor(e) == e && std::fabs(e) <= 16384)
        p.exact = pow2_rational(static_cast<long>(e));
    return p;
}

Param Param::rational(const Rational &r) {
    if (r < 0)
        throw std::invalid_argument("parameter must be nonnegative");
    return Param{rational_log2(r), r};
}

namespace {
std::string strip_zeros(std::string s) {
    s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
    return s;
}
} // namespace

Param Param::parse(const std::string &raw) {
    const std::string text = trim(raw);
    static const std::regex pow_re(R"(2\^\(?(-?[0-9]+(\.[0-9]+)?)\)?)");
    static const std::regex frac_re(R"(([0-9]+)/([0-9]+))");
    static const std::regex dec_re(R"(([0-9]*)(\.([0-9]*))?([eE]([-+]?[0-9]+))?)");
    std::smatch mt;
    if (std::regex_match(text, mt, pow_re))
        return pow2(std::stod(mt[1]));
    if (std::regex_match(text, mt, frac_re)) {
        const cpp_int den(strip_zeros(mt[2].str()));
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + text + "'");
        return rational(Rational(cpp_int(strip_zeros(mt[1].str())), den));
    }
    if (std::regex_match(text, mt, dec_re) && (mt[1].length() + mt[3].length()) > 0) {
        // cpp_int reads a leading zero as an octal prefix.
        const std::string digits = strip_zeros(mt[1].str() + mt[3].str());
        const long frac = static_cast<long>(mt[3].length());
        const long ex = mt[5].matched ? std::stol(mt[5]) : 0;
        if (std::labs(ex) > 4000)
            throw std::invalid_argument("exponent too large in '" + text + "'");
        Rational r{cpp_int(digits)};
        const long shift = ex - frac;
        const cpp_int ten = mp::pow(cpp_int(10), static_cast<unsigned>(std::labs(shift)));
        r = shift >= 0 ? Rational(r * ten) : Rational(r / ten);
        return rational(r);
    }
    throw std::invalid_argument("cannot parse parameter value '" + text + "'");
}

std::string Param::str() const {
    char buf[64];
    if (exact) {
        const cpp_int &n = mp::numerator(*exact), &d = mp::denominator(*exact);
        if (d == 1 && n < (cpp_int(1) << 53))
            return n.str();
        if (d == 1 && n > 0 && (n & (n - 1)) == 0)
            return "2^" + std::to_string(mp::msb(n));
        if (n == 1 && (d & (d - 1)) == 0)
            return "2^-" + std::to_string(mp::msb(d));
        if (log2 > -1000 && log2 < 1000) {
            std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(*exact));
            return buf;
        }
    }
    std::snprintf(buf, sizeof buf, "2^%.17g", log2);
    return buf;
}

std::string mode_name(Mode m) {
    switch (m) {
    case Mode::Linear:
        return "linear";
    case Mode::Log:
        return "log";
    case Mode::Exact:
        return "exact";
    }
    return "?";
}

// ---- formulas ----

namespace {

template <class N> N make(const Param &p);
template <> Lin make<Lin>(const Param &p) {
    return p.exact ? Lin(static_cast<double>(*p.exact)) : Lin(std::exp2(p.log2));
}
template <> Log2Num make<Log2Num>(const Param &p) { return Log2Num::from_log2(p.log2); }
template <> ExactNum make<ExactNum>(const Param &p) {
    if (p.exact)
        return ExactNum(*p.exact);
    return ExactNum(BigFloat(mp::pow(BigFloat(2), BigFloat(p.log2))));
}

template <class N> N num(long a, long b = 1) {
    return make<N>(Param::rational(Rational(a, b)));
}

// 2^(e + offset) for an exponent-valued parameter.
template <class N> N pow2_of(const Param &e, long offset) {
    const double v = e.exact ? static_cast<double>(*e.exact) : std::exp2(e.log2);
    return make<N>(Param::pow2(v + static_cast<double>(offset)));
}

template <class N> struct Args {
    const ParamMap &m;
    N operator()(const std::string &k) const { return make<N>(m.at(k)); }
    const Param &raw(const std::string &k) const { return m.at(k); }
};

template <class N> using Terms = std::vector<std::pair<std::string, N>>;
template <class N> N sq(const N &x) { return x * x; }

template <class N> Terms<N> f_prop1(const Args<N> &a) {
    return {{"reprogram", num<N>(3, 2) * a("R") * sqrt(a("q") / a("X1"))}};
}
template <class N> Terms<N> f_prop2(const Args<N> &a) {
    return {{"reprogram", num<N>(3, 2) * a("R") * sqrt(a("q") * a("p_max"))}};
}
template <class N> Terms<N> f_thm1(const Args<N> &a) {
    const N qp = a("q") * a("p_max");
    return {{"sqrt_part", a("R") * sqrt(qp)}, {"linear_part", num<N>(1, 2) * a("R") * qp}};
}
template <class N> Terms<N> f_metcr(const Args<N> &a) {
    const N qs = a("q_s"), qh = a("q_H");
    return {{"tcr", num<N>(8) * qs * sq(qs + qh + num<N>(2)) / a("M")},
            {"reprogram", num<N>(3, 2) * qs * sqrt((qh + qs + num<N>(1)) / a("Z"))}};
}
template <class N> Terms<N> f_nmetcr(const Args<N> &a) {
    const N qs = a("q_s"), qh = a("q_H");
    return {{"tcr", num<N>(8) * sq(qs + qh) / a("M")},
            {"reprogram", num<N>(3, 2) * qs * sqrt((qh + qs) / a("Z"))}};
}
template <class N> Terms<N> f_rma_to_cma(const Args<N> &a) {
    const N qs = a("q_s"), qh = a("q_H");
    return {{"succ_rma", a("succ_rma")},
            {"tcr", num<N>(8) * qs * sq(qs + qh + num<N>(2)) / a("M")},
            {"reprogram", num<N>(3) * qs * sqrt((qh + qs + num<N>(1)) / a("Z"))}};
}
template <class N> N fs_reprogram(const Args<N> &a, long factor) {
    return num<N>(3, 2) * a("q_s") *
           sqrt(num<N>(factor) * (a("q_H") + a("q_s") + num<N>(1)) * a("alpha"));
}
template <class N> Terms<N> f_fs_cma(const Args<N> &a) {
    return {{"succ_cma0", a("succ_cma0")}, {"adv_hvzk", a("adv_hvzk")},
            {"reprogram", fs_reprogram(a, 1)}};
}
template <class N> Terms<N> f_fs_cma_stat(const Args<N> &a) {
    return {{"succ_cma0", a("succ_cma0")}, {"hvzk", a("q_s") * a("delta_hvzk")},
            {"reprogram", fs_reprogram(a, 1)}};
}
template <class N> Terms<N> f_uf_f_cma(const Args<N> &a) {
    return {{"succ_cma0", a("succ_cma0")}, {"adv_hvzk", a("adv_hvzk")},
            {"reprogram", fs_reprogram(a, 2)}};
}
template <class N> Terms<N> f_uf_nf_cma(const Args<N> &a) {
    return {{"succ_b1", a("succ_b1")},
            {"extraction", num<N>(2) * a("q_G") * sqrt(a("succ_b2"))}};
}
template <class N> Terms<N> f_uf_nf_cma_seeded(const Args<N> &a) {
    const Param &ell = a.raw("ell");
    return {{"succ_fcma", a("succ_fcma")},
            {"seed", (a("ell") + num<N>(1)) * (a("q_S") + a("q_G")) *
                         sqrt(num<N>(1) / pow2_of<N>(ell, -1))}};
}
template <class N> Terms<N> f_attack(const Args<N> &a) {
    return {{"upper", num<N>(3, 2) * sqrt(num<N>(2) * a("q") / pow2_of<N>(a.raw("n"), 0))}};
}

template <class N> using Formula = Terms<N> (*)(const Args<N> &);

struct Impl {
    Formula<Lin> lin;
    Formula<Log2Num> log;
    Formula<ExactNum> exact;
    std::string label;
};

#define QROM_IMPL(f, label) Impl{&f<Lin>, &f<Log2Num>, &f<ExactNum>, label}

using PK = ParamKind;

const std::vector<std::pair<BoundSpec, Impl>> &table() {
    static const std::vector<std::pair<BoundSpec, Impl>> t = {
        {{"prop1", "(3R/2) sqrt(q/|X1|)",
          {{"R", PK::Count, 1}, {"q", PK::Count, 1}, {"X1", PK::Size, -1}}},
         QROM_IMPL(f_prop1, "")},
        {{"prop2", "(3R/2) sqrt(q p_max)",
          {{"R", PK::Count, 1}, {"q", PK::Count, 1}, {"p_max", PK::Probability, 1}}},
         QROM_IMPL(f_prop2, "")},
        {{"thm1", "R uniform rows of sqrt(q p_max) + q p_max/2",
          {{"R", PK::Count, 1}, {"q", PK::Count, 1}, {"p_max", PK::Probability, 1}}},
         QROM_IMPL(f_thm1, "")},
        {{"metcr", "8 q_s (q_s+q_H+2)^2/|M| + (3 q_s/2) sqrt((q_H+q_s+1)/|Z|)",
          {{"q_s", PK::Count, 1}, {"q_H", PK::Count, 1}, {"M", PK::Size, -1}, {"Z", PK::Size, -1}}},
         QROM_IMPL(f_metcr, "")},
        {{"nmetcr", "8 (q_s+q_H)^2/|M| + 1.5 q_s sqrt((q_H+q_s)/|Z|)",
          {{"q_s", PK::Count, 1}, {"q_H", PK::Count, 1}, {"M", PK::Size, -1}, {"Z", PK::Size, -1}}},
         QROM_IMPL(f_nmetcr, "")},
        {{"rma_to_cma", "succ_rma + 8 q_s (q_s+q_H+2)^2/|M| + 3 q_s sqrt((q_H+q_s+1)/|Z|)",
          {{"q_s", PK::Count, 1},
           {"q_H", PK::Count, 1},
           {"M", PK::Size, -1},
           {"Z", PK::Size, -1},
           {"succ_rma", PK::Probability, 1}}},
         QROM_IMPL(f_rma_to_cma, "")},
        {{"fs_cma", "succ_cma0 + adv_hvzk + (3 q_s/2) sqrt((q_H+q_s+1) alpha)",
          {{"q_s", PK::Count, 1},
           {"q_H", PK::Count, 1},
           {"alpha", PK::Probability, 1},
           {"succ_cma0", PK::Probability, 1},
           {"adv_hvzk", PK::Probability, 1}}},
         QROM_IMPL(f_fs_cma, "")},
        {{"fs_cma_stat", "succ_cma0 + q_s delta_hvzk + (3 q_s/2) sqrt((q_H+q_s+1) alpha)",
          {{"q_s", PK::Count, 1},
           {"q_H", PK::Count, 1},
           {"alpha", PK::Probability, 1},
           {"succ_cma0", PK::Probability, 1},
           {"delta_hvzk", PK::Probability, 1}}},
         QROM_IMPL(f_fs_cma_stat, "")},
        {{"uf_f_cma", "succ_cma0 + adv_hvzk + (3 q_s/2) sqrt(2 (q_H+q_s+1) alpha)",
          {{"q_s", PK::Count, 1},
           {"q_H", PK::Count, 1},
           {"alpha", PK::Probability, 1},
           {"succ_cma0", PK::Probability, 1},
           {"adv_hvzk", PK::Probability, 1}}},
         QROM_IMPL(f_uf_f_cma, "phi={5,6,9}")},
        {{"uf_f_cma_subset", "as uf_f_cma, for subset-revealing schemes",
          {{"q_s", PK::Count, 1},
           {"q_H", PK::Count, 1},
           {"alpha", PK::Probability, 1},
           {"succ_cma0", PK::Probability, 1},
           {"adv_hvzk", PK::Probability, 1}}},
         QROM_IMPL(f_uf_f_cma, "phi={4,5,6,7,9}")},
        {{"uf_nf_cma", "succ_b1 + 2 q_G sqrt(succ_b2)",
          {{"q_G", PK::Count, 1}, {"succ_b1", PK::Probability, 1}, {"succ_b2", PK::Probability, 1}}},
         QROM_IMPL(f_uf_nf_cma, "")},
        {{"uf_nf_cma_seeded", "succ_fcma + (ell+1)(q_S+q_G) sqrt(2^(1-ell))",
          {{"ell", PK::Exponent, 0},
           {"q_S", PK::Count, 1},
           {"q_G", PK::Count, 1},
           {"succ_fcma", PK::Probability, 1}}},
         QROM_IMPL(f_uf_nf_cma_seeded, "")},
        {{"attack", "upper 1.5 sqrt(2q/2^n); lower (1-2^-m) sqrt(q)/(4 sqrt(2^n)) as a note",
          {{"n", PK::Exponent, -1}, {"m", PK::Exponent, 0}, {"q", PK::Count, 1}}},
         QROM_IMPL(f_attack, "")},
    };
    return t;
}

#undef QROM_IMPL

const std::pair<BoundSpec, Impl> &lookup(const std::string &id) {
    for (const auto &e : table())
        if (e.first.id == id)
            return e;
    throw std::invalid_argument("unknown bound id: " + id);
}

template <class N>
BoundResult assemble(const std::string &id, const Terms<N> &terms) {
    BoundResult r;
    r.id = id;
    N sum = num<N>(0);
    for (const auto &[name, v] : terms) {
        r.terms.push_back(Term{name, v.log2(), v.linear()});
        sum = sum + v;
    }
    r.log2_value = sum.log2();
    r.raw = sum.linear();
    if constexpr (std::is_same_v<N, ExactNum>)
        r.precise = sum.to_float();
    r.clamped = r.log2_value > 0;
    r.value = r.clamped ? 1.0 : std::max(0.0, r.raw);
    return r;
}

void validate(const BoundSpec &spec, const ParamMap &params) {
    for (const auto &[k, v] : params) {
        (void)v;
        if (std::none_of(spec.params.begin(), spec.params.end(),
                         [&](const ParamSpec &p) { return p.name == k; }))
            throw std::invalid_argument("unknown parameter '" + k + "' for bound " + spec.id);
    }
    for (const auto &p : spec.params) {
        auto it = params.find(p.name);
        if (it == params.end())
            throw std::invalid_argument("missing parameter '" + p.name + "' for bound " + spec.id);
        const double l = it->second.log2;
        if (std::isnan(l) || (std::isinf(l) && l > 0))
            throw std::invalid_argument("parameter '" + p.name + "' must be finite");
        if (p.kind == PK::Size && std::isinf(l))
            throw std::invalid_argument("set size '" + p.name + "' must be positive");
        if (p.kind == PK::Probability && l > 1e-12)
            throw std::invalid_argument("probability '" + p.name + "' exceeds 1");
    }
}

} // namespace

const std::vector<BoundSpec> &registry() {
    static const std::vector<BoundSpec> specs = [] {
        std::vector<BoundSpec> v;
        for (const auto &e : table())
            v.push_back(e.first);
        return v;
    }();
    return specs;
}

const BoundSpec &find_bound(const std::string &id) { return lookup(id).first; }

BoundResult evaluate(const std::string &id, const ParamMap &params, Mode mode) {
    const auto &[spec, impl] = lookup(id);
    validate(spec, params);
    BoundResult r;
    switch (mode) {
    case Mode::Linear:
        r = assemble(id, impl.lin(Args<Lin>{params}));
        break;
    case Mode::Log:
        r = assemble(id, impl.log(Args<Log2Num>{params}));
        break;
    case Mode::Exact:
        r = assemble(id, impl.exact(Args<ExactNum>{params}));
        break;
    }
    r.label = impl.label;
    if (id == "attack") {
        const double n = params.at("n").linear(), m = params.at("m").linear();
        const double lower = (1 - std::exp2(-m)) * std::sqrt(params.at("q").linear()) /
                             (4 * std::exp2(n / 2));
        r.notes.emplace_back("lower", lower);
    }
    return r;
}

ParamMap parse_params(std::istream &is) {
    ParamMap out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("params line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty() || out.count(key))
            throw std::invalid_argument("params line " + std::to_string(lineno) + ": bad or repeated key");
        out[key] = Param::parse(line.substr(eq + 1));
    }
    return out;
}

ParamMap parse_params_string(const std::string &text) {
    std::string norm = text;
    std::replace(norm.begin(), norm.end(), ';', '\n');
    std::istringstream is(norm);
    return parse_params(is);
}

Sweep parse_sweep(const std::string &raw) {
    const std::string text = trim(raw);
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("sweep must look like key=values");
    Sweep s;
    s.key = trim(text.substr(0, eq));
    std::string rest = trim(text.substr(eq + 1));
    if (rest.empty())
        return s;
    static const std::regex range_re(R"((2\^)?(-?[0-9]+)\.\.(2\^)?(-?[0-9]+)(:([0-9]+))?)");
    std::smatch mt;
    if (std::regex_match(rest, mt, range_re)) {
        const bool pow = mt[1].matched;
        if (pow != mt[3].matched)
            throw std::invalid_argument("sweep range must use the same form at both ends");
        const long a = std::stol(mt[2]), b = std::stol(mt[4]);
        const long step = mt[6].matched ? std::stol(mt[6]) : 1;
        if (step <= 0 || b < a || (b - a) / step > 100000)
            throw std::invalid_argument("bad sweep range");
        if (!pow && a < 0)
            throw std::invalid_argument("sweep values must be nonnegative");
        for (long v = a; v <= b; v += step)
            s.values.push_back(pow ? Param::pow2(static_cast<double>(v))
                                   : Param::rational(Rational(v)));
        return s;
    }
    std::stringstream ss(rest);
    for (std::string item; std::getline(ss, item, ',');)
        s.values.push_back(Param::parse(item));
    return s;
}

namespace {
ParamMap pm(std::initializer_list<std::pair<const std::string, Param>> l) { return ParamMap(l); }
} // namespace

BoundResult eval_prop1(const Param &R, const Param &q, const Param &x1, Mode mode) {
    return evaluate("prop1", pm({{"R", R}, {"q", q}, {"X1", x1}}), mode);
}

BoundResult eval_prop2(const Param &R, const Param &q, const Param &p_max, Mode mode) {
    return evaluate("prop2", pm({{"R", R}, {"q", q}, {"p_max", p_max}}), mode);
}

namespace {
template <class N> BoundResult thm1_sum(const std::vector<ScheduleRow> &rows) {
    Terms<N> terms;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const N qp = make<N>(rows[r].q_hat) * make<N>(rows[r].p_max);
        terms.emplace_back("row" + std::to_string(r + 1), sqrt(qp) + num<N>(1, 2) * qp);
    }
    return assemble("thm1", terms);
}

bool same_param(const Param &a, const Param &b) {
    if (a.exact && b.exact)
        return *a.exact == *b.exact;
    return a.log2 == b.log2;
}
} // namespace

BoundResult eval_thm1(const std::vector<ScheduleRow> &schedule, Mode mode) {
    for (const auto &row : schedule)
        if (row.p_max.log2 > 1e-12 || std::isnan(row.q_hat.log2))
            throw std::invalid_argument("schedule rows need q_hat >= 0 and p_max <= 1");
    BoundResult r;
    switch (mode) {
    case Mode::Linear:
        r = thm1_sum<Lin>(schedule);
        break;
    case Mode::Log:
        r = thm1_sum<Log2Num>(schedule);
        break;
    case Mode::Exact:
        r = thm1_sum<ExactNum>(schedule);
        break;
    }
    if (schedule.empty())
        return r;
    const bool shared = std::all_of(schedule.begin(), schedule.end(), [&](const ScheduleRow &x) {
        return same_param(x.p_max, schedule.front().p_max);
    });
    if (!shared)
        return r;
    const Param q = std::max_element(schedule.begin(), schedule.end(),
                                     [](const ScheduleRow &a, const ScheduleRow &b) {
                                         return a.q_hat.log2 < b.q_hat.log2;
                                     })->q_hat;
    const Param &p = schedule.front().p_max;
    const auto simple =
        eval_prop2(Param::rational(Rational(static_cast<long long>(schedule.size()))), q, p, mode);
    r.notes.emplace_back("prop2_simplification", simple.raw);
    if (q.log2 + p.log2 < 0 && r.log2_value > simple.log2_value + 1e-12)
        throw InvariantViolation("schedule sum exceeds its simplification although q p_max < 1");
    return r;
}

BoundResult eval_metcr(const Param &q_s, const Param &q_h, const Param &m, const Param &z,
                       Mode mode) {
    return evaluate("metcr", pm({{"q_s", q_s}, {"q_H", q_h}, {"M", m}, {"Z", z}}), mode);
}

BoundResult eval_nmetcr(const Param &q_s, const Param &q_h, const Param &m, const Param &z,
                        Mode mode) {
    return evaluate("nmetcr", pm({{"q_s", q_s}, {"q_H", q_h}, {"M", m}, {"Z", z}}), mode);
}

BoundResult eval_rma_to_cma(const Param &q_s, const Param &q_h, const Param &m, const Param &z,
                            const Param &succ_rma, Mode mode) {
    return evaluate("rma_to_cma",
                    pm({{"q_s", q_s}, {"q_H", q_h}, {"M", m}, {"Z", z}, {"succ_rma", succ_rma}}),
                    mode);
}

BoundResult eval_fs_cma(const Param &q_s, const Param &q_h, const Param &alpha,
                        const Param &succ_cma0, const Param &adv_hvzk, Mode mode) {
    return evaluate("fs_cma",
                    pm({{"q_s", q_s},
                        {"q_H", q_h},
                        {"alpha", alpha},
                        {"succ_cma0", succ_cma0},
                        {"adv_hvzk", adv_hvzk}}),
                    mode);
}

BoundResult eval_fs_cma_statistical(const Param &q_s, const Param &q_h, const Param &alpha,
                                    const Param &succ_cma0, const Param &delta, Mode mode) {
    return evaluate("fs_cma_stat",
                    pm({{"q_s", q_s},
                        {"q_H", q_h},
                        {"alpha", alpha},
                        {"succ_cma0", succ_cma0},
                        {"delta_hvzk", delta}}),
                    mode);
}

BoundResult eval_uf_f_cma(const Param &q_s, const Param &q_h, const Param &alpha,
                          const Param &succ_cma0, const Param &adv_hvzk, bool subset_revealing,
                          Mode mode) {
    return evaluate(subset_revealing ? "uf_f_cma_subset" : "uf_f_cma",
                    pm({{"q_s", q_s},
                        {"q_H", q_h},
                        {"alpha", alpha},
                        {"succ_cma0", succ_cma0},
                        {"adv_hvzk", adv_hvzk}}),
                    mode);
}

BoundResult eval_uf_nf_cma(const Param &q_g, const Param &b1, const Param &b2, Mode mode) {
    return evaluate("uf_nf_cma", pm({{"q_G", q_g}, {"succ_b1", b1}, {"succ_b2", b2}}), mode);
}

BoundResult eval_uf_nf_cma_seeded(const Param &ell, const Param &q_s, const Param &q_g,
                                  const Param &succ, Mode mode) {
    return evaluate("uf_nf_cma_seeded",
                    pm({{"ell", ell}, {"q_S", q_s}, {"q_G", q_g}, {"succ_fcma", succ}}), mode);
}

BoundResult attack_bound_pair(unsigned n, unsigned m, unsigned q) {
    const auto ab = reprogame::attack_advantage_bound(n, m, q);
    BoundResult r = evaluate("attack",
                             pm({{"n", Param::of(n)}, {"m", Param::of(m)}, {"q", Param::of(q)}}),
                             Mode::Log);
    if (std::fabs(r.raw - ab.upper) > 1e-12 * ab.upper)
        throw InvariantViolation("attack upper bound disagrees between modules");
    r.notes.clear();
    r.notes.emplace_back("lower", ab.lower);
    return r;
}

double solve_alpha_log2(const Param &q_s, const Param &q_h, double target) {
    if (!(target > 0))
        throw std::invalid_argument("target must be positive");
    const Log2Num inner = Log2Num::from_log2(q_h.log2) + Log2Num::from_log2(q_s.log2) + Log2Num(1.0);
    return 2 * (std::log2(target) - std::log2(1.5) - q_s.log2) - inner.log2();
}

FootnoteSizing dilithium_footnote(unsigned signature_bytes) {
    FootnoteSizing f{};
    const Param qs = Param::pow2(64), qh = Param::pow2(128);
    f.log2_alpha = solve_alpha_log2(qs, qh);
    f.extra_bits = -f.log2_alpha;
    f.extra_bytes = f.extra_bits / 8;
    const auto r = eval_fs_cma(qs, qh, Param::pow2(f.log2_alpha), Param::zero(), Param::zero());
    f.check_term = r.terms.back().linear;
    f.rounded_bytes = static_cast<unsigned>(std::lround(f.extra_bytes));
    f.signature_bytes = signature_bytes;
    f.percent = 100.0 * f.rounded_bytes / signature_bytes;
    return f;
}

} // namespace qrom::bounds
