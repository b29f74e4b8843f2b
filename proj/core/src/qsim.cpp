#include "qrom/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qrom/errors.hpp"

namespace qrom::qsim {

unsigned qubit_cap() {
    if (const char *env = std::getenv("QROM_QUBIT_CAP")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 40)
            return static_cast<unsigned>(v);
    }
    return kDefaultQubitCap;
}

void check_cap(unsigned num_qubits) {
    const unsigned cap = qubit_cap();
    if (num_qubits > cap)
        throw CapExceeded("qubit count " + std::to_string(num_qubits) +
                          " exceeds cap " + std::to_string(cap));
}

StateVector::StateVector(unsigned num_qubits) : num_qubits_(num_qubits) {
    check_cap(num_qubits);
    amps_.assign(std::uint64_t{1} << num_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::basis(unsigned num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dim())
        throw std::out_of_range("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amplitudes) {
    const std::uint64_t d = amplitudes.size();
    if (d == 0 || (d & (d - 1)) != 0)
        throw std::invalid_argument("amplitude count must be a power of two");
    unsigned nq = 0;
    while ((std::uint64_t{1} << nq) < d)
        ++nq;
    check_cap(nq);
    StateVector s(0);
    s.num_qubits_ = nq;
    s.amps_ = std::move(amplitudes);
    if (std::abs(s.norm_squared() - 1.0) > kNormTol)
        throw std::invalid_argument("amplitudes are not normalized");
    return s;
}

double StateVector::norm_squared() const {
    double acc = 0.0;
    for (const auto &a : amps_)
        acc += std::norm(a);
    return acc;
}

void StateVector::check_norm(const char *where) const {
    const double drift = std::abs(norm_squared() - 1.0);
    if (drift > kNormTol)
        throw InvariantViolation(std::string("norm drift ") + std::to_string(drift) +
                                 " after " + where);
}

RegisterLayout RegisterLayout::standard(unsigned n, unsigned m) {
    RegisterLayout l;
    for (unsigned k = 0; k < m; ++k)
        l.y_bits.push_back(k);
    for (unsigned k = 0; k < n; ++k)
        l.x_bits.push_back(m + k);
    return l;
}

void RegisterLayout::validate(unsigned num_qubits) const {
    std::vector<bool> used(num_qubits, false);
    auto mark = [&](const std::vector<unsigned> &bits) {
        for (unsigned b : bits) {
            if (b >= num_qubits)
                throw std::invalid_argument("register bit outside the state");
            if (used[b])
                throw std::invalid_argument("register bits overlap");
            used[b] = true;
        }
    };
    mark(x_bits);
    mark(y_bits);
}

namespace {
std::uint64_t gather(const std::vector<unsigned> &bits, std::uint64_t index) {
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < bits.size(); ++k)
        v |= ((index >> bits[k]) & 1ULL) << k;
    return v;
}

std::uint64_t scatter(const std::vector<unsigned> &bits, std::uint64_t index,
                      std::uint64_t v) {
    for (std::size_t k = 0; k < bits.size(); ++k) {
        const std::uint64_t mask = 1ULL << bits[k];
        index = ((v >> k) & 1ULL) ? (index | mask) : (index & ~mask);
    }
    return index;
}

bool is_contiguous(const std::vector<unsigned> &bits, unsigned start) {
    for (std::size_t k = 0; k < bits.size(); ++k)
        if (bits[k] != start + k)
            return false;
    return true;
}

bool is_standard(const RegisterLayout &l, unsigned nq) {
    return l.n() + l.m() == nq && is_contiguous(l.y_bits, 0) &&
           is_contiguous(l.x_bits, l.m());
}
} // namespace

std::uint64_t RegisterLayout::get_x(std::uint64_t index) const { return gather(x_bits, index); }
std::uint64_t RegisterLayout::get_y(std::uint64_t index) const { return gather(y_bits, index); }
std::uint64_t RegisterLayout::put_x(std::uint64_t index, std::uint64_t x) const {
    return scatter(x_bits, index, x);
}
std::uint64_t RegisterLayout::put_y(std::uint64_t index, std::uint64_t y) const {
    return scatter(y_bits, index, y);
}

Permutation::Permutation(unsigned n, std::vector<std::uint64_t> map)
    : n_(n), map_(std::move(map)) {
    if (map_.size() != (std::uint64_t{1} << n))
        throw std::invalid_argument("permutation table length must be 2^n");
    std::vector<bool> seen(map_.size(), false);
    for (auto v : map_) {
        if (v >= map_.size() || seen[v])
            throw std::invalid_argument("permutation table is not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(unsigned n) { return add_constant(n, 0); }

Permutation Permutation::add_constant(unsigned n, std::uint64_t k) {
    const std::uint64_t size = std::uint64_t{1} << n;
    std::vector<std::uint64_t> map(size);
    for (std::uint64_t x = 0; x < size; ++x)
        map[x] = (x + k) & (size - 1);
    return Permutation(n, std::move(map));
}

Permutation Permutation::inverse() const {
    std::vector<std::uint64_t> inv(map_.size());
    for (std::uint64_t x = 0; x < map_.size(); ++x)
        inv[map_[x]] = x;
    return Permutation(n_, std::move(inv));
}

bool Permutation::is_cyclic() const {
    std::uint64_t x = 0, len = 0;
    do {
        x = map_[x];
        ++len;
    } while (x != 0);
    return len == map_.size();
}

StateVector prepare_uniform(unsigned n, unsigned m) {
    check_cap(n + m);
    StateVector s(n + m);
    auto &a = s.raw();
    a[0] = 0.0;
    const double amp = 1.0 / std::sqrt(static_cast<double>(std::uint64_t{1} << n));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
        a[x << m] = amp;
    s.check_norm("prepare_uniform");
    return s;
}

void apply_oracle_inplace(StateVector &state, const RegisterLayout &layout,
                          const oracle::OracleTable &O) {
    layout.validate(state.num_qubits());
    if (layout.n() != O.n() || layout.m() != O.m())
        throw std::invalid_argument("register sizes do not match the oracle");
    auto &a = state.raw();
    if (is_standard(layout, state.num_qubits())) {
        const unsigned m = layout.m();
        const std::uint64_t ny = std::uint64_t{1} << m;
        for (std::uint64_t x = 0; x < O.size(); ++x) {
            const std::uint64_t f = O.lookup(x);
            if (f == 0)
                continue;
            const std::uint64_t base = x << m;
            for (std::uint64_t y = 0; y < ny; ++y) {
                const std::uint64_t y2 = y ^ f;
                if (y2 > y)
                    std::swap(a[base | y], a[base | y2]);
            }
        }
    } else {
        for (std::uint64_t i = 0; i < a.size(); ++i) {
            const std::uint64_t f = O.lookup(layout.get_x(i));
            const std::uint64_t j = layout.put_y(i, layout.get_y(i) ^ f);
            if (j > i)
                std::swap(a[i], a[j]);
        }
    }
    state.check_norm("apply_oracle");
}

StateVector apply_oracle(StateVector state, const RegisterLayout &layout,
                         const oracle::OracleTable &O) {
    apply_oracle_inplace(state, layout, O);
    return state;
}

void apply_permutation_inplace(StateVector &state, const RegisterLayout &layout,
                               const Permutation &perm) {
    layout.validate(state.num_qubits());
    if (layout.n() != perm.n())
        throw std::invalid_argument("register size does not match the permutation");
    const auto &a = state.raw();
    std::vector<cplx> out(a.size());
    if (is_standard(layout, state.num_qubits())) {
        const unsigned m = layout.m();
        const std::uint64_t ny = std::uint64_t{1} << m;
        for (std::uint64_t x = 0; x < perm.map().size(); ++x) {
            const std::uint64_t src = x << m, dst = perm(x) << m;
            for (std::uint64_t y = 0; y < ny; ++y)
                out[dst | y] = a[src | y];
        }
    } else {
        for (std::uint64_t i = 0; i < a.size(); ++i)
            out[layout.put_x(i, perm(layout.get_x(i)))] = a[i];
    }
    state.raw() = std::move(out);
    state.check_norm("apply_permutation");
}

StateVector apply_permutation(StateVector state, const RegisterLayout &layout,
                              const Permutation &perm) {
    apply_permutation_inplace(state, layout, perm);
    return state;
}

void apply_1q_inplace(std::vector<cplx> &a, unsigned qubit, const Gate1 &u) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    if (bit >= a.size())
        throw std::invalid_argument("qubit outside the state");
    for (std::uint64_t i = 0; i < a.size(); ++i) {
        if (i & bit)
            continue;
        const cplx a0 = a[i], a1 = a[i | bit];
        a[i] = u[0] * a0 + u[1] * a1;
        a[i | bit] = u[2] * a0 + u[3] * a1;
    }
}

void apply_cnot_inplace(std::vector<cplx> &a, unsigned control, unsigned target) {
    if (control == target)
        throw std::invalid_argument("CNOT control equals target");
    const std::uint64_t c = std::uint64_t{1} << control, t = std::uint64_t{1} << target;
    if (c >= a.size() || t >= a.size())
        throw std::invalid_argument("qubit outside the state");
    for (std::uint64_t i = 0; i < a.size(); ++i)
        if ((i & c) && !(i & t))
            std::swap(a[i], a[i | t]);
}

StateVector apply_1q(StateVector state, unsigned qubit, const Gate1 &u) {
    apply_1q_inplace(state.raw(), qubit, u);
    state.check_norm("apply_1q");
    return state;
}

StateVector apply_cnot(StateVector state, unsigned control, unsigned target) {
    apply_cnot_inplace(state.raw(), control, target);
    state.check_norm("apply_cnot");
    return state;
}

namespace {
void check_orthonormal(const std::vector<std::vector<cplx>> &vs, std::uint64_t dim) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i].size() != dim)
            throw std::invalid_argument("projector vector has wrong dimension");
        for (std::size_t j = 0; j <= i; ++j) {
            cplx ip = 0.0;
            for (std::uint64_t k = 0; k < dim; ++k)
                ip += std::conj(vs[j][k]) * vs[i][k];
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(ip - want) > kNormTol)
                throw std::invalid_argument("projector span is not orthonormal");
        }
    }
}

double checked_probability(double p) {
    if (p < -kNormTol || p > 1.0 + kNormTol)
        throw InvariantViolation("projection probability outside [0,1]: " + std::to_string(p));
    return std::min(1.0, std::max(0.0, p));
}
} // namespace

Projector Projector::identity() { return Projector{}; }

Projector Projector::span(std::vector<std::vector<cplx>> vectors) {
    if (vectors.empty())
        throw std::invalid_argument("empty projector span");
    check_orthonormal(vectors, vectors.front().size());
    Projector p;
    p.kind_ = Kind::Span;
    p.vectors_ = std::move(vectors);
    return p;
}

Projector Projector::on_x(RegisterLayout layout, std::vector<std::vector<cplx>> x_vectors) {
    if (x_vectors.empty())
        throw std::invalid_argument("empty projector span");
    check_orthonormal(x_vectors, std::uint64_t{1} << layout.n());
    Projector p;
    p.kind_ = Kind::XSpan;
    p.layout_ = std::move(layout);
    p.vectors_ = std::move(x_vectors);
    return p;
}

Projector Projector::set_balanced(RegisterLayout layout, const std::vector<bool> &in_S) {
    const std::uint64_t size = std::uint64_t{1} << layout.n();
    if (in_S.size() != size)
        throw std::invalid_argument("set membership vector must have 2^n entries");
    std::uint64_t s = 0;
    for (bool b : in_S)
        s += b ? 1 : 0;
    if (s == 0 || s == size)
        throw std::invalid_argument("degenerate set: S must be nonempty and proper");
    const double in = 1.0 / std::sqrt(2.0 * static_cast<double>(s));
    const double out = 1.0 / std::sqrt(2.0 * static_cast<double>(size - s));
    std::vector<cplx> v(size);
    for (std::uint64_t x = 0; x < size; ++x)
        v[x] = in_S[x] ? in : out;
    Projector p;
    p.kind_ = Kind::XSpan;
    p.layout_ = std::move(layout);
    p.vectors_.push_back(std::move(v));
    return p;
}

double project_prob(const StateVector &state, const Projector &proj) {
    const auto &a = state.amplitudes();
    switch (proj.kind()) {
    case Projector::Kind::Identity:
        return checked_probability(state.norm_squared());
    case Projector::Kind::Span: {
        double acc = 0.0;
        for (const auto &v : proj.vectors()) {
            if (v.size() != a.size())
                throw std::invalid_argument("projector dimension mismatch");
            cplx ip = 0.0;
            for (std::uint64_t k = 0; k < a.size(); ++k)
                ip += std::conj(v[k]) * a[k];
            acc += std::norm(ip);
        }
        return checked_probability(acc);
    }
    case Projector::Kind::XSpan: {
        const auto &layout = proj.layout();
        layout.validate(state.num_qubits());
        // Bits outside X index the rest register; contract X against each vector.
        std::vector<unsigned> rest_bits;
        {
            std::vector<bool> is_x(state.num_qubits(), false);
            for (unsigned b : layout.x_bits)
                is_x[b] = true;
            for (unsigned b = 0; b < state.num_qubits(); ++b)
                if (!is_x[b])
                    rest_bits.push_back(b);
        }
        const std::uint64_t nrest = std::uint64_t{1} << rest_bits.size();
        double acc = 0.0;
        std::vector<cplx> overlap(nrest);
        for (const auto &v : proj.vectors()) {
            std::fill(overlap.begin(), overlap.end(), cplx{0.0, 0.0});
            for (std::uint64_t i = 0; i < a.size(); ++i) {
                if (a[i] == cplx{0.0, 0.0})
                    continue;
                overlap[gather(rest_bits, i)] += std::conj(v[layout.get_x(i)]) * a[i];
            }
            for (const auto &o : overlap)
                acc += std::norm(o);
        }
        return checked_probability(acc);
    }
    }
    return 0.0;
}

double project_prob(const Mixture &rho, const Projector &proj) {
    double total = 0.0, acc = 0.0;
    for (const auto &[w, s] : rho.components) {
        if (w < 0.0)
            throw std::invalid_argument("negative mixture weight");
        total += w;
        acc += w * project_prob(s, proj);
    }
    if (std::abs(total - 1.0) > kNormTol)
        throw std::invalid_argument("mixture weights do not sum to 1");
    return checked_probability(acc);
}

} // namespace qrom::qsim
