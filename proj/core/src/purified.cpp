#include "qrom/purified.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qrom/errors.hpp"

namespace qrom::oracle {

namespace {
constexpr unsigned kDensityQubitLimit = 12;
constexpr unsigned kClassicalTableBitsLimit = 20;
// A branch whose cell is already |phi0> up to this residual is not split.
constexpr double kSplitResidual = 1e-26;

double branch_norm(const std::vector<cplx> &v) {
    double acc = 0.0;
    for (const auto &a : v)
        acc += std::norm(a);
    return acc;
}

Eigen::Map<const Eigen::MatrixXcd> as_matrix(const std::vector<cplx> &v, unsigned rows_log2) {
    const Eigen::Index rows = Eigen::Index{1} << rows_log2;
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), rows,
                                              static_cast<Eigen::Index>(v.size()) / rows);
}
} // namespace

PurifiedOracle::PurifiedOracle(unsigned adv_qubits, unsigned n, unsigned m)
    : adv_(adv_qubits), n_(n), m_(m) {
    if (m == 0)
        throw std::invalid_argument("purified oracle needs m >= 1");
    if (n > 5)
        throw CapExceeded("purified oracle supports n <= 5");
    qsim::check_cap(num_qubits());
    // |0>_adv (x) |phi0>^(2^n): uniform over every F configuration.
    const std::uint64_t dim = std::uint64_t{1} << num_qubits();
    const std::uint64_t fcount = dim >> adv_;
    const double amp = 1.0 / std::sqrt(static_cast<double>(fcount));
    std::vector<cplx> psi(dim, cplx{0.0, 0.0});
    for (std::uint64_t f = 0; f < fcount; ++f)
        psi[f << adv_] = amp;
    branches_.push_back(std::move(psi));
}

double PurifiedOracle::trace() const {
    double acc = 0.0;
    for (const auto &b : branches_)
        acc += branch_norm(b);
    return acc;
}

void PurifiedOracle::check_adv_qubit(unsigned q) const {
    if (q >= adv_)
        throw std::invalid_argument("register outside the adversary block");
}

void PurifiedOracle::query(const qsim::RegisterLayout &layout) {
    layout.validate(adv_);
    if (layout.n() != n_ || layout.m() != m_)
        throw std::invalid_argument("register sizes do not match the oracle");
    const std::uint64_t cell_mask = (std::uint64_t{1} << m_) - 1;
    for (auto &psi : branches_) {
        for (std::uint64_t i = 0; i < psi.size(); ++i) {
            const std::uint64_t x = layout.get_x(i);
            const std::uint64_t f = (i >> (adv_ + x * m_)) & cell_mask;
            if (f == 0)
                continue;
            const std::uint64_t j = layout.put_y(i, layout.get_y(i) ^ f);
            if (j > i)
                std::swap(psi[i], psi[j]);
        }
    }
}

void PurifiedOracle::apply_1q(unsigned qubit, const qsim::Gate1 &u) {
    check_adv_qubit(qubit);
    for (auto &psi : branches_)
        qsim::apply_1q_inplace(psi, qubit, u);
}

void PurifiedOracle::apply_cnot(unsigned control, unsigned target) {
    check_adv_qubit(control);
    check_adv_qubit(target);
    for (auto &psi : branches_)
        qsim::apply_cnot_inplace(psi, control, target);
}

void PurifiedOracle::reprogram(std::uint64_t x) {
    if (x >= cells())
        throw std::out_of_range("reprogrammed point out of range");
    const unsigned off = adv_ + static_cast<unsigned>(x) * m_;
    const std::uint64_t ny = std::uint64_t{1} << m_;
    const std::uint64_t cell_mask = (ny - 1) << off;
    const double amp = 1.0 / std::sqrt(static_cast<double>(ny));

    std::vector<std::vector<cplx>> out;
    for (auto &psi : branches_) {
        // Residual of psi outside |phi0>_{F_x}.
        double kept = 0.0;
        for (std::uint64_t r = 0; r < psi.size(); ++r) {
            if (r & cell_mask)
                continue;
            cplx s = 0.0;
            for (std::uint64_t c = 0; c < ny; ++c)
                s += psi[r | (c << off)];
            kept += std::norm(s) / static_cast<double>(ny);
        }
        if (branch_norm(psi) - kept <= kSplitResidual) {
            out.push_back(std::move(psi));
            continue;
        }
        for (std::uint64_t k = 0; k < ny; ++k) {
            std::vector<cplx> nb(psi.size(), cplx{0.0, 0.0});
            bool nonzero = false;
            for (std::uint64_t r = 0; r < psi.size(); ++r) {
                if (r & cell_mask)
                    continue;
                const cplx v = psi[r | (k << off)] * amp;
                if (v == cplx{0.0, 0.0})
                    continue;
                nonzero = true;
                for (std::uint64_t c = 0; c < ny; ++c)
                    nb[r | (c << off)] = v;
            }
            if (nonzero)
                out.push_back(std::move(nb));
        }
    }
    branches_ = std::move(out);
}

double PurifiedOracle::epsilon_x(std::uint64_t x) const {
    if (!is_pure())
        throw std::logic_error("epsilon_x is defined on pure states only");
    if (x >= cells())
        throw std::out_of_range("point out of range");
    const unsigned off = adv_ + static_cast<unsigned>(x) * m_;
    const std::uint64_t ny = std::uint64_t{1} << m_;
    const std::uint64_t cell_mask = (ny - 1) << off;
    const auto &psi = branches_.front();
    double overlap = 0.0;
    for (std::uint64_t r = 0; r < psi.size(); ++r) {
        if (r & cell_mask)
            continue;
        cplx s = 0.0;
        for (std::uint64_t c = 0; c < ny; ++c)
            s += psi[r | (c << off)];
        overlap += std::norm(s) / static_cast<double>(ny);
    }
    return std::min(1.0, std::max(0.0, 1.0 - overlap));
}

unsigned PurifiedOracle::max_non_phi0_cells(double tol) const {
    const double h = 1.0 / std::numbers::sqrt2;
    const qsim::Gate1 H{h, h, h, -h};
    const std::uint64_t cell_mask = (std::uint64_t{1} << m_) - 1;
    unsigned worst = 0;
    for (auto psi : branches_) {
        for (unsigned q = adv_; q < num_qubits(); ++q)
            qsim::apply_1q_inplace(psi, q, H);
        for (std::uint64_t i = 0; i < psi.size(); ++i) {
            if (std::norm(psi[i]) <= tol)
                continue;
            unsigned count = 0;
            for (std::uint64_t x = 0; x < cells(); ++x)
                if ((i >> (adv_ + x * m_)) & cell_mask)
                    ++count;
            worst = std::max(worst, count);
        }
    }
    return worst;
}

Eigen::MatrixXcd PurifiedOracle::adversary_density() const {
    const Eigen::Index d = Eigen::Index{1} << adv_;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (const auto &psi : branches_) {
        auto M = as_matrix(psi, adv_);
        rho.noalias() += M * M.adjoint();
    }
    return rho;
}

Eigen::MatrixXcd PurifiedOracle::reduced_density(const std::vector<unsigned> &keep) const {
    const unsigned nq = num_qubits();
    std::vector<bool> kept(nq, false);
    for (unsigned q : keep) {
        if (q >= nq || kept[q])
            throw std::invalid_argument("bad qubit list for partial trace");
        kept[q] = true;
    }
    std::vector<unsigned> rest;
    for (unsigned q = 0; q < nq; ++q)
        if (!kept[q])
            rest.push_back(q);
    const Eigen::Index dk = Eigen::Index{1} << keep.size();
    const Eigen::Index dr = Eigen::Index{1} << rest.size();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
    Eigen::MatrixXcd M(dk, dr);
    for (const auto &psi : branches_) {
        M.setZero();
        for (std::uint64_t i = 0; i < psi.size(); ++i) {
            std::uint64_t a = 0, b = 0;
            for (std::size_t k = 0; k < keep.size(); ++k)
                a |= ((i >> keep[k]) & 1ULL) << k;
            for (std::size_t k = 0; k < rest.size(); ++k)
                b |= ((i >> rest[k]) & 1ULL) << k;
            M(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = psi[i];
        }
        rho.noalias() += M * M.adjoint();
    }
    return rho;
}

Eigen::MatrixXcd PurifiedOracle::density_matrix() const {
    if (num_qubits() > kDensityQubitLimit)
        throw CapExceeded("density matrix materialization limited to 12 qubits");
    const Eigen::Index d = Eigen::Index{1} << num_qubits();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (const auto &psi : branches_) {
        Eigen::Map<const Eigen::VectorXcd> v(psi.data(), d);
        rho.noalias() += v * v.adjoint();
    }
    return rho;
}

std::vector<PurifiedOracle::Outcome> PurifiedOracle::measurement_outcomes(double tol) const {
    const unsigned fbits = m_ * static_cast<unsigned>(cells());
    if (fbits > kClassicalTableBitsLimit)
        throw CapExceeded("F register too large to enumerate");
    const std::uint64_t nf = std::uint64_t{1} << fbits;
    const Eigen::Index d = Eigen::Index{1} << adv_;
    const std::uint64_t cell_mask = (std::uint64_t{1} << m_) - 1;
    std::vector<Outcome> out;
    for (std::uint64_t f = 0; f < nf; ++f) {
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
        double p = 0.0;
        for (const auto &psi : branches_) {
            Eigen::Map<const Eigen::VectorXcd> v(psi.data() + (f << adv_), d);
            p += v.squaredNorm();
            rho.noalias() += v * v.adjoint();
        }
        if (p <= tol)
            continue;
        std::vector<std::uint64_t> table(cells());
        for (std::uint64_t x = 0; x < cells(); ++x)
            table[x] = (f >> (x * m_)) & cell_mask;
        out.push_back(Outcome{OracleTable(n_, m_, std::move(table)), p, rho / p});
    }
    return out;
}

PurifiedOracle::Outcome PurifiedOracle::measure(Rng &rng) const {
    auto outcomes = measurement_outcomes();
    if (outcomes.empty())
        throw InvariantViolation("purified oracle has zero trace");
    double u = uniform01(rng) * trace();
    for (auto &o : outcomes) {
        if (u < o.probability)
            return o;
        u -= o.probability;
    }
    return outcomes.back();
}

PurifiedOracle purified_init(unsigned adv_qubits, unsigned n, unsigned m) {
    return PurifiedOracle(adv_qubits, n, m);
}

PurifiedOracle purified_query(PurifiedOracle po, const qsim::RegisterLayout &layout) {
    po.query(layout);
    return po;
}

PurifiedOracle purified_reprogram(PurifiedOracle po, std::uint64_t x) {
    po.reprogram(x);
    return po;
}

double epsilon_x(const PurifiedOracle &po, std::uint64_t x) { return po.epsilon_x(x); }

double trace_distance(const Eigen::MatrixXcd &rho, const Eigen::MatrixXcd &sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("density matrices differ in dimension");
    Eigen::MatrixXcd diff = rho - sigma;
    diff = 0.5 * (diff + diff.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

unsigned AdversaryCircuit::query_count() const {
    unsigned q = 0;
    for (const auto &s : steps)
        if (s.kind == CircuitStep::Kind::Query)
            ++q;
    return q;
}

qsim::Gate1 haar_gate(Rng &rng) {
    // Haar measure: cos^2(theta/2) uniform, independent uniform phases.
    const double two_pi = 2.0 * std::numbers::pi;
    const double c = std::sqrt(uniform01(rng));
    const double s = std::sqrt(1.0 - c * c);
    const double phi = two_pi * uniform01(rng);
    const double lam = two_pi * uniform01(rng);
    const double alpha = two_pi * uniform01(rng);
    const cplx g = std::polar(1.0, alpha);
    return {g * std::polar(c, -(phi + lam) / 2), -g * std::polar(s, (phi - lam) / 2),
            g * std::polar(s, -(phi - lam) / 2), g * std::polar(c, (phi + lam) / 2)};
}

namespace {
AdversaryCircuit empty_circuit(unsigned n, unsigned m, unsigned work) {
    AdversaryCircuit c;
    c.adv_qubits = n + m + work;
    c.layout = qsim::RegisterLayout::standard(n, m);
    return c;
}

CircuitStep random_gate_step(Rng &rng, unsigned adv) {
    CircuitStep s;
    if (adv >= 2 && uniform_below(rng, 3) == 0) {
        s.kind = CircuitStep::Kind::Cnot;
        s.a = static_cast<unsigned>(uniform_below(rng, adv));
        s.b = static_cast<unsigned>(uniform_below(rng, adv - 1));
        if (s.b >= s.a)
            ++s.b;
    } else {
        s.kind = CircuitStep::Kind::Gate;
        s.a = static_cast<unsigned>(uniform_below(rng, adv));
        s.u = haar_gate(rng);
    }
    return s;
}
} // namespace

AdversaryCircuit random_circuit(Rng &rng, unsigned n, unsigned m, unsigned work,
                                unsigned steps) {
    auto c = empty_circuit(n, m, work);
    for (unsigned k = 0; k < steps; ++k) {
        if (uniform_below(rng, 5) < 2)
            c.steps.push_back(CircuitStep{CircuitStep::Kind::Query});
        else
            c.steps.push_back(random_gate_step(rng, c.adv_qubits));
    }
    return c;
}

AdversaryCircuit random_query_circuit(Rng &rng, unsigned n, unsigned m, unsigned work,
                                      unsigned q, unsigned gates) {
    auto c = empty_circuit(n, m, work);
    for (unsigned k = 0; k < q; ++k) {
        for (unsigned g = 0; g < gates; ++g)
            c.steps.push_back(random_gate_step(rng, c.adv_qubits));
        c.steps.push_back(CircuitStep{CircuitStep::Kind::Query});
    }
    return c;
}

PurifiedOracle run_purified(const AdversaryCircuit &c, unsigned n, unsigned m) {
    PurifiedOracle po(c.adv_qubits, n, m);
    for (const auto &s : c.steps) {
        switch (s.kind) {
        case CircuitStep::Kind::Gate:
            po.apply_1q(s.a, s.u);
            break;
        case CircuitStep::Kind::Cnot:
            po.apply_cnot(s.a, s.b);
            break;
        case CircuitStep::Kind::Query:
            po.query(c.layout);
            break;
        }
    }
    return po;
}

qsim::StateVector run_classical(const AdversaryCircuit &c, const OracleTable &O) {
    qsim::StateVector psi(c.adv_qubits);
    for (const auto &s : c.steps) {
        switch (s.kind) {
        case CircuitStep::Kind::Gate:
            qsim::apply_1q_inplace(psi.raw(), s.a, s.u);
            break;
        case CircuitStep::Kind::Cnot:
            qsim::apply_cnot_inplace(psi.raw(), s.a, s.b);
            break;
        case CircuitStep::Kind::Query:
            qsim::apply_oracle_inplace(psi, c.layout, O);
            break;
        }
    }
    psi.check_norm("run_classical");
    return psi;
}

Eigen::MatrixXcd classical_average(const AdversaryCircuit &c, unsigned n, unsigned m) {
    const unsigned fbits = m * (1u << n);
    if (fbits > kClassicalTableBitsLimit)
        throw CapExceeded("too many classical tables to enumerate");
    const std::uint64_t ntables = std::uint64_t{1} << fbits;
    const std::uint64_t cell_mask = (std::uint64_t{1} << m) - 1;
    const Eigen::Index d = Eigen::Index{1} << c.adv_qubits;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    std::vector<std::uint64_t> table(std::uint64_t{1} << n);
    for (std::uint64_t t = 0; t < ntables; ++t) {
        for (std::uint64_t x = 0; x < table.size(); ++x)
            table[x] = (t >> (x * m)) & cell_mask;
        auto psi = run_classical(c, OracleTable(n, m, table));
        Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), d);
        rho.noalias() += v * v.adjoint();
    }
    return rho / static_cast<double>(ntables);
}

} // namespace qrom::oracle
