#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qrom/oracle.hpp"
#include "qrom/qsim.hpp"
#include "qrom/rng.hpp"

namespace qrom::oracle {

using qsim::cplx;

// Joint adversary (x) F register for the superposition oracle. Qubits
// 0..adv-1 belong to the adversary; cell F_x occupies qubits
// adv + x*m .. adv + x*m + m-1 (LSB first).
//
// The state is an ensemble of unnormalized pure branches; their projectors
// sum to the joint density operator. One branch means the state is pure.
class PurifiedOracle {
  public:
    PurifiedOracle(unsigned adv_qubits, unsigned n, unsigned m);

    unsigned adv_qubits() const { return adv_; }
    unsigned n() const { return n_; }
    unsigned m() const { return m_; }
    unsigned num_qubits() const { return adv_ + m_ * (1u << n_); }
    std::uint64_t cells() const { return std::uint64_t{1} << n_; }

    bool is_pure() const { return branches_.size() == 1; }
    std::size_t branch_count() const { return branches_.size(); }
    const std::vector<std::vector<cplx>> &branches() const { return branches_; }
    double trace() const;

    // Controlled XOR from F_x into Y for each x; registers lie in the adversary block.
    void query(const qsim::RegisterLayout &adv_layout);
    void apply_1q(unsigned qubit, const qsim::Gate1 &u);
    void apply_cnot(unsigned control, unsigned target);
    // Tr_{F_x}(rho) (x) |phi0><phi0|_{F_x}.
    void reprogram(std::uint64_t x);

    // 1 - ||<phi0|_{F_x} |gamma>||^2; pure states only.
    double epsilon_x(std::uint64_t x) const;
    // Largest number of cells outside |phi0> over the support, after rotating
    // every cell so that |phi0> becomes |0>. Amplitudes with |a|^2 <= tol are ignored.
    unsigned max_non_phi0_cells(double tol = 1e-20) const;

    Eigen::MatrixXcd adversary_density() const;
    Eigen::MatrixXcd reduced_density(const std::vector<unsigned> &keep) const;
    // Full joint density operator; at most 12 qubits.
    Eigen::MatrixXcd density_matrix() const;

    struct Outcome {
        OracleTable table;
        double probability;
        Eigen::MatrixXcd adversary_state; // normalized conditional state
    };
    // Exact distribution of a full measurement of F in the computational basis.
    std::vector<Outcome> measurement_outcomes(double tol = 1e-15) const;
    Outcome measure(Rng &rng) const;

  private:
    void check_adv_qubit(unsigned q) const;

    unsigned adv_, n_, m_;
    std::vector<std::vector<cplx>> branches_;
};

PurifiedOracle purified_init(unsigned adv_qubits, unsigned n, unsigned m);
PurifiedOracle purified_query(PurifiedOracle po, const qsim::RegisterLayout &adv_layout);
PurifiedOracle purified_reprogram(PurifiedOracle po, std::uint64_t x);
double epsilon_x(const PurifiedOracle &po, std::uint64_t x);

double trace_distance(const Eigen::MatrixXcd &rho, const Eigen::MatrixXcd &sigma);

// Adversary circuits over the adversary block: gates, CNOTs and oracle queries.
struct CircuitStep {
    enum class Kind { Gate, Cnot, Query };
    Kind kind;
    unsigned a = 0;
    unsigned b = 0;
    qsim::Gate1 u{};
};

struct AdversaryCircuit {
    unsigned adv_qubits = 0;
    qsim::RegisterLayout layout; // X and Y inside the adversary block
    std::vector<CircuitStep> steps;

    unsigned query_count() const;
};

qsim::Gate1 haar_gate(Rng &rng);

// Adversary block: Y on qubit(s) 0..m-1, X on m..m+n-1, then `work` extra qubits.
AdversaryCircuit random_circuit(Rng &rng, unsigned n, unsigned m, unsigned work,
                                unsigned steps);
// Exactly q queries, each preceded by `gates` random gates.
AdversaryCircuit random_query_circuit(Rng &rng, unsigned n, unsigned m, unsigned work,
                                      unsigned q, unsigned gates);

PurifiedOracle run_purified(const AdversaryCircuit &c, unsigned n, unsigned m);
qsim::StateVector run_classical(const AdversaryCircuit &c, const OracleTable &O);
// Average of |psi_O><psi_O| over all 2^(m 2^n) tables.
Eigen::MatrixXcd classical_average(const AdversaryCircuit &c, unsigned n, unsigned m);

} // namespace qrom::oracle
