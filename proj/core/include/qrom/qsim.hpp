#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "qrom/oracle.hpp"

// Dense statevector engine. Basis index bit k is qubit k. With the standard
// layout the X register occupies the high-order qubits and Y the low-order
// qubits, so |x>|y> has index (x << m) | y.
namespace qrom::qsim {

using cplx = std::complex<double>;

inline constexpr double kNormTol = 1e-10;
inline constexpr unsigned kDefaultQubitCap = 26;

// Cap on num_qubits; QROM_QUBIT_CAP overrides the default of 26.
unsigned qubit_cap();
void check_cap(unsigned num_qubits);

class StateVector {
  public:
    StateVector() : StateVector(0) {}
    // |0...0> on num_qubits qubits.
    explicit StateVector(unsigned num_qubits);

    static StateVector basis(unsigned num_qubits, std::uint64_t index);
    // Rejects non power-of-two lengths and norms off 1 by more than kNormTol.
    static StateVector from_amplitudes(std::vector<cplx> amplitudes);

    unsigned num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return amps_.size(); }
    const std::vector<cplx> &amplitudes() const { return amps_; }
    cplx operator[](std::uint64_t i) const { return amps_[i]; }

    double norm_squared() const;
    // Throws InvariantViolation when the norm drifted past kNormTol.
    void check_norm(const char *where) const;

    // Kernel access for module code; callers must keep the state unit-norm.
    std::vector<cplx> &raw() { return amps_; }

  private:
    unsigned num_qubits_;
    std::vector<cplx> amps_;
};

// x_bits[k] is the qubit holding bit k (LSB first) of the X value; same for Y.
struct RegisterLayout {
    std::vector<unsigned> x_bits;
    std::vector<unsigned> y_bits;

    static RegisterLayout standard(unsigned n, unsigned m);

    unsigned n() const { return static_cast<unsigned>(x_bits.size()); }
    unsigned m() const { return static_cast<unsigned>(y_bits.size()); }
    void validate(unsigned num_qubits) const;

    std::uint64_t get_x(std::uint64_t index) const;
    std::uint64_t get_y(std::uint64_t index) const;
    std::uint64_t put_x(std::uint64_t index, std::uint64_t x) const;
    std::uint64_t put_y(std::uint64_t index, std::uint64_t y) const;
};

// Bijection on {0,1}^n, checked on construction.
class Permutation {
  public:
    Permutation(unsigned n, std::vector<std::uint64_t> map);

    static Permutation identity(unsigned n);
    // x -> x + k mod 2^n.
    static Permutation add_constant(unsigned n, std::uint64_t k);

    unsigned n() const { return n_; }
    std::uint64_t operator()(std::uint64_t x) const { return map_[x]; }
    const std::vector<std::uint64_t> &map() const { return map_; }
    Permutation inverse() const;
    // Single orbit covering the whole domain.
    bool is_cyclic() const;

  private:
    unsigned n_;
    std::vector<std::uint64_t> map_;
};

StateVector prepare_uniform(unsigned n, unsigned m);

// |x>|y> -> |x>|y xor O(x)>.
StateVector apply_oracle(StateVector state, const RegisterLayout &layout,
                         const oracle::OracleTable &O);
void apply_oracle_inplace(StateVector &state, const RegisterLayout &layout,
                          const oracle::OracleTable &O);

// |x>|y> -> |sigma(x)>|y>.
StateVector apply_permutation(StateVector state, const RegisterLayout &layout,
                              const Permutation &perm);
void apply_permutation_inplace(StateVector &state, const RegisterLayout &layout,
                               const Permutation &perm);

// Row-major 2x2 unitary on one qubit, and CNOT. Used by adversary circuits.
using Gate1 = std::array<cplx, 4>;
StateVector apply_1q(StateVector state, unsigned qubit, const Gate1 &u);
StateVector apply_cnot(StateVector state, unsigned control, unsigned target);
void apply_1q_inplace(std::vector<cplx> &amps, unsigned qubit, const Gate1 &u);
void apply_cnot_inplace(std::vector<cplx> &amps, unsigned control, unsigned target);

class Projector {
  public:
    enum class Kind { Identity, Span, XSpan };

    static Projector identity();
    // Orthonormal vectors over the full space.
    static Projector span(std::vector<std::vector<cplx>> vectors);
    // Orthonormal vectors over the X register, tensored with identity elsewhere.
    static Projector on_x(RegisterLayout layout, std::vector<std::vector<cplx>> x_vectors);
    // 1/2 (|S> + |S'>)(<S| + <S'|) on X, S' the complement; in_S has 2^n entries.
    static Projector set_balanced(RegisterLayout layout, const std::vector<bool> &in_S);

    Kind kind() const { return kind_; }
    const std::vector<std::vector<cplx>> &vectors() const { return vectors_; }
    const RegisterLayout &layout() const { return layout_; }

  private:
    Kind kind_ = Kind::Identity;
    RegisterLayout layout_;
    std::vector<std::vector<cplx>> vectors_;
};

// <psi|P|psi>, in [0, 1].
double project_prob(const StateVector &state, const Projector &proj);

// Finite ensemble of weighted unit states; weights sum to 1.
struct Mixture {
    std::vector<std::pair<double, StateVector>> components;
};
double project_prob(const Mixture &rho, const Projector &proj);

} // namespace qrom::qsim
