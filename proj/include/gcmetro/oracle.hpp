#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gcmetro/detection.hpp"
#include "gcmetro/states.hpp"

namespace gcmetro::oracle {

/// Amplitudes over the truncated basis |m0, m1>, 0 <= m0, m1 <= cutoff,
/// stored with m0 as the slow index.
struct TwoModeState {
    long cutoff = 0;
    Eigen::VectorXcd amps;
    double norm_defect = 0;  // | sum |amps|^2 - 1 |

    long dim() const { return (cutoff + 1) * (cutoff + 1); }
    long index(long m0, long m1) const { return m0 * (cutoff + 1) + m1; }
    complex amp(long m0, long m1) const { return amps(index(m0, m1)); }
};

struct ModeOperator {
    Eigen::SparseMatrix<complex> matrix;
    bool hermitian = false;
};

/// Truncated two-mode space. Holds the per-shell eigendecompositions of the
/// beam-splitter generator b0^dag b1 + b1^dag b0, which do not depend on kappa.
class FockSpace {
  public:
    explicit FockSpace(long cutoff);

    long cutoff() const { return cutoff_; }
    long dim() const { return (cutoff_ + 1) * (cutoff_ + 1); }
    long index(long m0, long m1) const { return m0 * (cutoff_ + 1) + m1; }

    /// U = exp(i (kappa/2)(b0^dag b1 + b1^dag b0)) applied to s.
    TwoModeState beam_splitter(const TwoModeState& s, double kappa) const;

    ModeOperator annihilation(int mode) const;
    ModeOperator number(int mode) const;

  private:
    struct Shell {
        std::vector<long> idx;  // basis positions, ordered by m0
        Eigen::MatrixXd vecs;
        Eigen::VectorXd vals;
    };
    long cutoff_;
    std::vector<Shell> shells_;
};

/// Fock basis state |m0, m1>.
TwoModeState fock_state(long cutoff, long m0, long m1);

/// Smallest M whose discarded probability sum_{m > M} |c_m|^2 is below tol.
long required_cutoff(const Eigen::VectorXcd& coeffs, double tol = 1e-14);

/// Default oracle cutoff for an input: required_cutoff plus guard levels.
long default_cutoff(const CoherentState& state, long guard = 2);

/// |psi> = |0>_0 (x) |zeta>_1. Throws CutoffTooSmall if the cutoff would
/// discard more than 1e-14 of the input probability.
TwoModeState embed_input(const CoherentState& state, long cutoff);

/// Product of arbitrary single-mode coefficient vectors, mode 0 first.
TwoModeState embed_product(const Eigen::VectorXcd& c0, const Eigen::VectorXcd& c1, long cutoff);

/// Multiplies amplitudes by exp(-i phi m) on the given mode.
TwoModeState phase_shift(const TwoModeState& s, int mode, double phi);

complex expect(const ModeOperator& op, const TwoModeState& s);
/// <O^2> - <O>^2 via |O psi|^2. Throws NonHermitian unless op.hermitian.
double variance(const ModeOperator& op, const TwoModeState& s);

/// Observables on the output ports (slot 0 = port 4, slot 1 = port 5).
ModeOperator difference_number_op(const FockSpace& space);
ModeOperator output4_number_op(const FockSpace& space);
ModeOperator quadrature_op(const FockSpace& space, double phi_L);  // Re{e^{-i phi_L} b}

struct CircuitStates {
    TwoModeState input;
    TwoModeState after_bs1;  // slot 0 = arm 2, slot 1 = arm 3
    TwoModeState after_phase;
    TwoModeState output;     // slot 0 = port 4, slot 1 = port 5
};

/// BS1(kappa), phi2 on arm 2 and phi1 on arm 3, BS2(kappa').
CircuitStates run_interferometer(const FockSpace& space, const TwoModeState& input,
                                 const InterferometerConfig& cfg);

/// 4 Var(m3) on the state after the first beam splitter.
double generator_variance_qfi(const FockSpace& space, const TwoModeState& after_bs1);

/// Coefficients (S0, S1) of U^dag b_port U = S0 b0 + S1 b1, read off the
/// one-photon sector of the simulated circuit.
struct PortMap {
    complex s0, s1;
};
PortMap output4_port_map(const FockSpace& space, const InterferometerConfig& cfg);

struct OracleObservables {
    double mean_nd = 0, var_nd = 0;
    double mean_m4 = 0, var_m4 = 0;
    double mean_x = 0, var_x = 0;            // circuit path
    double mean_x_conj = 0, var_x_conj = 0;  // input-mode conjugation path
    double qfi_b = 0;
    double max_norm_defect = 0;
};

OracleObservables evaluate(const FockSpace& space, const TwoModeState& input,
                           const InterferometerConfig& cfg, double phi_L);

/// Single-mode moments from explicit ladder matrices on the coefficient vector.
ModeMoments mode_moments(const Eigen::VectorXcd& coeffs);

/// Heisenberg check: max |<i| U^dag b0 U - (cos(k/2) b0 + i sin(k/2) b1) |j>|
/// over basis states with total photon number <= cutoff - 2. Shells above the
/// cutoff are clipped, so only the interior is exact.
double heisenberg_deviation(const FockSpace& space, double kappa);

}  // namespace gcmetro::oracle
