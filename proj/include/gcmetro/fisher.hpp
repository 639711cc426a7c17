#pragma once

#include <string_view>

#include "gcmetro/observables.hpp"

namespace gcmetro {

/// Mixing angle of a lossless beam splitter with t = cos(kappa/2) and
/// r = i sin(kappa/2). Restricted to [0, pi] so that sin(kappa) >= 0.
class BeamSplitterAngle {
  public:
    explicit BeamSplitterAngle(double kappa);

    /// kappa = 2 arccos(|t|) for intensity transmission |t|^2 in [0, 1].
    static BeamSplitterAngle from_transmission(double transmission);

    double kappa() const { return kappa_; }
    double transmission() const;  // |t|^2
    double t() const;             // cos(kappa/2)
    double r_abs() const;         // sin(kappa/2)

  private:
    double kappa_;
};

/// Entries of the 2x2 quantum Fisher information matrix for the sum and
/// difference phases phi_s = phi1 + phi2, phi_d = phi1 - phi2.
struct QfimElements {
    double f_ss = 0;
    double f_dd = 0;
    double f_sd = 0;
};

enum class QfiScenario { A, B, C };

std::string_view to_string(QfiScenario s);

/// Arm photon-number operators after the first beam splitter, written on the
/// input modes: m2 (reference arm) and m3 (phase arm).
BilinearObservable arm2_number(const BeamSplitterAngle& bs);
BilinearObservable arm3_number(const BeamSplitterAngle& bs);

/// QFIM for the product input rho0 (x) rho1, evaluated from the generator
/// covariances F_ij = 4 Cov(G_i, G_j) with G_s = (m2 + m3)/2, G_d = (m2 - m3)/2.
QfimElements qfim_elements(const ModeMoments& m0, const ModeMoments& m1,
                           const BeamSplitterAngle& bs);

/// The closed forms for F_ss, F_dd, F_sd as they are commonly tabulated.
/// They agree with qfim_elements whenever mode 0 is vacuum; with a populated
/// mode 0 the cross terms differ (factor 2 in F_dd, sign in F_sd).
QfimElements qfim_elements_tabulated(const ModeMoments& m0, const ModeMoments& m1,
                                     const BeamSplitterAngle& bs);

/// Expanded single-arm QFI 4 Var(m3) as a closed form in the input moments.
double qfi_b_expanded(const ModeMoments& m0, const ModeMoments& m1, const BeamSplitterAngle& bs);

/// Scenario QFI:
///   A: F_dd - F_sd^2 / F_ss (two-parameter, no external reference)
///   B: 4 Var(m3) (phase in one arm)
///   C: Var(m2) + Var(m3) (symmetric +-phi/2 split)
/// Scenario A throws DegenerateInput when F_ss = 0 but F_dd > 0; an input with
/// no photon-number fluctuations at all yields 0.
double qfi(QfiScenario scenario, const ModeMoments& m0, const ModeMoments& m1,
           const BeamSplitterAngle& bs);

/// Reduced forms for a vacuum in mode 0:
///   A: sin^2(kappa) <m1>
///   B: 4 cos^4(kappa/2) Var(m1) + sin^2(kappa) <m1>
///   C: (cos^4(kappa/2) + sin^4(kappa/2)) Var(m1) + sin^2(kappa) <m1> / 2
double qfi_specialized(QfiScenario scenario, const ModeMoments& m1, const BeamSplitterAngle& bs);

/// Quantum Cramer-Rao bound 1/sqrt(F) for a single repetition.
/// Throws DegenerateInput for F <= 0.
double qcrb(double fisher);

}  // namespace gcmetro
