#pragma once

#include <optional>
#include <string_view>

#include "gcmetro/fisher.hpp"
#include "gcmetro/observables.hpp"

namespace gcmetro {

/// How the total phase phi = phi1 - phi2 is split between the arms.
/// B: phi1 = phi, phi2 = 0.  C: phi1 = -phi2 = phi/2.
enum class PhaseScenario { B, C };

enum class DetectionScheme { DIFFERENCE, SINGLE, HOMODYNE_B, HOMODYNE_C };

std::string_view to_string(PhaseScenario s);
std::string_view to_string(DetectionScheme s);

struct InterferometerConfig {
    double kappa = 0;        // first beam splitter
    double kappa_p = 0;      // second beam splitter
    double phi = 0;          // total internal phase phi1 - phi2
    PhaseScenario scenario = PhaseScenario::B;
    std::optional<double> phi_L;  // local-oscillator phase; unset = aligned for maximal slope
    double eta = 1;          // detection efficiency in (0, 1]

    double phi1() const { return scenario == PhaseScenario::B ? phi : 0.5 * phi; }
    double phi2() const { return scenario == PhaseScenario::B ? 0.0 : -0.5 * phi; }
};

/// Throws ConfigError for angles outside [0, pi] and InvalidEfficiency for eta outside (0, 1].
void validate(const InterferometerConfig& cfg);

/// Output operators of the full interferometer in terms of the inputs,
/// b4 = u0 b0 + u1 b1 and b5 = v0 b0 + v1 b1, with their phi derivatives.
struct OutputModes {
    complex u0, u1, v0, v1;
    complex du0, du1, dv0, dv1;
};

OutputModes output_modes(const InterferometerConfig& cfg);

BilinearObservable output4_number(const InterferometerConfig& cfg);
BilinearObservable output5_number(const InterferometerConfig& cfg);
BilinearObservable difference_number(const InterferometerConfig& cfg);  // m4 - m5
/// phi derivatives of the observables above, as bilinear forms.
BilinearObservable output4_number_slope(const InterferometerConfig& cfg);
BilinearObservable difference_number_slope(const InterferometerConfig& cfg);

/// Quadrature Re{e^{-i phi_L} b4} for an explicit local-oscillator phase.
LinearQuadrature output4_quadrature(const InterferometerConfig& cfg, double phi_L);

struct DifferenceCoeffs {
    double a_d = 0;
    complex c_d{};
};

/// A_d = 1 - 2 sin^2((k+k')/2) + sin k sin k' (1 - cos phi)
/// C_d = |sin k'| sin phi + i[|sin k|(1 - 2cos^2(k'/2)) + (1 - 2cos^2(k/2))|sin k'| cos phi]
DifferenceCoeffs difference_coeffs(const InterferometerConfig& cfg);

struct SingleModeCoeffs {
    double a0 = 0;
    double a1 = 0;
    complex a01{};
};

/// Weights of <m4> = a0 <m0> + a1 <m1> + 2 Re{a01 <b0^dag><b1>}; a0 + a1 = 1.
SingleModeCoeffs single_mode_coeffs(const InterferometerConfig& cfg);

struct SensitivityResult {
    DetectionScheme scheme = DetectionScheme::DIFFERENCE;
    double delta_phi = 0;     // numerator_sd / slope, +inf when the slope vanishes
    double numerator_sd = 0;  // standard deviation of the measured observable
    double slope = 0;         // |d<S>/d phi|
    double eta = 1;
    double ideal_variance = 0;  // variance at eta = 1
    double loss_noise = 0;      // weight of (1 - eta)/eta in the lossy variance

    bool finite() const;
};

SensitivityResult sensitivity_difference(const ModeMoments& m0, const ModeMoments& m1,
                                         const InterferometerConfig& cfg);
SensitivityResult sensitivity_single(const ModeMoments& m0, const ModeMoments& m1,
                                     const InterferometerConfig& cfg);

/// Local-oscillator phase actually used: cfg.phi_L, or the phase maximising
/// |d<X>/d phi|.
double resolved_phi_L(const ModeMoments& m0, const ModeMoments& m1, const InterferometerConfig& cfg);

double homodyne_mean(const ModeMoments& m0, const ModeMoments& m1, const InterferometerConfig& cfg);
double homodyne_variance(const ModeMoments& m0, const ModeMoments& m1,
                         const InterferometerConfig& cfg);
/// Mode 0 in vacuum.
double homodyne_variance(const ModeMoments& m1, const InterferometerConfig& cfg);

SensitivityResult sensitivity_homodyne(const ModeMoments& m0, const ModeMoments& m1,
                                       const InterferometerConfig& cfg);
/// Mode 0 in vacuum; scheme HOMODYNE_B or HOMODYNE_C follows cfg.scenario.
SensitivityResult sensitivity_homodyne(const ModeMoments& m1, const InterferometerConfig& cfg);

/// Re-evaluates a lossless result behind detectors of efficiency eta.
/// Throws InvalidEfficiency for eta outside (0, 1].
SensitivityResult apply_detection_loss(const SensitivityResult& ideal, double eta);

/// R = dphi_gha / dphi_su. Throws Undefined if either side is infinite.
double performance_ratio(const SensitivityResult& gha, const SensitivityResult& su);
double performance_ratio(double dphi_gha, double dphi_su);

// Closed-form displays kept as cross-checks on the general route above.
namespace tabulated {

double difference_variance(const ModeMoments& m0, const ModeMoments& m1,
                           const InterferometerConfig& cfg);
double output4_variance(const ModeMoments& m0, const ModeMoments& m1,
                        const InterferometerConfig& cfg);
/// Same display with caller-supplied weights.
double output4_variance(const ModeMoments& m0, const ModeMoments& m1, const SingleModeCoeffs& sc);
/// Vacuum mode 0: dN_d / (sin k sin k' |sin phi <m1>|).
double sensitivity_difference(const ModeMoments& m1, const InterferometerConfig& cfg);
/// Vacuum mode 0: 2 dm4 / (sin k sin k' |sin phi <m1>|).
double sensitivity_single(const ModeMoments& m1, const InterferometerConfig& cfg);

struct HomodyneDisplay {
    double variance = 0;
    double slope = 0;
};
/// Scenario-specific quadrature variance and slope displays (vacuum mode 0).
HomodyneDisplay homodyne(const ModeMoments& m1, const InterferometerConfig& cfg);

}  // namespace tabulated

}  // namespace gcmetro
