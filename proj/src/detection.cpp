#include "gcmetro/detection.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gcmetro/error.hpp"

namespace gcmetro {

namespace {

constexpr complex kI{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();
// A slope below this fraction of the signal scale counts as a fringe extremum.
constexpr double kSlopeFloor = 1e-12;

struct HalfAngles {
    double c, s, cp, sp;
};

HalfAngles half_angles(const InterferometerConfig& cfg) {
    return {std::cos(cfg.kappa / 2.0), std::sin(cfg.kappa / 2.0), std::cos(cfg.kappa_p / 2.0),
            std::sin(cfg.kappa_p / 2.0)};
}

BilinearObservable number_of(complex x0, complex x1) {
    return {std::norm(x0), std::norm(x1), std::conj(x0) * x1};
}

BilinearObservable number_slope_of(complex x0, complex x1, complex dx0, complex dx1) {
    return {2.0 * std::real(std::conj(x0) * dx0), 2.0 * std::real(std::conj(x1) * dx1),
            std::conj(dx0) * x1 + std::conj(x0) * dx1};
}

double apply_efficiency(double variance, double loss_noise, double eta) {
    return variance + (1.0 - eta) / eta * loss_noise;
}

SensitivityResult make_result(DetectionScheme scheme, double variance, double slope, double scale,
                              double loss_noise, double eta) {
    SensitivityResult r;
    r.scheme = scheme;
    r.ideal_variance = variance;
    r.loss_noise = loss_noise;
    r.slope = slope <= kSlopeFloor * scale ? 0.0 : slope;
    return apply_detection_loss(r, eta);
}

void check_eta(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidEfficiency(eta);
}

// Photon counts depend on phi1 - phi2 only, so both scenarios share one evaluation.
InterferometerConfig intensity_config(const InterferometerConfig& cfg) {
    InterferometerConfig c = cfg;
    c.scenario = PhaseScenario::B;
    return c;
}

}  // namespace

std::string_view to_string(PhaseScenario s) { return s == PhaseScenario::B ? "b" : "c"; }

std::string_view to_string(DetectionScheme s) {
    switch (s) {
        case DetectionScheme::DIFFERENCE: return "df";
        case DetectionScheme::SINGLE: return "sing";
        case DetectionScheme::HOMODYNE_B: return "hom_b";
        case DetectionScheme::HOMODYNE_C: return "hom_c";
    }
    return "?";
}

bool SensitivityResult::finite() const { return std::isfinite(delta_phi); }

void validate(const InterferometerConfig& cfg) {
    BeamSplitterAngle{cfg.kappa};
    BeamSplitterAngle{cfg.kappa_p};
    if (!std::isfinite(cfg.phi)) throw ConfigError("phase must be finite");
    if (cfg.phi_L && !std::isfinite(*cfg.phi_L)) throw ConfigError("local-oscillator phase must be finite");
    check_eta(cfg.eta);
}

OutputModes output_modes(const InterferometerConfig& cfg) {
    const auto [c, s, cp, sp] = half_angles(cfg);
    const bool b = cfg.scenario == PhaseScenario::B;
    const double w1 = b ? 1.0 : 0.5;
    const double w2 = b ? 0.0 : -0.5;
    const complex e1 = std::polar(1.0, -cfg.phi1());
    const complex e2 = std::polar(1.0, -cfg.phi2());
    const complex de1 = -kI * w1 * e1;
    const complex de2 = -kI * w2 * e2;

    OutputModes o;
    o.u0 = c * cp * e2 - s * sp * e1;
    o.u1 = kI * (c * sp * e1 + s * cp * e2);
    o.v0 = kI * (c * sp * e2 + s * cp * e1);
    o.v1 = c * cp * e1 - s * sp * e2;
    o.du0 = c * cp * de2 - s * sp * de1;
    o.du1 = kI * (c * sp * de1 + s * cp * de2);
    o.dv0 = kI * (c * sp * de2 + s * cp * de1);
    o.dv1 = c * cp * de1 - s * sp * de2;
    return o;
}

BilinearObservable output4_number(const InterferometerConfig& cfg) {
    const OutputModes o = output_modes(cfg);
    return number_of(o.u0, o.u1);
}

BilinearObservable output5_number(const InterferometerConfig& cfg) {
    const OutputModes o = output_modes(cfg);
    return number_of(o.v0, o.v1);
}

BilinearObservable difference_number(const InterferometerConfig& cfg) {
    return output4_number(cfg) - output5_number(cfg);
}

BilinearObservable output4_number_slope(const InterferometerConfig& cfg) {
    const OutputModes o = output_modes(cfg);
    return number_slope_of(o.u0, o.u1, o.du0, o.du1);
}

BilinearObservable difference_number_slope(const InterferometerConfig& cfg) {
    const OutputModes o = output_modes(cfg);
    return number_slope_of(o.u0, o.u1, o.du0, o.du1) - number_slope_of(o.v0, o.v1, o.dv0, o.dv1);
}

LinearQuadrature output4_quadrature(const InterferometerConfig& cfg, double phi_L) {
    const OutputModes o = output_modes(cfg);
    const complex lo = 0.5 * std::polar(1.0, -phi_L);
    return {lo * o.u0, lo * o.u1};
}

DifferenceCoeffs difference_coeffs(const InterferometerConfig& cfg) {
    const double k = cfg.kappa, kp = cfg.kappa_p, phi = cfg.phi;
    const double sh = std::sin(0.5 * (k + kp));
    const double ch = std::cos(k / 2.0), chp = std::cos(kp / 2.0);
    DifferenceCoeffs dc;
    dc.a_d = 1.0 - 2.0 * sh * sh + std::sin(k) * std::sin(kp) * (1.0 - std::cos(phi));
    dc.c_d = complex(std::abs(std::sin(kp)) * std::sin(phi),
                     std::abs(std::sin(k)) * (1.0 - 2.0 * chp * chp) +
                         (1.0 - 2.0 * ch * ch) * std::abs(std::sin(kp)) * std::cos(phi));
    return dc;
}

SingleModeCoeffs single_mode_coeffs(const InterferometerConfig& cfg) {
    const auto [c, s, cp, sp] = half_angles(cfg);
    const double sk = std::sin(cfg.kappa), skp = std::sin(cfg.kappa_p);
    const double cross = 0.5 * sk * skp * std::cos(cfg.phi);
    SingleModeCoeffs sc;
    sc.a0 = c * c * cp * cp + s * s * sp * sp - cross;
    sc.a1 = c * c * sp * sp + cp * cp * s * s + cross;
    sc.a01 = 0.5 * kI *
             (sk * (2.0 * cp * cp - 1.0) +
              skp * (c * c * std::polar(1.0, -cfg.phi) - s * s * std::polar(1.0, cfg.phi)));
    return sc;
}

SensitivityResult sensitivity_difference(const ModeMoments& m0, const ModeMoments& m1,
                                         const InterferometerConfig& config) {
    validate(config);
    const InterferometerConfig cfg = intensity_config(config);
    const double var = variance(difference_number(cfg), m0, m1);
    const double slope = std::abs(mean(difference_number_slope(cfg), m0, m1));
    const double total = m0.mean_n + m1.mean_n;
    return make_result(DetectionScheme::DIFFERENCE, var, slope, total, total, cfg.eta);
}

SensitivityResult sensitivity_single(const ModeMoments& m0, const ModeMoments& m1,
                                     const InterferometerConfig& config) {
    validate(config);
    const InterferometerConfig cfg = intensity_config(config);
    const BilinearObservable m4 = output4_number(cfg);
    const double var = variance(m4, m0, m1);
    const double slope = std::abs(mean(output4_number_slope(cfg), m0, m1));
    return make_result(DetectionScheme::SINGLE, var, slope, m0.mean_n + m1.mean_n, mean(m4, m0, m1),
                       cfg.eta);
}

double resolved_phi_L(const ModeMoments& m0, const ModeMoments& m1,
                      const InterferometerConfig& cfg) {
    if (cfg.phi_L) return *cfg.phi_L;
    const OutputModes o = output_modes(cfg);
    const complex g = o.du0 * m0.exp_b + o.du1 * m1.exp_b;
    return g == 0.0 ? 0.0 : std::arg(g);
}

double homodyne_mean(const ModeMoments& m0, const ModeMoments& m1, const InterferometerConfig& cfg) {
    return mean(output4_quadrature(cfg, resolved_phi_L(m0, m1, cfg)), m0, m1);
}

double homodyne_variance(const ModeMoments& m0, const ModeMoments& m1,
                         const InterferometerConfig& cfg) {
    return variance(output4_quadrature(cfg, resolved_phi_L(m0, m1, cfg)), m0, m1);
}

double homodyne_variance(const ModeMoments& m1, const InterferometerConfig& cfg) {
    return homodyne_variance(vacuum_moments(), m1, cfg);
}

SensitivityResult sensitivity_homodyne(const ModeMoments& m0, const ModeMoments& m1,
                                       const InterferometerConfig& cfg) {
    validate(cfg);
    const double phi_L = resolved_phi_L(m0, m1, cfg);
    const LinearQuadrature x = output4_quadrature(cfg, phi_L);
    const OutputModes o = output_modes(cfg);
    const complex lo = 0.5 * std::polar(1.0, -phi_L);
    const LinearQuadrature dx{lo * o.du0, lo * o.du1};
    const double slope = std::abs(mean(dx, m0, m1));
    const double scale = std::abs(m0.exp_b) + std::abs(m1.exp_b);
    const DetectionScheme scheme = cfg.scenario == PhaseScenario::B ? DetectionScheme::HOMODYNE_B
                                                                     : DetectionScheme::HOMODYNE_C;
    return make_result(scheme, variance(x, m0, m1), slope, scale, std::norm(x.A) + std::norm(x.B),
                       cfg.eta);
}

SensitivityResult sensitivity_homodyne(const ModeMoments& m1, const InterferometerConfig& cfg) {
    return sensitivity_homodyne(vacuum_moments(), m1, cfg);
}

SensitivityResult apply_detection_loss(const SensitivityResult& ideal, double eta) {
    check_eta(eta);
    SensitivityResult r = ideal;
    r.eta = eta;
    r.numerator_sd = std::sqrt(std::max(0.0, apply_efficiency(ideal.ideal_variance, ideal.loss_noise, eta)));
    r.delta_phi = r.slope > 0.0 ? r.numerator_sd / r.slope : kInf;
    return r;
}

double performance_ratio(double dphi_gha, double dphi_su) {
    if (!std::isfinite(dphi_gha) || !std::isfinite(dphi_su))
        throw Undefined("performance ratio undefined: a sensitivity is infinite");
    return dphi_gha / dphi_su;
}

double performance_ratio(const SensitivityResult& gha, const SensitivityResult& su) {
    return performance_ratio(gha.delta_phi, su.delta_phi);
}

namespace tabulated {

double difference_variance(const ModeMoments& m0, const ModeMoments& m1,
                           const InterferometerConfig& cfg) {
    const DifferenceCoeffs dc = difference_coeffs(cfg);
    const double ad = dc.a_d;
    const complex cd = dc.c_d;
    const double n0 = m0.mean_n, n1 = m1.mean_n;
    const complex b0 = m0.exp_b, b1d = std::conj(m1.exp_b);
    return ad * ad * (m0.var_n + m1.var_n) +
           4.0 * ad *
               std::real(cd * ((m0.exp_nb - n0 * b0) * b1d - b0 * (m1.exp_bdag_n() - n1 * b1d))) +
           std::norm(cd) * (n0 + n1) +
           2.0 * std::real(cd * cd * (m0.exp_b2 * std::conj(m1.exp_b2) - b0 * b0 * b1d * b1d)) +
           2.0 * std::norm(cd) * (n0 * n1 - std::norm(b0) * std::norm(m1.exp_b));
}

double output4_variance(const ModeMoments& m0, const ModeMoments& m1,
                        const InterferometerConfig& cfg) {
    return output4_variance(m0, m1, single_mode_coeffs(cfg));
}

double output4_variance(const ModeMoments& m0, const ModeMoments& m1, const SingleModeCoeffs& sc) {
    const double n0 = m0.mean_n, n1 = m1.mean_n;
    const complex b0 = m0.exp_b, b1 = m1.exp_b;
    const complex b0d = std::conj(b0), b1d = std::conj(b1);
    const complex n0_b0d = m0.exp_bdag_n() + b0d;  // <m0 b0^dag>
    const complex b1_n1 = m1.exp_bn();              // <b1 m1>
    return sc.a0 * sc.a0 * m0.var_n + sc.a1 * sc.a1 * m1.var_n +
           2.0 * std::abs(sc.a01 * sc.a01) *
               std::real(m0.exp_b2 * std::conj(m1.exp_b2) - b0 * b0 * b1d * b1d) +
           std::norm(sc.a01) *
               (n0 + n1 + 2.0 * n0 * n1 - 2.0 * std::norm(b0) * std::norm(b1)) +
           2.0 * sc.a0 * std::real(sc.a01 * (n0_b0d + m0.exp_bdag_n() - 2.0 * n0 * b0d) * b1) +
           2.0 * sc.a1 * std::real(sc.a01 * b0d * (m1.exp_nb + b1_n1 - 2.0 * n1 * b1));
}

double sensitivity_difference(const ModeMoments& m1, const InterferometerConfig& cfg) {
    const double slope = std::sin(cfg.kappa) * std::sin(cfg.kappa_p) * std::abs(std::sin(cfg.phi) * m1.mean_n);
    if (slope <= kSlopeFloor * m1.mean_n || slope == 0.0) return kInf;
    return std::sqrt(difference_variance(vacuum_moments(), m1, cfg)) / slope;
}

double sensitivity_single(const ModeMoments& m1, const InterferometerConfig& cfg) {
    const double slope = std::sin(cfg.kappa) * std::sin(cfg.kappa_p) * std::abs(std::sin(cfg.phi) * m1.mean_n);
    if (slope <= kSlopeFloor * m1.mean_n || slope == 0.0) return kInf;
    return 2.0 * std::sqrt(output4_variance(vacuum_moments(), m1, cfg)) / slope;
}

HomodyneDisplay homodyne(const ModeMoments& m1, const InterferometerConfig& cfg) {
    const auto [c, s, cp, sp] = half_angles(cfg);
    const double k1 = c * c * sp * sp, k2 = cp * cp * s * s;
    const double sks = std::sin(cfg.kappa) * std::sin(cfg.kappa_p);
    const double phi = cfg.phi;
    const double b_abs2 = std::norm(m1.exp_b);
    const double squeeze = std::abs(m1.exp_b2) - b_abs2;
    const double excess = m1.mean_n - b_abs2;
    HomodyneDisplay h;
    if (cfg.scenario == PhaseScenario::B) {
        h.variance = 0.25 - 0.5 * (k1 * std::cos(2.0 * phi) + k2 + 0.5 * sks * std::cos(phi)) * squeeze +
                     0.5 * (k1 + k2 + 0.5 * sks * std::cos(phi)) * excess;
        h.slope = cp * s * std::abs(std::cos(phi) * std::abs(m1.exp_b));
    } else {
        h.variance = 0.25 - 0.5 * ((k1 + k2) * std::cos(phi) + 0.5 * sks) * squeeze +
                     0.5 * (k1 + k2 + 0.5 * sks * std::cos(phi)) * excess;
        h.slope = std::abs(cp * s - c * sp) * std::abs(std::cos(phi / 2.0) * std::abs(m1.exp_b));
    }
    return h;
}

}  // namespace tabulated

}  // namespace gcmetro
