#include "gcmetro/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gcmetro/error.hpp"

namespace gcmetro {

namespace {

constexpr double kAngleSlack = 1e-12;
constexpr complex kI{0.0, 1.0};

}  // namespace

BeamSplitterAngle::BeamSplitterAngle(double kappa) : kappa_(kappa) {
    if (!(kappa >= -kAngleSlack && kappa <= std::numbers::pi + kAngleSlack))
        throw ConfigError("beam-splitter angle must lie in [0, pi], got " + std::to_string(kappa));
    kappa_ = std::clamp(kappa, 0.0, std::numbers::pi);
}

BeamSplitterAngle BeamSplitterAngle::from_transmission(double transmission) {
    if (!(transmission >= 0.0 && transmission <= 1.0))
        throw ConfigError("transmission must lie in [0, 1], got " + std::to_string(transmission));
    return BeamSplitterAngle(2.0 * std::acos(std::sqrt(transmission)));
}

double BeamSplitterAngle::transmission() const { return t() * t(); }
double BeamSplitterAngle::t() const { return std::cos(kappa_ / 2.0); }
double BeamSplitterAngle::r_abs() const { return std::sin(kappa_ / 2.0); }

std::string_view to_string(QfiScenario s) {
    switch (s) {
        case QfiScenario::A: return "a";
        case QfiScenario::B: return "b";
        case QfiScenario::C: return "c";
    }
    return "?";
}

BilinearObservable arm2_number(const BeamSplitterAngle& bs) {
    const double c = bs.t(), s = bs.r_abs();
    return {c * c, s * s, kI * s * c};
}

BilinearObservable arm3_number(const BeamSplitterAngle& bs) {
    const double c = bs.t(), s = bs.r_abs();
    return {s * s, c * c, -kI * s * c};
}

QfimElements qfim_elements(const ModeMoments& m0, const ModeMoments& m1,
                           const BeamSplitterAngle& bs) {
    const BilinearObservable sum = arm2_number(bs) + arm3_number(bs);
    const BilinearObservable diff = arm2_number(bs) - arm3_number(bs);
    return {variance(sum, m0, m1), variance(diff, m0, m1), covariance(sum, diff, m0, m1)};
}

QfimElements qfim_elements_tabulated(const ModeMoments& m0, const ModeMoments& m1,
                                     const BeamSplitterAngle& bs) {
    const double k = bs.kappa();
    const double sk = std::sin(k), ck = std::cos(k);
    const double n0 = m0.mean_n, n1 = m1.mean_n;
    const complex b0 = m0.exp_b, b1 = m1.exp_b;
    const complex b0d = std::conj(b0), b1d = std::conj(b1);

    QfimElements f;
    f.f_ss = m0.var_n + m1.var_n;
    f.f_dd = ck * ck * (m0.var_n + m1.var_n) +
             2.0 * sk * sk *
                 (n0 * n1 - std::norm(b0) * std::norm(b1) -
                  std::real(std::conj(m0.exp_b2) * m1.exp_b2 - b0d * b0d * b1 * b1)) +
             sk * sk * (n0 + n1) -
             2.0 * std::abs(sk) * ck *
                 std::imag((m0.exp_bdag_n() - b0d * n0) * b1 + b0 * (m1.exp_bdag_n() - n1 * b1d));
    f.f_sd = ck * (m0.var_n - m1.var_n) +
             2.0 * std::abs(sk) *
                 std::imag(b0 * b1d - (m0.exp_nb - n0 * b0) * b1d + b0 * (m1.exp_bdag_n() - b1d * n1));
    return f;
}

double qfi_b_expanded(const ModeMoments& m0, const ModeMoments& m1, const BeamSplitterAngle& bs) {
    const double k = bs.kappa();
    const double sk = std::sin(k);
    const double c2 = bs.t() * bs.t(), s2 = bs.r_abs() * bs.r_abs();
    const double n0 = m0.mean_n, n1 = m1.mean_n;
    const complex b0 = m0.exp_b, b1 = m1.exp_b, b1d = std::conj(b1);
    return 4.0 * s2 * s2 * m0.var_n + 4.0 * c2 * c2 * m1.var_n +
           sk * sk * (n0 + n1 + 2.0 * (n0 * n1 - std::norm(b0) * std::norm(b1))) -
           2.0 * sk * sk * std::real(m0.exp_b2 * std::conj(m1.exp_b2) - b0 * b0 * b1d * b1d) -
           4.0 * sk * std::imag(b0 * b1d) -
           8.0 * std::abs(sk) * s2 * std::imag((m0.exp_nb - n0 * b0) * b1d) -
           8.0 * std::abs(sk) * c2 * std::imag(b0 * (m1.exp_bdag_n() - n1 * b1d));
}

double qfi(QfiScenario scenario, const ModeMoments& m0, const ModeMoments& m1,
           const BeamSplitterAngle& bs) {
    switch (scenario) {
        case QfiScenario::A: {
            const QfimElements f = qfim_elements(m0, m1, bs);
            if (f.f_ss <= 0.0) {
                if (f.f_dd <= 0.0) return 0.0;
                throw DegenerateInput(
                    "two-parameter QFI undefined: the sum phase carries no information (F_ss = 0)");
            }
            return f.f_dd - f.f_sd * f.f_sd / f.f_ss;
        }
        case QfiScenario::B: {
            const double direct = 4.0 * variance(arm3_number(bs), m0, m1);
            const QfimElements f = qfim_elements(m0, m1, bs);
            const double via_qfim = f.f_dd + f.f_ss - 2.0 * f.f_sd;
            if (std::abs(direct - via_qfim) > 1e-10 * std::max(1.0, std::abs(direct)))
                throw std::logic_error("single-arm QFI disagrees with QFIM combination");
            return direct;
        }
        case QfiScenario::C:
            return variance(arm2_number(bs), m0, m1) + variance(arm3_number(bs), m0, m1);
    }
    throw std::logic_error("unknown QFI scenario");
}

double qfi_specialized(QfiScenario scenario, const ModeMoments& m1, const BeamSplitterAngle& bs) {
    const double sk = std::sin(bs.kappa());
    const double c2 = bs.t() * bs.t(), s2 = bs.r_abs() * bs.r_abs();
    switch (scenario) {
        case QfiScenario::A: return sk * sk * m1.mean_n;
        case QfiScenario::B: return 4.0 * c2 * c2 * m1.var_n + sk * sk * m1.mean_n;
        case QfiScenario::C: return (c2 * c2 + s2 * s2) * m1.var_n + 0.5 * sk * sk * m1.mean_n;
    }
    throw std::logic_error("unknown QFI scenario");
}

double qcrb(double fisher) {
    if (!(fisher > 0.0)) throw DegenerateInput("QCRB undefined for non-positive Fisher information");
    return 1.0 / std::sqrt(fisher);
}

}  // namespace gcmetro
