#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "gcmetro/algebra.hpp"

namespace gcmetro {

using complex = std::complex<double>;

inline constexpr double kDefaultTailTol = 1e-14;
inline constexpr long kDefaultMaxCutoff = 10000;

/// Truncated Fock expansion of an annihilation-operator eigenstate
/// B|zeta> = zeta|zeta> for the GHA or generalized su(1,1) algebra.
struct CoherentState {
    AlgebraParams params;
    complex zeta;
    Eigen::VectorXcd coeffs;   // alpha_0 .. alpha_M
    double normalization = 1;  // N(|zeta|) = alpha_0, from direct series summation
    double tail_bound = 0;     // upper bound on discarded probability
    LadderSeq ladder;          // ladder norms up to the cutoff

    AlgebraKind kind() const { return params.kind; }
    long cutoff() const { return static_cast<long>(coeffs.size()) - 1; }
};

/// Single-mode expectation values consumed by the Fisher-information and
/// sensitivity formulas. <b^dag m> = conj(exp_nb) and <b m> = exp_nb + exp_b.
struct ModeMoments {
    double mean_n = 0;   // <m>
    double mean_n2 = 0;  // <m^2>
    double var_n = 0;    // <m^2> - <m>^2
    complex exp_b{};     // <b>
    complex exp_b2{};    // <b^2>
    complex exp_nb{};    // <m b>

    complex exp_bdag_n() const { return std::conj(exp_nb); }
    complex exp_bn() const { return exp_nb + exp_b; }
    complex var_b() const { return exp_b2 - exp_b * exp_b; }
};

/// Coefficients alpha_m = N(|zeta|) zeta^m / N_{m-1}! with the cutoff chosen
/// adaptively. Stops once the relative term stays below tail_tol for five
/// consecutive levels and the ratio |zeta|^2 / N^2_M is below 1/2.
/// Throws NotConverged if max_cutoff is reached first.
CoherentState build_coherent_state(AlgebraKind kind, complex zeta, const AlgebraParams& params,
                                   double tail_tol = kDefaultTailTol,
                                   long max_cutoff = kDefaultMaxCutoff);

inline CoherentState build_coherent_state(const AlgebraParams& params, complex zeta,
                                          double tail_tol = kDefaultTailTol,
                                          long max_cutoff = kDefaultMaxCutoff) {
    return build_coherent_state(params.kind, zeta, params, tail_tol, max_cutoff);
}

ModeMoments moments(const CoherentState& state);
ModeMoments moments(const Eigen::VectorXcd& coeffs);
ModeMoments vacuum_moments();

/// Generalized hypergeometric series pFq(upper; lower; x) summed term by term
/// until the terms fall below rel_tol of the partial sum.
complex hypergeometric_pfq(const std::vector<complex>& upper, const std::vector<complex>& lower,
                           double x, double rel_tol = 1e-17, long max_terms = 100000);

struct NormalizationCheck {
    double closed_form = 0;      // N(|zeta|) from the closed hypergeometric form
    double direct = 0;           // N(|zeta|) from the direct series
    double rel_deviation = 0;    // |closed - direct| / direct
    bool within_tolerance = true;  // rel_deviation <= 1e-6
};

/// GHA: N = 1F1(d+1; d+a-e/d+1; |zeta|^2)^{-1/2}.
/// SU11: N = 2F3(d+1, d+a; w, s, a-e/d+d+1; |zeta|^2)^{-1/2}, the tabulated
/// closed form. Both assume k = 1. Deviations are reported, never thrown.
NormalizationCheck normalization_crosscheck(const CoherentState& state);

/// The su(1,1) closed form with the second upper parameter d+1, which is what
/// the Gamma-function factorial reduces to.
double su11_normalization_reduced_form(const CoherentState& state);

/// CSV rows "m,re_alpha,im_alpha,prob" with a header line.
void write_coefficients_csv(std::ostream& os, const CoherentState& state);

}  // namespace gcmetro
