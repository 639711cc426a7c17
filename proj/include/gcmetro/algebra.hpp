#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace gcmetro {

enum class AlgebraKind { GHA, SU11 };

std::string_view to_string(AlgebraKind kind);
AlgebraKind algebra_kind_from_string(std::string_view name);

/// Four-parameter deformation of the oscillator spectrum,
/// eps_n = n + (a n + e) / (k n + d).
struct AlgebraParams {
    AlgebraKind kind = AlgebraKind::GHA;
    double a = 0.5;
    double k = 1.0;
    double d = 0.2;
    double e = 0.1;
    // Admissibility offset r in [0, 1]. Unset means the weakest instance r = 0.
    std::optional<double> r;
};

/// Parameters for which the deformed spectrum is the ordinary oscillator
/// (a = k/2, e = d/2).
AlgebraParams harmonic_limit_params(AlgebraKind kind, double d = 0.2);

/// Throws InvalidParams listing every violated constraint.
void validate_params(const AlgebraParams& p);

/// beta(n) = (a n + e) / (k n + d)
template <typename Scalar = double>
Scalar beta(long n, const AlgebraParams& p) {
    const Scalar x = static_cast<Scalar>(n);
    return (static_cast<Scalar>(p.a) * x + static_cast<Scalar>(p.e)) /
           (static_cast<Scalar>(p.k) * x + static_cast<Scalar>(p.d));
}

template <typename Scalar = double>
Scalar epsilon(long n, const AlgebraParams& p) {
    return static_cast<Scalar>(n) + beta<Scalar>(n, p);
}

/// Raw squared ladder coefficient, no sign check.
///   GHA:  N^2_m = eps_{m+1} - eps_0
///   SU11: N^2_m = (eps_{m+1} - eps_0)(eps_{m+1} + eps_0 - 1)
/// m = -1 yields 0 for both algebras.
template <typename Scalar = double>
Scalar ladder_sq_unchecked(long m, const AlgebraParams& p) {
    if (m < 0) return Scalar(0);
    const Scalar e0 = epsilon<Scalar>(0, p);
    const Scalar e1 = epsilon<Scalar>(m + 1, p);
    if (p.kind == AlgebraKind::GHA) return e1 - e0;
    return (e1 - e0) * (e1 + e0 - Scalar(1));
}

/// Squared ladder coefficient; throws NonPositiveLadder if it is <= 0.
double ladder_sq(long m, const AlgebraParams& p);

/// Ladder norms together with the running log of (N_{m-1}!)^2.
struct LadderSeq {
    AlgebraParams params;
    std::vector<double> sq;            // sq[m] = N^2_m, m = 0..cutoff
    std::vector<double> log_fact_sq;   // log_fact_sq[m] = ln (N_{m-1}!)^2, m = 0..cutoff+1

    long cutoff() const { return static_cast<long>(sq.size()) - 1; }
};

LadderSeq build_ladder_seq(const AlgebraParams& p, long cutoff);

/// Deviation of <m|C|m> from its level-independent value, where C is the
/// Casimir operator of the selected algebra. Evaluated in extended precision.
double casimir_residual(long m, const AlgebraParams& p);

/// Gamma-function closed form for ln (N_{m-1}!)^2 of the generalized su(1,1)
/// algebra with k = 1. Cross-check only; the direct product is authoritative.
/// Returns nullopt when the closed form is not real-valued for these params.
std::optional<double> su11_log_factorial_sq_closed_form(long m, const AlgebraParams& p);

}  // namespace gcmetro
