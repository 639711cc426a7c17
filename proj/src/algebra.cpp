#include "gcmetro/algebra.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "gcmetro/error.hpp"

namespace gcmetro {

std::string_view to_string(AlgebraKind kind) {
    return kind == AlgebraKind::GHA ? "gha" : "su11";
}

AlgebraKind algebra_kind_from_string(std::string_view name) {
    if (name == "gha" || name == "GHA") return AlgebraKind::GHA;
    if (name == "su11" || name == "SU11" || name == "su") return AlgebraKind::SU11;
    throw ConfigError("unknown algebra kind '" + std::string(name) + "' (expected gha|su11)");
}

AlgebraParams harmonic_limit_params(AlgebraKind kind, double d) {
    return AlgebraParams{kind, 0.5, 1.0, d, d / 2.0, std::nullopt};
}

void validate_params(const AlgebraParams& p) {
    std::vector<std::string> bad;
    if (!std::isfinite(p.a) || !std::isfinite(p.k) || !std::isfinite(p.d) || !std::isfinite(p.e))
        bad.emplace_back("a, k, d, e finite");
    if (p.a == 0.0 || p.k == 0.0 || p.d == 0.0 || p.e == 0.0) bad.emplace_back("a, k, d, e non-zero");
    if (p.k != 0.0) {
        if (!(std::abs(p.a / p.k) < 1.0)) bad.emplace_back("|a/k|<1");
        if (!(p.d / p.k > 0.0)) bad.emplace_back("d/k>0");
        const double r = p.r.value_or(0.0);
        if (!(r >= 0.0 && r <= 1.0)) bad.emplace_back("r in [0,1]");
        const double lhs = -(4.0 * p.a * p.d - 4.0 * p.k * p.e) / (p.k * p.k);
        if (!(lhs >= r - 1.0)) bad.emplace_back("-(4ad-4ke)/k^2>=r-1");
    }
    if (!bad.empty()) throw InvalidParams(std::move(bad));
}

double ladder_sq(long m, const AlgebraParams& p) {
    const double v = ladder_sq_unchecked<double>(m, p);
    if (!(v > 0.0)) throw NonPositiveLadder(m);
    return v;
}

LadderSeq build_ladder_seq(const AlgebraParams& p, long cutoff) {
    if (cutoff < 0) throw Error("ladder cutoff must be non-negative");
    LadderSeq seq{p, {}, {}};
    seq.sq.reserve(static_cast<std::size_t>(cutoff) + 1);
    seq.log_fact_sq.reserve(static_cast<std::size_t>(cutoff) + 2);
    seq.log_fact_sq.push_back(0.0);
    for (long m = 0; m <= cutoff; ++m) {
        const double s = ladder_sq(m, p);
        seq.sq.push_back(s);
        seq.log_fact_sq.push_back(seq.log_fact_sq.back() + std::log(s));
    }
    return seq;
}

double casimir_residual(long m, const AlgebraParams& p) {
    using Ext = long double;
    const Ext em = epsilon<Ext>(m, p);
    const Ext e0 = epsilon<Ext>(0, p);
    const Ext lowered = ladder_sq_unchecked<Ext>(m - 1, p);
    if (p.kind == AlgebraKind::GHA) return static_cast<double>((lowered - em) + e0);
    return static_cast<double>((lowered - em * (em - 1)) + e0 * (e0 - 1));
}

std::optional<double> su11_log_factorial_sq_closed_form(long m, const AlgebraParams& p) {
    const double a = p.a, d = p.d, e = p.e;
    const double s = a + d + 1.0 + e / d;
    const double disc = s * s - 4.0 * (a + 2.0 * e + e / d);
    const double shift = d + a - e / d;  // GHA-type Pochhammer parameter
    const double pref = d * (a * d + 2.0 * d * e + e);
    if (pref <= 0.0 || shift + 1.0 <= 0.0 || d <= 0.0) return std::nullopt;

    // ln[Gamma(w + m) Gamma(s + m) / (Gamma(w + 1) Gamma(s + 1))]; for a complex
    // pair w, s = conj(w) the product is real.
    double log_gamma_ratio = 0.0;
    if (disc >= 0.0) {
        const double w = 0.5 * s - 0.5 * std::sqrt(disc);
        const double sg = 0.5 * s + 0.5 * std::sqrt(disc);
        if (w <= 0.0) return std::nullopt;
        log_gamma_ratio = std::lgamma(w + m) + std::lgamma(sg + m) - std::lgamma(w + 1.0) -
                          std::lgamma(sg + 1.0);
    } else {
        // Gamma(w+m)/Gamma(w+1) = prod_{j=1}^{m-1} (w + j), and 1/w for m = 0.
        const std::complex<double> w(0.5 * s, 0.5 * std::sqrt(-disc));
        for (long j = 1; j < m; ++j) log_gamma_ratio += 2.0 * std::log(std::abs(w + double(j)));
        if (m == 0) log_gamma_ratio = -2.0 * std::log(std::abs(w));
    }
    return std::log(pref) + std::lgamma(m + shift + 1.0) - 2.0 * std::lgamma(1.0 + d + m) -
           std::lgamma(shift + 1.0) + log_gamma_ratio + 2.0 * std::lgamma(d) +
           std::lgamma(static_cast<double>(m) + 1.0);
}

}  // namespace gcmetro
