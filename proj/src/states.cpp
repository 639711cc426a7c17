#include "gcmetro/states.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "gcmetro/error.hpp"

namespace gcmetro {

namespace {

constexpr int kConsecutiveSmallTerms = 5;
constexpr double kMaxTailRatio = 0.5;

// Roots w, s of the quadratic whose Pochhammer symbols build the su(1,1)
// ladder factorial.
std::pair<complex, complex> su11_pochhammer_roots(const AlgebraParams& p) {
    const double sum = p.a + p.d + 1.0 + p.e / p.d;
    const double prod = p.a + 2.0 * p.e + p.e / p.d;
    const complex root = std::sqrt(complex(sum * sum - 4.0 * prod, 0.0));
    return {0.5 * sum - 0.5 * root, 0.5 * sum + 0.5 * root};
}

double inverse_sqrt_real(complex f) {
    if (!std::isfinite(f.real()) || f.real() <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 1.0 / std::sqrt(f.real());
}

}  // namespace

CoherentState build_coherent_state(AlgebraKind kind, complex zeta, const AlgebraParams& params,
                                   double tail_tol, long max_cutoff) {
    AlgebraParams p = params;
    p.kind = kind;
    validate_params(p);
    if (!(tail_tol > 0.0)) throw Error("tail tolerance must be positive");
    if (max_cutoff < 1) throw Error("max cutoff must be at least 1");

    CoherentState st;
    st.params = p;
    st.zeta = zeta;
    st.ladder = LadderSeq{p, {}, {0.0}};

    const double r = std::abs(zeta);
    if (r == 0.0) {
        st.coeffs = Eigen::VectorXcd::Ones(1);
        return st;
    }

    const double log_r2 = 2.0 * std::log(r);
    const double r2 = r * r;
    std::vector<double> log_terms;  // ln |zeta|^{2m} / (N_{m-1}!)^2
    double log_max = 0.0;
    double scaled_sum = 0.0;  // sum of exp(log_term - log_max)
    int small_run = 0;
    double tail = 1.0;
    long cutoff = -1;

    for (long m = 0; m <= max_cutoff; ++m) {
        const double lt = double(m) * log_r2 - st.ladder.log_fact_sq[static_cast<std::size_t>(m)];
        log_terms.push_back(lt);
        if (m == 0 || lt > log_max) {
            scaled_sum = (m == 0 ? 0.0 : scaled_sum * std::exp(log_max - lt));
            log_max = lt;
        }
        const double rel = std::exp(lt - log_max);
        scaled_sum += rel;
        const double rel_term = rel / scaled_sum;
        small_run = rel_term < tail_tol ? small_run + 1 : 0;

        const double sq = ladder_sq(m, p);
        st.ladder.sq.push_back(sq);
        st.ladder.log_fact_sq.push_back(st.ladder.log_fact_sq.back() + std::log(sq));

        const double q = r2 / sq;
        if (small_run >= kConsecutiveSmallTerms && q < kMaxTailRatio) {
            tail = rel_term * q / (1.0 - q);
            if (tail <= tail_tol) {
                cutoff = m;
                break;
            }
        }
    }
    if (cutoff < 0)
        throw NotConverged("coherent-state series did not reach tail tolerance within cutoff " +
                           std::to_string(max_cutoff));

    const double theta = std::arg(zeta);
    const double inv_sqrt_sum = 1.0 / std::sqrt(scaled_sum);
    st.coeffs.resize(cutoff + 1);
    for (long m = 0; m <= cutoff; ++m) {
        const double mag =
            std::exp(0.5 * (log_terms[static_cast<std::size_t>(m)] - log_max)) * inv_sqrt_sum;
        st.coeffs[m] = std::polar(mag, double(m) * theta);
    }
    st.normalization = std::abs(st.coeffs[0]);
    st.tail_bound = tail;
    return st;
}

ModeMoments moments(const Eigen::VectorXcd& c) {
    ModeMoments mm;
    const Eigen::Index n = c.size();
    double norm = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) {
        const double pm = std::norm(c[m]);
        norm += pm;
        mm.mean_n += double(m) * pm;
        mm.mean_n2 += double(m) * double(m) * pm;
    }
    mm.mean_n /= norm;
    mm.mean_n2 /= norm;
    for (Eigen::Index m = 0; m < n; ++m) {
        const double dev = double(m) - mm.mean_n;
        mm.var_n += dev * dev * std::norm(c[m]);
    }
    mm.var_n /= norm;
    for (Eigen::Index m = 0; m + 1 < n; ++m) {
        const complex hop = std::conj(c[m]) * c[m + 1] * std::sqrt(double(m + 1));
        mm.exp_b += hop;
        mm.exp_nb += double(m) * hop;
        if (m + 2 < n)
            mm.exp_b2 += std::conj(c[m]) * c[m + 2] * std::sqrt(double(m + 1) * double(m + 2));
    }
    mm.exp_b /= norm;
    mm.exp_nb /= norm;
    mm.exp_b2 /= norm;
    return mm;
}

ModeMoments moments(const CoherentState& state) { return moments(state.coeffs); }

ModeMoments vacuum_moments() { return ModeMoments{}; }

complex hypergeometric_pfq(const std::vector<complex>& upper, const std::vector<complex>& lower,
                           double x, double rel_tol, long max_terms) {
    complex term = 1.0;
    complex sum = 1.0;
    int small_run = 0;
    for (long j = 0; j < max_terms; ++j) {
        complex ratio = x / double(j + 1);
        for (const auto& a : upper) ratio *= a + double(j);
        for (const auto& b : lower) ratio /= b + double(j);
        term *= ratio;
        sum += term;
        if (term == 0.0) return sum;
        const bool small = std::abs(term) <= rel_tol * std::abs(sum) && std::abs(ratio) < 1.0;
        small_run = small ? small_run + 1 : 0;
        if (small_run >= 3) return sum;
    }
    throw NotConverged("hypergeometric series did not converge");
}

NormalizationCheck normalization_crosscheck(const CoherentState& state) {
    NormalizationCheck chk;
    chk.direct = state.normalization;
    const double x = std::norm(state.zeta);
    if (x == 0.0) {
        chk.closed_form = 1.0;
        return chk;
    }
    const AlgebraParams& p = state.params;
    complex f;
    try {
        if (p.kind == AlgebraKind::GHA) {
            f = hypergeometric_pfq({p.d + 1.0}, {p.d + p.a - p.e / p.d + 1.0}, x);
        } else {
            const auto [w, s] = su11_pochhammer_roots(p);
            f = hypergeometric_pfq({p.d + 1.0, p.d + p.a}, {w, s, p.a - p.e / p.d + p.d + 1.0}, x);
        }
    } catch (const NotConverged&) {
        f = std::numeric_limits<double>::quiet_NaN();
    }
    chk.closed_form = inverse_sqrt_real(f);
    chk.rel_deviation = std::isfinite(chk.closed_form)
                            ? std::abs(chk.closed_form - chk.direct) / chk.direct
                            : std::numeric_limits<double>::infinity();
    chk.within_tolerance = chk.rel_deviation <= 1e-6;
    return chk;
}

double su11_normalization_reduced_form(const CoherentState& state) {
    const double x = std::norm(state.zeta);
    if (x == 0.0) return 1.0;
    const AlgebraParams& p = state.params;
    const auto [w, s] = su11_pochhammer_roots(p);
    return inverse_sqrt_real(
        hypergeometric_pfq({p.d + 1.0, p.d + 1.0}, {w, s, p.d + p.a - p.e / p.d + 1.0}, x));
}

void write_coefficients_csv(std::ostream& os, const CoherentState& state) {
    os << "m,re_alpha,im_alpha,prob\n";
    char buf[128];
    for (Eigen::Index m = 0; m < state.coeffs.size(); ++m) {
        const complex a = state.coeffs[m];
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g\n", static_cast<long>(m), a.real(),
                      a.imag(), std::norm(a));
        os << buf;
    }
}

}  // namespace gcmetro
