#include "gcmetro/observables.hpp"

#include <cmath>

namespace gcmetro {

namespace {

// Cov(m0, W) with W = w b0^dag b1 + h.c.
double cov_n0_hop(complex w, const ModeMoments& m0, const ModeMoments& m1) {
    const complex anti = 2.0 * m0.exp_bdag_n() + std::conj(m0.exp_b);  // <{m0, b0^dag}>
    return std::real(w * (anti - 2.0 * m0.mean_n * std::conj(m0.exp_b)) * m1.exp_b);
}

// Cov(m1, W)
double cov_n1_hop(complex w, const ModeMoments& m0, const ModeMoments& m1) {
    const complex anti = 2.0 * m1.exp_nb + m1.exp_b;  // <{m1, b1}>
    return std::real(w * std::conj(m0.exp_b) * (anti - 2.0 * m1.mean_n * m1.exp_b));
}

// Cov(W1, W2)
double cov_hop_hop(complex w1, complex w2, const ModeMoments& m0, const ModeMoments& m1) {
    const complex pair = std::conj(m0.exp_b2) * m1.exp_b2 -
                         std::conj(m0.exp_b * m0.exp_b) * m1.exp_b * m1.exp_b;
    const double n0 = m0.mean_n, n1 = m1.mean_n;
    const double diag = n0 + n1 + 2.0 * n0 * n1 - 2.0 * std::norm(m0.exp_b) * std::norm(m1.exp_b);
    return 2.0 * std::real(w1 * w2 * pair) + std::real(w1 * std::conj(w2)) * diag;
}

}  // namespace

double mean(const BilinearObservable& o, const ModeMoments& m0, const ModeMoments& m1) {
    return o.p * m0.mean_n + o.q * m1.mean_n +
           2.0 * std::real(o.w * std::conj(m0.exp_b) * m1.exp_b);
}

double covariance(const BilinearObservable& o1, const BilinearObservable& o2,
                  const ModeMoments& m0, const ModeMoments& m1) {
    return o1.p * o2.p * m0.var_n + o1.q * o2.q * m1.var_n +
           o1.p * cov_n0_hop(o2.w, m0, m1) + o2.p * cov_n0_hop(o1.w, m0, m1) +
           o1.q * cov_n1_hop(o2.w, m0, m1) + o2.q * cov_n1_hop(o1.w, m0, m1) +
           cov_hop_hop(o1.w, o2.w, m0, m1);
}

double mean(const LinearQuadrature& x, const ModeMoments& m0, const ModeMoments& m1) {
    return 2.0 * std::real(x.A * m0.exp_b + x.B * m1.exp_b);
}

double variance(const LinearQuadrature& x, const ModeMoments& m0, const ModeMoments& m1) {
    // |A|^2 + |B|^2 is the vacuum contribution ([b, b^dag] = 1).
    return std::norm(x.A) + std::norm(x.B) +
           2.0 * std::real(x.A * x.A * m0.var_b() + x.B * x.B * m1.var_b()) +
           2.0 * std::norm(x.A) * (m0.mean_n - std::norm(m0.exp_b)) +
           2.0 * std::norm(x.B) * (m1.mean_n - std::norm(m1.exp_b));
}

}  // namespace gcmetro
