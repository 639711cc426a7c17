#pragma once

#include "gcmetro/states.hpp"

namespace gcmetro {

/// Number-conserving quadratic observable on the two input modes,
///   O = p m0 + q m1 + w b0^dag b1 + conj(w) b1^dag b0.
/// Every photon-counting observable behind a passive two-mode network has
/// this form when written in terms of the input operators.
struct BilinearObservable {
    double p = 0;
    double q = 0;
    complex w{};
};

inline BilinearObservable operator+(const BilinearObservable& x, const BilinearObservable& y) {
    return {x.p + y.p, x.q + y.q, x.w + y.w};
}
inline BilinearObservable operator-(const BilinearObservable& x, const BilinearObservable& y) {
    return {x.p - y.p, x.q - y.q, x.w - y.w};
}
inline BilinearObservable operator*(double s, const BilinearObservable& x) {
    return {s * x.p, s * x.q, s * x.w};
}

/// <O> on the product state rho0 (x) rho1.
double mean(const BilinearObservable& o, const ModeMoments& m0, const ModeMoments& m1);

/// Symmetrized covariance (1/2)<{O1, O2}> - <O1><O2> on a product state.
double covariance(const BilinearObservable& o1, const BilinearObservable& o2,
                  const ModeMoments& m0, const ModeMoments& m1);

inline double variance(const BilinearObservable& o, const ModeMoments& m0, const ModeMoments& m1) {
    return covariance(o, o, m0, m1);
}

/// Linear quadrature X = A b0 + B b1 + h.c.
struct LinearQuadrature {
    complex A{};
    complex B{};
};

double mean(const LinearQuadrature& x, const ModeMoments& m0, const ModeMoments& m1);
double variance(const LinearQuadrature& x, const ModeMoments& m0, const ModeMoments& m1);

}  // namespace gcmetro
