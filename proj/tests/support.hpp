#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "gcmetro/algebra.hpp"
#include "gcmetro/error.hpp"
#include "gcmetro/states.hpp"

namespace support {

inline constexpr double kPi = std::numbers::pi;

inline double uniform(std::mt19937& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Parameters passing validate_params whose ladder stays positive up to
/// level 120 for both algebras.
inline gcmetro::AlgebraParams random_params(std::mt19937& rng, gcmetro::AlgebraKind kind) {
    using namespace gcmetro;
    for (;;) {
        AlgebraParams p;
        p.kind = kind;
        p.a = uniform(rng, -0.9, 0.9);
        p.k = 1.0;
        p.d = uniform(rng, 0.05, 3.0);
        p.e = uniform(rng, p.a * p.d - 0.25, p.a * p.d + 2.0);
        if (std::abs(p.a) < 1e-3 || std::abs(p.e) < 1e-3) continue;
        try {
            validate_params(p);
            for (AlgebraKind k : {AlgebraKind::GHA, AlgebraKind::SU11}) {
                AlgebraParams q = p;
                q.kind = k;
                build_ladder_seq(q, 120);
            }
            return p;
        } catch (const Error&) {
        }
    }
}

/// Normalized random single-mode state with support on 0..dim-1.
inline Eigen::VectorXcd random_state(std::mt19937& rng, int dim) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = {g(rng), g(rng)};
    return v / v.norm();
}

inline gcmetro::ModeMoments random_moments(std::mt19937& rng, int max_dim = 8) {
    const int dim = std::uniform_int_distribution<int>(1, max_dim)(rng);
    return gcmetro::moments(random_state(rng, dim));
}

/// Independent Poisson amplitude e^{-|z|^2/2} z^m / sqrt(m!).
inline std::complex<double> poisson_amplitude(std::complex<double> z, long m) {
    const double log_mag = -0.5 * std::norm(z) + m * std::log(std::abs(z)) - 0.5 * std::lgamma(m + 1.0);
    return std::polar(std::exp(log_mag), m * std::arg(z));
}

}  // namespace support
