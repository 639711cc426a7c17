#include "gcmetro/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "gcmetro/error.hpp"

namespace gcmetro::oracle {

namespace {

constexpr complex kI{0.0, 1.0};
constexpr double kInputTailTol = 1e-14;

using Triplet = Eigen::Triplet<complex>;

double norm_defect(const Eigen::VectorXcd& v) { return std::abs(v.squaredNorm() - 1.0); }

TwoModeState with_amps(long cutoff, Eigen::VectorXcd amps) {
    TwoModeState s;
    s.cutoff = cutoff;
    s.norm_defect = norm_defect(amps);
    s.amps = std::move(amps);
    return s;
}

ModeOperator from_triplets(long dim, const std::vector<Triplet>& t, bool hermitian) {
    ModeOperator op;
    op.matrix.resize(dim, dim);
    op.matrix.setFromTriplets(t.begin(), t.end());
    op.hermitian = hermitian;
    return op;
}

}  // namespace

FockSpace::FockSpace(long cutoff) : cutoff_(cutoff) {
    if (cutoff < 0) throw ConfigError("oracle cutoff must be non-negative");
    shells_.resize(2 * cutoff + 1);
    for (long n = 0; n <= 2 * cutoff; ++n) {
        Shell& sh = shells_[n];
        const long lo = std::max(0L, n - cutoff), hi = std::min(n, cutoff);
        const long size = hi - lo + 1;
        Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(size, size);
        for (long j = lo; j <= hi; ++j) {
            sh.idx.push_back(index(j, n - j));
            // b0^dag b1 |j, n-j> = sqrt((j+1)(n-j)) |j+1, n-j-1>
            if (j < hi) {
                const double el = std::sqrt(static_cast<double>((j + 1) * (n - j)));
                gen(j - lo + 1, j - lo) = el;
                gen(j - lo, j - lo + 1) = el;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gen);
        sh.vecs = es.eigenvectors();
        sh.vals = es.eigenvalues();
    }
}

TwoModeState FockSpace::beam_splitter(const TwoModeState& s, double kappa) const {
    if (s.cutoff != cutoff_) throw ConfigError("state and Fock space cutoffs differ");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim());
    for (const Shell& sh : shells_) {
        const long size = static_cast<long>(sh.idx.size());
        Eigen::VectorXcd x(size);
        for (long i = 0; i < size; ++i) x(i) = s.amps(sh.idx[i]);
        Eigen::VectorXcd y = sh.vecs.transpose().cast<complex>() * x;
        for (long i = 0; i < size; ++i) y(i) *= std::polar(1.0, 0.5 * kappa * sh.vals(i));
        x = sh.vecs.cast<complex>() * y;
        for (long i = 0; i < size; ++i) out(sh.idx[i]) = x(i);
    }
    return with_amps(cutoff_, std::move(out));
}

ModeOperator FockSpace::annihilation(int mode) const {
    std::vector<Triplet> t;
    for (long m0 = 0; m0 <= cutoff_; ++m0)
        for (long m1 = 0; m1 <= cutoff_; ++m1) {
            const long m = mode == 0 ? m0 : m1;
            if (m == 0) continue;
            const long to = mode == 0 ? index(m0 - 1, m1) : index(m0, m1 - 1);
            t.emplace_back(to, index(m0, m1), std::sqrt(static_cast<double>(m)));
        }
    return from_triplets(dim(), t, false);
}

ModeOperator FockSpace::number(int mode) const {
    std::vector<Triplet> t;
    for (long m0 = 0; m0 <= cutoff_; ++m0)
        for (long m1 = 0; m1 <= cutoff_; ++m1) {
            const long m = mode == 0 ? m0 : m1;
            if (m != 0) t.emplace_back(index(m0, m1), index(m0, m1), static_cast<double>(m));
        }
    return from_triplets(dim(), t, true);
}

TwoModeState fock_state(long cutoff, long m0, long m1) {
    if (m0 > cutoff || m1 > cutoff) throw CutoffTooSmall(cutoff, std::max(m0, m1));
    TwoModeState s;
    s.cutoff = cutoff;
    s.amps = Eigen::VectorXcd::Zero(s.dim());
    s.amps(s.index(m0, m1)) = 1.0;
    return s;
}

long required_cutoff(const Eigen::VectorXcd& coeffs, double tol) {
    double tail = 0.0;
    for (long m = coeffs.size() - 1; m >= 1; --m) {
        tail += std::norm(coeffs(m));
        if (tail >= tol) return m;
    }
    return 0;
}

long default_cutoff(const CoherentState& state, long guard) {
    return required_cutoff(state.coeffs, kInputTailTol) + guard;
}

TwoModeState embed_product(const Eigen::VectorXcd& c0, const Eigen::VectorXcd& c1, long cutoff) {
    const long need = std::max(required_cutoff(c0, kInputTailTol), required_cutoff(c1, kInputTailTol));
    if (cutoff < need) throw CutoffTooSmall(cutoff, need);
    TwoModeState s;
    s.cutoff = cutoff;
    s.amps = Eigen::VectorXcd::Zero(s.dim());
    const long n0 = std::min<long>(c0.size() - 1, cutoff), n1 = std::min<long>(c1.size() - 1, cutoff);
    for (long m0 = 0; m0 <= n0; ++m0)
        for (long m1 = 0; m1 <= n1; ++m1) s.amps(s.index(m0, m1)) = c0(m0) * c1(m1);
    s.norm_defect = norm_defect(s.amps);
    return s;
}

TwoModeState embed_input(const CoherentState& state, long cutoff) {
    Eigen::VectorXcd vac(1);
    vac(0) = 1.0;
    return embed_product(vac, state.coeffs, cutoff);
}

TwoModeState phase_shift(const TwoModeState& s, int mode, double phi) {
    TwoModeState out = s;
    for (long m0 = 0; m0 <= s.cutoff; ++m0)
        for (long m1 = 0; m1 <= s.cutoff; ++m1) {
            const double m = static_cast<double>(mode == 0 ? m0 : m1);
            out.amps(s.index(m0, m1)) *= std::polar(1.0, -phi * m);
        }
    return out;
}

complex expect(const ModeOperator& op, const TwoModeState& s) {
    return s.amps.dot(op.matrix * s.amps);
}

double variance(const ModeOperator& op, const TwoModeState& s) {
    if (!op.hermitian) throw NonHermitian("variance requested for a non-Hermitian operator");
    const Eigen::VectorXcd v = op.matrix * s.amps;
    const double m = std::real(s.amps.dot(v));
    return v.squaredNorm() - m * m;
}

ModeOperator difference_number_op(const FockSpace& space) {
    ModeOperator op;
    op.matrix = space.number(0).matrix - space.number(1).matrix;
    op.hermitian = true;
    return op;
}

ModeOperator output4_number_op(const FockSpace& space) { return space.number(0); }

ModeOperator quadrature_op(const FockSpace& space, double phi_L) {
    const Eigen::SparseMatrix<complex> b = space.annihilation(0).matrix;
    const complex lo = std::polar(0.5, -phi_L);
    ModeOperator op;
    op.matrix = lo * b + std::conj(lo) * Eigen::SparseMatrix<complex>(b.adjoint());
    op.hermitian = true;
    return op;
}

CircuitStates run_interferometer(const FockSpace& space, const TwoModeState& input,
                                 const InterferometerConfig& cfg) {
    CircuitStates c;
    c.input = input;
    c.after_bs1 = space.beam_splitter(input, cfg.kappa);
    c.after_phase = phase_shift(phase_shift(c.after_bs1, 0, cfg.phi2()), 1, cfg.phi1());
    c.output = space.beam_splitter(c.after_phase, cfg.kappa_p);
    return c;
}

double generator_variance_qfi(const FockSpace& space, const TwoModeState& after_bs1) {
    return 4.0 * variance(space.number(1), after_bs1);
}

PortMap output4_port_map(const FockSpace& space, const InterferometerConfig& cfg) {
    if (space.cutoff() < 1) return output4_port_map(FockSpace(1), cfg);
    // <vac| b0 U |1_j> is the coefficient of b_j in U^dag b0 U.
    const ModeOperator b0 = space.annihilation(0);
    auto coeff = [&](long m0, long m1) {
        const TwoModeState out =
            run_interferometer(space, fock_state(space.cutoff(), m0, m1), cfg).output;
        const Eigen::VectorXcd v = b0.matrix * out.amps;
        return v(space.index(0, 0));
    };
    return {coeff(1, 0), coeff(0, 1)};
}

OracleObservables evaluate(const FockSpace& space, const TwoModeState& input,
                           const InterferometerConfig& cfg, double phi_L) {
    const CircuitStates c = run_interferometer(space, input, cfg);
    OracleObservables r;
    r.max_norm_defect = std::max({c.input.norm_defect, c.after_bs1.norm_defect,
                                  c.after_phase.norm_defect, c.output.norm_defect});

    const ModeOperator nd = difference_number_op(space);
    r.mean_nd = std::real(expect(nd, c.output));
    r.var_nd = variance(nd, c.output);
    const ModeOperator m4 = output4_number_op(space);
    r.mean_m4 = std::real(expect(m4, c.output));
    r.var_m4 = variance(m4, c.output);
    const ModeOperator x = quadrature_op(space, phi_L);
    r.mean_x = std::real(expect(x, c.output));
    r.var_x = variance(x, c.output);

    const PortMap pm = output4_port_map(space, cfg);
    const complex lo = std::polar(0.5, -phi_L);
    const Eigen::SparseMatrix<complex> b_in =
        (lo * pm.s0) * space.annihilation(0).matrix + (lo * pm.s1) * space.annihilation(1).matrix;
    ModeOperator xc;
    xc.matrix = b_in + Eigen::SparseMatrix<complex>(b_in.adjoint());
    xc.hermitian = true;
    r.mean_x_conj = std::real(expect(xc, c.input));
    r.var_x_conj = variance(xc, c.input);

    r.qfi_b = generator_variance_qfi(space, c.after_bs1);
    return r;
}

ModeMoments mode_moments(const Eigen::VectorXcd& coeffs) {
    const long n = coeffs.size();
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
    for (long m = 1; m < n; ++m) b(m - 1, m) = std::sqrt(static_cast<double>(m));
    const Eigen::MatrixXcd num = b.adjoint() * b;
    const Eigen::VectorXcd& v = coeffs;
    ModeMoments mm;
    mm.mean_n = std::real(v.dot(num * v));
    mm.mean_n2 = (num * v).squaredNorm();
    mm.var_n = mm.mean_n2 - mm.mean_n * mm.mean_n;
    mm.exp_b = v.dot(b * v);
    mm.exp_b2 = v.dot(b * (b * v));
    mm.exp_nb = v.dot(num * (b * v));
    return mm;
}

double heisenberg_deviation(const FockSpace& space, double kappa) {
    const long M = space.cutoff();
    const long dim = space.dim();
    Eigen::MatrixXcd u(dim, dim);
    for (long col = 0; col < dim; ++col) {
        TwoModeState e;
        e.cutoff = M;
        e.amps = Eigen::VectorXcd::Zero(dim);
        e.amps(col) = 1.0;
        u.col(col) = space.beam_splitter(e, kappa).amps;
    }
    const Eigen::MatrixXcd b0 = Eigen::MatrixXcd(space.annihilation(0).matrix);
    const Eigen::MatrixXcd b1 = Eigen::MatrixXcd(space.annihilation(1).matrix);
    const Eigen::MatrixXcd lhs = u.adjoint() * b0 * u;
    const Eigen::MatrixXcd rhs = std::cos(kappa / 2.0) * b0 + kI * std::sin(kappa / 2.0) * b1;
    double worst = 0.0;
    for (long i0 = 0; i0 <= M - 2; ++i0)
        for (long i1 = 0; i0 + i1 <= M - 2; ++i1)
            for (long j0 = 0; j0 <= M - 2; ++j0)
                for (long j1 = 0; j0 + j1 <= M - 2; ++j1) {
                    const long i = space.index(i0, i1), j = space.index(j0, j1);
                    worst = std::max(worst, std::abs(lhs(i, j) - rhs(i, j)));
                }
    return worst;
}

}  // namespace gcmetro::oracle
