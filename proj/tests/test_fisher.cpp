#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gcmetro/error.hpp"
#include "gcmetro/fisher.hpp"
#include "gcmetro/oracle.hpp"
#include "support.hpp"

using namespace gcmetro;
using support::kPi;

namespace {

const AlgebraParams kGlauber{AlgebraKind::GHA, 0.5, 1.0, 0.2, 0.1, std::nullopt};
const AlgebraParams kSu{AlgebraKind::SU11, 0.5, 1.0, 0.2, 0.1, std::nullopt};

ModeMoments poisson(double mean) {
    return moments(build_coherent_state(kGlauber, std::sqrt(mean)));
}

}  // namespace

TEST_CASE("beam splitter angle") {
    const BeamSplitterAngle bs(kPi / 3);
    CHECK(bs.t() * bs.t() + bs.r_abs() * bs.r_abs() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(BeamSplitterAngle::from_transmission(0.5).kappa() == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(BeamSplitterAngle::from_transmission(1.0).kappa() == 0.0);
    CHECK(BeamSplitterAngle::from_transmission(0.0).kappa() == doctest::Approx(kPi));
    CHECK(BeamSplitterAngle::from_transmission(0.3).transmission() == doctest::Approx(0.3).epsilon(1e-14));
    CHECK_THROWS_AS(BeamSplitterAngle(-0.1), ConfigError);
    CHECK_THROWS_AS(BeamSplitterAngle(3.2), ConfigError);
    CHECK_THROWS_AS(BeamSplitterAngle::from_transmission(1.1), ConfigError);
}

TEST_CASE("QFIM examples") {
    const ModeMoments vac = vacuum_moments();
    SUBCASE("vacuum mode 0") {
        std::mt19937 rng(1);
        for (int i = 0; i < 20; ++i) {
            const ModeMoments m1 = support::random_moments(rng);
            const BeamSplitterAngle bs(support::uniform(rng, 0, kPi));
            const QfimElements q = qfim_elements(vac, m1, bs);
            const double c = std::cos(bs.kappa()), s = std::sin(bs.kappa());
            CHECK(q.f_ss == doctest::Approx(m1.var_n).epsilon(1e-12).scale(1));
            CHECK(q.f_sd == doctest::Approx(-c * m1.var_n).epsilon(1e-12).scale(1));
            CHECK(q.f_dd == doctest::Approx(c * c * m1.var_n + s * s * m1.mean_n).epsilon(1e-12).scale(1));
            const QfimElements t = qfim_elements_tabulated(vac, m1, bs);
            CHECK(t.f_ss == doctest::Approx(q.f_ss).epsilon(1e-12).scale(1));
            CHECK(t.f_sd == doctest::Approx(q.f_sd).epsilon(1e-12).scale(1));
            CHECK(t.f_dd == doctest::Approx(q.f_dd).epsilon(1e-12).scale(1));
        }
    }
    SUBCASE("vacuum in both modes") {
        const QfimElements q = qfim_elements(vac, vac, BeamSplitterAngle(1.0));
        CHECK(q.f_ss == 0.0);
        CHECK(q.f_dd == 0.0);
        CHECK(q.f_sd == 0.0);
    }
    SUBCASE("Glauber zeta = 1, balanced") {
        const QfimElements q = qfim_elements(vac, poisson(1.0), BeamSplitterAngle(kPi / 2));
        CHECK(q.f_ss == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(q.f_dd == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(q.f_sd) < 1e-12);
    }
}

TEST_CASE("scenario QFI examples") {
    const ModeMoments vac = vacuum_moments();
    const BeamSplitterAngle half(kPi / 2);
    for (QfiScenario s : {QfiScenario::A, QfiScenario::B, QfiScenario::C})
        CHECK(qfi(s, vac, vac, half) == 0.0);
    const ModeMoments g = poisson(1.0);
    CHECK(qfi(QfiScenario::A, vac, g, half) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qfi(QfiScenario::B, vac, g, half) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(qfi(QfiScenario::C, vac, g, half) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qcrb(qfi(QfiScenario::B, vac, g, half)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    const ModeMoments su = moments(build_coherent_state(kSu, 1.0));
    const double ratio = std::cyl_bessel_i(1.0, 2.0) / std::cyl_bessel_i(0.0, 2.0);
    CHECK(qfi_specialized(QfiScenario::A, su, half) == doctest::Approx(ratio).epsilon(1e-12));
    CHECK(qfi_specialized(QfiScenario::A, su, half) == doctest::Approx(0.6978).epsilon(1e-4));

    const BeamSplitterAngle zero(0.0);
    CHECK(qfi_specialized(QfiScenario::A, su, zero) == 0.0);
    CHECK(qfi_specialized(QfiScenario::B, su, zero) == doctest::Approx(4 * su.var_n).epsilon(1e-14));
}

TEST_CASE("scenario A degeneracy") {
    // A single photon in mode 1 has no number fluctuations, so f_ss = 0 while f_dd > 0.
    Eigen::VectorXcd one = Eigen::VectorXcd::Zero(2);
    one(1) = 1.0;
    const ModeMoments fock1 = moments(one);
    CHECK_THROWS_AS(qfi(QfiScenario::A, vacuum_moments(), fock1, BeamSplitterAngle(kPi / 2)), DegenerateInput);
    CHECK(qfi(QfiScenario::B, vacuum_moments(), fock1, BeamSplitterAngle(kPi / 2)) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("qcrb") {
    CHECK(qcrb(4.0) == 0.5);
    CHECK(qcrb(1.0) == 1.0);
    CHECK_THROWS_AS(qcrb(0.0), DegenerateInput);
    CHECK_THROWS_AS(qcrb(-1.0), DegenerateInput);
}

TEST_CASE("property: QFIM is positive semidefinite and F_b bounds F_a") {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 1000; ++trial) {
        const ModeMoments m0 = trial % 3 == 0 ? vacuum_moments() : support::random_moments(rng);
        const ModeMoments m1 = support::random_moments(rng);
        const BeamSplitterAngle bs(support::uniform(rng, 0, kPi));
        const QfimElements q = qfim_elements(m0, m1, bs);
        const double scale = 1 + q.f_ss + q.f_dd;
        CHECK(q.f_ss >= -1e-12 * scale);
        CHECK(q.f_dd >= -1e-12 * scale);
        CHECK(q.f_ss * q.f_dd - q.f_sd * q.f_sd >= -1e-10 * scale * scale);

        const double fb = qfi(QfiScenario::B, m0, m1, bs);
        CHECK(fb == doctest::Approx(q.f_dd + q.f_ss - 2 * q.f_sd).epsilon(1e-10).scale(scale));
        CHECK(fb == doctest::Approx(qfi_b_expanded(m0, m1, bs)).epsilon(1e-10).scale(scale));
        if (q.f_ss > 1e-9) {
            const double fa = qfi(QfiScenario::A, m0, m1, bs);
            CHECK(fa >= -1e-10 * scale);
            CHECK(fb >= fa - 1e-10 * scale);
        }
    }
}

TEST_CASE("property: specialized forms equal the general ones for vacuum mode 0") {
    std::mt19937 rng(8);
    const ModeMoments vac = vacuum_moments();
    for (int trial = 0; trial < 300; ++trial) {
        const ModeMoments m1 = support::random_moments(rng);
        const BeamSplitterAngle bs(kPi * trial / 299.0);
        for (QfiScenario s : {QfiScenario::B, QfiScenario::C}) {
            CHECK(qfi_specialized(s, m1, bs) == doctest::Approx(qfi(s, vac, m1, bs)).epsilon(1e-10).scale(1));
        }
        if (m1.var_n > 1e-9)
            CHECK(qfi_specialized(QfiScenario::A, m1, bs) ==
                  doctest::Approx(qfi(QfiScenario::A, vac, m1, bs)).epsilon(1e-10).scale(1));
    }
}

TEST_CASE("property: scenario C identity in kappa") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const ModeMoments m1 = support::random_moments(rng);
        const double k = support::uniform(rng, 0, kPi);
        const double s = std::sin(k);
        const double fc = qfi_specialized(QfiScenario::C, m1, BeamSplitterAngle(k));
        const double want = m1.var_n - 0.5 * s * s * (m1.var_n - m1.mean_n);
        CHECK(fc == doctest::Approx(want).epsilon(1e-12).scale(1));
        CHECK(std::abs(fc - m1.var_n) <= 0.5 * std::abs(m1.var_n - m1.mean_n) + 1e-12);
    }
}

TEST_CASE("property: F_a for coherent input is symmetric and peaks at the balanced point") {
    for (const AlgebraParams& p : {kGlauber, kSu}) {
        const ModeMoments m1 = moments(build_coherent_state(p, 1.0));
        CHECK(qfi_specialized(QfiScenario::A, m1, BeamSplitterAngle(0.0)) == 0.0);
        CHECK(std::abs(qfi_specialized(QfiScenario::A, m1, BeamSplitterAngle(kPi))) < 1e-15);
        const double peak = qfi_specialized(QfiScenario::A, m1, BeamSplitterAngle(kPi / 2));
        for (int i = 0; i <= 100; ++i) {
            const double k = kPi * i / 100.0;
            const double v = qfi_specialized(QfiScenario::A, m1, BeamSplitterAngle(k));
            CHECK(v <= peak + 1e-15);
            CHECK(v == doctest::Approx(qfi_specialized(QfiScenario::A, m1, BeamSplitterAngle(kPi - k))).epsilon(1e-12).scale(1));
        }
    }
}

TEST_CASE("F_b equals 4 Var(m3) from the Fock oracle") {
    for (const AlgebraParams& p : {kGlauber, kSu}) {
        const CoherentState s = build_coherent_state(p, 1.0);
        const oracle::FockSpace space(oracle::default_cutoff(s));
        const oracle::TwoModeState in = oracle::embed_input(s, space.cutoff());
        for (double k : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
            const auto after = space.beam_splitter(in, k);
            const double want = qfi_specialized(QfiScenario::B, moments(s), BeamSplitterAngle(k));
            CHECK(oracle::generator_variance_qfi(space, after) == doctest::Approx(want).epsilon(1e-8).scale(1));
        }
    }
}

TEST_CASE("tabulated QFIM differs once mode 0 is populated") {
    std::mt19937 rng(31);
    bool differs = false;
    for (int i = 0; i < 20 && !differs; ++i) {
        const ModeMoments m0 = support::random_moments(rng), m1 = support::random_moments(rng);
        const BeamSplitterAngle bs(1.1);
        const QfimElements a = qfim_elements(m0, m1, bs), b = qfim_elements_tabulated(m0, m1, bs);
        differs = std::abs(a.f_dd - b.f_dd) > 1e-6 || std::abs(a.f_sd - b.f_sd) > 1e-6;
    }
    CHECK(differs);
}
