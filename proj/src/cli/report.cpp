#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "gcmetro/cli.hpp"
#include "gcmetro/error.hpp"
#include "gcmetro/fisher.hpp"
#include "gcmetro/oracle.hpp"

namespace gcmetro::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Everything a row needs once the swept variable has been applied.
struct Prepared {
    ModeMoments m0, m1;
    InterferometerConfig intensity;
    InterferometerConfig hom_b, hom_c;

    double dphi(DetectionScheme scheme) const {
        switch (scheme) {
            case DetectionScheme::DIFFERENCE: return sensitivity_difference(m0, m1, intensity).delta_phi;
            case DetectionScheme::SINGLE: return sensitivity_single(m0, m1, intensity).delta_phi;
            case DetectionScheme::HOMODYNE_B: return sensitivity_homodyne(m0, m1, hom_b).delta_phi;
            case DetectionScheme::HOMODYNE_C: return sensitivity_homodyne(m0, m1, hom_c).delta_phi;
        }
        return kInf;
    }

    void set_phi(double phi) { intensity.phi = hom_b.phi = hom_c.phi = phi; }
};

Prepared prepare(const RunConfig& cfg, SweepVar var, double x) {
    RunConfig c = cfg;
    HomodyneSetup h = cfg.homodyne.value_or(HomodyneSetup{cfg.kappa, cfg.kappa_p});
    switch (var) {
        case SweepVar::PHI: c.phi = x; break;
        case SweepVar::KAPPA: c.kappa = h.kappa = BeamSplitterAngle(x).kappa(); break;
        case SweepVar::TRANSMISSION:
            c.kappa = h.kappa = BeamSplitterAngle::from_transmission(x).kappa();
            break;
        case SweepVar::ZETA_ABS:
            c.zeta = std::polar(x, cfg.zeta == 0.0 ? 0.0 : std::arg(cfg.zeta));
            break;
    }
    Prepared p;
    p.m0 = vacuum_moments();
    p.m1 = moments(build_coherent_state(c.params, c.zeta, c.tail_tol));
    p.intensity = {c.kappa, c.kappa_p, c.phi, c.scenario, c.phi_L, c.eta};
    p.hom_b = {h.kappa, h.kappa_p, c.phi, PhaseScenario::B, c.phi_L, c.eta};
    p.hom_c = p.hom_b;
    p.hom_c.scenario = PhaseScenario::C;
    return p;
}

// QFIs within rounding of zero (e.g. a fully reflecting splitter) give no bound.
double bound(double f, double scale) { return f > 1e-12 * scale ? 1.0 / std::sqrt(f) : kInf; }

void golden_section(const Prepared& base, DetectionScheme scheme, double lo, double hi, double& x_best,
                    double& f_best) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    Prepared p = base;
    auto f = [&](double phi) {
        p.set_phi(phi);
        return p.dphi(scheme);
    };
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a >= 1e-8) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    if (fm < f_best) {
        f_best = fm;
        x_best = xm;
    }
}

std::string describe(AlgebraKind kind, const InterferometerConfig& ic) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s kappa=%.4g kappa'=%.4g phi=%.4g scenario=%s",
                  std::string(to_string(kind)).c_str(), ic.kappa, ic.kappa_p, ic.phi,
                  std::string(to_string(ic.scenario)).c_str());
    return buf;
}

}  // namespace

SweepRow compute_row(const RunConfig& cfg, SweepVar var, double x) {
    const Prepared p = prepare(cfg, var, x);
    SweepRow r;
    r.x = x;
    r.dphi_df = p.dphi(DetectionScheme::DIFFERENCE);
    r.dphi_sing = p.dphi(DetectionScheme::SINGLE);
    r.dphi_hom_b = p.dphi(DetectionScheme::HOMODYNE_B);
    r.dphi_hom_c = p.dphi(DetectionScheme::HOMODYNE_C);
    try {
        r.qfi_a = qfi(QfiScenario::A, p.m0, p.m1, BeamSplitterAngle(p.intensity.kappa));
    } catch (const DegenerateInput&) {
        r.qfi_a = std::numeric_limits<double>::quiet_NaN();
    }
    r.qfi_b = qfi(QfiScenario::B, p.m0, p.m1, BeamSplitterAngle(p.hom_b.kappa));
    r.qfi_c = qfi(QfiScenario::C, p.m0, p.m1, BeamSplitterAngle(p.hom_b.kappa));
    const double scale = std::max(1.0, p.m1.mean_n + p.m1.var_n);
    r.qcrb_a = bound(r.qfi_a, scale);
    r.qcrb_b = bound(r.qfi_b, scale);
    r.qcrb_c = bound(r.qfi_c, scale);
    return r;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, const SweepSpec& sweep) {
    std::vector<SweepRow> rows;
    rows.reserve(sweep.steps);
    for (long i = 0; i < sweep.steps; ++i) rows.push_back(compute_row(cfg, sweep.variable, sweep.at(i)));
    return rows;
}

std::string format_number(double v) {
    if (!std::isfinite(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "x,dphi_df,dphi_sing,dphi_hom_b,dphi_hom_c,qcrb_a,qcrb_b,qcrb_c,qfi_a,qfi_b,qfi_c\n";
    for (const SweepRow& r : rows) {
        const double v[] = {r.x,      r.dphi_df, r.dphi_sing, r.dphi_hom_b, r.dphi_hom_c, r.qcrb_a,
                            r.qcrb_b, r.qcrb_c,  r.qfi_a,     r.qfi_b,      r.qfi_c};
        for (std::size_t i = 0; i < std::size(v); ++i) os << (i ? "," : "") << format_number(v[i]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const std::vector<SweepRow>& rows) {
    static const char* names[] = {"x",      "dphi_df", "dphi_sing", "dphi_hom_b", "dphi_hom_c", "qcrb_a",
                                  "qcrb_b", "qcrb_c",  "qfi_a",     "qfi_b",      "qfi_c"};
    os << "{\n  \"rows\": [";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const SweepRow& r = rows[k];
        const double v[] = {r.x,      r.dphi_df, r.dphi_sing, r.dphi_hom_b, r.dphi_hom_c, r.qcrb_a,
                            r.qcrb_b, r.qcrb_c,  r.qfi_a,     r.qfi_b,      r.qfi_c};
        os << (k ? ",\n    {" : "\n    {");
        for (std::size_t i = 0; i < std::size(v); ++i) {
            const std::string s = format_number(v[i]);
            os << (i ? ", " : "") << '"' << names[i] << "\": " << (s.empty() ? "null" : s);
        }
        os << '}';
    }
    os << (rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

std::vector<std::string> row_bound_violations(const SweepRow& row, double slack) {
    std::vector<std::string> out;
    auto check = [&](const char* name, double dphi, double qcrb) {
        if (std::isfinite(dphi) && std::isfinite(qcrb) && dphi < qcrb - slack) out.emplace_back(name);
    };
    check("dphi_df", row.dphi_df, row.qcrb_a);
    check("dphi_sing", row.dphi_sing, row.qcrb_a);
    check("dphi_hom_b", row.dphi_hom_b, row.qcrb_b);
    check("dphi_hom_c", row.dphi_hom_c, row.qcrb_c);
    return out;
}

double scheme_dphi(const RunConfig& cfg, DetectionScheme scheme, double phi) {
    return prepare(cfg, SweepVar::PHI, phi).dphi(scheme);
}

OptimizeResult optimize_phase(const RunConfig& cfg, DetectionScheme scheme, long grid) {
    if (grid < 3) throw ConfigError("optimizer grid needs at least 3 points");
    Prepared p = prepare(cfg, SweepVar::PHI, cfg.phi);
    const double h = kPi / static_cast<double>(grid + 1);
    long best = -1;
    double f_best = kInf;
    for (long i = 1; i <= grid; ++i) {
        p.set_phi(h * static_cast<double>(i));
        const double f = p.dphi(scheme);
        if (f < f_best) {
            f_best = f;
            best = i;
        }
    }
    if (best < 0)
        throw NoFiniteValue("every grid point diverges for scheme " + std::string(to_string(scheme)));
    double x_best = h * static_cast<double>(best);
    golden_section(p, scheme, h * static_cast<double>(best - 1), h * static_cast<double>(best + 1),
                   x_best, f_best);
    return {scheme, x_best, f_best};
}

std::vector<RatioEntry> compute_ratios(const RunConfig& gha, const RunConfig& su) {
    std::vector<RatioEntry> out;
    for (DetectionScheme s : {DetectionScheme::DIFFERENCE, DetectionScheme::SINGLE,
                              DetectionScheme::HOMODYNE_B, DetectionScheme::HOMODYNE_C}) {
        RatioEntry e{s, {s, 0.0, kInf}, {s, 0.0, kInf}, std::nullopt};
        try {
            e.gha = optimize_phase(gha, s, gha.grid);
        } catch (const NoFiniteValue&) {
        }
        try {
            e.su = optimize_phase(su, s, su.grid);
        } catch (const NoFiniteValue&) {
        }
        try {
            e.ratio = performance_ratio(e.gha.dphi_min, e.su.dphi_min);
        } catch (const Undefined&) {
        }
        out.push_back(e);
    }
    return out;
}

bool ValidationReport::passed() const {
    return std::all_of(items.begin(), items.end(),
                       [&](const ValidationItem& i) { return i.worst_delta < tolerance; });
}

const ValidationItem* ValidationReport::worst() const {
    const ValidationItem* w = nullptr;
    for (const ValidationItem& i : items)
        if (!w || i.worst_delta > w->worst_delta) w = &i;
    return w;
}

ValidationReport run_validation(const RunConfig& cfg) {
    if (!cfg.inject_fault.empty() && cfg.inject_fault != "a1-sign")
        throw ConfigError("unknown fault '" + cfg.inject_fault + "'");
    ValidationReport rep;
    auto record = [&](const std::string& name, double delta, const std::string& where) {
        auto it = std::find_if(rep.items.begin(), rep.items.end(),
                               [&](const ValidationItem& i) { return i.quantity == name; });
        if (it == rep.items.end()) {
            rep.items.push_back({name, std::abs(delta), where});
        } else if (std::abs(delta) > it->worst_delta || std::isnan(delta)) {
            it->worst_delta = std::isnan(delta) ? kInf : std::abs(delta);
            it->worst_at = where;
        }
    };

    const double angles[] = {kPi / 4, kPi / 2, 3 * kPi / 4};
    const double phases[] = {0.3, 1.0, 2.0};
    for (AlgebraKind kind : {AlgebraKind::GHA, AlgebraKind::SU11}) {
        AlgebraParams params = cfg.params;
        params.kind = kind;
        const CoherentState state = build_coherent_state(params, cfg.zeta, kDefaultTailTol);
        const ModeMoments m0 = vacuum_moments();
        const ModeMoments m1 = moments(state);

        const ModeMoments mo = oracle::mode_moments(state.coeffs);
        const double dm = std::max({std::abs(m1.mean_n - mo.mean_n), std::abs(m1.var_n - mo.var_n),
                                    std::abs(m1.exp_b - mo.exp_b), std::abs(m1.exp_b2 - mo.exp_b2),
                                    std::abs(m1.exp_nb - mo.exp_nb)});
        record("moments", dm, std::string(to_string(kind)));

        const long cutoff = cfg.oracle_cutoff.value_or(oracle::default_cutoff(state));
        const oracle::TwoModeState in = oracle::embed_input(state, cutoff);
        const oracle::FockSpace space(cutoff);

        for (double k : angles)
            for (double kp : angles)
                for (double phi : phases)
                    for (PhaseScenario sc : {PhaseScenario::B, PhaseScenario::C}) {
                        const InterferometerConfig ic{k, kp, phi, sc, cfg.phi_L, 1.0};
                        const std::string at = describe(kind, ic);
                        const double phi_L = resolved_phi_L(m0, m1, ic);
                        const oracle::OracleObservables o = oracle::evaluate(space, in, ic, phi_L);

                        record("norm", o.max_norm_defect, at);
                        record("<N_d>", mean(difference_number(ic), m0, m1) - o.mean_nd, at);
                        record("Var(N_d)", variance(difference_number(ic), m0, m1) - o.var_nd, at);
                        record("Var(N_d) display", tabulated::difference_variance(m0, m1, ic) - o.var_nd, at);
                        record("<m4>", mean(output4_number(ic), m0, m1) - o.mean_m4, at);
                        record("Var(m4)", variance(output4_number(ic), m0, m1) - o.var_m4, at);

                        SingleModeCoeffs smc = single_mode_coeffs(ic);
                        if (cfg.inject_fault == "a1-sign")
                            smc.a1 -= std::sin(k) * std::sin(kp) * std::cos(phi);
                        record("Var(m4) display", tabulated::output4_variance(m0, m1, smc) - o.var_m4, at);

                        record("<X>", homodyne_mean(m0, m1, ic) - o.mean_x, at);
                        record("Var(X)", homodyne_variance(m0, m1, ic) - o.var_x, at);
                        record("X circuit vs conjugation",
                               std::max(std::abs(o.mean_x - o.mean_x_conj), std::abs(o.var_x - o.var_x_conj)),
                               at);
                        record("F(b)", qfi(QfiScenario::B, m0, m1, BeamSplitterAngle(k)) - o.qfi_b, at);
                    }
    }
    return rep;
}

}  // namespace gcmetro::cli
