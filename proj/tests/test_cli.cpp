#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "gcmetro/cli.hpp"
#include "gcmetro/error.hpp"
#include "support.hpp"

using namespace gcmetro;
using namespace gcmetro::cli;
using support::kPi;

namespace {

const std::string kConfigs = std::string(GCMETRO_SOURCE_DIR) + "/configs/";

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::map<std::string, double> parse_quantities(const std::string& csv) {
    std::map<std::string, double> m;
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        const auto comma = line.find(',');
        m[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    }
    return m;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("gcmetro_test_" + name)).string();
}

RunConfig glauber_config() {
    RunConfig c;
    c.params = AlgebraParams{AlgebraKind::GHA, 0.5, 1.0, 0.2, 0.1, std::nullopt};
    return c;
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("defaults and overrides") {
        const RunConfig c = parse_config(R"({"state": {"kind": "su11", "a": 0.7, "zeta_im": 0.5},
                                              "interferometer": {"transmission": 0.5, "scenario": "c", "phi_l": 0.25}})");
        CHECK(c.params.kind == AlgebraKind::SU11);
        CHECK(c.params.a == 0.7);
        CHECK(c.zeta == complex(1.0, 0.5));
        CHECK(c.kappa == doctest::Approx(kPi / 2));
        CHECK(c.scenario == PhaseScenario::C);
        REQUIRE(c.phi_L.has_value());
        CHECK(*c.phi_L == 0.25);
    }
    SUBCASE("unknown key names the field") {
        try {
            parse_config(R"({"interferometer": {"kapa": 1.0}})");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("interferometer.kapa") != std::string::npos);
        }
    }
    SUBCASE("wrong type names the field") {
        try {
            parse_config(R"({"sweep": {"steps": "many"}})");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("sweep.steps") != std::string::npos);
        }
    }
    SUBCASE("malformed JSON names line and column") {
        try {
            parse_config("{\n  \"state\": {\n    \"a\": 0.5,,\n  }\n}");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("conflicting beam splitter fields") {
        CHECK_THROWS_AS(parse_config(R"({"interferometer": {"kappa": 1.0, "transmission": 0.5}})"), ConfigError);
    }
    SUBCASE("range checks") {
        RunConfig c = glauber_config();
        c.eta = 1.5;
        CHECK_THROWS_AS(validate_config(c), InvalidEfficiency);
        c = glauber_config();
        c.sweep = SweepSpec{SweepVar::PHI, 1.0, 0.0, 10};
        CHECK_THROWS_AS(validate_config(c), ConfigError);
        c = glauber_config();
        c.params.a = 1.2;
        CHECK_THROWS_AS(validate_config(c), InvalidParams);
    }
}

TEST_CASE("shipped configs load and validate") {
    for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
        CAPTURE(entry.path().string());
        const RunConfig c = load_config(entry.path().string());
        CHECK_NOTHROW(validate_config(c));
    }
}

TEST_CASE("number formatting") {
    CHECK(format_number(std::numeric_limits<double>::infinity()).empty());
    CHECK(format_number(std::nan("")).empty());
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(std::stod(format_number(kPi)) == kPi);
}

TEST_CASE("moments command") {
    const Result g = invoke({"moments", "--kind", "gha", "--a", "0.5", "--d", "0.2", "--e", "0.1"});
    REQUIRE(g.code == kOk);
    auto q = parse_quantities(g.out);
    CHECK(q["mean_n"] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q["var_n"] == doctest::Approx(1.0).epsilon(1e-12));

    const Result v = invoke({"moments", "--zeta-re", "0"});
    REQUIRE(v.code == kOk);
    q = parse_quantities(v.out);
    CHECK(q["mean_n"] == 0.0);
    CHECK(q["var_n"] == 0.0);
    CHECK(q["exp_b_re"] == 0.0);

    const Result s = invoke({"moments", "--kind", "su11"});
    REQUIRE(s.code == kOk);
    CHECK(parse_quantities(s.out)["mean_n"] == doctest::Approx(0.6978).epsilon(1e-4));

    const std::string dump = temp_path("coeffs.csv");
    REQUIRE(invoke({"moments", "--kind", "su11", "--dump-coeffs", dump}).code == kOk);
    CHECK(slurp(dump).rfind("m,re_alpha,im_alpha,prob\n0,", 0) == 0);
    std::filesystem::remove(dump);
}

TEST_CASE("qfi sweep shape") {
    for (const char* name : {"fig3_gha.json", "fig3_su.json"}) {
        RunConfig c = load_config(kConfigs + name);
        REQUIRE(c.sweep);
        const std::vector<SweepRow> rows = run_sweep(c, *c.sweep);
        REQUIRE(rows.size() == 101);
        std::size_t best = 0;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].qfi_a > rows[best].qfi_a) best = i;
        CHECK(std::abs(rows[best].x - 0.5) <= 0.01 + 1e-12);
        CHECK(std::abs(rows.front().qfi_a) <= 1e-12);
        CHECK(std::abs(rows.back().qfi_a) <= 1e-12);
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].qfi_b >= rows[i - 1].qfi_b - 1e-12);

        const ModeMoments m1 = moments(build_coherent_state(c.params, c.zeta, c.tail_tol));
        const double mid = compute_row(c, SweepVar::KAPPA, kPi / 2).qfi_c;
        for (const SweepRow& r : rows) CHECK(std::abs(r.qfi_c - mid) <= 0.5 * std::abs(m1.var_n - m1.mean_n) + 1e-12);
    }
}

TEST_CASE("phase sweep examples") {
    RunConfig c = glauber_config();
    const SweepRow mid = compute_row(c, SweepVar::PHI, kPi / 2);
    CHECK(mid.dphi_df == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mid.qcrb_a == doctest::Approx(1.0).epsilon(1e-12));

    c.homodyne = HomodyneSetup{0.0, kPi};
    const std::vector<SweepRow> rows = run_sweep(c, SweepSpec{SweepVar::PHI, 0.0, kPi, 181});
    double best = std::numeric_limits<double>::infinity();
    for (const SweepRow& r : rows) best = std::min(best, r.dphi_hom_b);
    CHECK(best == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rows[10].qcrb_b == doctest::Approx(0.5).epsilon(1e-12));

    const SweepRow edge = compute_row(glauber_config(), SweepVar::PHI, 0.0);
    CHECK(std::isinf(edge.dphi_df));
    std::ostringstream csv, js;
    write_csv(csv, {edge});
    write_json(js, {edge});
    CHECK(csv.str().find("\n0,,") != std::string::npos);
    CHECK(js.str().find("\"dphi_df\": null") != std::string::npos);
}

TEST_CASE("loss never improves a sweep cell") {
    for (const auto& [ideal, lossy] : {std::pair{"fig2_gha.json", "fig2_gha_eta06.json"},
                                       std::pair{"fig2_su.json", "fig2_su_eta06.json"}}) {
        const RunConfig a = load_config(kConfigs + ideal), b = load_config(kConfigs + lossy);
        const auto ra = run_sweep(a, *a.sweep), rb = run_sweep(b, *b.sweep);
        REQUIRE(ra.size() == rb.size());
        for (std::size_t i = 0; i < ra.size(); ++i) {
            const double pairs[][2] = {{ra[i].dphi_df, rb[i].dphi_df},
                                       {ra[i].dphi_sing, rb[i].dphi_sing},
                                       {ra[i].dphi_hom_b, rb[i].dphi_hom_b},
                                       {ra[i].dphi_hom_c, rb[i].dphi_hom_c}};
            for (const auto& p : pairs)
                if (std::isfinite(p[0])) CHECK(p[1] >= p[0]);
        }
    }
}

TEST_CASE("shipped sweeps satisfy the row bound invariant") {
    for (const char* name : {"fig2_gha.json", "fig2_su.json", "fig2_gha_eta06.json", "fig2_su_eta06.json",
                             "fig3_gha.json", "fig3_su.json"}) {
        CAPTURE(name);
        const RunConfig c = load_config(kConfigs + name);
        for (const SweepRow& r : run_sweep(c, *c.sweep)) CHECK(row_bound_violations(r).empty());
    }
}

TEST_CASE("balanced homodyne falls below the tabulated scenario-C bound") {
    // Without the homodyne override both schemes share kappa = kappa' = pi/2,
    // where the tabulated F_c overestimates the information.
    RunConfig c = load_config(kConfigs + "fig2_su.json");
    c.homodyne.reset();
    bool violated = false;
    for (const SweepRow& r : run_sweep(c, *c.sweep)) {
        const auto v = row_bound_violations(r);
        for (const std::string& s : v) {
            CHECK(s.find("hom_c") != std::string::npos);
            violated = true;
        }
    }
    CHECK(violated);
}

TEST_CASE("optimize examples") {
    RunConfig c = glauber_config();
    OptimizeResult r = optimize_phase(c, DetectionScheme::DIFFERENCE);
    CHECK(r.phi_opt == doctest::Approx(kPi / 2).epsilon(1e-8));
    CHECK(r.dphi_min == doctest::Approx(1.0).epsilon(1e-12));
    c.zeta = 2.0;
    CHECK(optimize_phase(c, DetectionScheme::DIFFERENCE).dphi_min == doctest::Approx(0.5).epsilon(1e-12));
    c.zeta = 0.0;
    CHECK_THROWS_AS(optimize_phase(c, DetectionScheme::DIFFERENCE), NoFiniteValue);
    CHECK(invoke({"optimize", "--zeta-re", "0"}).code == kNonConvergence);

    const Result out = invoke({"optimize", "--a", "0.5", "--d", "0.2", "--e", "0.1", "--scheme", "df"});
    REQUIRE(out.code == kOk);
    CHECK(out.out.rfind("scheme,phi_opt,dphi_min\ndf,", 0) == 0);
}

TEST_CASE("optimize is stable under grid refinement") {
    for (const char* name : {"fig4_a05.json", "fig4_a07.json"}) {
        RunConfig c = load_config(kConfigs + name);
        for (AlgebraKind kind : {AlgebraKind::GHA, AlgebraKind::SU11}) {
            c.params.kind = kind;
            for (DetectionScheme s : {DetectionScheme::DIFFERENCE, DetectionScheme::SINGLE}) {
                const OptimizeResult a = optimize_phase(c, s, 721), b = optimize_phase(c, s, 1443);
                CHECK(std::abs(a.phi_opt - b.phi_opt) < 1e-6);
                CHECK(a.dphi_min == doctest::Approx(b.dphi_min).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("performance ratios") {
    const RunConfig same = glauber_config();
    for (const RatioEntry& e : compute_ratios(same, same)) {
        REQUIRE(e.ratio.has_value());
        CHECK(*e.ratio == 1.0);
    }
    for (const char* name : {"fig4_a05.json", "fig4_a07.json"}) {
        RunConfig gha = load_config(kConfigs + name), su = gha;
        gha.params.kind = AlgebraKind::GHA;
        su.params.kind = AlgebraKind::SU11;
        for (const RatioEntry& e : compute_ratios(gha, su))
            if (e.ratio) CHECK(*e.ratio < 1.0);
    }
    const Result r = invoke({"ratio", "--config", kConfigs + "fig4_a05.json"});
    CHECK(r.code == kOk);
    CHECK(r.out.rfind("scheme,phi_opt_gha,dphi_gha,phi_opt_su,dphi_su,ratio\n", 0) == 0);
}

TEST_CASE("validate command") {
    const Result ok = invoke({"validate"});
    CHECK(ok.code == kOk);
    CHECK(ok.out.find("PASS") != std::string::npos);

    const Result fault = invoke({"validate", "--inject-fault", "a1-sign"});
    CHECK(fault.code == kValidationFailure);
    CHECK(fault.out.find("FAIL: worst offender Var(m4)") != std::string::npos);

    const Result small = invoke({"validate", "--oracle-cutoff", "5"});
    CHECK(small.code == kConfigError);
    CHECK(small.err.find("cutoff") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(invoke({"sweep", "--bogus"}).code == kConfigError);
    CHECK(invoke({}).code == kConfigError);
    CHECK(invoke({"--help"}).code == kOk);
    CHECK(invoke({"sweep", "--a", "1.5"}).code == kConfigError);
    CHECK(invoke({"sweep", "--eta", "0"}).code == kConfigError);
    CHECK(invoke({"sweep", "--config", "/nonexistent/config.json"}).code == kConfigError);
    CHECK(invoke({"moments", "--kind", "su11", "--a", "-0.9", "--d", "5", "--e", "-4"}).code == kConfigError);

    const std::string bad = temp_path("bad.json");
    std::ofstream(bad) << "{\"state\": {\"zeta\": 1}}";
    const Result r = invoke({"sweep", "--config", bad});
    CHECK(r.code == kConfigError);
    CHECK(r.err.find("state.zeta") != std::string::npos);
    std::filesystem::remove(bad);
}

TEST_CASE("flags override the config file") {
    const Result r = invoke({"moments", "--config", kConfigs + "fig2_su.json", "--kind", "gha"});
    REQUIRE(r.code == kOk);
    CHECK(parse_quantities(r.out)["mean_n"] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("repeated runs are byte-identical") {
    for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
        const std::string cfg = entry.path().string();
        CAPTURE(cfg);
        const bool fig4 = entry.path().filename().string().rfind("fig4", 0) == 0;
        const std::string cmd = fig4 ? "ratio" : entry.path().filename().string().rfind("fig3", 0) == 0 ? "qfi" : "sweep";
        const std::string a = temp_path("det_a"), b = temp_path("det_b");
        REQUIRE(invoke({cmd, "--config", cfg, "--out", a}).code == kOk);
        REQUIRE(invoke({cmd, "--config", cfg, "--out", b}).code == kOk);
        const std::string sa = slurp(a);
        CHECK(!sa.empty());
        CHECK(sa == slurp(b));
        std::filesystem::remove(a);
        std::filesystem::remove(b);
    }
}
