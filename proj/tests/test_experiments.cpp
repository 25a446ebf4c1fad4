#include <catch_amalgamated.hpp>

#include <map>

#include "bergman/bergman.hpp"
#include "parse.hpp"

using namespace bergman;

namespace {

// int_{D^2} |h_s|^2 |w1 - w2|^2 dV from the monomial expansion of h_s (w1 - w2),
// using int_D |w|^{2k} dV = pi / (k + 1).
double hs_norm2_series(double s) {
    std::map<std::pair<int, int>, double> c;
    for (int k = 0; k < 400; ++k) {
        const double a = (k + 1) * std::pow(s, k);
        c[{k + 1, 0}] += a;
        c[{k, 1}] -= a;
        c[{1, k}] += a;
        c[{0, k + 1}] -= a;
    }
    double sum = 0.0;
    for (const auto& [ij, v] : c) sum += v * v * kPi * kPi / ((ij.first + 1.0) * (ij.second + 1.0));
    return sum;
}

// Same integral for T~h_s, summed over the full product rule with the closed form.
double tilde_norm2_full(double s, const QuadratureRule& rule) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
        for (std::size_t j = 0; j < rule.size(); ++j) {
            const std::vector<Complex> w{rule.nodes[i], rule.nodes[j]};
            sum += rule.weights[i] * rule.weights[j] * std::norm(kPi * tildeT2_closed_form(s, w)) *
                   std::norm(w[0] - w[1]);
        }
    return sum;
}

Json without_wall_time(Json j) {
    j.erase("wall_time_s");
    return j;
}

}  // namespace

TEST_CASE("fit_line recovers exact and hand-computed fits") {
    const std::vector<double> x{0, 1, 2, 3}, exact{2, 5, 8, 11}, noisy{1, 3, 2, 5};
    const auto f = fit_line(x, exact);
    CHECK(f.alpha == Catch::Approx(2.0).margin(1e-14));
    CHECK(f.beta == Catch::Approx(3.0).epsilon(1e-14));
    CHECK(f.r_squared == Catch::Approx(1.0).epsilon(1e-14));
    const auto g = fit_line(x, noisy);
    CHECK(g.beta == Catch::Approx(1.1).epsilon(1e-14));
    CHECK(g.alpha == Catch::Approx(1.1).epsilon(1e-14));
    CHECK(g.r_squared == Catch::Approx(1.0 - 2.7 / 8.75).epsilon(1e-14));
    CHECK(g.beta_se == Catch::Approx(std::sqrt(0.27)).epsilon(1e-14));
    const std::vector<double> two{0, 1};
    CHECK(std::isnan(fit_line(two, two).beta_se));
    const std::vector<double> same{1, 1, 1};
    CHECK_THROWS_AS(fit_line(same, same), InvalidArgument);
}

TEST_CASE("scan positions relative to (2n/(n+1), 2n/(n-1))") {
    CHECK(scan_position(2, 4.0 / 3.0) == ScanPosition::LowerEndpoint);
    CHECK(scan_position(2, 4.0) == ScanPosition::UpperEndpoint);
    CHECK(scan_position(2, 2.0) == ScanPosition::Inside);
    CHECK(scan_position(2, 1.2) == ScanPosition::Below);
    CHECK(scan_position(2, 4.5) == ScanPosition::Above);
    CHECK(scan_position(3, 1.5) == ScanPosition::LowerEndpoint);
    CHECK(scan_position(3, 3.0) == ScanPosition::UpperEndpoint);
    CHECK(scan_position(3, 3.5) == ScanPosition::Above);
}

TEST_CASE("hs_norms matches the monomial series and the full-product closed form") {
    const double s = 0.5;
    const auto fit = fit_tildeT_constant(2, s, shape_fit_points(2, 1));
    const auto rule = boundary_graded_rule((1.0 - s) / s, 16, 32);
    const auto q = detail::hs_norms(2, 2.0, s, fit.constant, rule);
    CHECK(std::abs(q.h / hs_norm2_series(s) - 1.0) < 1e-9);
    CHECK(std::abs(q.t / tilde_norm2_full(s, rule) - 1.0) < 1e-9);
}

TEST_CASE("abs_pow_from_norm special cases agree with pow") {
    for (double p : {2.0, 3.0, 4.0, 2.5}) CHECK(detail::abs_pow_from_norm(1.7, p) == Catch::Approx(std::pow(1.7, p / 2)));
}

TEST_CASE("two-point blow-up run at p = 4, n = 2") {
    const std::vector<double> grid{0.9, 0.99};
    const auto r = blowup_experiment(2, 4.0, grid, default_blowup_rule(2));
    REQUIRE(r.samples.size() == 2);
    CHECK(r.strictly_increasing);
    CHECK(r.samples[1].ratio > r.samples[0].ratio);
    for (const auto& smp : r.samples) {
        CHECK(smp.h_delta < kConvergenceTolerance);
        CHECK(smp.t_delta < kConvergenceTolerance);
        CHECK(smp.log_gap == Catch::Approx(-std::log1p(-smp.s)));
    }
    CHECK(r.tilde_constant_residual < 1e-10);
    CHECK(r.h_power_fit.beta == Catch::Approx(-6.0).margin(0.5));

    const auto j = to_json(r);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["experiment"] == "blowup");
    CHECK(j["samples"].size() == 2);
    CHECK(j.contains("wall_time_s"));
    CHECK(j["quadrature"]["radial_order"] == 8);
    CHECK(std::isnan(r.log_fit.beta_se));
    CHECK(j["log_fit"]["beta_se"].is_null());

    const auto again = blowup_experiment(2, 4.0, grid, default_blowup_rule(2));
    CHECK(without_wall_time(to_json(again)) == without_wall_time(j));

    const auto csv = to_csv(r);
    CHECK(csv.rfind("s,h_norm_p,tilde_norm_p,ratio,minus_log_gap\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("too coarse a rule is reported as not converged") {
    const std::vector<double> grid{0.999};
    CHECK_THROWS_AS(blowup_experiment(2, 4.0, grid, BlowupRule{1, 2}), QuadratureNotConverged);
}

TEST_CASE("identity suite with negative controls") {
    const auto r = identity_suite(3, true);
    CHECK(r.passed);
    CHECK(!r.results.empty());
    CHECK(!r.controls.empty());
    for (const auto& c : r.controls) CHECK(!c.passed);
    const auto j = to_json(r);
    CHECK(j["results"].size() == r.results.size());
    CHECK(j["passed"] == true);
    CHECK_THROWS_AS(identity_suite(6), InvalidArgument);
}

TEST_CASE("T1 annihilates anti-symmetric inputs for n = 2") {
    const auto r = annihilation_check(2, 6);
    CHECK(r.passed);
    REQUIRE(r.cases.size() == 3);
    CHECK(r.cases.back().function == "w1");
    CHECK(r.cases.back().max_abs > 1e-3);
    for (std::size_t i = 0; i + 1 < r.cases.size(); ++i) CHECK(r.cases[i].max_abs < 1e-8);
    CHECK(!to_json(r).contains("pl_spread"));
}

TEST_CASE("Forelli-Rudin report classes") {
    const auto grid = default_forelli_rudin_grid();
    const auto bounded = forelli_rudin_report(0.0, 0.5, grid);
    REQUIRE(bounded.fit);
    CHECK(bounded.fit->model == GrowthClass::Bounded);
    const auto power = forelli_rudin_report(0.0, -0.5, grid);
    REQUIRE(power.fit);
    CHECK(power.fit->model == GrowthClass::Power);
    CHECK(power.fit->exponent == Catch::Approx(-0.5).margin(0.05));
    for (double d : power.deltas) CHECK(d < kConvergenceTolerance);
    const auto j = to_json(power);
    CHECK(j["experiment"] == "forelli-rudin");
    CHECK(j["values"].size() == grid.size());
}

TEST_CASE("Bekolle-Bonami report: trivial weight and divergence") {
    const std::vector<Complex> origin{0.0};
    const std::vector<double> ps{2.0, 4.5};
    const auto r = bekolle_bonami_report(BekolleWeight::Up, origin, ps);
    REQUIRE(r.entries.size() == 2);
    CHECK(!r.entries[0].divergent);
    CHECK(r.entries[0].value == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(r.entries[1].divergent);
    const auto j = to_json(r);
    CHECK(j["weight"] == "up");
    CHECK(j["entries"][1]["divergent"] == true);
    const std::vector<Complex> two{0.5, 0.3};
    CHECK_THROWS_AS(bekolle_bonami_report(BekolleWeight::Up, two, ps), InvalidArgument);
}

TEST_CASE("command-line number parsing") {
    using cli::parse_complex;
    CHECK(parse_complex("0.5") == Complex(0.5, 0.0));
    CHECK(parse_complex("-0.2i") == Complex(0.0, -0.2));
    CHECK(parse_complex("i") == Complex(0.0, 1.0));
    CHECK(parse_complex("-i") == Complex(0.0, -1.0));
    CHECK(parse_complex("0.3+0.2i") == Complex(0.3, 0.2));
    CHECK(parse_complex("1e-3-4i") == Complex(1e-3, -4.0));
    CHECK(parse_complex("2e+1i") == Complex(0.0, 20.0));
    CHECK_THROWS(parse_complex("0.3x"));
    CHECK(cli::parse_reals(" 0.9, 0.99 ,,0.999") == std::vector<double>{0.9, 0.99, 0.999});
    CHECK(cli::parse_complexes("0.5,0.3-0.2i").size() == 2);
}
