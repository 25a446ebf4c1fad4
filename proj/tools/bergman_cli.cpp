// Command-line front end. Exit codes: 0 pass, 1 usage or input error,
// 2 failed verification, 3 quadrature did not converge.

#include <iostream>

#include <CLI11.hpp>

#include "bergman/bergman.hpp"
#include "parse.hpp"

using namespace bergman;

namespace {

constexpr int kPass = 0, kUsage = 1, kFailed = 2, kNotConverged = 3;

void emit(const Json& j, const std::string& out) {
    if (out.empty()) std::cout << j.dump(2) << "\n";
    else write_json(out, j);
}

BlowupRule rule_from(std::size_t n, int radial, int angular) {
    BlowupRule r = default_blowup_rule(n);
    if (radial > 0) r.radial_order = radial;
    if (angular > 0) r.angular_order = angular;
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bergman projection on the symmetrized polydisc: identities, blow-up and weight estimates"};
    app.require_subcommand(1);

    int max_n = 4;
    bool negative_controls = false;
    std::string out, csv;
    auto* ids = app.add_subcommand("identities", "exact identity suite");
    ids->add_option("--max-n", max_n, "largest n")->check(CLI::Range(2, 5));
    ids->add_flag("--negative-controls", negative_controls, "also run mutated identities, which must fail");
    ids->add_option("--out", out, "JSON report path (stdout if omitted)");

    std::size_t n = 2;
    double p = 0.0;
    std::string s_list = "0.9,0.99,0.999,0.9999", p_list;
    int radial = 0, angular = 0;
    std::uint64_t seed = 1;
    auto* blow = app.add_subcommand("blowup", "r(s) = ||T~h_s||^p / ||h_s||^p on an s-grid");
    blow->add_option("--n", n, "dimension")->check(CLI::IsMember({2, 3}));
    blow->add_option("--p", p, "exponent (default 2n/(n-1))");
    auto* scan = app.add_subcommand("scan", "flat/growing trend of r(s) for several p");
    scan->add_option("--n", n, "dimension")->check(CLI::IsMember({2, 3}));
    scan->add_option("--p-list", p_list, "comma-separated exponents")->required();
    for (auto* sub : {blow, scan}) {
        sub->add_option("--s", s_list, "comma-separated s-grid");
        sub->add_option("--radial", radial, "GL points per radial panel");
        sub->add_option("--angular", angular, "angular points per ray fan");
        sub->add_option("--seed", seed, "seed for the shape-fit sample points");
        sub->add_option("--out", out, "JSON report path (stdout if omitted)");
        sub->add_option("--csv", csv, "CSV plot data path");
    }

    double eps = 0.0, s_exp = 0.0;
    std::string grid;
    auto* fr = app.add_subcommand("forelli-rudin", "growth class of the Forelli-Rudin integral along a radius");
    fr->add_option("--eps", eps, "eps < 1");
    fr->add_option("--s-exp", s_exp, "exponent s");
    fr->add_option("--grid", grid, "comma-separated radii (default 1 - 10^-k, k = 2..7)");
    fr->add_option("--out", out, "JSON report path (stdout if omitted)");

    std::string weight = "up", points = "0";
    auto* bb = app.add_subcommand("bekolle-bonami", "Bekolle-Bonami constants of u_p or v_p");
    bb->add_option("--weight", weight, "up or vp")->check(CLI::IsMember({"up", "vp"}));
    bb->add_option("--p-list", p_list, "comma-separated exponents")->required();
    bb->add_option("--points", points, "comma-separated complex points, e.g. 0.5,0.99i,0.3-0.2i");
    bb->add_option("--out", out, "JSON report path (stdout if omitted)");

    std::size_t samples = 20;
    auto* ann = app.add_subcommand("annihilation", "T1 on anti-symmetric inputs");
    ann->add_option("--n", n, "dimension")->check(CLI::IsMember({2, 3}));
    ann->add_option("--samples", samples, "number of z sample points");
    ann->add_option("--seed", seed, "seed for the sample points");
    ann->add_option("--out", out, "JSON report path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ids) {
            const auto r = identity_suite(max_n, negative_controls);
            emit(to_json(r), out);
            return r.passed ? kPass : kFailed;
        }
        if (*blow) {
            if (p == 0.0) p = 2.0 * double(n) / double(n - 1);
            const auto s = cli::parse_reals(s_list);
            const auto r = blowup_experiment(n, p, s, rule_from(n, radial, angular), seed);
            emit(to_json(r), out);
            if (!csv.empty()) write_text(csv, to_csv(r));
            switch (scan_position(n, p)) {
                case ScanPosition::UpperEndpoint: return r.growth_confirmed() ? kPass : kFailed;
                case ScanPosition::Inside: return r.max_over_min < kFlatRatio ? kPass : kFailed;
                default: return kPass;
            }
        }
        if (*scan) {
            const auto s = cli::parse_reals(s_list);
            const auto ps = cli::parse_reals(p_list);
            const auto r = boundedness_scan(n, ps, s, rule_from(n, radial, angular), seed);
            emit(to_json(r), out);
            if (!csv.empty()) write_text(csv, to_csv(r));
            return r.passed ? kPass : kFailed;
        }
        if (*fr) {
            const auto radii = grid.empty() ? default_forelli_rudin_grid() : cli::parse_reals(grid);
            const auto r = forelli_rudin_report(eps, s_exp, radii);
            emit(to_json(r), out);
            return r.fit ? kPass : kFailed;
        }
        if (*bb) {
            const auto pts = cli::parse_complexes(points);
            const auto r = bekolle_bonami_report(weight == "up" ? BekolleWeight::Up : BekolleWeight::Vp, pts,
                                                 cli::parse_reals(p_list));
            emit(to_json(r), out);
            return kPass;
        }
        if (*ann) {
            const auto r = annihilation_check(n, samples, seed);
            emit(to_json(r), out);
            return r.passed ? kPass : kFailed;
        }
    } catch (const QuadratureNotConverged& e) {
        std::cerr << "quadrature not converged: " << e.what() << "\n";
        return kNotConverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
