// Acceptance run: one PASS/FAIL line per criterion. Without --criterion all ten
// run; the exit status is 0 only when every selected criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "bergman/bergman.hpp"

using namespace bergman;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

const std::vector<double> kBlowupGrid{0.9, 0.99, 0.999, 0.9999};

// n = 3 runs take most of the time; criteria 4, 5 and 10 share them.
const ExperimentReport& blowup(std::size_t n, double p) {
    static std::map<std::pair<std::size_t, double>, ExperimentReport> cache;
    const auto key = std::make_pair(n, p);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, blowup_experiment(n, p, kBlowupGrid, default_blowup_rule(n))).first;
    return it->second;
}

double relative(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// 1. exact identities and negative controls, under 60 s
Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream d;
    bool pass = true;
    int count = 0, controls = 0;
    const std::array<Mutation, 2> muts{Mutation::FlipSign, Mutation::BumpExponent};
    auto check = [&](const std::function<IdentityResult(int, Mutation)>& f, int lo, int hi) {
        for (int k = lo; k <= hi; ++k) {
            const auto r = f(k, Mutation::None);
            ++count;
            if (!r.passed) {
                pass = false;
                d << " " << r.name << "(" << k << ") failed;";
            }
            for (auto m : muts) {
                ++controls;
                if (f(k, m).passed) {
                    pass = false;
                    d << " mutated " << r.name << "(" << k << ") passed;";
                }
            }
        }
    };
    check([](int k, Mutation m) { return verify_ab_identity(k, m); }, 2, 4);
    check([](int k, Mutation m) { return verify_pI_expansion(k, m); }, 1, 3);
    check([](int k, Mutation m) { return verify_kernel_decomposition(k, m); }, 2, 4);
    check([](int k, Mutation m) { return verify_partial_fraction(k, m); }, 3, 5);
    check([](int k, Mutation m) { return verify_vandermonde_expansion(k, m); }, 2, 5);
    for (int k = 2; k <= 3; ++k) {
        ++controls;
        if (verify_kernel_decomposition_repeated_factor(k).passed) pass = false;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    pass &= secs < 60.0;
    d << " " << count << " identities, " << controls << " negative controls, " << fmt(secs, 3) << " s";
    return {pass, d.str()};
}

// 2. T1 annihilation and P_l independence
Outcome criterion2() {
    const auto a2 = annihilation_check(2, 20), a3 = annihilation_check(3, 20);
    double m2 = 0, m3 = 0, c2 = 0, c3 = 0;
    for (const auto& c : a2.cases) (c.antisymmetric ? m2 : c2) = std::max(c.antisymmetric ? m2 : c2, c.max_abs);
    for (const auto& c : a3.cases) (c.antisymmetric ? m3 : c3) = std::max(c.antisymmetric ? m3 : c3, c.max_abs);
    const bool pass = m2 < 1e-8 && m3 < 1e-6 && a3.pl_spread < 1e-7 && a2.passed && a3.passed;
    return {pass, "n=2 max " + fmt(m2) + " (< 1e-8), n=3 max " + fmt(m3) + " (< 1e-6), P_l spread " +
                      fmt(a3.pl_spread) + " (< 1e-7), controls " + fmt(c2) + ", " + fmt(c3) + " (> 1e-3)"};
}

// 3. quadrature of T~^2 on h_s against the closed form, s <= 0.9
Outcome criterion3() {
    // h_s normalized with 1/pi per term, as in the two-dimensional closed form
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> rad(0.0, 0.6), ang(0.0, 2.0 * kPi);
    double worst = 0.0;
    int pairs = 0;
    for (double s : {0.3, 0.5, 0.7, 0.8, 0.9}) {
        const auto rule = boundary_graded_rule((1.0 - s) / s, 24, 32);
        for (int i = 0; i < 2; ++i, ++pairs) {
            const std::vector<Complex> z{std::polar(rad(rng), ang(rng)), std::polar(rad(rng), ang(rng))};
            const auto h = [s](std::span<const Complex> w) { return test_function_hs(2, s, w) / kPi; };
            const Complex q = apply_operator(KernelSpec::tildeT(2), h, z, rule);
            worst = std::max(worst, relative(q, tildeT2_closed_form(s, z)));
        }
    }
    return {worst < 1e-8, std::to_string(pairs) + " (s, z) pairs, worst relative error " + fmt(worst) + " (< 1e-8)"};
}

// 4. power of ||h_s||^p in (1 - s)
Outcome criterion4() {
    auto exponent = [](const ExperimentReport& r) {
        std::vector<double> x, y;
        for (const auto& smp : r.samples)
            if (smp.s <= 0.999 + 1e-12) {
                x.push_back(std::log1p(-smp.s));
                y.push_back(std::log(smp.h_norm));
            }
        return fit_line(x, y).beta;
    };
    const double e2 = exponent(blowup(2, 4.0)), e3 = exponent(blowup(3, 3.0));
    const bool pass = std::abs(e2 + 6.0) <= 0.3 && std::abs(e3 + 12.0) <= 0.8;
    return {pass, "n=2 p=4 exponent " + fmt(e2) + " (-6 +/- 0.3), n=3 p=3 exponent " + fmt(e3) + " (-12 +/- 0.8)"};
}

// 5. log growth at p = 2n/(n-1)
Outcome criterion5() {
    std::ostringstream d;
    bool pass = true;
    for (auto [n, p] : {std::pair<std::size_t, double>{2, 4.0}, {3, 3.0}}) {
        const auto& r = blowup(n, p);
        pass &= r.growth_confirmed();
        d << "n=" << n << " p=" << p << ": increasing " << (r.strictly_increasing ? "yes" : "no") << ", beta "
          << fmt(r.log_fit.beta) << ", R^2 " << fmt(r.log_fit.r_squared) << "; ";
    }
    return {pass, d.str()};
}

// 6. flat trend inside the interval, growth at p = 4
Outcome criterion6() {
    const std::vector<double> ps{1.5, 2.0, 3.0, 3.9, 4.0};
    const auto scan = boundedness_scan(2, ps, kBlowupGrid, default_blowup_rule(2));
    std::ostringstream d;
    bool pass = true;
    for (const auto& e : scan.entries) {
        const bool want_flat = e.p < 4.0;
        pass &= e.flat == want_flat;
        d << "p=" << e.p << " max/min " << fmt(e.report.max_over_min, 3) << (e.flat ? " flat" : " growing") << "; ";
    }
    d << "flat means max/min < 4";
    return {pass, d.str()};
}

// 7. Forelli-Rudin classes
Outcome criterion7() {
    const auto grid = default_forelli_rudin_grid();
    std::ostringstream d;
    bool pass = true;
    const std::array<std::pair<double, GrowthClass>, 3> cases{
        {{0.5, GrowthClass::Bounded}, {0.0, GrowthClass::Log}, {-0.5, GrowthClass::Power}}};
    for (const auto& [s_exp, want] : cases) {
        try {
            const auto r = forelli_rudin_report(0.0, s_exp, grid);
            if (!r.fit) {
                pass = false;
                d << "s=" << s_exp << " ambiguous; ";
                continue;
            }
            bool ok = r.fit->model == want;
            if (want == GrowthClass::Power) ok &= std::abs(r.fit->exponent - s_exp) <= 0.1;
            pass &= ok;
            d << "s=" << s_exp << " " << to_string(r.fit->model) << " (gamma " << fmt(r.fit->exponent, 3) << "); ";
        } catch (const std::exception& e) {
            pass = false;
            d << "s=" << s_exp << " error " << e.what() << "; ";
        }
    }
    return {pass, d.str()};
}

// 8. Bekolle-Bonami behaviour of u_p and v_p
Outcome criterion8() {
    std::ostringstream d;
    bool pass = true;
    const std::vector<Complex> as{0.0, 0.5, 0.9, Complex(0.0, 0.99)};
    const std::vector<double> inside{1.5, 2.0, 3.0, 3.5}, rising{3.8, 3.9, 3.95};
    std::map<double, std::pair<double, double>> range;
    for (const auto& a : as) {
        const std::vector<Complex> pt{a};
        std::vector<double> ps = inside;
        ps.insert(ps.end(), rising.begin(), rising.end());
        const auto rep = bekolle_bonami_report(BekolleWeight::Up, pt, ps);
        double prev = 0.0;
        for (const auto& e : rep.entries) {
            if (e.divergent) {
                pass = false;
                d << "u_p diverged at a=" << a << " p=" << e.p << "; ";
                continue;
            }
            auto& [lo, hi] = range.try_emplace(e.p, 1e300, 0.0).first->second;
            lo = std::min(lo, e.value);
            hi = std::max(hi, e.value);
            if (e.p >= rising.front()) {
                pass &= e.value > prev;
                prev = e.value;
            }
        }
    }
    double spread = 0.0;
    for (double p : inside) spread = std::max(spread, range[p].second / range[p].first);
    pass &= spread < 4.0;
    d << "u_p a-spread " << fmt(spread, 3) << " (< 4), largest over a at p=3.8/3.9/3.95: " << fmt(range[3.8].second, 3) << "/"
      << fmt(range[3.9].second, 3) << "/" << fmt(range[3.95].second, 3) << "; ";

    // m = 2 coincident points realize the interval (3/2, 3)
    const std::vector<Complex> two{0.5, 0.5};
    const std::vector<double> vps{1.55, 1.6, 1.7, 2.0, 2.5, 2.8, 2.9, 2.95};
    const auto rep = bekolle_bonami_report(BekolleWeight::Vp, two, vps);
    std::vector<double> v;
    for (const auto& e : rep.entries) {
        if (e.divergent) pass = false;
        v.push_back(e.value);
    }
    const bool down = v[0] > v[1] && v[1] > v[2];
    const bool up = v[5] < v[6] && v[6] < v[7];
    pass &= down && up;
    d << "v_p: ";
    for (std::size_t i = 0; i < v.size(); ++i) d << "p=" << vps[i] << " " << fmt(v[i], 3) << (i + 1 < v.size() ? ", " : "");
    return {pass, d.str()};
}

// 9. sector-annulus closed form against cubature on the full parameter grid
Outcome criterion9() {
    int agree = 0, empty = 0, bad = 0;
    double worst = 0.0;
    for (int n : {2, 3})
        for (int j : {1, 2})
            for (double k : {2.0, 3.0, 4.0})
                for (double s : {0.99, 0.999}) {
                    try {
                        const double c = sector_annulus_integral(s, j, k, n, IntegralMode::ClosedForm);
                        const double q = sector_annulus_integral(s, j, k, n, IntegralMode::Quadrature);
                        const double e = std::abs(c - q) / std::abs(c);
                        worst = std::max(worst, e);
                        (e < 1e-6 ? agree : bad)++;
                    } catch (const EmptyRegion&) {
                        ++empty;
                    }
                }
    return {empty == 0 && bad == 0, std::to_string(agree) + "/24 agree (worst " + fmt(worst) + "), " +
                                        std::to_string(empty) + " tuples have an empty region ((5 n!)^{2j}(1-s) >= 1)"};
}

// 10. refinement stability, Monte Carlo, reproducing property
Outcome criterion10() {
    std::ostringstream d;
    bool pass = true;
    double worst = 0.0;
    for (auto [n, p] : {std::pair<std::size_t, double>{2, 4.0}, {3, 3.0}})
        for (const auto& smp : blowup(n, p).samples) worst = std::max({worst, smp.h_delta, smp.t_delta});
    for (double s_exp : {0.5, 0.0, -0.5})
        for (double x : forelli_rudin_report(0.0, s_exp, default_forelli_rudin_grid()).deltas) worst = std::max(worst, x);
    pass &= worst < 0.05;
    d << "max refinement delta " << fmt(worst) << " (< 5%); ";

    // Monte Carlo against cubature: |J|^2 on the tridisc and the weighted h_s norm on the bidisc
    const auto jac = [](std::span<const Complex> w) { return std::norm(jacobian_phi(w)); };
    const double q1 = integrate_polydisc(jac, disc_rule(4, 8), 3);
    const auto mc1 = monte_carlo_polydisc(jac, 3, 2'000'000, 42);
    const double s = 0.5;
    const auto hn = [s](std::span<const Complex> w) {
        return std::pow(std::abs(test_function_hs(2, s, w)), 4.0) * std::norm(jacobian_phi(w));
    };
    const double q2 = integrate_polydisc(hn, boundary_graded_rule((1.0 - s) / s, 16, 32), 2);
    const auto mc2 = monte_carlo_polydisc(hn, 2, 2'000'000, 43);
    const double se1 = std::abs(mc1.estimate - q1) / mc1.standard_error, se2 = std::abs(mc2.estimate - q2) / mc2.standard_error;
    pass &= se1 < 3.0 && se2 < 3.0;
    d << "Monte Carlo |J|^2 " << fmt(se1, 3) << " SE, ||h_s||^4 " << fmt(se2, 3) << " SE (< 3); ";

    // reproducing property on monomials
    double rep = 0.0;
    const auto rule = disc_rule(8, 64);
    for (Complex z : {Complex(0.0), Complex(0.3, -0.2), Complex(-0.5, 0.1)})
        for (int k = 0; k <= 6; ++k) {
            const std::vector<Complex> zz{z};
            const Complex v = apply_operator(KernelSpec::bergman_disc(), [k](std::span<const Complex> w) {
                return std::pow(w[0], k);
            }, zz, rule);
            rep = std::max(rep, std::abs(v - std::pow(z, k)));
        }
    const auto rule2 = disc_rule(6, 32);
    const std::vector<Complex> z2{Complex(0.2, 0.1), Complex(-0.3, 0.2)};
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) {
            const Complex v = apply_operator(KernelSpec::polydisc(2), [a, b](std::span<const Complex> w) {
                return std::pow(w[0], a) * std::pow(w[1], b);
            }, z2, rule2);
            rep = std::max(rep, std::abs(v - std::pow(z2[0], a) * std::pow(z2[1], b)));
        }
    pass &= rep < 1e-10;
    d << "reproducing property error " << fmt(rep) << " (< 1e-10)";
    return {pass, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria 1-10"};
    std::vector<int> selected;
    app.add_option("--criterion", selected, "criterion number (repeatable); all when omitted")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);
    if (selected.empty())
        for (int k = 1; k <= 10; ++k) selected.push_back(k);

    const std::array<std::function<Outcome()>, 10> criteria{criterion1, criterion2, criterion3, criterion4,
                                                             criterion5, criterion6, criterion7, criterion8,
                                                             criterion9, criterion10};
    bool all = true;
    for (int k : selected) {
        Outcome o;
        try {
            o = criteria[k - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        all &= o.pass;
        std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
    }
    return all ? 0 : 1;
}
