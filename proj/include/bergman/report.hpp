#pragma once

// JSON and CSV serialization of experiment reports. Field order is fixed, so
// two runs with the same inputs differ only in "wall_time_s".

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "experiments.hpp"

namespace bergman {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json header(const std::string& experiment) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["experiment"] = experiment;
    return j;
}

inline Json line_fit_json(const LineFit& f) {
    return Json{{"alpha", f.alpha}, {"beta", f.beta}, {"beta_se", finite_or_null(f.beta_se)}, {"r_squared", f.r_squared}};
}

inline Json blowup_body(const ExperimentReport& r) {
    Json j;
    j["n"] = r.n;
    j["p"] = r.p;
    Json grid = Json::array(), samples = Json::array();
    for (const auto& s : r.samples) {
        grid.push_back(s.s);
        samples.push_back(Json{{"s", s.s},
                               {"h_norm_p", s.h_norm},
                               {"h_norm_p_delta", s.h_delta},
                               {"tilde_norm_p", s.t_norm},
                               {"tilde_norm_p_delta", s.t_delta},
                               {"ratio", s.ratio},
                               {"ratio_delta", s.ratio_delta},
                               {"minus_log_gap", s.log_gap}});
    }
    j["s_grid"] = grid;
    j["samples"] = samples;
    j["log_fit"] = line_fit_json(r.log_fit);
    j["h_norm_power_fit"] = line_fit_json(r.h_power_fit);
    j["tilde_constant"] = complex_json(r.tilde_constant);
    j["tilde_constant_residual"] = r.tilde_constant_residual;
    j["strictly_increasing"] = r.strictly_increasing;
    j["max_over_min"] = r.max_over_min;
    j["growth_confirmed"] = r.growth_confirmed();
    j["quadrature"] = Json{{"kind", "boundary-graded"},
                           {"radial_order", r.rule.radial_order},
                           {"angular_order", r.rule.angular_order},
                           {"ratio", r.rule.ratio},
                           {"scale", "(1 - s)/s"},
                           {"refinement", "radial and angular orders doubled"}};
    j["seed"] = r.seed;
    return j;
}

inline Json identity_json(const IdentityResult& r) {
    Json j{{"name", r.name},
           {"n", r.n},
           {"mutation", to_string(r.mutation)},
           {"passed", r.passed},
           {"prescreen_passed", r.prescreen_passed},
           {"lhs_terms", r.lhs_terms},
           {"rhs_terms", r.rhs_terms}};
    return j;
}

}  // namespace detail

inline Json to_json(const ExperimentReport& r) {
    Json j = detail::header("blowup");
    j.update(detail::blowup_body(r));
    j["conclusion"] = r.growth_confirmed()
                          ? "growth on the computed grid consistent with -log(1-s) law (not extrapolated past the largest s)"
                          : "growth law not confirmed on the computed grid";
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

inline Json to_json(const ScanReport& r) {
    Json j = detail::header("scan");
    j["n"] = r.n;
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json x{{"p", e.p},
               {"position", to_string(e.position)},
               {"trend", e.flat ? "flat" : "growing"},
               {"flat_threshold", kFlatRatio},
               {"counted", e.counted},
               {"expected", e.counted ? (e.expected_flat ? "flat" : "growing") : "not probed by h_s"},
               {"consistent", !e.counted || e.flat == e.expected_flat},
               {"label", e.flat ? "consistent with boundedness on this grid" : "consistent with unboundedness on this grid"}};
        x.update(detail::blowup_body(e.report));
        entries.push_back(std::move(x));
    }
    j["entries"] = entries;
    j["passed"] = r.passed;
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

inline Json to_json(const IdentitySuiteReport& r) {
    Json j = detail::header("identities");
    j["max_n"] = r.max_n;
    j["negative_controls"] = r.negative_controls;
    Json res = Json::array(), ctl = Json::array();
    for (const auto& x : r.results) res.push_back(detail::identity_json(x));
    for (const auto& x : r.controls) ctl.push_back(detail::identity_json(x));
    j["results"] = res;
    j["controls"] = ctl;
    j["passed"] = r.passed;
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

inline Json to_json(const AnnihilationReport& r) {
    Json j = detail::header("annihilation");
    j["n"] = r.n;
    j["z_samples"] = r.z_samples;
    j["seed"] = r.seed;
    Json cases = Json::array();
    for (const auto& c : r.cases)
        cases.push_back(Json{{"function", c.function},
                             {"antisymmetric", c.antisymmetric},
                             {"max_abs", c.max_abs},
                             {"delta", c.delta},
                             {"threshold", c.threshold},
                             {"passed", c.passed}});
    j["cases"] = cases;
    if (r.n == 3) j["pl_spread"] = Json{{"value", r.pl_spread}, {"threshold", r.pl_threshold}};
    j["passed"] = r.passed;
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

inline Json to_json(const ForelliRudinReport& r) {
    Json j = detail::header("forelli-rudin");
    j["eps"] = r.eps;
    j["s_exp"] = r.s_exp;
    Json vals = Json::array();
    for (std::size_t i = 0; i < r.radii.size(); ++i)
        vals.push_back(Json{{"radius", r.radii[i]}, {"value", r.values[i]}, {"delta", r.deltas[i]}});
    j["values"] = vals;
    if (r.fit) {
        j["class"] = to_string(r.fit->model);
        j["exponent"] = r.fit->exponent;
        j["alpha"] = r.fit->alpha;
        j["beta"] = r.fit->beta;
        j["residual"] = r.fit->residual;
        j["runner_up_residual"] = r.fit->runner_up_residual;
    } else {
        j["class"] = nullptr;
        j["error"] = r.error;
    }
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

inline Json to_json(const BekolleReport& r) {
    Json j = detail::header("bekolle-bonami");
    j["weight"] = r.weight == BekolleWeight::Up ? "up" : "vp";
    Json pts = Json::array();
    for (const auto& a : r.points) pts.push_back(detail::complex_json(a));
    j["points"] = pts;
    Json es = Json::array();
    for (const auto& e : r.entries) {
        if (e.divergent) {
            es.push_back(Json{{"p", e.p}, {"divergent", true}});
            continue;
        }
        es.push_back(Json{{"p", e.p},
                          {"divergent", false},
                          {"estimate", e.value},
                          {"delta", e.delta},
                          {"apex", detail::complex_json(e.apex)},
                          {"norm_bound", bb_norm_bound(std::max(1.0, e.value), e.p)}});
    }
    j["entries"] = es;
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

/// Plot data: s, ||h_s||^p, ||T~ h_s||^p, r, -log(1 - s).
inline std::string to_csv(const ExperimentReport& r) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "s,h_norm_p,tilde_norm_p,ratio,minus_log_gap\n";
    for (const auto& s : r.samples)
        out << s.s << ',' << s.h_norm << ',' << s.t_norm << ',' << s.ratio << ',' << s.log_gap << '\n';
    return out.str();
}

inline std::string to_csv(const ScanReport& r) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "p,s,h_norm_p,tilde_norm_p,ratio,minus_log_gap\n";
    for (const auto& e : r.entries)
        for (const auto& s : e.report.samples)
            out << e.p << ',' << s.s << ',' << s.h_norm << ',' << s.t_norm << ',' << s.ratio << ',' << s.log_gap
                << '\n';
    return out.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + path + " for writing");
    f << text;
}

inline void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace bergman
