#pragma once

// Forelli-Rudin integrals on the disc and their growth classification,
// Carleson tents with Bekolle-Bonami constants for point-product weights,
// and sector/annulus regions around the boundary point 1/s.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"
#include "quadrature.hpp"

namespace bergman {

namespace detail {

// Geometric edges top, top*ratio, ... down to below `floor`, then 0. Descending.
inline std::vector<double> graded_edges(double top, double floor, double ratio) {
    std::vector<double> e{top};
    while (e.back() > floor) e.push_back(e.back() * ratio);
    e.push_back(0.0);
    return e;
}

// Composite GL over the panels given by descending edges.
inline GaussRule1D composite_rule(const std::vector<double>& edges, int order) {
    GaussRule1D r;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const auto g = gauss_legendre(order, edges[p + 1], edges[p]);
        r.nodes.insert(r.nodes.end(), g.nodes.begin(), g.nodes.end());
        r.weights.insert(r.weights.end(), g.weights.begin(), g.weights.end());
    }
    return r;
}

}  // namespace detail

struct ForelliRudinRule {
    int panel_order = 12;
    double ratio = 0.25;

    ForelliRudinRule refined() const { return {panel_order * 2, ratio}; }
};

/// int_D (1 - |w|^2)^{-eps} / |1 - z conj(w)|^{2 - eps - s_exp} dV(w).
///
/// With v = (1 - |w|^2)^{1 - eps} the weight becomes dv/(1 - eps); v and the
/// angle are both split into panels graded toward the near-singularity at
/// w = z/|z|. The v panels reach 1 - |w|^2 ~ 1e-3 (1 - |z|), where the
/// integrand no longer varies; the angle panels stop at a tenth of 1 - |z|.
inline double forelli_rudin(double eps, double s_exp, Complex z, const ForelliRudinRule& rule = {}) {
    require(eps < 1.0, "forelli_rudin: eps < 1");
    const double t = std::abs(z);
    require(t < 1.0, "forelli_rudin: |z| < 1");
    const double power = 2.0 - eps - s_exp;
    const double gap = 1.0 - t;
    const double q = 1.0 / (1.0 - eps);

    const auto vr = detail::composite_rule(detail::graded_edges(1.0, std::pow(1e-3 * gap, 1.0 - eps), rule.ratio),
                                           rule.panel_order);
    const auto ar = detail::composite_rule(detail::graded_edges(kPi, 0.1 * gap, rule.ratio), rule.panel_order);

    detail::CompensatedSum<double> acc;
    for (std::size_t i = 0; i < vr.nodes.size(); ++i) {
        const double v = vr.nodes[i];
        const double one_minus_u = std::pow(v, q);
        const double r = std::sqrt(1.0 - one_minus_u);
        const double one_minus_r = one_minus_u / (1.0 + r);
        const double radial_gap = gap + t * one_minus_r;  // 1 - t r
        for (std::size_t k = 0; k < ar.nodes.size(); ++k) {
            const double sh = std::sin(0.5 * ar.nodes[k]);
            const double dist2 = radial_gap * radial_gap + 4.0 * t * r * sh * sh;
            acc.add(vr.weights[i] * ar.weights[k] * std::pow(dist2, -0.5 * power));
        }
    }
    // angles over (-pi, pi) by symmetry; dV = (1/2) du dtheta
    const double value = acc.value() / (1.0 - eps);
    detail::check_finite(value);
    return value;
}

enum class GrowthClass { Bounded, Log, Power };

inline std::string to_string(GrowthClass g) {
    switch (g) {
        case GrowthClass::Bounded: return "bounded";
        case GrowthClass::Log: return "log";
        case GrowthClass::Power: return "power";
    }
    return "?";
}

struct GrowthFit {
    GrowthClass model;
    double exponent;  // fitted gamma in a ~ alpha + beta (x^gamma - 1)/gamma, x = 1 - |z|^2
    double alpha;
    double beta;
    double residual;                  // best relative RMS residual
    double runner_up_residual;        // best residual among the other two classes
    std::vector<double> radii;
    std::vector<double> values;
};

namespace detail {

inline double box_cox(double x, double gamma) {
    return std::abs(gamma) < 1e-12 ? std::log(x) : std::expm1(gamma * std::log(x)) / gamma;
}

struct LinearFit {
    double alpha, beta, residual;
};

// Least squares of y ~ alpha + beta f with relative weights 1/y.
inline LinearFit relative_fit(std::span<const double> f, std::span<const double> y) {
    double s00 = 0, s01 = 0, s11 = 0, b0 = 0, b1 = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double w = 1.0 / (y[i] * y[i]);
        s00 += w;
        s01 += w * f[i];
        s11 += w * f[i] * f[i];
        b0 += w * y[i];
        b1 += w * y[i] * f[i];
    }
    const double det = s00 * s11 - s01 * s01;
    LinearFit r{(s11 * b0 - s01 * b1) / det, (s00 * b1 - s01 * b0) / det, 0.0};
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = (y[i] - r.alpha - r.beta * f[i]) / y[i];
        r.residual += e * e;
    }
    r.residual = std::sqrt(r.residual / double(y.size()));
    return r;
}

inline GrowthClass class_of(double gamma) {
    if (std::abs(gamma) <= 0.15) return GrowthClass::Log;
    return gamma > 0 ? GrowthClass::Bounded : GrowthClass::Power;
}

}  // namespace detail

/// Fits values against the Box-Cox family alpha + beta (x^gamma - 1)/gamma in
/// x = 1 - |z|^2, which contains the bounded (gamma > 0), logarithmic
/// (gamma = 0) and power (gamma < 0) models. |gamma| <= 0.15 counts as Log.
inline GrowthFit classify_growth(std::span<const double> radii, std::span<const double> values) {
    require(radii.size() == values.size() && radii.size() >= 4, "classify_growth: at least 4 samples");
    std::vector<double> x(radii.size()), f(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) x[i] = 1.0 - radii[i] * radii[i];

    double best[3] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
    GrowthFit out{};
    double overall = std::numeric_limits<double>::infinity();
    for (int g = -3000; g <= 3000; ++g) {
        const double gamma = g * 1e-3;
        for (std::size_t i = 0; i < x.size(); ++i) f[i] = detail::box_cox(x[i], gamma);
        const auto fit = detail::relative_fit(f, values);
        const int cls = int(detail::class_of(gamma));
        best[cls] = std::min(best[cls], fit.residual);
        if (fit.residual < overall) {
            overall = fit.residual;
            out.exponent = gamma;
            out.alpha = fit.alpha;
            out.beta = fit.beta;
        }
    }
    out.model = detail::class_of(out.exponent);
    out.residual = overall;
    out.runner_up_residual = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 3; ++c)
        if (c != int(out.model)) out.runner_up_residual = std::min(out.runner_up_residual, best[c]);
    out.radii.assign(radii.begin(), radii.end());
    out.values.assign(values.begin(), values.end());
    if (out.runner_up_residual <= 1.1 * out.residual)
        throw AmbiguousFit("classify_growth: two models fit within 10%; extend the radial grid toward |z| = 1");
    return out;
}

/// Samples a_{eps,s}(r) on the radial grid and classifies its growth.
inline GrowthFit classify_forelli_rudin(double eps, double s_exp, std::span<const double> radii,
                                        const ForelliRudinRule& rule = {}) {
    std::vector<double> values;
    for (double r : radii) values.push_back(forelli_rudin(eps, s_exp, Complex(r, 0.0), rule));
    return classify_growth(radii, values);
}

/// Radii 1 - 10^{-k}, k = 2..7.
inline std::vector<double> default_forelli_rudin_grid() {
    std::vector<double> g;
    for (int k = 2; k <= 7; ++k) g.push_back(1.0 - std::pow(10.0, -k));
    return g;
}

/// Carleson tent over an apex z: points of the disc within 1 - |z| of z/|z|; the whole disc for z = 0.
struct TentRegion {
    Complex apex{0.0, 0.0};

    bool whole_disc() const noexcept { return apex == Complex{0.0, 0.0}; }
    Complex direction() const { return apex / std::abs(apex); }
    double radius() const { return 1.0 - std::abs(apex); }

    bool contains(Complex w) const {
        if (!(std::norm(w) < 1.0)) return false;
        if (whole_disc()) return true;
        return std::abs(1.0 - std::conj(w) * direction()) < radius();
    }
};

namespace detail {

struct DiscConstraint {
    Complex center;
    double radius;
};

// Re(w conj(normal)) <= offset
struct HalfPlane {
    Complex normal;
    double offset;
};

struct ConvexRegion {
    std::vector<DiscConstraint> discs;
    std::vector<HalfPlane> planes;

    // Parameter interval of the ray c + rho u (rho >= 0) inside the region; lo > hi when empty.
    std::pair<double, double> ray_interval(Complex c, Complex u) const {
        double lo = 0.0, hi = std::numeric_limits<double>::infinity();
        for (const auto& d : discs) {
            const Complex oc = c - d.center;
            const double b = (oc * std::conj(u)).real();
            const double cc = std::norm(oc) - d.radius * d.radius;
            const double disc = b * b - cc;
            if (disc <= 0.0) return {1.0, 0.0};
            const double root = std::sqrt(disc);
            // stable pair of roots of rho^2 + 2 b rho + cc
            const double big = b > 0 ? -b - root : -b + root;
            double r1 = big, r2 = big != 0.0 ? cc / big : 0.0;
            if (r1 > r2) std::swap(r1, r2);
            lo = std::max(lo, r1);
            hi = std::min(hi, r2);
        }
        for (const auto& h : planes) {
            const double slope = (u * std::conj(h.normal)).real();
            const double slack = h.offset - (c * std::conj(h.normal)).real();
            if (slope > 0.0) hi = std::min(hi, slack / slope);
            else if (slope < 0.0) lo = std::max(lo, slack / slope);
            else if (slack < 0.0) return {1.0, 0.0};
        }
        return {lo, hi};
    }
};

inline void add_angle(std::vector<double>& out, Complex from, Complex to) {
    const Complex d = to - from;
    if (std::abs(d) > 1e-300) out.push_back(std::arg(d));
}

struct AngularBreak {
    double angle;
    double scale;  // distance of the nearest complex singularity of the chord length; 0 when none
};

// Directions from c where a ray meets a corner of the region or becomes tangent to a boundary,
// plus the directions perpendicular to c - o for circles around c, where the chord length
// has complex square-root singularities at imaginary distance asinh(sqrt(r^2 - d^2)/d).
inline std::vector<AngularBreak> breakpoints(const ConvexRegion& k, Complex c) {
    std::vector<AngularBreak> a;
    auto push = [&](double t, double scale = 0.0) { a.push_back({t, scale}); };
    auto push_to = [&](Complex to) {
        const Complex d = to - c;
        if (std::abs(d) > 1e-300) push(std::arg(d));
    };
    std::vector<std::pair<Complex, double>> circles;
    for (const auto& d : k.discs) circles.push_back({d.center, d.radius});
    for (const auto& [o, r] : circles) {
        const double dist = std::abs(o - c);
        if (dist > r) {
            const double base = std::arg(o - c), half = std::asin(std::min(1.0, r / dist));
            push(base - half);
            push(base + half);
        } else if (dist > 0.0) {
            const double base = std::arg(c - o);
            const double scale = std::asinh(std::sqrt((r - dist) * (r + dist)) / dist);
            push(base + kPi / 2, scale);
            push(base - kPi / 2, scale);
        }
    }
    for (std::size_t i = 0; i < circles.size(); ++i)
        for (std::size_t j = i + 1; j < circles.size(); ++j) {
            const auto [o1, r1] = circles[i];
            const auto [o2, r2] = circles[j];
            const double d = std::abs(o2 - o1);
            if (d == 0.0 || d > r1 + r2 || d < std::abs(r1 - r2)) continue;
            const double x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
            const double y = std::sqrt(std::max(0.0, r1 * r1 - x * x));
            const Complex e = (o2 - o1) / d;
            push_to(o1 + e * Complex(x, y));
            push_to(o1 + e * Complex(x, -y));
        }
    for (const auto& h : k.planes) {
        const double base = std::arg(h.normal);
        push(base + kPi / 2);
        push(base - kPi / 2);
        const double nn = std::abs(h.normal);
        const Complex e = h.normal / nn;
        for (const auto& [o, r] : circles) {
            const double dist = (o * std::conj(e)).real() - h.offset / nn;
            if (std::abs(dist) > r) continue;
            const double along = std::sqrt(r * r - dist * dist);
            const Complex proj = o - e * dist;
            push_to(proj + e * Complex(0, 1) * along);
            push_to(proj - e * Complex(0, 1) * along);
        }
        for (const auto& g : k.planes) {
            if (&g == &h) continue;
            const Complex n1 = h.normal, n2 = g.normal;
            const double det = n1.real() * n2.imag() - n1.imag() * n2.real();
            if (std::abs(det) < 1e-300) continue;
            const double x = (h.offset * n2.imag() - g.offset * n1.imag()) / det;
            const double y = (n1.real() * g.offset - n2.real() * h.offset) / det;
            push_to(Complex(x, y));
        }
    }
    for (auto& t : a) {
        t.angle = std::fmod(t.angle, 2.0 * kPi);
        if (t.angle < 0) t.angle += 2.0 * kPi;
    }
    std::sort(a.begin(), a.end(), [](const auto& x, const auto& y) { return x.angle < y.angle; });
    std::vector<AngularBreak> out;
    for (const auto& t : a) {
        if (!out.empty() && t.angle - out.back().angle <= 1e-13) {
            if (t.scale > 0.0 && (out.back().scale == 0.0 || t.scale < out.back().scale)) out.back().scale = t.scale;
            continue;
        }
        out.push_back(t);
    }
    return out;
}

// Panels of [a0, a1]: geometric toward an end carrying a singularity at imaginary distance
// `scale`, and no wider than pi/4.
inline std::vector<double> angular_panels(double a0, double a1, double s0, double s1) {
    constexpr double grow = 4.0, widest = kPi / 4;
    const double mid = 0.5 * (a0 + a1);
    std::vector<double> left{a0}, right{a1};
    if (s0 > 0.0)
        for (double w = s0; a0 + w < mid && w < widest; w *= grow) left.push_back(a0 + w);
    if (s1 > 0.0)
        for (double w = s1; a1 - w > mid && w < widest; w *= grow) right.push_back(a1 - w);
    std::vector<double> edges = left;
    const double from = left.back(), to = right.back();
    const int inner = std::max(1, int(std::ceil((to - from) / widest)));
    for (int q = 1; q < inner; ++q) edges.push_back(from + (to - from) * q / inner);
    edges.insert(edges.end(), right.rbegin(), right.rend());
    return edges;
}

}  // namespace detail

struct TentRule {
    int angular_order = 16;  // GL points per angular piece
    int radial_order = 16;

    TentRule refined() const { return {angular_order * 2, radial_order * 2}; }
};

/// A weight prod_j |a_j - w|^{b_j}; coincident points are merged by adding exponents.
struct PointWeight {
    std::vector<Complex> points;
    std::vector<double> exponents;

    static PointWeight make(std::span<const Complex> pts, std::span<const double> exps) {
        require(pts.size() == exps.size(), "PointWeight: one exponent per point");
        PointWeight w;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            bool merged = false;
            for (std::size_t k = 0; k < w.points.size(); ++k)
                if (std::abs(w.points[k] - pts[i]) < 1e-12) {
                    w.exponents[k] += exps[i];
                    merged = true;
                    break;
                }
            if (!merged) {
                w.points.push_back(pts[i]);
                w.exponents.push_back(exps[i]);
            }
        }
        return w;
    }

    static PointWeight from_spec(const WeightSpec& spec) {
        require(spec.kind != WeightKind::JacobianPower, "PointWeight: Jacobian weights live on D^n, not the disc");
        if (spec.kind == WeightKind::Constant) return {};
        std::vector<double> e(spec.points.size(), spec.exponent);
        return make(spec.points, e);
    }

    PointWeight scaled(double factor) const {
        PointWeight w = *this;
        for (auto& e : w.exponents) e *= factor;
        return w;
    }

    double operator()(Complex w) const {
        double v = 1.0;
        for (std::size_t k = 0; k < points.size(); ++k) v *= std::pow(std::abs(points[k] - w), exponents[k]);
        return v;
    }
};

/// int_T weight dV, computed cell by cell over the nearest-point partition of T,
/// in polar coordinates around each point.
inline double tent_integral(const TentRegion& tent, const PointWeight& weight, const TentRule& rule = {}) {
    detail::ConvexRegion base;
    base.discs.push_back({0.0, 1.0});
    if (!tent.whole_disc()) base.discs.push_back({tent.direction(), tent.radius()});

    std::vector<Complex> centers = weight.points;
    std::vector<double> exps = weight.exponents;
    if (centers.empty()) {
        centers.push_back(tent.whole_disc() ? Complex(0.0) : tent.direction() * (1.0 - 0.5 * tent.radius()));
        exps.push_back(0.0);
    }
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double e = exps[i] + 2.0;
        if (e <= 0.0) {
            const bool inside = std::norm(centers[i]) <= 1.0 &&
                                (tent.whole_disc() || std::abs(centers[i] - tent.direction()) <= tent.radius());
            if (inside) throw NonIntegrable("tent_integral: exponent <= -2 at a point of the closed tent");
        }
    }

    const auto xg = gauss_legendre(rule.angular_order, 0.0, 1.0);
    const auto tg = gauss_legendre(rule.radial_order, 0.0, 1.0);
    detail::CompensatedSum<double> total;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const Complex c = centers[i];
        const double b = exps[i];
        const double e = b + 2.0;
        detail::ConvexRegion cell = base;
        for (std::size_t k = 0; k < centers.size(); ++k)
            if (k != i) cell.planes.push_back({centers[k] - c, 0.5 * (std::norm(centers[k]) - std::norm(c))});
        const bool lone = centers.size() == 1;
        constexpr double radial_ratio = 0.25, radial_floor = 1.0 / 4096.0;
        auto others = [&](Complex w) {
            double v = 1.0;
            for (std::size_t k = 0; k < centers.size(); ++k)
                if (k != i) v *= std::pow(std::abs(centers[k] - w), exps[k]);
            return v;
        };

        auto angles = detail::breakpoints(cell, c);
        if (angles.empty()) angles.push_back({0.0, 0.0});
        const std::size_t m = angles.size();
        for (std::size_t piece = 0; piece < m; ++piece) {
            const auto& b0 = angles[piece];
            const auto& b1 = angles[(piece + 1) % m];
            const double a0 = b0.angle;
            const double a1 = piece + 1 < m ? b1.angle : angles[0].angle + 2.0 * kPi;
            if (a1 - a0 <= 0.0) continue;
            const auto mid = cell.ray_interval(c, std::polar(1.0, 0.5 * (a0 + a1)));
            if (!(mid.second > mid.first)) continue;
            const auto edges = detail::angular_panels(a0, a1, b0.scale, b1.scale);
            for (std::size_t pe = 0; pe + 1 < edges.size(); ++pe)
            for (std::size_t ia = 0; ia < xg.nodes.size(); ++ia) {
                // clusters at both ends of the panel, where the chord length may have square-root behaviour
                const double width = edges[pe + 1] - edges[pe];
                const double x = xg.nodes[ia];
                const double phi = edges[pe] + width * 0.5 * (1.0 - std::cos(kPi * x));
                const double dphi = width * 0.5 * kPi * std::sin(kPi * x) * xg.weights[ia];
                const Complex u = std::polar(1.0, phi);
                auto [lo, hi] = cell.ray_interval(c, u);
                if (!(hi > lo)) continue;
                double radial = 0.0;
                if (lo > 0.0) {
                    // the point lies outside the closed tent
                    const double l0 = std::log(lo), l1 = std::log(hi);
                    for (std::size_t ir = 0; ir < tg.nodes.size(); ++ir) {
                        const double rho = std::exp(l0 + (l1 - l0) * tg.nodes[ir]);
                        radial += tg.weights[ir] * (l1 - l0) * std::pow(rho, e) * others(c + rho * u);
                    }
                } else {
                    // t = rho^e absorbs the point's own singularity but makes the other factors
                    // non-smooth at t = 0, so it is used only on the innermost of geometric panels
                    const double inner = lone ? hi : hi * radial_floor;
                    const double t1 = std::pow(inner, e);
                    for (std::size_t ir = 0; ir < tg.nodes.size(); ++ir) {
                        const double rho = std::pow(t1 * tg.nodes[ir], 1.0 / e);
                        radial += tg.weights[ir] * t1 * others(c + rho * u) / e;
                    }
                    for (double r1 = hi; r1 > inner * 1.000001; r1 *= radial_ratio) {
                        const double r0 = std::max(inner, r1 * radial_ratio);
                        for (std::size_t ir = 0; ir < tg.nodes.size(); ++ir) {
                            const double rho = r0 + (r1 - r0) * tg.nodes[ir];
                            radial += tg.weights[ir] * (r1 - r0) * std::pow(rho, b + 1.0) * others(c + rho * u);
                        }
                    }
                }
                total.add(dphi * radial);
            }
        }
    }
    const double v = total.value();
    detail::check_finite(v);
    return v;
}

/// Lebesgue measure of T_z.
inline double tent_area(const TentRegion& tent, const TentRule& rule = {}) {
    return tent_integral(tent, PointWeight{}, rule);
}

/// Average of the weight over T_z, against the area computed on the same cells.
inline double tent_average(const TentRegion& tent, const PointWeight& weight, const TentRule& rule = {}) {
    return tent_integral(tent, weight, rule) / tent_integral(tent, weight.scaled(0.0), rule);
}

/// Radii 0 and 1 - 2^{-k} (k = 1..12), 32 angles, plus the arguments of the weight's points.
inline std::vector<Complex> default_apex_grid(std::span<const Complex> points) {
    std::vector<double> angles;
    for (int j = 0; j < 32; ++j) angles.push_back(2.0 * kPi * j / 32.0);
    for (const auto& a : points)
        if (std::abs(a) > 0.0) angles.push_back(std::arg(a));
    std::vector<Complex> grid{Complex(0.0)};
    for (int k = 1; k <= 12; ++k)
        for (double t : angles) grid.push_back(std::polar(1.0 - std::ldexp(1.0, -k), t));
    return grid;
}

struct BekolleBonamiEstimate {
    double value;   // maximum over the apex grid: a lower bound for the supremum
    Complex apex;   // where the maximum was attained
    std::size_t apexes;
};

/// max over apexes of avg_T(u) * avg_T(u^{-1/(p-1)})^{p-1}.
inline BekolleBonamiEstimate bekolle_bonami_estimate(const PointWeight& weight, double p,
                                                     std::span<const Complex> apex_grid,
                                                     const TentRule& rule = {}) {
    require(p > 1.0, "bekolle_bonami_estimate: p > 1");
    require(!apex_grid.empty(), "bekolle_bonami_estimate: empty apex grid");
    const PointWeight dual = weight.scaled(-1.0 / (p - 1.0));

    // integrability on the whole disc, then a refinement check on it
    const TentRegion disc{};
    const double u0 = tent_average(disc, weight, rule), d0 = tent_average(disc, dual, rule);
    const double u1 = tent_average(disc, weight, rule.refined()), d1 = tent_average(disc, dual, rule.refined());
    if (std::abs(u1 / u0 - 1.0) > 0.5 || std::abs(d1 / d0 - 1.0) > 0.5)
        throw NonIntegrable("bekolle_bonami_estimate: a weight average moves by more than 50% under refinement");

    BekolleBonamiEstimate best{0.0, 0.0, apex_grid.size()};
    for (const auto& z : apex_grid) {
        const TentRegion t{z};
        const double v = tent_average(t, weight, rule) * std::pow(tent_average(t, dual, rule), p - 1.0);
        if (v > best.value) {
            best.value = v;
            best.apex = z;
        }
    }
    return best;
}

inline BekolleBonamiEstimate bekolle_bonami_estimate(const WeightSpec& weight, double p,
                                                     std::span<const Complex> apex_grid,
                                                     const TentRule& rule = {}) {
    return bekolle_bonami_estimate(PointWeight::from_spec(weight), p, apex_grid, rule);
}

/// Bp^{max(1, 1/(p-1))}
inline double bb_norm_bound(double bp, double p) {
    require(bp >= 1.0 && p > 1.0, "bb_norm_bound: Bp >= 1, p > 1");
    return std::pow(bp, std::max(1.0, 1.0 / (p - 1.0)));
}

enum class SectorKind { Wide, Narrow, Annular };

/// Wide: Arg(1 - zs) in (-pi/6, pi/6). Narrow: aperture pi/(6(n-1)).
/// Annular: Narrow intersected with (5 n!)^{2j}(1 - s) < |z - 1/s| < 1.
struct SectorRegion {
    SectorKind kind = SectorKind::Wide;
    double s = 0.5;
    int n = 2;
    int j = 1;

    static SectorRegion wide(double s) { return {SectorKind::Wide, s, 2, 1}; }
    static SectorRegion narrow(double s, int n) { return {SectorKind::Narrow, s, n, 1}; }
    static SectorRegion annular(double s, int n, int j) { return {SectorKind::Annular, s, n, j}; }

    double aperture() const {
        return kind == SectorKind::Wide ? kPi / 6.0 : kPi / (6.0 * double(n - 1));
    }
    double inner_radius() const {
        if (kind != SectorKind::Annular) return 0.0;
        return std::pow(5.0 * double(factorial(std::size_t(n))), 2.0 * j) * (1.0 - s);
    }
    double outer_radius() const {
        return kind == SectorKind::Annular ? 1.0 : std::numeric_limits<double>::infinity();
    }
    bool empty() const { return kind == SectorKind::Annular && inner_radius() >= 1.0; }
};

inline bool region_contains(const SectorRegion& region, Complex z) {
    require(region.s > 0.0 && region.s < 1.0 && region.n >= 2 && region.j >= 1, "region_contains: invalid region");
    if (!(std::norm(z) < 1.0)) return false;
    if (!(std::abs(std::arg(1.0 - z * region.s)) < region.aperture())) return false;
    if (region.kind != SectorKind::Annular) return true;
    const double d = std::abs(z - 1.0 / region.s);
    return region.inner_radius() < d && d < 1.0;
}

enum class IntegralMode { ClosedForm, Quadrature };

/// int over the annular sector of |1 - zs|^{-k}.
///
/// Closed form integrates the polar box around 1/s, which lies inside the disc
/// for these parameters. Quadrature additionally intersects with the disc.
inline double sector_annulus_integral(double s, int j, double k, int n, IntegralMode mode, int order = 32) {
    require(s > 0.0 && s < 1.0 && n >= 2 && j >= 1, "sector_annulus_integral: parameters");
    require(k >= 2.0, "sector_annulus_integral: k >= 2");
    const SectorRegion region = SectorRegion::annular(s, n, j);
    const double rin = region.inner_radius();
    if (rin >= 1.0) throw EmptyRegion("sector_annulus_integral: inner radius >= 1");
    const double ap = region.aperture();

    if (mode == IntegralMode::ClosedForm) {
        const double pre = 2.0 * ap / std::pow(s, k);  // = pi/(3 s^k (n-1))
        if (std::abs(k - 2.0) < 1e-12) return -pre * std::log(rin);
        return pre * (std::pow(rin, 2.0 - k) - 1.0) / (k - 2.0);
    }

    // z = 1/s - r e^{i theta}; inside the disc iff r1(theta) < r < r2(theta)
    const double c0 = 1.0 / (s * s) - 1.0;
    auto disc_interval = [&](double theta) -> std::pair<double, double> {
        const double b = std::cos(theta) / s;
        const double d = b * b - c0;
        if (d <= 0.0) return {1.0, 0.0};
        const double root = std::sqrt(d);
        return {c0 / (b + root), b + root};
    };
    // angles where a binding constraint changes: r1 = rin, r2 = 1, tangency
    std::vector<double> cuts{-ap, ap};
    auto add_cos = [&](double cv) {
        if (cv > -1.0 && cv < 1.0) {
            const double t = std::acos(cv);
            if (t < ap) {
                cuts.push_back(t);
                cuts.push_back(-t);
            }
        }
    };
    add_cos(s * (rin * rin + c0) / (2.0 * rin));
    add_cos(s * (1.0 + c0) / 2.0);
    add_cos(s * std::sqrt(c0));
    std::sort(cuts.begin(), cuts.end());

    const auto g = gauss_legendre(order, 0.0, 1.0);
    detail::CompensatedSum<double> acc;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double a = cuts[p], b = cuts[p + 1];
        if (b - a < 1e-15) continue;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const double theta = a + (b - a) * g.nodes[i];
            auto [r1, r2] = disc_interval(theta);
            const double lo = std::max(rin, r1), hi = std::min(1.0, r2);
            if (!(hi > lo)) continue;
            // r = e^tau: r^{1-k} dr = r^{2-k} dtau
            const double l0 = std::log(lo), l1 = std::log(hi);
            double radial = 0.0;
            for (std::size_t m = 0; m < g.nodes.size(); ++m) {
                const double tau = l0 + (l1 - l0) * g.nodes[m];
                radial += g.weights[m] * std::exp((2.0 - k) * tau);
            }
            acc.add((b - a) * g.weights[i] * (l1 - l0) * radial);
        }
    }
    return acc.value() / std::pow(s, k);
}

}  // namespace bergman
