#pragma once

// Class functions on SU(2), their character transforms, and the K-average
// onto the sphere S^2 = SU(2)/U(1).
//
// Class functions are functions of the conjugacy angle psi in [0, 2 pi]
// (eigenvalues e^{+-i psi/2}). Haar integration reduces to
//
//     int_U F du = (1/2pi) int_0^{2pi} F(psi) 2 sin^2(psi/2) dpsi.
//
// With k_theta = diag(e^{i theta}, e^{-i theta}) and a_t the rotation by t/2,
// tr(k_theta a_t) = 2 cos(theta) cos(t/2), so the conjugacy angle of
// k_theta a_t is never smaller than t.

#include <pwsym/error.hpp>
#include <pwsym/geometry.hpp>
#include <pwsym/holo.hpp>
#include <pwsym/parallel.hpp>
#include <pwsym/radial_function.hpp>
#include <pwsym/special.hpp>
#include <pwsym/transform.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace pwsym {

/// The character chi_n of the (n+1)-dimensional representation.
struct Character {
    int n = 0;
};

/// exp(-p s^2 / (1 - s^2)), s = psi / r, supported in psi < r.
struct BumpAngle {
    double r = 1.0;
    double p = 1.0;
};

/// Values on the uniform grid psi_i = 2 pi i / (n-1).
struct AngleSamples {
    std::vector<Complex> values;
};

using ClassForm = std::variant<Character, BumpAngle, AngleSamples>;

struct ClassFunction {
    ClassForm form;
    std::optional<double> support_hint; // in conjugacy angle
};

inline ClassFunction character(int n) {
    if (n < 0) throw RangeError("character degree must be nonnegative, got " + std::to_string(n));
    return {Character{n}, std::nullopt};
}
inline ClassFunction bump_angle(double r, double p = 1.0) {
    if (!(r > 0.0 && r < 2.0 * std::numbers::pi))
        throw RangeError("bump_angle radius must lie in (0, 2 pi), got " + std::to_string(r));
    return {BumpAngle{r, p}, r};
}
inline ClassFunction constant_class_one() { return character(0); }
inline ClassFunction angle_samples(std::vector<Complex> values) {
    if (values.size() < 2) throw ResolutionError("sampled class function needs at least 2 points");
    return {AngleSamples{std::move(values)}, std::nullopt};
}

/// F at conjugacy angle psi; psi is folded into [0, 2 pi] first.
inline Complex evaluate(const ClassFunction& f, double psi) {
    const double two_pi = 2.0 * std::numbers::pi;
    psi = std::fmod(std::abs(psi), 2.0 * two_pi);
    if (psi > two_pi) psi = 2.0 * two_pi - psi;
    return std::visit(
        [&](const auto& form) -> Complex {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, Character>) {
                return character_eval(static_cast<double>(form.n), psi);
            } else if constexpr (std::is_same_v<T, BumpAngle>) {
                if (psi >= form.r) return 0.0;
                const double s2 = (psi / form.r) * (psi / form.r);
                return std::exp(-form.p * s2 / (1.0 - s2));
            } else {
                // Same interpolation as radial samples, in the half angle.
                return detail::interpolate_samples(Samples{form.values}, 0.5 * psi);
            }
        },
        f.form);
}

inline double class_support(const ClassFunction& f) {
    double support = 2.0 * std::numbers::pi;
    if (const auto* b = std::get_if<BumpAngle>(&f.form)) support = b->r;
    if (f.support_hint) support = std::min(support, *f.support_hint);
    return support;
}

inline std::string describe(const ClassFunction& f) {
    return std::visit(
        [](const auto& form) -> std::string {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, Character>)
                return "char(n=" + std::to_string(form.n) + ")";
            else if constexpr (std::is_same_v<T, BumpAngle>)
                return "bump_angle(r=" + std::to_string(form.r) + ",p=" + std::to_string(form.p) + ")";
            else
                return "angle_samples(" + std::to_string(form.values.size()) + ")";
        },
        f.form);
}

/// Haar integral of a class function given as a function of psi, over
/// psi in [0, hi] (the integrand must vanish beyond hi).
template <typename Fn>
    requires std::invocable<Fn&, double>
ForwardResult weyl_integrate(Fn&& fn, double hi = 2.0 * std::numbers::pi,
                             std::size_t n0 = 256) {
    auto integrand = [&](double psi) -> Complex {
        const double s = std::sin(0.5 * psi);
        return fn(psi) * (s * s / std::numbers::pi);
    };
    return detail::controlled_integral(integrand, hi, n0);
}

inline Complex weyl_integrate(const ClassFunction& f) {
    return weyl_integrate([&](double psi) { return evaluate(f, psi); }, class_support(f)).value;
}

/// F^(n) = <F, chi_n> at any complex n. The density and the character's
/// denominator are combined into sin((n+1) psi/2) sin(psi/2) / pi so the
/// integrand stays finite at psi = 2 pi for non-integer n.
inline ForwardResult group_transform_detailed(const ClassFunction& f, SpectralPoint n) {
    const Complex m = n.lambda + 1.0;
    auto integrand = [&](double psi) -> Complex {
        const Complex fv = evaluate(f, psi);
        if (fv == Complex{}) return 0.0;
        return fv * std::sin(0.5 * m * psi) * (std::sin(0.5 * psi) / std::numbers::pi);
    };
    return detail::controlled_integral(integrand, class_support(f),
                                       detail::base_node_count(n.lambda));
}

inline Complex group_transform(const ClassFunction& f, SpectralPoint n) {
    return group_transform_detailed(f, n).value;
}

/// Table over n = 0..n_max; entries use `l` for the n coordinate.
inline CoefficientTable group_table(const ClassFunction& f, int n_max) {
    if (n_max < 0) throw RangeError("n_max must be nonnegative");
    auto results = detail::parallel_map<ForwardResult>(
        static_cast<std::size_t>(n_max) + 1,
        [&](std::size_t i) { return group_transform_detailed(f, static_cast<double>(i)); });
    CoefficientTable table{catalog_space("su2-group"), describe(f), {}};
    for (std::size_t i = 0; i < results.size(); ++i)
        table.entries.push_back(
            {static_cast<double>(i), results[i].value, results[i].quad_err, results[i].nodes});
    return table;
}

/// [<chi_n, chi_m>] for n, m <= n_max.
inline std::vector<std::vector<Complex>> character_gram(int n_max) {
    std::vector<std::vector<Complex>> gram(static_cast<std::size_t>(n_max) + 1);
    for (int a = 0; a <= n_max; ++a)
        for (int b = 0; b <= n_max; ++b)
            gram[static_cast<std::size_t>(a)].push_back(
                group_transform(character(a), static_cast<double>(b)));
    return gram;
}

/// The character extension of F as an accessor in the n coordinate.
inline SpectralAccessor group_extension_of(ClassFunction f) {
    return [f = std::move(f)](Complex n) { return group_transform(f, n); };
}

/// Paley-Wiener test with the sign-twisted symmetry Phi(-n-2) = -Phi(n).
/// The type is fitted along n = -1 + 2 i sigma, so r is reported in
/// conjugacy-angle units.
inline PWReport group_pw_check(const SpectralAccessor& phi, double r, const PWOptions& opt = {}) {
    return detail::pw_report(phi, 1.0, -1, r, opt, 2.0);
}

/// Samples of Phi(-1 + 2 i sigma), the group analogue of extend_on_ray.
inline RaySamples group_extend_on_ray(const ClassFunction& f, const std::vector<double>& sigmas) {
    const double support = class_support(f);
    std::vector<double> kept;
    bool truncated = false;
    for (double s : sigmas) {
        if (s * support > overflow_exponent) {
            truncated = true;
            break;
        }
        kept.push_back(s);
    }
    auto ray = sample_ray(group_extension_of(f), -1.0, 2.0, kept, "su2-group");
    ray.truncated = truncated;
    return ray;
}

namespace detail {

using Mat2 = std::array<Complex, 4>; // row-major

inline Mat2 mat_mul(const Mat2& x, const Mat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

/// Conjugacy angle in [0, 2 pi] of u = [[alpha, -conj(beta)], [beta, conj(alpha)]]:
/// cos(psi/2) = Re alpha = Re tr / 2, sin(psi/2) = |(Im alpha, beta)|. The
/// two-argument form keeps full precision near the identity and -1.
inline double conjugacy_angle(const Mat2& u) {
    const double c = u[0].real();
    const double s = std::hypot(u[0].imag(), std::abs(u[2]));
    return 2.0 * std::atan2(s, c);
}

/// (1/2pi) int_0^{2pi} F(k_theta a_t) dtheta by the periodic trapezoid rule,
/// doubled until successive values agree.
inline Complex k_average_at(const ClassFunction& f, double t) {
    const Mat2 a{std::cos(0.5 * t), -std::sin(0.5 * t), std::sin(0.5 * t), std::cos(0.5 * t)};
    auto value_at = [&](double theta) {
        const Complex e = std::polar(1.0, theta);
        const Mat2 k{e, 0.0, 0.0, std::conj(e)};
        return evaluate(f, conjugacy_angle(mat_mul(k, a)));
    };
    // Absolute floor for averages that vanish (odd characters, t = pi).
    const double floor = 1e-15 * std::max(1.0, std::abs(evaluate(f, 0.0)));
    std::size_t n = 64;
    Complex sum = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex v = value_at(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
        sum += v;
        scale += std::abs(v);
    }
    Complex prev = sum / static_cast<double>(n);
    for (int level = 0; level < 12; ++level) {
        // Add the midpoints of the current grid.
        for (std::size_t i = 0; i < n; ++i) {
            const Complex v = value_at(2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                       static_cast<double>(n));
            sum += v;
            scale += std::abs(v);
        }
        n *= 2;
        const Complex cur = sum / static_cast<double>(n);
        const double tol = 1e-14 * std::max(std::abs(cur), scale / static_cast<double>(n)) + floor;
        if (std::abs(cur - prev) <= tol) return cur;
        prev = cur;
    }
    throw QuadratureError("k_average did not converge at t=" + std::to_string(t), std::abs(prev),
                          std::abs(sum / static_cast<double>(n)));
}

} // namespace detail

/// K-average of F as a radial function on S^2, evaluated exactly (by
/// quadrature over K) at every t.
inline RadialFunction k_average_function(const ClassFunction& f) {
    std::optional<double> support;
    if (std::holds_alternative<BumpAngle>(f.form) || f.support_hint)
        support = std::min(class_support(f), std::numbers::pi);
    return callable([f](double t) { return detail::k_average_at(f, t); }, support,
                    "k_average(" + describe(f) + ")");
}

/// K-average of F sampled on t_grid.
inline GridValues k_average(const ClassFunction& f, std::span<const double> t_grid) {
    GridValues out{{t_grid.begin(), t_grid.end()}, {}};
    out.values = detail::parallel_map<Complex>(
        t_grid.size(), [&](std::size_t i) { return detail::k_average_at(f, t_grid[i]); });
    return out;
}

struct SupportTransferReport {
    double measured_support;
    double claimed_r;
    double grid_spacing;
    bool skipped; // F has no compact support below pi
    bool holds;   // measured <= r + grid spacing
};

/// Largest grid t with |f(t)| > threshold max|f| for f the K-average of F.
inline SupportTransferReport support_transfer_check(const ClassFunction& f, double threshold = 1e-12,
                                                    std::size_t grid_points = 2048) {
    const double r = class_support(f);
    const auto grid = uniform_grid(grid_points);
    const double spacing = grid[1] - grid[0];
    SupportTransferReport rep{std::numbers::pi, r, spacing, false, false};
    if (r >= std::numbers::pi) {
        rep.skipped = true;
        return rep;
    }
    const auto avg = k_average(f, grid);
    double peak = 0.0;
    for (const auto& v : avg.values) peak = std::max(peak, std::abs(v));
    rep.measured_support = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::abs(avg.values[i]) > threshold * peak) rep.measured_support = grid[i];
    rep.holds = rep.measured_support <= r + spacing;
    return rep;
}

} // namespace pwsym
