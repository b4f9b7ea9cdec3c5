#pragma once

#include <pwsym/error.hpp>
#include <pwsym/geometry.hpp>
#include <pwsym/special.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace pwsym {

/// exp(-p s^2 / (1 - s^2)) with s = t/r; C-infinity, equal to 1 at t = 0 and
/// flat at t = r.
struct Bump {
    double r = 1.0;
    double p = 1.0;
};

/// cos(pi t / (2r))^q on [0, r], zero beyond; exactly C^(q-1) at t = r.
struct CosPow {
    double r = 1.0;
    int q = 2;
};

/// The spherical function psi_l of the space the function is evaluated on.
struct PolySpherical {
    int l = 0;
};

/// Values on the uniform grid t_i = i pi / (n-1), i = 0..n-1. Evaluated
/// between grid points by local 6-point Lagrange interpolation, extended
/// evenly across t = 0 and t = pi.
struct Samples {
    std::vector<Complex> values;

    std::size_t size() const noexcept { return values.size(); }
    double spacing() const { return std::numbers::pi / static_cast<double>(values.size() - 1); }
};

/// Arbitrary in-process function of t; not expressible in the DSL.
struct Callable {
    std::function<Complex(double)> fn;
    std::string label = "callable";
};

using RadialForm = std::variant<Bump, CosPow, PolySpherical, Samples, Callable>;

struct RadialFunction {
    RadialForm form;
    std::optional<double> support_hint;
};

inline RadialFunction bump(double r, double p = 1.0) { return {Bump{r, p}, r}; }
inline RadialFunction cospow(double r, int q) { return {CosPow{r, q}, r}; }
inline RadialFunction poly_spherical(int l) { return {PolySpherical{l}, std::nullopt}; }
inline RadialFunction constant_one() { return poly_spherical(0); }
inline RadialFunction callable(std::function<Complex(double)> fn,
                               std::optional<double> support = std::nullopt,
                               std::string label = "callable") {
    return {Callable{std::move(fn), std::move(label)}, support};
}

inline RadialFunction samples(std::vector<Complex> values,
                              std::optional<double> support = std::nullopt) {
    if (values.size() < 2) throw ResolutionError("sampled function needs at least 2 grid points");
    return {Samples{std::move(values)}, support};
}

namespace detail {

inline Complex interpolate_samples(const Samples& s, double t) {
    const std::size_t n = s.size();
    const double h = s.spacing();
    const double pos = t / h;
    const auto last = static_cast<long>(n) - 1;
    auto at = [&](long i) {
        // Even reflection about both ends.
        while (i < 0 || i > last) {
            if (i < 0) i = -i;
            if (i > last) i = 2 * last - i;
        }
        return s.values[static_cast<std::size_t>(i)];
    };
    const auto nearest = static_cast<long>(std::llround(pos));
    if (std::abs(pos - static_cast<double>(nearest)) < 1e-12) return at(nearest);
    const auto first = static_cast<long>(std::floor(pos)) - 2;
    Complex sum = 0.0;
    for (long j = 0; j < 6; ++j) {
        double basis = 1.0;
        const double xj = static_cast<double>(first + j);
        for (long m = 0; m < 6; ++m) {
            if (m == j) continue;
            const double xm = static_cast<double>(first + m);
            basis *= (pos - xm) / (xj - xm);
        }
        sum += basis * at(first + j);
    }
    return sum;
}

} // namespace detail

/// Value of f at radial coordinate t in [0, pi].
inline Complex evaluate(const SpaceDescriptor& space, const RadialFunction& f, double t) {
    const double at = std::abs(t);
    return std::visit(
        [&](const auto& form) -> Complex {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, Bump>) {
                if (at >= form.r) return 0.0;
                const double s2 = (at / form.r) * (at / form.r);
                return std::exp(-form.p * s2 / (1.0 - s2));
            } else if constexpr (std::is_same_v<T, CosPow>) {
                if (at >= form.r) return 0.0;
                return std::pow(std::cos(0.5 * std::numbers::pi * at / form.r), form.q);
            } else if constexpr (std::is_same_v<T, PolySpherical>) {
                return spherical_eval(space, static_cast<double>(form.l), at);
            } else if constexpr (std::is_same_v<T, Samples>) {
                return detail::interpolate_samples(form, at);
            } else {
                return form.fn(at);
            }
        },
        f.form);
}

/// Radius beyond which f vanishes identically (pi when f has full support).
inline double support_radius_of(const RadialFunction& f) {
    double support = std::numbers::pi;
    if (const auto* b = std::get_if<Bump>(&f.form)) support = b->r;
    if (const auto* c = std::get_if<CosPow>(&f.form)) support = c->r;
    if (const auto* s = std::get_if<Samples>(&f.form)) {
        // Last nonzero sample plus the interpolation stencil half-width.
        std::size_t last = 0;
        for (std::size_t i = 0; i < s->size(); ++i)
            if (s->values[i] != Complex{}) last = i;
        support = std::min(std::numbers::pi, static_cast<double>(last + 3) * s->spacing());
    }
    if (f.support_hint) support = std::min(support, *f.support_hint);
    return std::clamp(support, 0.0, std::numbers::pi);
}

/// Uniform samples of f on n points covering [0, pi].
inline RadialFunction sample(const SpaceDescriptor& space, const RadialFunction& f,
                             std::size_t n) {
    if (n < 2) throw ResolutionError("sample grid needs at least 2 points");
    const double h = std::numbers::pi / static_cast<double>(n - 1);
    std::vector<Complex> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = evaluate(space, f, static_cast<double>(i) * h);
    return {Samples{std::move(values)}, f.support_hint};
}

inline std::string describe(const RadialFunction& f) {
    return std::visit(
        [](const auto& form) -> std::string {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, Bump>)
                return "bump(r=" + std::to_string(form.r) + ",p=" + std::to_string(form.p) + ")";
            else if constexpr (std::is_same_v<T, CosPow>)
                return "cospow(r=" + std::to_string(form.r) + ",q=" + std::to_string(form.q) + ")";
            else if constexpr (std::is_same_v<T, PolySpherical>)
                return "sph(l=" + std::to_string(form.l) + ")";
            else if constexpr (std::is_same_v<T, Samples>)
                return "samples(" + std::to_string(form.size()) + ")";
            else
                return form.label;
        },
        f.form);
}

} // namespace pwsym
