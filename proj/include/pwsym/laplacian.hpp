#pragma once

#include <pwsym/error.hpp>
#include <pwsym/geometry.hpp>
#include <pwsym/radial_function.hpp>

#include <cmath>
#include <string>
#include <variant>
#include <vector>

namespace pwsym {

inline constexpr std::size_t min_laplacian_grid = 257;

/// Radial Laplace-Beltrami operator f'' + (w'/w) f' on uniform samples over
/// [0, pi], by fourth-order centered differences. The samples are extended
/// evenly across both ends; at t = 0 and t = pi the singular drift term is
/// replaced by its limit, giving (2a+2) f''(0) and (2b+2) f''(pi).
inline RadialFunction radial_laplacian(const SpaceDescriptor& space, const RadialFunction& f) {
    const auto* s = std::get_if<Samples>(&f.form);
    if (s == nullptr) throw ResolutionError("radial_laplacian needs a sampled function");
    const std::size_t n = s->size();
    if (n < min_laplacian_grid)
        throw ResolutionError("grid of " + std::to_string(n) + " points is coarser than the " +
                              std::to_string(min_laplacian_grid) + "-point minimum");

    const double h = s->spacing();
    const auto last = static_cast<long>(n) - 1;
    auto at = [&](long i) {
        if (i < 0) i = -i;
        if (i > last) i = 2 * last - i;
        return s->values[static_cast<std::size_t>(i)];
    };
    const double a_drift = space.jacobi_a + 0.5;
    const double b_drift = space.jacobi_b + 0.5;

    std::vector<Complex> out(n);
    for (long i = 0; i <= last; ++i) {
        const Complex fm2 = at(i - 2), fm1 = at(i - 1), f0 = at(i), fp1 = at(i + 1),
                      fp2 = at(i + 2);
        const Complex d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
        Complex value;
        if (i == 0) {
            value = (2.0 * space.jacobi_a + 2.0) * d2;
        } else if (i == last) {
            value = (2.0 * space.jacobi_b + 2.0) * d2;
        } else {
            const Complex d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
            const double half = 0.5 * static_cast<double>(i) * h;
            // w'/w for w = sin(t/2)^(2a+1) cos(t/2)^(2b+1).
            const double drift = a_drift / std::tan(half) - b_drift * std::tan(half);
            value = d2 + drift * d1;
        }
        out[static_cast<std::size_t>(i)] = value;
    }
    return {Samples{std::move(out)}, f.support_hint};
}

} // namespace pwsym
