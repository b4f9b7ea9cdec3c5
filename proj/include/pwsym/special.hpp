#pragma once

// Spherical functions of complex degree on the catalog spaces, group
// characters of SU(2) and the normalized radial density.
//
// For a space with Jacobi exponents (a, b) and rho = (a+b+1)/2 the
// spherical function is
//
//     psi_l(t) = 2F1(-l, l + 2 rho; a + 1; sin^2(t/2)),
//
// which is entire in l and invariant under l -> -l - 2 rho. At l in Z+ it is
// the Jacobi polynomial P_l^(a,b)(cos t) normalized to 1 at t = 0.
//
// Evaluation strategy (nu = l + rho, reflected so that Re nu >= 0):
//   * Re l < 2: direct summation of the hypergeometric series. The factors
//     (k + rho)^2 - nu^2 of consecutive terms have positive real part for
//     all but the first two k, so the sum has no catastrophic cancellation.
//     On the imaginary ray through -rho all terms are positive.
//   * Re l >= 2: seeds at l0 = l - floor(Re l) and l0 + 1 from the series,
//     then the three-term degree recurrence, which is stable for
//     x = cos t in [-1, 1] (both solutions oscillate).
//   * sin^2(t/2) > 0.95 and non-integer degree: the series value and
//     derivative at 0.95 are continued by re-expanding the hypergeometric
//     ODE in Taylor series, halving the distance to z = 1 per step.

#include <pwsym/error.hpp>
#include <pwsym/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

namespace pwsym {

struct EvalRequest {
    SpaceDescriptor space;
    SpectralPoint lambda;
    double t = 0.0;
    double tol = 1e-14;
    std::size_t max_terms = 100000;
};

/// exp(overflow_exponent) is the largest magnitude the engine will return.
inline constexpr double overflow_exponent = 700.0;

/// Closest distance to the antipode at which non-polynomial degrees are
/// evaluated.
inline constexpr double antipode_margin = 1e-6;

namespace detail {

/// Jacobi data needed by the evaluation kernels.
struct JacobiParams {
    double a;
    double b;
    double rho;
    bool cosine; // circle: psi_l(t) = cos(l t) in closed form
};

inline JacobiParams jacobi_params(const SpaceDescriptor& space) {
    return {space.jacobi_a, space.jacobi_b, space.rho_c, space.kind == SpaceKind::torus};
}

inline bool is_nonnegative_integer(Complex l) {
    return l.imag() == 0.0 && l.real() >= 0.0 && l.real() == std::floor(l.real());
}

struct SeriesValue {
    Complex value;
    Complex derivative; // d/dz
};

inline constexpr double series_switch_z = 0.95;

/// 2F1(A, B; C; z) with A = -l, B = l + 2 rho, C = a + 1, summed directly.
inline SeriesValue hypergeometric_series(const JacobiParams& p, Complex l, double z, double tol,
                                         std::size_t max_terms, bool want_derivative) {
    const Complex A = -l;
    const Complex B = l + 2.0 * p.rho;
    const double C = p.a + 1.0;
    Complex term = 1.0;
    Complex sum = 1.0;
    Complex dsum = 0.0;
    double largest = 1.0;
    for (std::size_t k = 0; k < max_terms; ++k) {
        const double dk = static_cast<double>(k);
        const Complex ratio = (dk + A) * (dk + B) / ((dk + C) * (dk + 1.0)) * z;
        term *= ratio;
        sum += term;
        if (want_derivative) dsum += (dk + 1.0) * term;
        const double mag = std::abs(term);
        largest = std::max(largest, mag);
        if (mag == 0.0) break;
        const double r = std::max(std::abs(ratio), z);
        if (k >= 8 && r < 1.0) {
            const double tail = mag * r / (1.0 - r);
            if (tail <= std::max(tol * std::abs(sum), 1e-17 * largest)) {
                return {sum, want_derivative ? dsum / z : Complex{}};
            }
        }
        if (!std::isfinite(mag)) throw RangeError("hypergeometric series overflow");
    }
    if (std::abs(term) == 0.0) return {sum, want_derivative ? dsum / z : Complex{}};
    throw TruncationError("hypergeometric series did not converge within " +
                              std::to_string(max_terms) + " terms",
                          std::abs(term));
}

/// Continue (u, du/dz) of the hypergeometric ODE from z = 1 - d0 to
/// z = 1 - d1 (d1 < d0). The distance to the singular point z = 1 is carried
/// explicitly so that it keeps full relative precision near the antipode.
inline SeriesValue continue_hypergeometric(const JacobiParams& p, Complex l, SeriesValue start,
                                           double d0, double d1, double tol,
                                           std::size_t max_terms) {
    const Complex A = -l;
    const Complex B = l + 2.0 * p.rho;
    const double C = p.a + 1.0;
    const Complex r = -A * B;
    const Complex q1 = -(A + B + 1.0);
    Complex u = start.value;
    Complex du = start.derivative;
    double dc = d0;
    std::size_t used = 0;
    const double transient = std::abs(l) + 2.0 * p.rho + 8.0;
    while (dc > d1) {
        const double h = std::min(dc - d1, 0.5 * dc);
        const double p0 = (1.0 - dc) * dc;
        const double p1 = 2.0 * dc - 1.0;
        const Complex q0 = C + q1 * (1.0 - dc);
        Complex e_prev = u;     // c_n h^n
        Complex e_cur = du * h; // c_{n+1} h^{n+1}
        Complex sum = e_prev + e_cur;
        Complex dsum = du;
        int small_run = 0;
        bool converged = false;
        for (std::size_t n = 0; used < max_terms; ++n, ++used) {
            const double dn = static_cast<double>(n);
            const Complex e_next =
                -((p1 * dn + q0) * (dn + 1.0) * e_cur * h +
                  (-dn * (dn - 1.0) + q1 * dn + r) * e_prev * h * h) /
                (p0 * (dn + 2.0) * (dn + 1.0));
            sum += e_next;
            dsum += (dn + 2.0) * e_next / h;
            e_prev = e_cur;
            e_cur = e_next;
            if (!std::isfinite(std::abs(e_next))) throw RangeError("ODE continuation overflow");
            if (std::abs(e_next) <= tol * 1e-2 * std::abs(sum)) {
                if (++small_run >= 2 && dn > transient * std::sqrt(dc)) {
                    converged = true;
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        if (!converged)
            throw TruncationError("Taylor continuation did not converge within " +
                                      std::to_string(max_terms) + " terms",
                                  std::abs(e_cur));
        u = sum;
        du = dsum;
        dc = (dc - h == d1) ? d1 : dc - h;
    }
    return {u, du};
}

/// d = 1 - z = cos^2(t/2), passed separately to keep precision near z = 1.
inline Complex hypergeometric_seed(const JacobiParams& p, Complex l, double z, double d,
                                   double tol, std::size_t max_terms) {
    if (z <= series_switch_z || is_nonnegative_integer(l))
        return hypergeometric_series(p, l, z, tol, max_terms, false).value;
    const auto start = hypergeometric_series(p, l, series_switch_z, tol, max_terms, true);
    return continue_hypergeometric(p, l, start, 1.0 - series_switch_z, d, tol, max_terms).value;
}

/// Core evaluation of psi_l(t); see the file comment for the strategy.
inline Complex spherical_value(const JacobiParams& p, Complex lambda, double t, double tol,
                               std::size_t max_terms) {
    if (!(t >= 0.0) || t > std::numbers::pi)
        throw RangeError("radial coordinate t=" + std::to_string(t) + " outside [0, pi]");
    if (t == 0.0) return 1.0;

    Complex nu = lambda + p.rho;
    if (nu.real() < 0.0 || (nu.real() == 0.0 && nu.imag() < 0.0)) nu = -nu;
    if (std::abs(nu.imag()) * t > overflow_exponent)
        throw RangeError("spherical function exceeds overflow guard (|Im l| t = " +
                         std::to_string(std::abs(nu.imag()) * t) + ")");

    if (p.cosine) return std::cos(nu * t);

    const Complex l = nu - p.rho;
    const bool polynomial = is_nonnegative_integer(l);
    if (!polynomial && t >= std::numbers::pi - antipode_margin)
        throw RangeError("non-polynomial degree evaluated within " +
                         std::to_string(antipode_margin) + " of the antipode");

    const double s = std::sin(0.5 * t);
    const double c = std::cos(0.5 * t);
    const double z = s * s;
    const double d = c * c;
    if (l.real() < 2.0) return hypergeometric_seed(p, l, z, d, tol, max_terms);

    const double shift = std::floor(l.real());
    const Complex l0 = l - shift;
    Complex prev = hypergeometric_seed(p, l0, z, d, tol, max_terms);
    Complex cur = hypergeometric_seed(p, l0 + 1.0, z, d, tol, max_terms);
    const double x = std::cos(t);
    const double al = p.a;
    const double be = p.b;
    const double ab = al + be;
    const auto steps = static_cast<long>(shift) - 1;
    for (long j = 0; j < steps; ++j) {
        const Complex n = l0 + 1.0 + static_cast<double>(j);
        const Complex two_n = 2.0 * n + ab;
        const Complex lhs = 2.0 * (n + ab + 1.0) * (n + al + 1.0) * two_n;
        const Complex next =
            ((two_n + 1.0) * ((two_n + 2.0) * two_n * x + (al * al - be * be)) * cur -
             2.0 * n * (n + be) * (two_n + 2.0) * prev) /
            lhs;
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace detail

/// Value of the holomorphic continuation psi_lambda(t).
inline Complex spherical_eval(const EvalRequest& req) {
    if (!(req.tol > 0.0)) throw RangeError("tolerance must be positive");
    if (req.max_terms == 0) throw RangeError("max_terms must be positive");
    return detail::spherical_value(detail::jacobi_params(req.space), req.lambda.lambda, req.t,
                                   req.tol, req.max_terms);
}

inline Complex spherical_eval(const SpaceDescriptor& space, SpectralPoint lambda, double t) {
    return detail::spherical_value(detail::jacobi_params(space), lambda.lambda, t, 1e-14, 100000);
}

/// SU(2) character at conjugacy angle theta, continued to complex n:
/// chi_n(theta) = sin((n+1) theta/2) / sin(theta/2).
inline Complex character_eval(SpectralPoint n, double theta) {
    const Complex m = n.lambda + 1.0;
    const double s = std::sin(0.5 * theta);
    if (std::abs(s) > 1e-6) return std::sin(0.5 * m * theta) / s;

    // Near theta = 2 pi k. The singularity is removable at k = 0 and for
    // integer n; elsewhere it is a genuine pole and we evaluate directly.
    const double k = std::round(theta / (2.0 * std::numbers::pi));
    const double eps = theta - 2.0 * std::numbers::pi * k;
    const bool integer_n = n.lambda.imag() == 0.0 && n.lambda.real() == std::round(n.lambda.real());
    if (k != 0.0 && !integer_n) return std::sin(0.5 * m * theta) / s;

    // sin(m(pi k + eps/2)) / ((-1)^k sin(eps/2)) with sin(m pi k) = 0.
    const double sign = std::fmod(std::abs(k), 2.0) == 0.0 ? 1.0 : -1.0;
    const Complex cos_phase = k == 0.0 ? Complex(1.0) : std::cos(m * std::numbers::pi * k);
    const double half = 0.5 * eps;
    if (half == 0.0) return sign * cos_phase * m;
    const Complex ratio = std::sin(m * half) / std::sin(half);
    return sign * cos_phase * ratio;
}

/// Normalization constant 1 / B(a+1, b+1) of the radial density.
inline double density_constant(const SpaceDescriptor& space) {
    return 1.0 / std::beta(space.jacobi_a + 1.0, space.jacobi_b + 1.0);
}

/// Radial part of the normalized invariant measure:
/// w(t) = sin(t/2)^(2a+1) cos(t/2)^(2b+1) / B(a+1, b+1), total mass 1 on [0, pi].
inline double weight_density(const SpaceDescriptor& space, double t) {
    if (!(t >= 0.0 && t <= std::numbers::pi))
        throw RangeError("weight_density: t=" + std::to_string(t) + " outside [0, pi]");
    const double s = std::sin(0.5 * t);
    const double c = std::cos(0.5 * t);
    return density_constant(space) * std::pow(s, 2.0 * space.jacobi_a + 1.0) *
           std::pow(c, 2.0 * space.jacobi_b + 1.0);
}

/// Eigenvalue of the radial Laplacian on psi_l: -l (l + 2 rho).
inline Complex laplacian_eigenvalue(const SpaceDescriptor& space, SpectralPoint l) {
    const Complex shifted = l.lambda + space.rho_c;
    return -(shifted * shifted - space.rho_c * space.rho_c);
}

} // namespace pwsym
