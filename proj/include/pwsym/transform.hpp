#pragma once

// Spherical Fourier transform of radial functions and its inverse series.
//
//   forward(f, l)  = int_0^pi f(t) psi_l(t) w(t) dt      (any complex l)
//   synthesize     = sum_l d_l f~(l) psi_l(t)
//   d_l            = 1 / int_0^pi |psi_l|^2 w dt          (Schur norm)
//
// On the circle the lattice is two-sided and synthesis is the exponential
// series sum_n f^(n) e^{i n t}; for even f this equals the one-sided cosine
// series with d_n = 2 (n != 0).

#include <pwsym/error.hpp>
#include <pwsym/geometry.hpp>
#include <pwsym/laplacian.hpp>
#include <pwsym/parallel.hpp>
#include <pwsym/quadrature.hpp>
#include <pwsym/radial_function.hpp>
#include <pwsym/special.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pwsym {

struct ForwardResult {
    Complex value;
    double quad_err = 0.0;
    std::size_t nodes = 0;
};

/// Number of successive node doublings before giving up.
inline constexpr int max_quadrature_doublings = 4;
inline constexpr double quadrature_rel_tol = 1e-12;

namespace detail {

/// At least 8 max(|l|, 1) + 64 nodes, rounded up to a multiple of 128 so
/// that neighbouring spectral points share memoized rules.
inline std::size_t base_node_count(Complex lambda) {
    const auto n = static_cast<std::size_t>(std::ceil(8.0 * std::max(std::abs(lambda), 1.0))) + 64;
    return (n + 127) / 128 * 128;
}

/// Doubling-controlled Gauss-Legendre integral of integrand over [0, hi].
/// Agreement is relative to max(|I|, int |integrand|) so that exact zeros
/// (orthogonality) converge.
template <typename F>
ForwardResult controlled_integral(F&& integrand, double hi, std::size_t n0) {
    auto run = [&](std::size_t n, double& scale) {
        const auto rule = gauss_legendre(n);
        const double half = 0.5 * hi;
        Complex sum = 0.0;
        double abs_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = half * (rule->nodes[i] + 1.0);
            const Complex v = integrand(t);
            sum += rule->weights[i] * v;
            abs_sum += rule->weights[i] * std::abs(v);
        }
        scale = abs_sum * half;
        return sum * half;
    };
    double scale = 0.0;
    Complex prev = run(n0, scale);
    std::size_t n = n0;
    for (int d = 0; d < max_quadrature_doublings; ++d) {
        n *= 2;
        Complex cur = run(n, scale);
        const double diff = std::abs(cur - prev);
        if (diff <= quadrature_rel_tol * std::max(std::abs(cur), scale) || diff == 0.0)
            return {cur, diff, n};
        prev = cur;
    }
    throw QuadratureError("quadrature failed to converge after " +
                              std::to_string(max_quadrature_doublings) + " doublings (" +
                              std::to_string(n) + " nodes)",
                          std::abs(prev), std::abs(run(n, scale)));
}

/// Gauss-Legendre rule of m nodes on every cell [i h, (i+1) h] of [0, hi],
/// m doubled until successive totals agree. Used for sampled functions,
/// whose interpolant is a different polynomial on each cell.
template <typename F>
ForwardResult composite_integral(F&& integrand, double h, double hi, std::size_t m0) {
    const auto cells = static_cast<std::size_t>(std::ceil(hi / h - 1e-9));
    auto run = [&](std::size_t m, double& scale) {
        const auto rule = gauss_legendre(m);
        Complex sum = 0.0;
        double abs_sum = 0.0;
        for (std::size_t c = 0; c < cells; ++c) {
            const double lo = static_cast<double>(c) * h;
            const double half = 0.5 * (std::min(lo + h, hi) - lo);
            for (std::size_t i = 0; i < m; ++i) {
                const Complex v = integrand(lo + half * (rule->nodes[i] + 1.0));
                sum += rule->weights[i] * half * v;
                abs_sum += rule->weights[i] * half * std::abs(v);
            }
        }
        scale = abs_sum;
        return sum;
    };
    double scale = 0.0;
    Complex prev = run(m0, scale);
    std::size_t m = m0;
    for (int d = 0; d < max_quadrature_doublings; ++d) {
        m *= 2;
        Complex cur = run(m, scale);
        const double diff = std::abs(cur - prev);
        if (diff <= quadrature_rel_tol * std::max(std::abs(cur), scale) || diff == 0.0)
            return {cur, diff, m * cells};
        prev = cur;
    }
    throw QuadratureError("composite quadrature failed to converge (" + std::to_string(m) +
                              " nodes per cell)",
                          std::abs(prev), std::abs(run(m, scale)));
}

/// Integral of integrand over the support of f, choosing the composite
/// rule for sampled functions.
template <typename F>
ForwardResult integrate_over_support(const RadialFunction& f, F&& integrand, double support,
                                     std::size_t n0) {
    if (const auto* s = std::get_if<Samples>(&f.form)) {
        // Enough nodes per cell to resolve the oscillation of psi_l as well.
        const double h = s->spacing();
        const auto cells = static_cast<double>(s->size() - 1);
        const auto per_cell = static_cast<std::size_t>(
            std::clamp(std::ceil(static_cast<double>(n0) / cells), 4.0, 64.0));
        return composite_integral(integrand, h, support, per_cell);
    }
    return controlled_integral(integrand, support, n0);
}

} // namespace detail

/// Spherical transform at any complex spectral parameter, with the error
/// estimate and node count of the accepted quadrature.
inline ForwardResult forward_detailed(const SpaceDescriptor& space, const RadialFunction& f,
                                      SpectralPoint lambda) {
    double support = support_radius_of(f);
    if (support <= 0.0) return {0.0, 0.0, 0};
    const auto params = detail::jacobi_params(space);
    // Off the lattice psi is singular at the antipode. The weight vanishes
    // there at least linearly, so dropping the last antipode_margin costs
    // O(margin^2) relative.
    Complex nu = lambda.lambda + params.rho;
    if (nu.real() < 0.0 || (nu.real() == 0.0 && nu.imag() < 0.0)) nu = -nu;
    const Complex degree = nu - params.rho;
    if (!params.cosine && !detail::is_nonnegative_integer(degree))
        support = std::min(support, std::numbers::pi - antipode_margin);
    const double norm = density_constant(space);
    const double wa = 2.0 * space.jacobi_a + 1.0;
    const double wb = 2.0 * space.jacobi_b + 1.0;
    auto integrand = [&](double t) -> Complex {
        const Complex fv = evaluate(space, f, t);
        if (fv == Complex{}) return 0.0;
        const double w = norm * std::pow(std::sin(0.5 * t), wa) * std::pow(std::cos(0.5 * t), wb);
        return fv * detail::spherical_value(params, lambda.lambda, t, 1e-14, 100000) * w;
    };
    return detail::integrate_over_support(f, integrand, support,
                                          detail::base_node_count(lambda.lambda));
}

inline Complex forward(const SpaceDescriptor& space, const RadialFunction& f,
                       SpectralPoint lambda) {
    return forward_detailed(space, f, lambda).value;
}

struct CoefficientEntry {
    double l;
    Complex value;
    double quad_err;
    std::size_t nodes;
};

struct CoefficientTable {
    SpaceDescriptor space;
    std::string function;
    std::vector<CoefficientEntry> entries;

    std::size_t max_nodes() const {
        std::size_t n = 0;
        for (const auto& e : entries) n = std::max(n, e.nodes);
        return n;
    }
    double max_quad_err() const {
        double err = 0.0;
        for (const auto& e : entries) err = std::max(err, e.quad_err);
        return err;
    }
    /// Entry at lattice point l; throws when l is not tabulated.
    Complex at(double l) const {
        for (const auto& e : entries)
            if (e.l == l) return e.value;
        throw RangeError("coefficient table has no entry at l=" + std::to_string(l));
    }
};

inline CoefficientTable coefficient_table(const SpaceDescriptor& space, const RadialFunction& f,
                                          double l_max) {
    const auto lattice = spherical_lattice(space, l_max);
    auto results = detail::parallel_map<ForwardResult>(
        lattice.size(), [&](std::size_t i) { return forward_detailed(space, f, lattice[i]); });
    CoefficientTable table{space, describe(f), {}};
    table.entries.reserve(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i)
        table.entries.push_back({lattice[i].lambda.real(), results[i].value, results[i].quad_err,
                                 results[i].nodes});
    return table;
}

/// Representation dimension as the reciprocal Schur norm of psi_l.
inline double dimension(const SpaceDescriptor& space, int l) {
    if (l < 0 && space.kind != SpaceKind::torus)
        throw RangeError("dimension: l=" + std::to_string(l) + " is not in the lattice");
    const int degree = std::abs(l);
    const auto norm = forward_detailed(space, poly_spherical(degree), static_cast<double>(degree));
    return 1.0 / norm.value.real();
}

/// Values of a synthesized function on an arbitrary grid.
struct GridValues {
    std::vector<double> t;
    std::vector<Complex> values;

    /// Reinterpret as samples when the grid is the uniform grid over [0, pi].
    RadialFunction as_radial_function() const {
        const std::size_t n = t.size();
        if (n < 2 || t.front() != 0.0 || std::abs(t.back() - std::numbers::pi) > 1e-12)
            throw ResolutionError("grid values do not cover [0, pi] uniformly");
        return samples(values);
    }
};

inline std::vector<double> uniform_grid(std::size_t n, double hi = std::numbers::pi) {
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = hi * static_cast<double>(i) / static_cast<double>(n - 1);
    return grid;
}

/// Partial Fourier series sum_{l <= l_max} d_l f~(l) psi_l(t) on t_grid.
inline GridValues synthesize(const SpaceDescriptor& space, const CoefficientTable& table,
                             std::span<const double> t_grid) {
    GridValues out{{t_grid.begin(), t_grid.end()}, {}};
    const auto params = detail::jacobi_params(space);
    if (space.kind == SpaceKind::torus) {
        out.values = detail::parallel_map<Complex>(t_grid.size(), [&](std::size_t i) {
            Complex sum = 0.0;
            for (const auto& e : table.entries)
                sum += e.value * std::exp(Complex(0.0, e.l * t_grid[i]));
            return sum;
        });
        return out;
    }
    const auto weights = detail::parallel_map<double>(table.entries.size(), [&](std::size_t i) {
        return dimension(space, static_cast<int>(table.entries[i].l));
    });
    out.values = detail::parallel_map<Complex>(t_grid.size(), [&](std::size_t i) {
        Complex sum = 0.0;
        for (std::size_t k = 0; k < table.entries.size(); ++k) {
            const auto& e = table.entries[k];
            sum += weights[k] * e.value *
                   detail::spherical_value(params, e.l, t_grid[i], 1e-14, 100000);
        }
        return sum;
    });
    return out;
}

inline constexpr std::size_t default_laplacian_grid = 4096;

/// Largest residual of the Laplacian eigenrelation (L f)~(l) = -l(l+2 rho) f~(l)
/// over the lattice up to l_max, each scaled by 1 + |f~(l)| (l+1)^2.
inline double eigen_check(const SpaceDescriptor& space, const RadialFunction& f, double l_max,
                          std::size_t grid = default_laplacian_grid) {
    const auto lf = radial_laplacian(space, sample(space, f, grid));
    const auto lattice = spherical_lattice(space, l_max);
    const auto residuals = detail::parallel_map<double>(lattice.size(), [&](std::size_t i) {
        const Complex ft = forward(space, f, lattice[i]);
        const Complex lft = forward(space, lf, lattice[i]);
        const double l = lattice[i].lambda.real();
        return std::abs(lft - laplacian_eigenvalue(space, lattice[i]) * ft) /
               (1.0 + std::abs(ft) * (std::abs(l) + 1.0) * (std::abs(l) + 1.0));
    });
    double worst = 0.0;
    for (double r : residuals) worst = std::max(worst, r);
    return worst;
}

/// int_0^pi |f|^2 w dt.
inline double l2_norm_squared(const SpaceDescriptor& space, const RadialFunction& f) {
    const double support = support_radius_of(f);
    if (support <= 0.0) return 0.0;
    auto integrand = [&](double t) -> Complex {
        return std::norm(evaluate(space, f, t)) * weight_density(space, t);
    };
    return detail::integrate_over_support(f, integrand, support, 128).value.real();
}

inline constexpr double parseval_stable_change = 1e-11;

struct ParsevalReport {
    double defect;
    double l_max_used;
    double series_energy;
    double norm_squared;
};

/// Relative Parseval defect |sum_l d_l |f~(l)|^2 - ||f||^2| / ||f||^2, with
/// l_max raised by half (up to l_cap) until the partial sums change by less
/// than parseval_stable_change relative.
inline ParsevalReport parseval_check(const SpaceDescriptor& space, const RadialFunction& f,
                                     double l_max, double l_cap = 320.0) {
    const double norm2 = l2_norm_squared(space, f);
    if (norm2 == 0.0) return {0.0, l_max, 0.0, 0.0};
    std::vector<double> energy; // energy[l] = d_l |f~(l)|^2
    auto extend_to = [&](int top) {
        const auto start = static_cast<int>(energy.size());
        if (top < start) return;
        auto chunk = detail::parallel_map<double>(
            static_cast<std::size_t>(top - start + 1), [&](std::size_t i) {
                const int l = start + static_cast<int>(i);
                return dimension(space, l) * std::norm(forward(space, f, static_cast<double>(l)));
            });
        energy.insert(energy.end(), chunk.begin(), chunk.end());
    };
    auto partial = [&](int top) {
        double s = 0.0;
        for (int l = 0; l <= top; ++l) s += energy[static_cast<std::size_t>(l)];
        return s;
    };
    int top = std::max(0, static_cast<int>(std::floor(l_max)));
    extend_to(top);
    double sum = partial(top);
    while (top < static_cast<int>(l_cap)) {
        const int next = std::min(static_cast<int>(l_cap), std::max(top + top / 2, top + 8));
        extend_to(next);
        const double next_sum = partial(next);
        const bool stable = std::abs(next_sum - sum) <= parseval_stable_change * next_sum;
        top = next;
        sum = next_sum;
        if (stable) break;
    }
    return {std::abs(sum - norm2) / norm2, static_cast<double>(top), sum, norm2};
}

struct DecayBound {
    int k;
    double constant;    // C_k = max_l |f~(l)| (1 + l)^k
    double argmax_l;    // where C_k is attained
    bool established;   // attained before the end of the window
};

/// Envelope (running maximum over |l' - l| <= half_width) of |values|.
inline std::vector<double> envelope(std::span<const double> magnitudes, std::size_t half_width) {
    std::vector<double> env(magnitudes.size());
    for (std::size_t i = 0; i < magnitudes.size(); ++i) {
        const std::size_t lo = i >= half_width ? i - half_width : 0;
        const std::size_t hi = std::min(magnitudes.size() - 1, i + half_width);
        env[i] = *std::max_element(magnitudes.begin() + static_cast<long>(lo),
                                   magnitudes.begin() + static_cast<long>(hi) + 1);
    }
    return env;
}

inline std::vector<double> nonnegative_magnitudes(const CoefficientTable& table) {
    std::vector<double> mags;
    for (const auto& e : table.entries)
        if (e.l >= 0.0) mags.push_back(std::abs(e.value));
    return mags;
}

/// Polynomial decay bounds |f~(l)| <= C_k (1+l)^-k fitted on the
/// nonnegative lattice points of the table, for k = 0..k_max. A bound is
/// "established" when the weighted envelope peaks at least `margin`
/// lattice steps before the end of the window, i.e. the coefficients have
/// visibly overtaken the k-th power within the data.
inline std::vector<DecayBound> decay_bounds(const CoefficientTable& table, int k_max,
                                            std::size_t margin = 4) {
    const auto mags = nonnegative_magnitudes(table);
    const auto env = envelope(mags, 2);
    std::vector<DecayBound> out;
    for (int k = 0; k <= k_max; ++k) {
        double best = 0.0;
        std::size_t arg = 0;
        for (std::size_t l = 0; l < env.size(); ++l) {
            const double v = env[l] * std::pow(1.0 + static_cast<double>(l), k);
            if (v > best) {
                best = v;
                arg = l;
            }
        }
        out.push_back({k, best, static_cast<double>(arg), arg + margin < env.size()});
    }
    return out;
}

/// Least-squares slope of -log(envelope |f~(l)|) against log(1+l) over
/// l in [l_lo, l_hi]: the fitted algebraic decay exponent.
inline double fit_algebraic_decay(const CoefficientTable& table, double l_lo, double l_hi) {
    const auto mags = nonnegative_magnitudes(table);
    const auto env = envelope(mags, 3);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t l = 0; l < env.size(); ++l) {
        const double dl = static_cast<double>(l);
        if (dl < l_lo || dl > l_hi || env[l] <= 0.0) continue;
        const double x = std::log1p(dl);
        const double y = std::log(env[l]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3) throw DegenerateInputError("too few nonzero coefficients for a decay fit");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -slope;
}

} // namespace pwsym
