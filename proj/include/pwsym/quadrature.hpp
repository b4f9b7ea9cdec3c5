#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

namespace pwsym {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussLegendreRule compute_gauss_legendre(std::size_t n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        const double k = static_cast<double>(i) + 1.0;
        double x = std::cos(std::numbers::pi * (k - 0.25) / (dn + 0.5)) *
                   (1.0 - (dn - 1.0) / (8.0 * dn * dn * dn));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t j = 2; j <= n; ++j) {
                const double dj = static_cast<double>(j);
                const double p2 = ((2.0 * dj - 1.0) * x * p1 - (dj - 1.0) * p0) / dj;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = dn * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t j = 2; j <= n; ++j) {
            const double dj = static_cast<double>(j);
            const double p2 = ((2.0 * dj - 1.0) * x * p1 - (dj - 1.0) * p0) / dj;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : dn * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace detail

/// Shared, immutable rule for n nodes. Rules are memoized because the
/// spectral transforms request the same handful of node counts repeatedly.
inline std::shared_ptr<const GaussLegendreRule> gauss_legendre(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const GaussLegendreRule>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    auto rule = std::make_shared<const GaussLegendreRule>(detail::compute_gauss_legendre(n));
    std::lock_guard lock(mutex);
    return cache.emplace(n, std::move(rule)).first->second;
}

/// Integrate f over [lo, hi] with an n-point rule.
template <typename F>
auto integrate_gauss(F&& f, double lo, double hi, std::size_t n) {
    const auto rule = gauss_legendre(n);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    using R = decltype(f(mid));
    R sum{};
    for (std::size_t i = 0; i < n; ++i)
        sum += rule->weights[i] * f(mid + half * rule->nodes[i]);
    return sum * half;
}

} // namespace pwsym
