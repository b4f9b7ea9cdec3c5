#include <pwsym/holo.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace pwsym;

namespace {

const double pi = std::numbers::pi;

} // namespace

TEST(Ray, BumpValueIsPositiveReal) {
    const auto s2 = catalog_space("s2");
    const auto ray = extend_on_ray(s2, bump(1.0), 1.0, {10.0});
    ASSERT_EQ(ray.values.size(), 1u);
    const Complex v = ray.values[0];
    EXPECT_GT(v.real(), 0.0);
    EXPECT_LE(std::abs(v.imag()), 1e-12 * v.real());
    // Direct quadrature of the hypergeometric integrand at l = -1/2 + 10i,
    // using the conical-function integral representation
    // P_{-1/2+i s}(cos t) = (2/pi) int_0^t cosh(s u) / sqrt(2(cos u - cos t)) du.
    const double s = 10.0;
    const double want = oracle::simpson(
        [&](double t) {
            if (t == 0.0) return 0.0;
            // Substitute u = t sin(phi) to remove the endpoint singularity.
            const double inner = oracle::simpson(
                [&](double phi) {
                    // cos u - cos t = 2 sin((t+u)/2) sin((t-u)/2), with
                    // t - u = t cos^2(phi) / (1 + sin(phi)); cos(phi) cancels.
                    const double u = t * std::sin(phi);
                    const double cp = std::cos(phi);
                    const double gap = t * cp * cp / (1.0 + std::sin(phi));
                    if (cp <= 0.0) return std::cosh(s * t) * std::sqrt(t / std::sin(t));
                    const double den = std::sqrt(4.0 * std::sin(0.5 * (t + u)) * std::sin(0.5 * gap));
                    return std::cosh(s * u) * t * cp / den;
                },
                0.0, pi / 2, 400);
            return evaluate(s2, bump(1.0), t).real() * (2.0 / pi) * inner * 0.5 * std::sin(t);
        },
        0.0, 1.0, 2000);
    EXPECT_NEAR(v.real(), want, 1e-6 * want);
}

TEST(Ray, ZeroSigmaIsWeylFixedPoint) {
    const auto s2 = catalog_space("s2");
    const auto f = bump(1.3);
    const auto ray = extend_on_ray(s2, f, 1.0, {0.0});
    EXPECT_EQ(ray.values[0], forward(s2, f, -0.5));
}

TEST(Ray, TorusIsCoshIntegral) {
    const auto torus = catalog_space("torus");
    const auto f = bump(1.0);
    const auto ray = extend_on_ray(torus, f, 1.0, {3.0, 20.0});
    for (std::size_t i = 0; i < 2; ++i) {
        const double s = ray.sigmas[i];
        const double want = oracle::simpson(
            [&](double t) { return evaluate(torus, f, t).real() * std::cosh(s * t) / pi; }, 0.0, 1.0, 20000);
        EXPECT_NEAR(ray.values[i].real(), want, 1e-9 * want);
    }
}

TEST(Ray, OverflowGuardTruncates) {
    const auto s2 = catalog_space("s2");
    const auto ray = extend_on_ray(s2, bump(2.0), 1.0, {100.0, 300.0, 349.0, 351.0, 400.0});
    EXPECT_TRUE(ray.truncated);
    EXPECT_EQ(ray.sigmas.size(), 3u);
}

TEST(TypeFit, BumpOnS2) {
    const auto ray = extend_on_ray(catalog_space("s2"), bump(1.0), 1.0, linspace(60, 120, 31));
    const auto rep = fit_exponential_type(ray);
    EXPECT_NEAR(rep.r_hat, 1.0, 0.1);
    EXPECT_FALSE(rep.envelope_used);
    EXPECT_EQ(rep.window_lo, 60.0);
    EXPECT_EQ(rep.window_hi, 120.0);
    EXPECT_GT(rep.slope_stderr, 0.0);
}

TEST(TypeFit, PolynomialGrowthHasTypeZero) {
    // Coefficient data supported on finitely many lattice points extends to
    // a polynomial in the Casimir value; sample one on the ray.
    const auto g = [](Complex l) {
        const Complex c = l * (l + 1.0);
        return 1.0 + 0.3 * c + 0.01 * c * c;
    };
    const auto rep = fit_exponential_type(sample_ray(g, -0.5, 1.0, linspace(60, 120, 31)));
    EXPECT_LE(std::abs(rep.r_hat), 0.05);
}

TEST(TypeFit, PolySphericalIntegralExtensionHasFullType) {
    // The integral extension of psi_2 lives on all of [0, pi), so its type
    // is the full radius even though its lattice data are finitely supported.
    const auto rep = fit_exponential_type(
        extend_on_ray(catalog_space("s2"), poly_spherical(2), 1.0, linspace(60, 120, 31)));
    EXPECT_NEAR(rep.r_hat, pi, 0.1 * pi);
}

TEST(TypeFit, CosineHasTypePi) {
    const auto g = [](Complex l) { return std::cos(pi * (l + 0.5)); };
    const auto rep = fit_exponential_type(sample_ray(g, -0.5, 1.0, linspace(60, 120, 31)));
    EXPECT_NEAR(rep.r_hat, pi, 0.02 * pi);
}

TEST(TypeFit, SignChangesUseEnvelope) {
    // On l = -1/2 + i sigma this is cosh(pi sigma) cos(sigma): real, oscillating.
    const auto g = [](Complex l) { return std::cos(pi * (l + 0.5)) * std::cosh(l + 0.5); };
    const auto rep = fit_exponential_type(sample_ray(g, -0.5, 1.0, linspace(60, 120, 241)));
    EXPECT_TRUE(rep.envelope_used);
    EXPECT_NEAR(rep.r_hat, pi, 0.05 * pi);
}

TEST(TypeFit, ScalingInvariance) {
    const auto ray = extend_on_ray(catalog_space("s2"), bump(1.5), 1.0, linspace(60, 120, 31));
    auto scaled = ray;
    for (auto& v : scaled.values) v *= Complex(-3.7e5, 0.0);
    EXPECT_NEAR(fit_exponential_type(scaled).r_hat, fit_exponential_type(ray).r_hat, 1e-6);
}

TEST(TypeFit, ZeroFunctionIsFlagged) {
    RaySamples ray{"s2", -0.5, 1.0, linspace(60, 120, 31), std::vector<Complex>(31, 0.0), false};
    const auto rep = fit_exponential_type(ray);
    EXPECT_TRUE(rep.zero_function);
    EXPECT_EQ(rep.r_hat, 0.0);
}

TEST(TypeFit, Preconditions) {
    const auto g = [](Complex l) { return std::exp(l); };
    EXPECT_THROW(fit_exponential_type(sample_ray(g, 0.0, 1.0, linspace(60, 120, 10))), DegenerateInputError);
    EXPECT_THROW(fit_exponential_type(sample_ray(g, 0.0, 1.0, linspace(10, 50, 30))), DegenerateInputError);
}

TEST(TypeFit, MonotoneInRadius) {
    const auto s2 = catalog_space("s2");
    double prev = 0.0;
    for (double r : {0.5, 1.0, 1.5, 2.0, 2.5}) {
        const double r_hat = support_radius(s2, bump(r)).r_hat;
        EXPECT_NEAR(r_hat, r, 0.1 * r);
        EXPECT_GT(r_hat, prev);
        prev = r_hat;
    }
}

TEST(TypeFit, NaiveSlopeIsBiasedLow) {
    const auto rep = support_radius(catalog_space("s2"), bump(0.5));
    EXPECT_LT(rep.naive_slope, rep.r_hat);
}

TEST(Support, ZeroFunction) {
    const auto zero = callable([](double) { return Complex{}; }, 1.0, "zero");
    const auto rep = support_radius(catalog_space("s2"), zero);
    EXPECT_TRUE(rep.zero_function);
    EXPECT_EQ(rep.r_hat, 0.0);
}

TEST(Support, OtherSpaces) {
    for (auto name : {"s4", "cp2", "torus"})
        EXPECT_NEAR(support_radius(catalog_space(name), bump(1.0)).r_hat, 1.0, 0.1) << name;
}

TEST(PW, BumpExtensionPasses) {
    const auto s2 = catalog_space("s2");
    const auto rep = pw_membership(s2, extension_of(s2, bump(1.0)), 1.0);
    EXPECT_TRUE(rep.verdict_for_r);
    EXPECT_LE(rep.symmetry_residual, 1e-10);
    EXPECT_EQ(rep.coverage, 1.0);
    EXPECT_EQ(rep.decay_constants.size(), 9u);
}

TEST(PW, IdentityViolatesSymmetry) {
    const auto s2 = catalog_space("s2");
    const auto rep = pw_membership(s2, [](Complex l) { return l; }, 1.0);
    EXPECT_FALSE(rep.verdict_for_r);
    EXPECT_GT(rep.symmetry_residual, 0.5);
}

TEST(PW, UnderclaimedRadiusFails) {
    const auto s2 = catalog_space("s2");
    const auto rep = pw_membership(s2, extension_of(s2, bump(0.5)), 0.25);
    EXPECT_FALSE(rep.verdict_for_r);
    EXPECT_NEAR(rep.type_fit.r_hat, 0.5, 0.05);
}

TEST(PW, LatticeAgreement) {
    const auto s2 = catalog_space("s2");
    const auto f = bump(1.0);
    const auto g = extension_of(s2, f);
    const auto table = coefficient_table(s2, f, 20);
    for (const auto& e : table.entries) EXPECT_EQ(g(e.l), e.value);
}

TEST(PW, FailedEvaluationsReduceCoverage) {
    const auto s2 = catalog_space("s2");
    const auto g = [](Complex l) -> Complex {
        if (l.imag() > 100.0) throw RangeError("out of reach");
        return std::cos(0.5 * (l + 0.5) * (l + 0.5));
    };
    const auto rep = pw_membership(s2, g, 1.0);
    EXPECT_LT(rep.coverage, 1.0);
    EXPECT_FALSE(rep.verdict_for_r);
}

// Synthesize from lattice data, then measure the support of the result and
// re-extend it.
TEST(PW, SurjectivityProbe) {
    const auto s2 = catalog_space("s2");
    const double r = 1.0;
    const auto f = bump(r);
    // Truncation error at l_max = 200 is a few 1e-7 near the antipode.
    const auto table = coefficient_table(s2, f, 200);
    const auto grid = uniform_grid(4097);
    const auto synth = synthesize(s2, table, grid);
    double peak = 0.0;
    for (const auto& v : synth.values) peak = std::max(peak, std::abs(v));
    double measured = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::abs(synth.values[i]) > 1e-5 * peak) measured = grid[i];
    EXPECT_LE(measured, r + (grid[1] - grid[0]));

    const auto rebuilt = synth.as_radial_function();
    for (int l = 0; l <= 10; ++l) {
        const Complex again = forward(s2, rebuilt, static_cast<double>(l));
        EXPECT_NEAR(std::abs(again - table.at(l)), 0.0, 1e-8) << l;
    }
}

TEST(Carlson, Sharpness) {
    const auto rep = carlson_sharpness();
    EXPECT_LE(rep.max_lattice_value, 1e-9);
    EXPECT_LE(rep.symmetry_residual, 1e-12);
    EXPECT_NEAR(rep.type_fit.r_hat, pi, 0.02 * pi);
    EXPECT_FALSE(rep.conclusion.empty());
}
