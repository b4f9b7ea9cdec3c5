#include <pwsym/laplacian.hpp>
#include <pwsym/radial_function.hpp>
#include <pwsym/special.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace pwsym;

namespace {

const double pi = std::numbers::pi;

double rel(Complex got, Complex want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

} // namespace

TEST(Spherical, S2DegreeOneIsCosine) {
    const auto s2 = catalog_space("s2");
    for (double t : {0.3, 1.0, 2.0}) {
        EXPECT_NEAR(std::abs(spherical_eval(s2, 1.0, t) - std::cos(t)), 0.0, 1e-15);
        EXPECT_NEAR(spherical_eval(s2, 1.0, t).real(), oracle::legendre(1, std::cos(t)), 1e-15);
    }
}

TEST(Spherical, OneAtOrigin) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-40.0, 40.0);
    for (auto name : catalog_names) {
        const auto s = catalog_space(name);
        for (int i = 0; i < 50; ++i) {
            const Complex l(u(rng), u(rng));
            EXPECT_LE(std::abs(spherical_eval(s, l, 0.0) - 1.0), 1e-13);
        }
    }
}

TEST(Spherical, ConjugatePairOnSymmetryLine) {
    const auto s2 = catalog_space("s2");
    const Complex a = spherical_eval(s2, Complex(-0.5, 2.0), 1.0);
    const Complex b = spherical_eval(s2, Complex(-0.5, -2.0), 1.0);
    EXPECT_LE(std::abs(a - b), 1e-14 * std::abs(a));
}

TEST(Spherical, WeylInvariance) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> re(-30.0, 30.0);
    std::uniform_real_distribution<double> im(-15.0, 15.0);
    std::uniform_real_distribution<double> tt(0.0, 3.0);
    for (auto name : catalog_names) {
        const auto s = catalog_space(name);
        for (int i = 0; i < 60; ++i) {
            const Complex l(re(rng), im(rng));
            const double t = tt(rng);
            const Complex v = spherical_eval(s, l, t);
            const Complex w = spherical_eval(s, weyl_reflect(s, l), t);
            EXPECT_LE(std::abs(v - w), 1e-12 * std::max(1.0, std::abs(v))) << name << " " << l << " " << t;
        }
    }
}

TEST(Spherical, ConjugationSymmetry) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    const auto s4 = catalog_space("s4");
    for (int i = 0; i < 50; ++i) {
        const Complex l(u(rng), u(rng) / 4);
        const double t = 0.1 + std::abs(u(rng)) / 8;
        EXPECT_LE(rel(spherical_eval(s4, std::conj(l), t), std::conj(spherical_eval(s4, l, t))), 1e-13);
    }
}

TEST(Spherical, IntegerDegreesMatchJacobiRecurrence) {
    for (auto name : {"s2", "s3", "s4", "s5", "cp2"}) {
        const auto s = catalog_space(name);
        for (int l = 0; l <= 50; ++l) {
            for (double t : {0.05, 0.7, 1.5, 2.4, 3.0, 3.14}) {
                const double want = oracle::normalized_jacobi(l, s.jacobi_a, s.jacobi_b, t);
                const Complex got = spherical_eval(s, static_cast<double>(l), t);
                EXPECT_LE(std::abs(got - want), 1e-12 * std::max(1.0, std::abs(want)))
                    << name << " l=" << l << " t=" << t;
            }
        }
    }
}

TEST(Spherical, TorusIsCosine) {
    const auto torus = catalog_space("torus");
    for (double t : {0.2, 1.3, 2.9})
        for (double l : {0.0, 1.0, 4.5, -3.0})
            EXPECT_NEAR(spherical_eval(torus, l, t).real(), std::cos(l * t), 1e-14);
}

// |psi_{i sigma}(t)| <= C e^{sigma t} on t <= pi/2 with C bounded in sigma.
TEST(Spherical, ExponentialGrowthBound) {
    for (auto name : {"s2", "s4", "cp2"}) {
        const auto s = catalog_space(name);
        double c_max = 0.0;
        for (double sigma = 1.0; sigma <= 200.0; sigma += 7.0)
            for (double t = 0.05; t <= s.omega_radius_t; t += 0.05)
                c_max = std::max(c_max, std::abs(spherical_eval(s, Complex(0.0, sigma), t)) /
                                            std::exp(sigma * t));
        EXPECT_LT(c_max, 2.0) << name;
    }
}

TEST(Spherical, EvenInT) {
    // psi is a function of sin^2(t/2), so psi(-t) = psi(t).
    const auto s2 = catalog_space("s2");
    const auto f = poly_spherical(3);
    EXPECT_EQ(evaluate(s2, f, -1.1), evaluate(s2, f, 1.1));
}

TEST(Spherical, Errors) {
    const auto s2 = catalog_space("s2");
    EXPECT_THROW(spherical_eval(s2, Complex(0.3, 0.0), pi), RangeError);
    EXPECT_THROW(spherical_eval(s2, Complex(0.0, 800.0), 1.0), RangeError);
    EXPECT_NO_THROW(spherical_eval(s2, 4.0, pi));
    EXPECT_NEAR(spherical_eval(s2, 4.0, pi).real(), 1.0, 1e-12);
    EvalRequest req{s2, Complex(5.5, 3.0), 2.0, 1e-14, 3};
    EXPECT_THROW(spherical_eval(req), TruncationError);
    try {
        spherical_eval(req);
    } catch (const TruncationError& e) {
        EXPECT_GT(e.last_term(), 0.0);
    }
}

TEST(Character, Examples) {
    for (double th : {0.0, 0.4, 2.0, 5.9}) EXPECT_NEAR(character_eval(0.0, th).real(), 1.0, 1e-14);
    EXPECT_NEAR(character_eval(3.0, 0.0).real(), 4.0, 1e-15);
    EXPECT_NEAR(character_eval(3.0, 1e-9).real(), 4.0, 1e-12);
    EXPECT_NEAR(character_eval(3.0, 2 * pi).real(), -4.0, 1e-12);
}

TEST(Character, AntisymmetryUnderShiftedReflection) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_real_distribution<double> th(0.01, 2 * pi - 0.01);
    for (int i = 0; i < 200; ++i) {
        const Complex n(u(rng), u(rng) / 5);
        const double theta = th(rng);
        const Complex a = character_eval(n, theta);
        const Complex b = character_eval(-n - 2.0, theta);
        EXPECT_LE(std::abs(a + b), 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST(Character, MatchesDirectFormula) {
    for (int n = 0; n <= 8; ++n)
        for (double th = 0.0; th < 2 * pi; th += 0.3)
            EXPECT_NEAR(character_eval(static_cast<double>(n), th).real(), oracle::su2_character(n, th), 1e-12);
}

TEST(Density, S2IsHalfSine) {
    const auto s2 = catalog_space("s2");
    for (double t : {0.0, 0.5, 1.7, 3.0}) EXPECT_NEAR(weight_density(s2, t), 0.5 * std::sin(t), 1e-15);
}

TEST(Density, VanishesAtOrigin) {
    for (auto name : {"s2", "s3", "s4", "s5", "cp2", "su2-group"})
        EXPECT_EQ(weight_density(catalog_space(name), 0.0), 0.0) << name;
}

TEST(Density, NormalizedAgainstNumericBeta) {
    for (auto name : catalog_names) {
        const auto s = catalog_space(name);
        if (s.kind == SpaceKind::torus) continue;
        const double mass = oracle::density_mass(s.jacobi_a, s.jacobi_b);
        EXPECT_NEAR(density_constant(s) * mass, 1.0, 1e-9) << name;
        EXPECT_NEAR(oracle::simpson([&](double t) { return weight_density(s, t); }, 0.0, pi, 20000),
                    1.0, 1e-9)
            << name;
    }
}

TEST(Density, S4ClosedForm) {
    // sin^3(t/2) cos^3(t/2) / B(2,2) = (6/8) sin^3 t.
    const auto s4 = catalog_space("s4");
    for (double t : {0.3, 1.2, 2.8}) EXPECT_NEAR(weight_density(s4, t), 0.75 * std::pow(std::sin(t), 3), 1e-14);
}

TEST(Density, RejectsOutOfRange) {
    EXPECT_THROW(weight_density(catalog_space("s2"), -0.1), RangeError);
    EXPECT_THROW(weight_density(catalog_space("s2"), 3.2), RangeError);
}

TEST(Laplacian, Eigenvalues) {
    EXPECT_EQ(laplacian_eigenvalue(catalog_space("s2"), 1.0), Complex(-2.0, 0.0));
    EXPECT_EQ(laplacian_eigenvalue(catalog_space("s4"), 2.0), Complex(-10.0, 0.0));
    EXPECT_EQ(laplacian_eigenvalue(catalog_space("torus"), 3.0), Complex(-9.0, 0.0));
}

TEST(Laplacian, CosineOnS2) {
    const auto s2 = catalog_space("s2");
    const auto f = sample(s2, poly_spherical(1), 1025);
    const auto lf = radial_laplacian(s2, f);
    const auto& in = std::get<Samples>(f.form).values;
    const auto& out = std::get<Samples>(lf.form).values;
    for (std::size_t i = 0; i < in.size(); ++i) EXPECT_NEAR(std::abs(out[i] + 2.0 * in[i]), 0.0, 1e-8);
}

TEST(Laplacian, ConstantGoesToZero) {
    const auto s2 = catalog_space("s2");
    const auto lf = radial_laplacian(s2, sample(s2, constant_one(), 300));
    for (const auto& v : std::get<Samples>(lf.form).values) EXPECT_NEAR(std::abs(v), 0.0, 1e-9);
}

TEST(Laplacian, S4DegreeTwo) {
    const auto s4 = catalog_space("s4");
    for (std::size_t n : {1025u, 4097u}) {
        const auto f = sample(s4, poly_spherical(2), n);
        const auto lf = radial_laplacian(s4, f);
        const auto& in = std::get<Samples>(f.form).values;
        const auto& out = std::get<Samples>(lf.form).values;
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(out[i] + 10.0 * in[i]));
        // Truncation ~h^4 at 1025 points; at 4097 rounding (~eps/h^2) dominates.
        EXPECT_LT(worst, n == 1025 ? 1e-7 : 2e-8);
    }
}

TEST(Laplacian, CoarseGridRejected) {
    const auto s2 = catalog_space("s2");
    EXPECT_THROW(radial_laplacian(s2, sample(s2, constant_one(), 256)), ResolutionError);
    EXPECT_THROW(radial_laplacian(s2, bump(1.0)), ResolutionError);
}
