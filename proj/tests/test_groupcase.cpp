#include <pwsym/groupcase.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace pwsym;

namespace {

const double pi = std::numbers::pi;

} // namespace

TEST(WeylIntegrate, Normalization) {
    EXPECT_NEAR(std::abs(weyl_integrate(constant_class_one()) - 1.0), 0.0, 1e-14);
}

TEST(WeylIntegrate, CharacterNorms) {
    const auto sq = weyl_integrate([](double psi) { return Complex(std::pow(oracle::su2_character(1, psi), 2)); });
    EXPECT_NEAR(sq.value.real(), 1.0, 1e-13);
    const auto cross = weyl_integrate(
        [](double psi) { return Complex(oracle::su2_character(1, psi) * oracle::su2_character(2, psi)); });
    EXPECT_NEAR(std::abs(cross.value), 0.0, 1e-13);
}

TEST(WeylIntegrate, MatchesSimpsonOnDensity) {
    const auto f = bump_angle(2.0);
    const double want = oracle::simpson(
        [&](double psi) { return evaluate(f, psi).real() * std::pow(std::sin(psi / 2), 2) / pi; }, 0.0, 2.0, 40000);
    EXPECT_NEAR(weyl_integrate(f).real(), want, 1e-12);
}

TEST(GroupTransform, Orthonormality) {
    EXPECT_NEAR(group_transform(character(2), 2.0).real(), 1.0, 1e-13);
    EXPECT_NEAR(std::abs(group_transform(character(2), 3.0)), 0.0, 1e-13);
}

TEST(GroupTransform, GramIsIdentity) {
    const auto gram = character_gram(5);
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; b <= 5; ++b)
            EXPECT_NEAR(std::abs(gram[a][b] - (a == b ? 1.0 : 0.0)), 0.0, 1e-12) << a << "," << b;
}

TEST(GroupTransform, TableDecays) {
    const auto table = group_table(bump_angle(1.0), 60);
    ASSERT_EQ(table.entries.size(), 61u);
    // The entries oscillate; compare maxima over blocks.
    auto block_max = [&](int lo, int hi) {
        double m = 0.0;
        for (int n = lo; n <= hi; ++n) m = std::max(m, std::abs(table.at(n)));
        return m;
    };
    EXPECT_LT(block_max(50, 60), 0.02 * block_max(0, 10));
    EXPECT_LT(block_max(50, 60), block_max(25, 35));
}

TEST(GroupTransform, AntisymmetryOnComplexGrid) {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-12.0, 12.0);
    const auto f = bump_angle(1.0);
    for (int i = 0; i < 40; ++i) {
        const Complex n(u(rng), u(rng));
        const Complex a = group_transform(f, n);
        const Complex b = group_transform(f, -n - 2.0);
        EXPECT_LE(std::abs(a + b), 1e-10 * (1.0 + std::abs(a))) << n;
    }
}

TEST(GroupTransform, TypeInAngleUnits) {
    const auto rep = fit_exponential_type(group_extend_on_ray(bump_angle(1.0), linspace(60, 120, 31)));
    EXPECT_NEAR(rep.r_hat, 1.0, 0.1);
}

TEST(GroupPW, BumpExtension) {
    const auto rep = group_pw_check(group_extension_of(bump_angle(1.0)), 1.0);
    EXPECT_LE(rep.symmetry_residual, 1e-10);
    EXPECT_TRUE(rep.verdict_for_r);
    EXPECT_EQ(rep.symmetry_sign, -1);
}

TEST(GroupPW, DimensionPolynomialIsAntisymmetric) {
    const auto phi = [](Complex n) { return n + 1.0; };
    const auto rep = group_pw_check(phi, 1.0);
    EXPECT_EQ(rep.symmetry_residual, 0.0);
}

TEST(GroupPW, ConstantFails) {
    const auto rep = group_pw_check([](Complex) { return Complex(2.0, 0.0); }, 1.0);
    EXPECT_FALSE(rep.verdict_for_r);
    EXPECT_GT(rep.symmetry_residual, 1.0);
}

TEST(KAverage, ConjugacyAngleFromMatrices) {
    // cos(psi/2) = cos(theta) cos(t/2) for k_theta a_t.
    for (double theta : {0.0, 0.7, 2.0, 4.5})
        for (double t : {0.0, 0.4, 2.5}) {
            const Complex e = std::polar(1.0, theta);
            const detail::Mat2 k{e, 0.0, 0.0, std::conj(e)};
            const detail::Mat2 a{std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2)};
            const double psi = detail::conjugacy_angle(detail::mat_mul(k, a));
            EXPECT_NEAR(std::cos(psi / 2), std::cos(theta) * std::cos(t / 2), 1e-14);
            EXPECT_GE(psi, t - 1e-12);
        }
}

TEST(KAverage, CharacterTwoGivesCosine) {
    const auto grid = uniform_grid(257);
    const auto g = k_average(character(2), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(std::abs(g.values[i] - std::cos(grid[i])), 0.0, 1e-10);
        const double direct = oracle::k_average_direct([](double psi) { return oracle::su2_character(2, psi); }, grid[i]);
        EXPECT_NEAR(g.values[i].real(), direct, 1e-10);
    }
}

TEST(KAverage, OddCharacterVanishes) {
    const auto g = k_average(character(1), uniform_grid(257));
    for (const auto& v : g.values) EXPECT_LE(std::abs(v), 1e-12);
}

TEST(KAverage, ConstantStaysConstant) {
    const auto g = k_average(constant_class_one(), uniform_grid(65));
    for (const auto& v : g.values) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-14);
}

TEST(KAverage, BumpMatchesDirectQuadrature) {
    const auto f = bump_angle(1.5);
    for (double t : {0.1, 0.6, 1.2}) {
        const double direct = oracle::k_average_direct([&](double psi) { return evaluate(f, psi).real(); }, t, 1 << 16);
        EXPECT_NEAR(detail::k_average_at(f, t).real(), direct, 1e-10) << t;
    }
}

TEST(KAverage, LeftAndRightAveragesAgree) {
    // int F(k a_t) dk = int F(a_t k) dk for class functions.
    const auto f = bump_angle(1.7);
    for (double t : {0.3, 1.1}) {
        const detail::Mat2 a{std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2)};
        double left = 0.0, right = 0.0;
        const int n = 4096;
        for (int i = 0; i < n; ++i) {
            const Complex e = std::polar(1.0, 2 * pi * (i + 0.5) / n);
            const detail::Mat2 k{e, 0.0, 0.0, std::conj(e)};
            left += evaluate(f, detail::conjugacy_angle(detail::mat_mul(k, a))).real();
            right += evaluate(f, detail::conjugacy_angle(detail::mat_mul(a, k))).real();
        }
        EXPECT_NEAR(left / n, right / n, 1e-14);
    }
}

// d(l) f~(l) = F^(2l) for f the K-average of F.
TEST(KAverage, IntertwinesTransforms) {
    const auto s2 = catalog_space("s2");
    for (const auto& F : {bump_angle(1.0), character(4), bump_angle(2.5)}) {
        const auto f = k_average_function(F);
        for (int l = 0; l <= 10; ++l) {
            const Complex lhs = (2.0 * l + 1.0) * forward(s2, f, static_cast<double>(l));
            const Complex rhs = group_transform(F, 2.0 * l);
            EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(std::abs(rhs), 1e-3)) << describe(F) << " l=" << l;
        }
    }
}

TEST(SupportTransfer, NeverGrows) {
    for (double r : {0.3, 0.5, 1.0, 2.0}) {
        const auto rep = support_transfer_check(bump_angle(r));
        EXPECT_FALSE(rep.skipped);
        EXPECT_TRUE(rep.holds) << r << " measured " << rep.measured_support;
        EXPECT_LE(rep.measured_support, r + 2 * pi / 2048);
        EXPECT_GT(rep.measured_support, 0.5 * r);
    }
}

TEST(SupportTransfer, FullSupportIsSkipped) {
    const auto rep = support_transfer_check(constant_class_one());
    EXPECT_TRUE(rep.skipped);
}
