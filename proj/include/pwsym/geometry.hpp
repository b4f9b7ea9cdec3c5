#pragma once

// Catalog of rank-one compact symmetric spaces (plus the circle and SU(2)
// viewed as a group), expressed in a single spectral coordinate.
//
// Conventions used throughout the library:
//   * radial coordinate t in [0, pi] is the geodesic angle, injectivity
//     radius pi for every entry;
//   * spectral coordinate l has the spherical lattice Z+ (two-sided Z for
//     the circle);
//   * the root data of each space is encoded by Jacobi exponents (a, b), so
//     the density is sin(t/2)^(2a+1) cos(t/2)^(2b+1) and rho = (a+b+1)/2.

#include <pwsym/error.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace pwsym {

using Complex = std::complex<double>;

enum class SpaceKind { rank_one_symmetric, torus, group_su2 };

inline std::string_view to_string(SpaceKind kind) {
    switch (kind) {
    case SpaceKind::rank_one_symmetric: return "rank-one-symmetric";
    case SpaceKind::torus: return "torus";
    case SpaceKind::group_su2: return "group-su2";
    }
    return "unknown";
}

inline SpaceKind space_kind_from_string(std::string_view s) {
    if (s == "rank-one-symmetric") return SpaceKind::rank_one_symmetric;
    if (s == "torus") return SpaceKind::torus;
    if (s == "group-su2") return SpaceKind::group_su2;
    throw CatalogError("unknown space kind '" + std::string(s) + "'");
}

struct SpaceDescriptor {
    std::string name;
    SpaceKind kind = SpaceKind::rank_one_symmetric;
    double jacobi_a = 0.0;
    double jacobi_b = 0.0;
    double rho_c = 0.5;
    double inj_radius_t = std::numbers::pi;
    double omega_radius_t = std::numbers::pi / 2;

    bool operator==(const SpaceDescriptor&) const = default;
};

/// A point of the complexified spectral line. For the group case the
/// coordinate is n = 2l (highest weight of SU(2) in the n-coordinate).
struct SpectralPoint {
    Complex lambda;

    constexpr SpectralPoint() = default;
    constexpr SpectralPoint(double l) : lambda(l, 0.0) {}
    constexpr SpectralPoint(Complex l) : lambda(l) {}

    bool operator==(const SpectralPoint&) const = default;
};

inline constexpr std::array<std::string_view, 7> catalog_names{
    "torus", "s2", "s3", "s4", "s5", "cp2", "su2-group"};

namespace detail {

inline SpaceDescriptor make_rank_one(std::string name, double a, double b) {
    return {std::move(name), SpaceKind::rank_one_symmetric, a, b, (a + b + 1.0) / 2.0,
            std::numbers::pi, std::numbers::pi / 2};
}

} // namespace detail

/// Look up a catalog entry. Spheres S^n use a = b = (n-2)/2, CP^n uses
/// a = n-1, b = 0. The circle is the degenerate a = b = -1/2 entry, for
/// which the spherical functions are cos(l t).
inline SpaceDescriptor catalog_space(std::string_view name) {
    if (name == "torus")
        return {"torus", SpaceKind::torus, -0.5, -0.5, 0.0, std::numbers::pi, std::numbers::pi};
    if (name == "s2") return detail::make_rank_one("s2", 0.0, 0.0);
    if (name == "s3") return detail::make_rank_one("s3", 0.5, 0.5);
    if (name == "s4") return detail::make_rank_one("s4", 1.0, 1.0);
    if (name == "s5") return detail::make_rank_one("s5", 1.5, 1.5);
    if (name == "cp2") return detail::make_rank_one("cp2", 1.0, 0.0);
    if (name == "su2-group") {
        // SU(2) with conjugacy angle theta = 2t; class functions are the
        // K-invariant functions of S^3 = SU(2).
        return {"su2-group", SpaceKind::group_su2, 0.5, 0.5, 1.0, std::numbers::pi,
                std::numbers::pi / 2};
    }
    std::string valid;
    for (auto n : catalog_names) {
        if (!valid.empty()) valid += ", ";
        valid += n;
    }
    throw CatalogError("unknown space '" + std::string(name) + "'; valid names: " + valid);
}

/// Nontrivial Weyl element acting in the rho-shifted way: l -> -l - 2 rho.
inline SpectralPoint weyl_reflect(const SpaceDescriptor& space, SpectralPoint p) {
    return SpectralPoint{-p.lambda - 2.0 * space.rho_c};
}

inline std::vector<SpectralPoint> spherical_lattice(const SpaceDescriptor& space, double l_max) {
    std::vector<SpectralPoint> out;
    if (!(l_max >= 0.0)) return out;
    const auto top = static_cast<long>(std::floor(l_max));
    if (space.kind == SpaceKind::torus) {
        for (long n = -top; n <= top; ++n) out.emplace_back(static_cast<double>(n));
    } else {
        for (long n = 0; n <= top; ++n) out.emplace_back(static_cast<double>(n));
    }
    return out;
}

struct RadiusBounds {
    double r_forward_conservative;
    double r_forward_sharp;
    double r_unique;
    double inj_radius_t;
};

/// Support radii for which the forward map, its sharp (closed-form) variant
/// and lattice uniqueness are guaranteed. Uniqueness is the Carlson
/// threshold pi because the lattice spacing is 1 in the l-coordinate.
inline RadiusBounds radius_bounds(const SpaceDescriptor& space) {
    return {space.omega_radius_t, space.inj_radius_t, std::numbers::pi, space.inj_radius_t};
}

} // namespace pwsym
