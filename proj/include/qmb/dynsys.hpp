#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qmb {

/// Candidate joint-spectrum value of (z21 z21*, z12 z12*, z22 z22*).
struct Point3 {
    double x1 = 0, x2 = 0, x3 = 0;

    double max_abs() const;
    bool operator==(const Point3&) const = default;
};

double max_dist(const Point3& a, const Point3& b);

/// The three commuting affine maps generating the Z^3 action on R^3.
enum class MapTag { F21, F12, F22 };

/// The five base points whose orbits carry bounded irreducible
/// representations.
enum class OrbitTag { O001, O110, O100, O010, O000 };

Point3 orbit_base(OrbitTag t);
std::string orbit_tag_str(OrbitTag t);                       // "0,0,1" etc.
std::optional<OrbitTag> orbit_tag_parse(const std::string&); // from "x,y,z"

/// power-fold iterate of the tagged map; negative powers invert.
Point3 apply_map(MapTag tag, long power, const Point3& p, double q_value);

/// Closed form of F21^m F12^l F22^k applied to base.
Point3 orbit_value(const Point3& base, long m, long l, long k, double q_value);

struct OrbitPoint {
    Point3 base;
    long m = 0, l = 0, k = 0;
    Point3 value;
};

/// Inclusive exponent interval.
struct ExpRange {
    long lo = 0, hi = 0;
};

std::vector<OrbitPoint> orbit_patch(OrbitTag base, ExpRange m, ExpRange l, ExpRange k,
                                    double q_value);

struct Exponents {
    long m = 0, l = 0, k = 0;
    bool operator==(const Exponents&) const = default;
};

/// Recover integer exponents with |orbit_value(base,m,l,k) - p| < tol, if
/// any exist inside the search box |m|,|l|,|k| <= box. Exponents are solved
/// coordinate-wise through logarithms in base q^2, rounded, then verified;
/// degenerate coordinates (those the closed form does not depend on) get the
/// smallest nonnegative exponent, 0.
std::optional<Exponents> orbit_membership(const Point3& p, OrbitTag base, double q_value,
                                          double tol, long box = 40);

/// F22-orbit window statistics. A base with x3 > 1 is trapped in the
/// region where the shift has no kernel, so the spectrum would be forced to
/// contain the whole unbounded Z-orbit; bases with x3 in [0,1] have bounded
/// forward orbits.
struct BoundednessReport {
    Point3 base;
    double q = 0;
    int horizon = 0;
    double max_norm = 0;          // over k in [-horizon, horizon]
    double max_forward_norm = 0;  // over k in [0, horizon]
    double growth_factor = 0;     // max_norm / max(1, |base|)
    bool unbounded = false;       // x3 > 1
    bool forward_bounded = false; // 0 <= x3 <= 1
};

BoundednessReport boundedness_probe(const Point3& base, double q_value, int horizon);

}  // namespace qmb
