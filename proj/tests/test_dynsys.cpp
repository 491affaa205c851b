#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmb/dynsys.hpp"

#include <cmath>
#include <random>

using namespace qmb;

namespace {

Point3 random_point(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(0.0, 2.0);
    return {d(rng), d(rng), d(rng)};
}

}  // namespace

TEST_CASE("apply_map basic values") {
    double q = 0.5;
    Point3 p = apply_map(MapTag::F22, 1, {0, 0, 0}, q);
    CHECK(p.x1 == doctest::Approx(0.0));
    CHECK(p.x2 == doctest::Approx(0.0));
    CHECK(p.x3 == doctest::Approx(1 - q * q));

    // (1,1,0) is a fixed point of F21
    p = apply_map(MapTag::F21, 1, {1, 1, 0}, q);
    CHECK(max_dist(p, {1, 1, 0}) < 1e-15);

    CHECK_THROWS_AS(apply_map(MapTag::F22, 1, {0, 0, 0}, 1.5), std::domain_error);
}

TEST_CASE("apply_map with power 0 is the identity") {
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
        Point3 p = random_point(rng);
        for (MapTag t : {MapTag::F21, MapTag::F12, MapTag::F22})
            CHECK(max_dist(apply_map(t, 0, p, 0.37), p) == 0.0);
    }
}

TEST_CASE("inverse composition returns the point") {
    std::mt19937 rng(7);
    for (double q : {0.3, 0.5, 0.8})
        for (int i = 0; i < 200; ++i) {
            Point3 p = random_point(rng);
            for (MapTag t : {MapTag::F21, MapTag::F12, MapTag::F22}) {
                Point3 back = apply_map(t, 1, apply_map(t, -1, p, q), q);
                CHECK(max_dist(back, p) < 1e-14);
            }
        }
}

TEST_CASE("powers compose additively") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<long> pw(-6, 6);
    for (int i = 0; i < 200; ++i) {
        Point3 p = random_point(rng);
        long a = pw(rng), b = pw(rng);
        for (MapTag t : {MapTag::F21, MapTag::F12, MapTag::F22}) {
            Point3 lhs = apply_map(t, a, apply_map(t, b, p, 0.5), 0.5);
            Point3 rhs = apply_map(t, a + b, p, 0.5);
            // iterates grow like q^(-2(a+b)); compare relative to the scale
            double scale = std::max({1.0, lhs.max_abs(), rhs.max_abs()});
            CHECK(max_dist(lhs, rhs) < 1e-12 * scale);
        }
    }
}

TEST_CASE("the three maps commute pairwise") {
    std::mt19937 rng(13);
    const MapTag tags[] = {MapTag::F21, MapTag::F12, MapTag::F22};
    for (double q : {0.3, 0.5, 0.8})
        for (int i = 0; i < 400; ++i) {
            Point3 p = random_point(rng);
            for (MapTag a : tags)
                for (MapTag b : tags) {
                    Point3 ab = apply_map(a, 1, apply_map(b, 1, p, q), q);
                    Point3 ba = apply_map(b, 1, apply_map(a, 1, p, q), q);
                    CHECK(max_dist(ab, ba) < 1e-12);
                }
        }
}

TEST_CASE("closed-form orbit values match iterated maps") {
    for (double q : {0.3, 0.5, 0.8})
        for (OrbitTag tag : {OrbitTag::O001, OrbitTag::O110, OrbitTag::O100, OrbitTag::O010,
                             OrbitTag::O000}) {
            Point3 b = orbit_base(tag);
            for (long m = -3; m <= 3; ++m)
                for (long l = -3; l <= 3; ++l)
                    for (long k = -3; k <= 3; ++k) {
                        Point3 closed = orbit_value(b, m, l, k, q);
                        Point3 iter = apply_map(
                            MapTag::F21, m,
                            apply_map(MapTag::F12, l, apply_map(MapTag::F22, k, b, q), q), q);
                        // backward iterates reach ~q^-2(|m|+|k|); relative bound
                        double scale = std::max({1.0, closed.max_abs(), iter.max_abs()});
                        CHECK(max_dist(closed, iter) < 1e-12 * scale);
                    }
        }
}

TEST_CASE("orbit_patch boxes") {
    auto patch = orbit_patch(OrbitTag::O000, {0, 2}, {0, 2}, {0, 2}, 0.5);
    REQUIRE(patch.size() == 27);
    for (const auto& p : patch) {
        CHECK(p.value.x1 >= 0.0);
        CHECK(p.value.x1 <= 1.0);
        CHECK(p.value.x2 >= 0.0);
        CHECK(p.value.x2 <= 1.0);
        CHECK(p.value.x3 >= 0.0);
        CHECK(p.value.x3 <= 1.0);
    }

    // the (0,0,1) orbit is a single point
    patch = orbit_patch(OrbitTag::O001, {-2, 2}, {-2, 2}, {-2, 2}, 0.5);
    for (const auto& p : patch) CHECK(max_dist(p.value, {0, 0, 1}) < 1e-15);

    // base (1,1,0), m=l=0: (q^2k, q^2k, 1-q^2k)
    double q = 0.5;
    patch = orbit_patch(OrbitTag::O110, {0, 0}, {0, 0}, {0, 3}, q);
    REQUIRE(patch.size() == 4);
    for (const auto& p : patch) {
        double q2k = std::pow(q, 2.0 * p.k);
        CHECK(max_dist(p.value, {q2k, q2k, 1 - q2k}) < 1e-15);
    }
}

TEST_CASE("nonnegative-exponent patches stay in the unit cube") {
    for (OrbitTag tag : {OrbitTag::O001, OrbitTag::O110, OrbitTag::O100, OrbitTag::O010,
                         OrbitTag::O000})
        for (const auto& p : orbit_patch(tag, {0, 4}, {0, 4}, {0, 4}, 0.7)) {
            CHECK(p.value.x1 >= -1e-15);
            CHECK(p.value.x1 <= 1.0 + 1e-15);
            CHECK(p.value.x2 >= -1e-15);
            CHECK(p.value.x2 <= 1.0 + 1e-15);
            CHECK(p.value.x3 >= -1e-15);
            CHECK(p.value.x3 <= 1.0 + 1e-15);
        }
}

TEST_CASE("orbit membership recovers exponents") {
    double q = 0.5;
    double q2 = q * q;

    auto hit = orbit_membership({q2, q2, 1 - q2}, OrbitTag::O110, q, 1e-10);
    REQUIRE(hit.has_value());
    CHECK(*hit == Exponents{0, 0, 1});  // degenerate m,l resolve to 0

    CHECK_FALSE(orbit_membership({0, 0, 1}, OrbitTag::O000, q, 1e-10).has_value());
    CHECK_FALSE(orbit_membership({0.3, 0.3, 0.3}, OrbitTag::O001, q, 1e-10).has_value());

    std::mt19937 rng(17);
    std::uniform_int_distribution<long> pw(-5, 8);
    for (OrbitTag tag : {OrbitTag::O110, OrbitTag::O100, OrbitTag::O010, OrbitTag::O000})
        for (int i = 0; i < 200; ++i) {
            long m = pw(rng), l = pw(rng), k = pw(rng);
            Point3 p = orbit_value(orbit_base(tag), m, l, k, q);
            auto found = orbit_membership(p, tag, q, 1e-10);
            REQUIRE(found.has_value());
            CHECK(max_dist(orbit_value(orbit_base(tag), found->m, found->l, found->k, q), p) <
                  1e-10);
        }
}

TEST_CASE("membership respects the search box") {
    double q = 0.5;
    Point3 p = orbit_value(orbit_base(OrbitTag::O000), 2, 1, 25, q);
    CHECK(orbit_membership(p, OrbitTag::O000, q, 1e-10, 40).has_value());
    CHECK_FALSE(orbit_membership(p, OrbitTag::O000, q, 1e-10, 20).has_value());
    CHECK_THROWS_AS(orbit_membership(p, OrbitTag::O000, q, -1.0), std::domain_error);

    // k beyond float resolution: x3 collapses onto 1, no finite exponent fits
    p = orbit_value(orbit_base(OrbitTag::O000), 2, 1, 60, q);
    CHECK_FALSE(orbit_membership(p, OrbitTag::O000, q, 1e-10, 80).has_value());
}

TEST_CASE("boundedness probe") {
    auto rep = boundedness_probe({0, 0, 2}, 0.5, 10);
    CHECK(rep.unbounded);
    CHECK_FALSE(rep.forward_bounded);
    // third coordinate at power -10 is 4^10 + 1
    CHECK(rep.max_norm == doctest::Approx(std::pow(4.0, 10) + 1).epsilon(1e-12));

    rep = boundedness_probe({0, 0, 0}, 0.5, 10);
    CHECK_FALSE(rep.unbounded);
    CHECK(rep.forward_bounded);
    CHECK(rep.max_forward_norm <= 1.0 + 1e-15);

    rep = boundedness_probe({0, 0, 1}, 0.5, 10);
    CHECK_FALSE(rep.unbounded);
    CHECK(rep.forward_bounded);
    CHECK(rep.max_norm == doctest::Approx(1.0));

    CHECK_THROWS_AS(boundedness_probe({0, 0, 0}, 0.5, 0), std::domain_error);
}
