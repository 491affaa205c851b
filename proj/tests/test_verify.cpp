#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmb/verify.hpp"

#include <json.hpp>

#include <cmath>
#include <random>

using namespace qmb;

namespace {

TruncatedRep make(Series s, double q, int cutoff, std::vector<double> phases = {}) {
    SeriesSpec spec;
    spec.series = s;
    spec.q = q;
    if (phases.empty())
        phases.assign(static_cast<std::size_t>(series_phase_count(s)), 0.9);
    spec.phases = phases;
    return build_representation(spec, cutoff);
}

int test_cutoff(Series s) {
    switch (series_rank(s)) {
        case 0: return 1;
        case 1: return 10;
        case 2: return 8;
        default: return 7;
    }
}

}  // namespace

TEST_CASE("relation residuals are tiny on interior vectors for every series") {
    for (Series s : kAllSeries)
        for (double q : {0.3, 0.5, 0.8}) {
            auto rep = make(s, q, test_cutoff(s));
            auto reports = relation_residuals(rep, 3, 1e-10);
            REQUIRE(reports.size() == 16);
            for (const auto& r : reports) {
                CHECK_MESSAGE(r.pass, series_name(s), " q=", q, " ", r.name, " residual ",
                              r.residual);
                CHECK(r.residual < 1e-12);
            }
        }
}

TEST_CASE("one-dimensional series satisfies the diagonal relation exactly") {
    // scalar identity q^-2 = q^2 q^-2 + q^-2 (1-q^2)^2 + (1-q^2) at phases 0,
    // q = 1/2: every float op is dyadic-exact
    auto rep = make(Series::OneDim, 0.5, 1, {0.0, 0.0});
    auto reports = relation_residuals(rep, 3, 1e-10);
    for (const auto& r : reports) CHECK(r.residual == 0.0);
}

TEST_CASE("pi series diagonal relation values") {
    double q = 0.5;
    auto rep = make(Series::Pi, q, 10);
    // <e_k| z11* z11 |e_k> = q^-2 (1 - q^{2(k+1)})
    auto op = rep.adj[0] * rep.gen[0];
    auto d = op.diagonal();
    for (int k = 0; k + 1 < 10; ++k) {
        double expect = (1 - std::pow(q, 2.0 * (k + 1))) / (q * q);
        CHECK(std::abs(d[static_cast<std::size_t>(k)] - Complex(expect, 0)) < 1e-14);
    }

    // with z21 = z12 = 0 and z22 z22* = I the diagonal relation collapses to
    // z11* z11 = q^2 z11 z11* + (q^-2 - 1)
    auto lhs = rep.adj[0] * rep.gen[0];
    auto rhs = Complex(q * q, 0) * (rep.gen[0] * rep.adj[0]) +
               Complex(1.0 / (q * q) - 1.0, 0) * SparseOperator::identity(10);
    auto diff = lhs - rhs;
    for (std::size_t j : rep.lattice.interior_indices(3))
        CHECK(diff.column_norm(j) / std::max(1.0, lhs.column_norm(j)) < 1e-12);
}

TEST_CASE("exchange identities: symbolic and numeric routes") {
    CHECK(cross_identities_reduce_to_zero());

    auto full = make(Series::RhoFull, 0.5, 7);
    for (const auto& r : cross_identity_checks(full, 3, 1e-10)) {
        CHECK_MESSAGE(r.pass, r.name, " residual ", r.residual);
        CHECK(r.residual < 1e-12);
    }

    auto one = make(Series::OneDim, 0.5, 1, {0.0, 0.0});
    for (const auto& r : cross_identity_checks(one, 3, 1e-10)) CHECK(r.residual == 0.0);
}

TEST_CASE("series-to-orbit assignment") {
    CHECK(series_orbit(Series::OneDim) == OrbitTag::O001);
    CHECK(series_orbit(Series::Pi) == OrbitTag::O001);
    CHECK(series_orbit(Series::Rho12) == OrbitTag::O110);
    // the z21-shifting family lands where the first coordinate degenerates
    // to q^2k only after the (1 - q^2m) factor, i.e. base (0,1,0); the
    // z12-shifting family mirrors it on (1,0,0)
    CHECK(series_orbit(Series::Rho1) == OrbitTag::O010);
    CHECK(series_orbit(Series::Rho2) == OrbitTag::O100);
    CHECK(series_orbit(Series::HatRho) == OrbitTag::O000);
    CHECK(series_orbit(Series::RhoFull) == OrbitTag::O000);
}

TEST_CASE("joint spectrum lies on the assigned orbit") {
    double q = 0.5;

    auto r12 = make(Series::Rho12, q, 3, {0.4, 1.2});
    auto sp = joint_spectrum(r12);
    CHECK(sp.family_diagonal);
    CHECK(sp.pass);
    REQUIRE(sp.entries.size() == 3);
    double q2 = q * q, q4 = q2 * q2;
    CHECK(max_dist({sp.entries[0].triple[0], sp.entries[0].triple[1], sp.entries[0].triple[2]},
                   {1, 1, 0}) < 1e-14);
    CHECK(max_dist({sp.entries[1].triple[0], sp.entries[1].triple[1], sp.entries[1].triple[2]},
                   {q2, q2, 1 - q2}) < 1e-14);
    CHECK(max_dist({sp.entries[2].triple[0], sp.entries[2].triple[1], sp.entries[2].triple[2]},
                   {q4, q4, 1 - q4}) < 1e-14);

    auto pi = make(Series::Pi, q, 8);
    sp = joint_spectrum(pi);
    CHECK(sp.pass);
    for (const auto& e : sp.entries)
        CHECK(max_dist({e.triple[0], e.triple[1], e.triple[2]}, {0, 0, 1}) < 1e-14);

    for (Series s : kAllSeries) {
        auto rep = make(s, q, test_cutoff(s));
        sp = joint_spectrum(rep);
        CHECK_MESSAGE(sp.pass, series_name(s), " max error ", sp.max_match_error);
        CHECK(sp.max_match_error < 1e-12);
        CHECK(sp.exponents_consistent);
    }
}

TEST_CASE("rho-full spectrum labels reproduce the lattice coordinates") {
    auto rep = make(Series::RhoFull, 0.5, 7);
    auto sp = joint_spectrum(rep);
    for (const auto& e : sp.entries) {
        REQUIRE(e.matched);
        CHECK(e.exponents.m == e.coords[1]);
        CHECK(e.exponents.l == e.coords[2]);
        CHECK(e.exponents.k == e.coords[3]);
    }
}

TEST_CASE("decomposition checks per series") {
    double q = 0.5;

    for (Series s : {Series::OneDim, Series::Pi}) {
        auto rep = diagonal_decomposition_check(make(s, q, test_cutoff(s)), 3, 1e-10);
        CHECK_FALSE(rep.applicable);
        CHECK(rep.pass);
    }
    for (Series s : {Series::Rho12, Series::Rho1, Series::Rho2}) {
        auto rep = diagonal_decomposition_check(make(s, q, test_cutoff(s)), 3, 1e-10);
        CHECK(rep.applicable);
        CHECK_MESSAGE(rep.pass, series_name(s));
        CHECK(rep.diag_zero_residual < 1e-14);
        CHECK(rep.split_residual < 1e-12);
        CHECK(rep.q_commutation_residual < 1e-12);
    }
    for (Series s : {Series::HatRho, Series::RhoFull}) {
        auto rep = diagonal_decomposition_check(make(s, q, test_cutoff(s)), 3, 1e-10);
        CHECK(rep.applicable);
        CHECK_MESSAGE(rep.pass, series_name(s));
        CHECK(rep.block_identity_residual < 1e-12);
        CHECK(rep.split_residual < 1e-12);
        CHECK(rep.q_commutation_residual < 1e-12);
    }

    CHECK_THROWS_AS(diagonal_decomposition_check(make(Series::RhoFull, q, 5), 3, 1e-10),
                    ConfigError);
}

TEST_CASE("weight diagnostics: commuting family with simple spectrum") {
    double q = 0.5;
    for (Series s : kAllSeries) {
        auto w = weight_diagnostics(make(s, q, test_cutoff(s)));
        CHECK_MESSAGE(w.commuting, series_name(s));
        CHECK(w.max_commutator < 1e-12);
        CHECK_MESSAGE(w.simple, series_name(s));
        CHECK_FALSE(w.resolution_limited);
        CHECK(w.pass);
    }

    // rank-1 box at q = 0.3: the separating weight saturates against 1 in
    // doubles near the top, distinctness becomes inconclusive, not failed
    auto sat = weight_diagnostics(make(Series::Pi, 0.3, 20));
    CHECK_FALSE(sat.simple);
    CHECK(sat.resolution_limited);
    CHECK(sat.pass);

    // single basis vector: trivially simple
    auto one = weight_diagnostics(make(Series::OneDim, q, 1));
    CHECK(one.simple);
    CHECK(std::isinf(one.min_gap));

    // rho-full: fourth coordinate q^{2(m+l)}(1 - q^{2s}) separates s
    auto full = make(Series::RhoFull, q, 4);
    auto w = weight_diagnostics(full);
    for (std::size_t i = 0; i < full.lattice.dimension(); ++i) {
        auto c = full.lattice.coords_of(i);
        double expect = std::pow(q, 2.0 * (c[1] + c[2])) * (1 - std::pow(q, 2.0 * c[0]));
        CHECK(std::abs(w.tuples[i][3] - expect) < 1e-12);
    }
}

TEST_CASE("rank-1 minimum gap matches the direct enumeration oracle") {
    double q = 0.5;
    int N = 8;
    auto w = weight_diagnostics(make(Series::Rho12, q, N, {0.4, 1.2}));
    // oracle: tuples are (1-q^2k, q^2k, q^2k, 0); enumerate all pairs
    double oracle = std::numeric_limits<double>::infinity();
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b) {
            double qa = std::pow(q, 2.0 * a), qb = std::pow(q, 2.0 * b);
            oracle = std::min(oracle, std::abs(qa - qb));
        }
    CHECK(w.min_gap == doctest::Approx(oracle).epsilon(1e-12));
    // acceptance bound: gap >= q^{2(N-1)} (1 - q^2)
    CHECK(w.min_gap >= std::pow(q, 2.0 * (N - 1)) * (1 - q * q));
}

TEST_CASE("fingerprints separate the seven series at equal cutoff") {
    std::vector<Fingerprint> fps;
    for (Series s : kAllSeries)
        fps.push_back(series_fingerprint(make(s, 0.5, 7, s == Series::RhoFull
                                                            ? std::vector<double>{}
                                                            : std::vector<double>(
                                                                  static_cast<std::size_t>(
                                                                      series_phase_count(s)),
                                                                  0.9))));
    for (std::size_t a = 0; a < fps.size(); ++a)
        for (std::size_t b = a + 1; b < fps.size(); ++b) {
            CHECK_MESSAGE(!(fps[a] == fps[b]), "series ", a, " vs ", b);
            CHECK(fps[a].digest() != fps[b].digest());
        }

    CHECK(fps[0].rank == 0);  // one-dim vs pi separated by rank alone
    CHECK(fps[1].rank == 1);
    // rho1 and rho2 differ by which of z21/z12 acts diagonally
    CHECK(fps[3].diagonal_generators[2]);
    CHECK_FALSE(fps[3].diagonal_generators[1]);
    CHECK(fps[4].diagonal_generators[1]);
    CHECK_FALSE(fps[4].diagonal_generators[2]);
}

TEST_CASE("symbolic-numeric bridge on random words") {
    std::mt19937 rng(71);
    std::uniform_int_distribution<int> letter(0, 7);
    std::uniform_int_distribution<std::size_t> len(0, 5);
    const int kMargin = 5;  // max word length; both routes agree inside it
    for (Series s : kAllSeries) {
        int cutoff = series_rank(s) <= 1 ? 12 : 11;
        if (s == Series::OneDim) cutoff = 1;
        auto rep = make(s, 0.5, cutoff);
        auto interior = rep.lattice.interior_indices(kMargin);
        REQUIRE(!interior.empty());
        for (int i = 0; i < 30; ++i) {
            Word w(len(rng));
            for (auto& l : w) l = Letter(static_cast<std::uint8_t>(letter(rng)));
            auto direct = represent_word(rep, w);
            auto via_nf = represent_polynomial(rep, normal_form(w));
            auto diff = direct - via_nf;
            for (std::size_t j : interior)
                CHECK(diff.column_norm(j) < 1e-10);
        }
    }
}

TEST_CASE("run_verification end to end") {
    SeriesSpec spec{Series::Rho12, {0.4, 1.2}, 0.5};
    auto report = run_verification(spec, 10);
    CHECK(report.all_pass);
    CHECK(report.relations.size() == 19);  // 16 defining + 3 exchange

    std::string js = report_to_json(report, 2);
    auto j = nlohmann::json::parse(js);
    CHECK(j.at("series") == "rho12");
    CHECK(j.at("allPass") == true);
    CHECK(j.at("spectrum").at("orbit") == "1,1,0");
    CHECK(j.at("relations").size() == 19);
    CHECK(report_to_json(report, 2) == js);  // deterministic

    CHECK_THROWS_AS(run_verification(spec, 6), ConfigError);  // 6 <= 2*margin
    CHECK(default_cutoff(Series::RhoFull, 3) == 7);
    CHECK(default_cutoff(Series::Pi, 3) == 20);
    CHECK(default_cutoff(Series::HatRho, 3) == 8);
    CHECK(default_cutoff(Series::OneDim, 3) == 1);
    CHECK(default_cutoff(Series::Rho1, 3) == 12);
}
