#include "qmb/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>

namespace qmb {

namespace {

double interior_residual(const SparseOperator& lhs, const SparseOperator& rhs,
                         const std::vector<std::size_t>& interior) {
    SparseOperator diff = lhs - rhs;
    double worst = 0;
    for (std::size_t j : interior)
        worst = std::max(worst, diff.column_norm(j) / std::max(1.0, lhs.column_norm(j)));
    return worst;
}

std::vector<std::size_t> interior_or_throw(const TruncatedRep& rep, int margin) {
    auto interior = rep.lattice.interior_indices(margin);
    if (interior.empty())
        throw ConfigError("margin " + std::to_string(margin) + " leaves no interior vector at cutoff " +
                          std::to_string(rep.lattice.cutoff()));
    return interior;
}

std::vector<ResidualReport> residuals_for(const TruncatedRep& rep,
                                          const std::vector<DefiningRelation>& rels,
                                          int margin, double tol, bool numbered_ids) {
    auto interior = interior_or_throw(rep, margin);
    std::vector<ResidualReport> out;
    for (const DefiningRelation& r : rels) {
        double res = interior_residual(represent_terms(rep, r.lhs), represent_terms(rep, r.rhs),
                                       interior);
        ResidualReport rr;
        rr.id = numbered_ids ? std::to_string(r.id) : r.name;
        rr.name = r.name;
        rr.residual = res;
        rr.tolerance = tol;
        rr.margin = margin;
        rr.pass = res < tol;
        out.push_back(std::move(rr));
    }
    return out;
}

}  // namespace

std::vector<ResidualReport> relation_residuals(const TruncatedRep& rep, int margin, double tol) {
    return residuals_for(rep, defining_relations(), margin, tol, true);
}

std::vector<ResidualReport> cross_identity_checks(const TruncatedRep& rep, int margin, double tol) {
    return residuals_for(rep, cross_identities(), margin, tol, false);
}

bool cross_identities_reduce_to_zero() {
    for (const DefiningRelation& r : cross_identities()) {
        NormalPolynomial d = normal_form(r.lhs);
        d -= normal_form(r.rhs);
        if (!d.is_zero()) return false;
    }
    return true;
}

OrbitTag series_orbit(Series s) {
    // Read off the diagonal weight triples of the series formulas: the two
    // rank-2 families land on the orbits whose non-degenerate coordinate
    // matches their shift generator (z21 shifts for Rho1, z12 for Rho2).
    switch (s) {
        case Series::OneDim: return OrbitTag::O001;
        case Series::Pi: return OrbitTag::O001;
        case Series::Rho12: return OrbitTag::O110;
        case Series::Rho1: return OrbitTag::O010;
        case Series::Rho2: return OrbitTag::O100;
        case Series::HatRho: return OrbitTag::O000;
        case Series::RhoFull: return OrbitTag::O000;
    }
    std::abort();
}

namespace {

// Orbit exponents the series formulas predict from lattice coordinates.
Exponents predicted_exponents(Series s, const std::vector<int>& coords) {
    switch (s) {
        case Series::OneDim:
        case Series::Pi: return {0, 0, 0};
        case Series::Rho12: return {0, 0, coords[0]};
        case Series::Rho1: return {coords[0], 0, coords[1]};
        case Series::Rho2: return {0, coords[0], coords[1]};
        case Series::HatRho: return {coords[0], coords[1], coords[2]};
        case Series::RhoFull: return {coords[1], coords[2], coords[3]};
    }
    std::abort();
}

}  // namespace

SpectrumReport joint_spectrum(const TruncatedRep& rep, double tol, int margin) {
    SpectrumReport out;
    out.orbit = series_orbit(rep.spec.series);
    out.tolerance = tol;

    std::array<SparseOperator, 3> family = {rep.gen[1] * rep.adj[1], rep.gen[2] * rep.adj[2],
                                            rep.gen[3] * rep.adj[3]};
    for (const auto& w : family)
        out.off_diagonal_mass = std::max(out.off_diagonal_mass, w.off_diagonal_max_abs());
    out.family_diagonal = out.off_diagonal_mass < 1e-14;

    std::array<std::vector<Complex>, 3> diags = {family[0].diagonal(), family[1].diagonal(),
                                                 family[2].diagonal()};
    out.exponents_consistent = true;
    for (std::size_t i = 0; i < rep.lattice.dimension(); ++i) {
        SpectrumEntry e;
        e.coords = rep.lattice.coords_of(i);
        e.triple = {diags[0][i].real(), diags[1][i].real(), diags[2][i].real()};
        Point3 p{e.triple[0], e.triple[1], e.triple[2]};
        auto found = orbit_membership(p, out.orbit, rep.spec.q, tol);
        e.matched = found.has_value();
        if (found) {
            e.exponents = *found;
            e.match_error = max_dist(orbit_value(orbit_base(out.orbit), found->m, found->l,
                                                 found->k, rep.spec.q),
                                     p);
            out.max_match_error = std::max(out.max_match_error, e.match_error);
        }
        if (!e.matched) out.exponents_consistent = false;
        else if (rep.lattice.interior(i, margin) &&
                 !(e.exponents == predicted_exponents(rep.spec.series, e.coords)))
            out.exponents_consistent = false;
        out.entries.push_back(std::move(e));
    }
    bool all_matched = std::all_of(out.entries.begin(), out.entries.end(),
                                   [](const SpectrumEntry& e) { return e.matched; });
    out.pass = out.family_diagonal && all_matched && out.max_match_error < tol &&
               out.exponents_consistent;
    return out;
}

DecompositionReport diagonal_decomposition_check(const TruncatedRep& rep, int margin, double tol,
                                                 double zero_tol) {
    DecompositionReport out;
    out.tolerance = tol;
    out.zero_tolerance = zero_tol;
    Series s = rep.spec.series;
    if (s == Series::OneDim || s == Series::Pi) {
        out.applicable = false;
        out.pass = true;  // the splitting degenerates to z11 itself there
        return out;
    }
    out.applicable = true;
    auto interior = interior_or_throw(rep, margin);
    const double q = rep.spec.q;
    SparseOperator a0 = diagonal_part_z11(rep);
    SparseOperator a0adj = a0.adjoint();

    // Direct route: compress z11 onto the joint eigenspaces of the
    // commuting family and compare with the correction-formula route.
    std::array<SparseOperator, 3> family = {rep.gen[1] * rep.adj[1], rep.gen[2] * rep.adj[2],
                                            rep.gen[3] * rep.adj[3]};
    std::array<std::vector<Complex>, 3> diags = {family[0].diagonal(), family[1].diagonal(),
                                                 family[2].diagonal()};
    // Purely relative comparison: adjacent joint eigenvalues scale like
    // q^(2k) and stay relatively separated however small they get, while
    // equal eigenvalues computed along different float routes agree to a
    // few ulps.
    auto same_eigenspace = [&](std::size_t a, std::size_t b) {
        for (const auto& d : diags) {
            double scale = std::max(std::abs(d[a]), std::abs(d[b]));
            if (std::abs(d[a] - d[b]) > 1e-9 * scale) return false;
        }
        return true;
    };
    std::vector<SparseOperator::Triplet> kept;
    for (const auto& t : rep.gen[0].triplets())
        if (same_eigenspace(static_cast<std::size_t>(t.row()), static_cast<std::size_t>(t.col())))
            kept.push_back(t);
    SparseOperator compressed = SparseOperator::from_triplets(rep.lattice.dimension(), kept);
    {
        SparseOperator diff = compressed - a0;
        for (std::size_t j : interior)
            out.split_residual = std::max(
                out.split_residual, diff.column_norm(j) / std::max(1.0, rep.gen[0].column_norm(j)));
    }

    if (s == Series::Rho12 || s == Series::Rho1 || s == Series::Rho2) {
        for (std::size_t j : interior)
            out.diag_zero_residual =
                std::max(out.diag_zero_residual,
                         a0.column_norm(j) / std::max(1.0, rep.gen[0].column_norm(j)));
    } else {
        // a*a = q^2 a a* + (1 - q^2) q^(2(m+l)) blockwise.
        std::vector<Complex> block(rep.lattice.dimension());
        int rank = rep.lattice.rank();
        for (std::size_t i = 0; i < block.size(); ++i) {
            auto c = rep.lattice.coords_of(i);
            block[i] = std::pow(q, 2.0 * (c[static_cast<std::size_t>(rank - 3)] +
                                          c[static_cast<std::size_t>(rank - 2)]));
        }
        SparseOperator lhs = a0adj * a0;
        SparseOperator rhs = Complex(q * q, 0) * (a0 * a0adj) +
                             Complex(1 - q * q, 0) * diagonal_operator(block);
        out.block_identity_residual = interior_residual(lhs, rhs, interior);
    }

    for (auto [g, factor] : {std::pair{1, q}, std::pair{2, q}, std::pair{3, 1.0}}) {
        for (const SparseOperator* a : {&a0, &a0adj}) {
            SparseOperator lhs = *a * rep.gen[static_cast<std::size_t>(g)];
            SparseOperator rhs = Complex(factor, 0) * (rep.gen[static_cast<std::size_t>(g)] * *a);
            out.q_commutation_residual =
                std::max(out.q_commutation_residual, interior_residual(lhs, rhs, interior));
        }
    }

    out.pass = out.split_residual < tol && out.q_commutation_residual < tol;
    if (s == Series::Rho12 || s == Series::Rho1 || s == Series::Rho2)
        out.pass = out.pass && out.diag_zero_residual < zero_tol;
    else
        out.pass = out.pass && out.block_identity_residual < tol;
    return out;
}

WeightReport weight_diagnostics(const TruncatedRep& rep, double commutator_tol) {
    WeightReport out;
    out.commutator_tolerance = commutator_tol;
    SparseOperator a0 = diagonal_part_z11(rep);
    std::array<SparseOperator, 4> ops = {rep.gen[3] * rep.adj[3], rep.gen[1] * rep.adj[1],
                                         rep.gen[2] * rep.adj[2], a0 * a0.adjoint()};
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a + 1; b < 4; ++b) {
            SparseOperator comm = ops[a] * ops[b] - ops[b] * ops[a];
            out.max_commutator = std::max(out.max_commutator, comm.max_abs());
        }
    out.commuting = out.max_commutator < commutator_tol;

    std::array<std::vector<Complex>, 4> diags = {ops[0].diagonal(), ops[1].diagonal(),
                                                 ops[2].diagonal(), ops[3].diagonal()};
    std::size_t dim = rep.lattice.dimension();
    for (std::size_t i = 0; i < dim; ++i)
        out.tuples.push_back({diags[0][i].real(), diags[1][i].real(), diags[2][i].real(),
                              diags[3][i].real()});

    out.min_gap = std::numeric_limits<double>::infinity();
    double magnitude = 0;
    for (std::size_t a = 0; a < dim; ++a)
        for (int c = 0; c < 4; ++c)
            magnitude = std::max(magnitude, std::abs(out.tuples[a][static_cast<std::size_t>(c)]));
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = a + 1; b < dim; ++b) {
            double gap = 0;
            for (int c = 0; c < 4; ++c)
                gap = std::max(gap, std::abs(out.tuples[a][static_cast<std::size_t>(c)] -
                                             out.tuples[b][static_cast<std::size_t>(c)]));
            out.min_gap = std::min(out.min_gap, gap);
        }
    out.resolution_floor = 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
    out.simple = dim == 1 || out.min_gap > 0;
    out.resolution_limited = dim > 1 && out.min_gap < out.resolution_floor;
    out.pass = out.commuting && (out.simple || out.resolution_limited);
    return out;
}

Fingerprint series_fingerprint(const TruncatedRep& rep, int margin) {
    Fingerprint fp;
    fp.rank = rep.lattice.rank();
    fp.dimension = rep.lattice.dimension();

    std::array<SparseOperator, 3> family = {rep.gen[1] * rep.adj[1], rep.gen[2] * rep.adj[2],
                                            rep.gen[3] * rep.adj[3]};
    std::array<std::vector<Complex>, 3> diags = {family[0].diagonal(), family[1].diagonal(),
                                                 family[2].diagonal()};
    auto round9 = [](double v) { return std::round(v * 1e9) / 1e9; };
    for (std::size_t i = 0; i < fp.dimension; ++i)
        fp.spectrum.push_back(
            {round9(diags[0][i].real()), round9(diags[1][i].real()), round9(diags[2][i].real())});
    std::sort(fp.spectrum.begin(), fp.spectrum.end());

    auto interior = rep.lattice.interior_indices(margin);
    if (interior.empty()) interior.push_back(0);
    for (std::size_t g = 0; g < 4; ++g) {
        std::size_t kernel = 0;
        for (std::size_t j : interior)
            if (rep.gen[g].column_norm(j) < 1e-12) ++kernel;
        fp.interior_kernel_dims[g] = kernel;
        fp.diagonal_generators[g] = rep.gen[g].off_diagonal_max_abs() == 0.0;
    }
    return fp;
}

std::string Fingerprint::digest() const {
    // FNV-1a over the rendered record; stable across runs.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    char buf[64];
    std::snprintf(buf, sizeof buf, "r%d;d%zu;", rank, dimension);
    mix(buf);
    for (const auto& t : spectrum) {
        std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.9f;", t[0], t[1], t[2]);
        mix(buf);
    }
    for (std::size_t g = 0; g < 4; ++g) {
        std::snprintf(buf, sizeof buf, "k%zu,g%d;", interior_kernel_dims[g],
                      diagonal_generators[g] ? 1 : 0);
        mix(buf);
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int default_cutoff(Series s, int margin) {
    int rank = series_rank(s);
    static constexpr std::array<int, 5> by_rank = {1, 20, 12, 8, 6};
    int cutoff = by_rank[static_cast<std::size_t>(rank)];
    if (rank >= 1 && cutoff <= 2 * margin) cutoff = 2 * margin + 1;
    return cutoff;
}

VerificationReport run_verification(const SeriesSpec& spec, int cutoff,
                                    const VerificationOptions& opts) {
    spec.validate();
    if (series_rank(spec.series) >= 1 && cutoff <= 2 * opts.margin)
        throw ConfigError("cutoff " + std::to_string(cutoff) + " leaves no interior vector at margin " +
                          std::to_string(opts.margin));
    VerificationReport rep;
    rep.spec = spec;
    rep.cutoff = cutoff;
    rep.options = opts;

    TruncatedRep tr = build_representation(spec, cutoff);
    rep.relations = relation_residuals(tr, opts.margin, opts.relation_tol);
    auto cross = cross_identity_checks(tr, opts.margin, opts.relation_tol);
    rep.relations.insert(rep.relations.end(), cross.begin(), cross.end());
    rep.spectrum = joint_spectrum(tr, opts.spectrum_tol, opts.margin);
    rep.decomposition = diagonal_decomposition_check(tr, opts.margin, opts.decomposition_tol,
                                                     opts.decomposition_zero_tol);
    rep.weights = weight_diagnostics(tr, opts.commutator_tol);
    rep.fingerprint = series_fingerprint(tr, opts.margin);

    rep.all_pass = rep.spectrum.pass && rep.decomposition.pass && rep.weights.pass &&
                   cross_identities_reduce_to_zero();
    for (const auto& r : rep.relations) rep.all_pass = rep.all_pass && r.pass;
    return rep;
}

std::string report_to_json(const VerificationReport& rep, int indent) {
    nlohmann::json j;
    j["series"] = series_name(rep.spec.series);
    j["phases"] = rep.spec.phases;
    j["q"] = rep.spec.q;
    j["cutoff"] = rep.cutoff;
    j["margin"] = rep.options.margin;
    nlohmann::json rels = nlohmann::json::array();
    for (const auto& r : rep.relations)
        rels.push_back({{"id", r.id},
                        {"name", r.name},
                        {"residual", r.residual},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass}});
    j["relations"] = std::move(rels);
    j["spectrum"] = {{"orbit", orbit_tag_str(rep.spectrum.orbit)},
                     {"maxError", rep.spectrum.max_match_error},
                     {"offDiagonalMass", rep.spectrum.off_diagonal_mass},
                     {"familyDiagonal", rep.spectrum.family_diagonal},
                     {"exponentsConsistent", rep.spectrum.exponents_consistent},
                     {"tolerance", rep.spectrum.tolerance},
                     {"pass", rep.spectrum.pass}};
    j["decomposition"] = {{"applicable", rep.decomposition.applicable},
                          {"split", rep.decomposition.split_residual},
                          {"diagZero", rep.decomposition.diag_zero_residual},
                          {"blockIdentity", rep.decomposition.block_identity_residual},
                          {"qCommutation", rep.decomposition.q_commutation_residual},
                          {"tolerance", rep.decomposition.tolerance},
                          {"zeroTolerance", rep.decomposition.zero_tolerance},
                          {"pass", rep.decomposition.pass}};
    double gap = rep.weights.min_gap;
    j["weights"] = {{"simple", rep.weights.simple},
                    {"minGap", std::isfinite(gap) ? nlohmann::json(gap) : nlohmann::json()},
                    {"resolutionFloor", rep.weights.resolution_floor},
                    {"resolutionLimited", rep.weights.resolution_limited},
                    {"commuting", rep.weights.commuting},
                    {"maxCommutator", rep.weights.max_commutator},
                    {"pass", rep.weights.pass}};
    j["fingerprint"] = {{"rank", rep.fingerprint.rank},
                        {"dimension", rep.fingerprint.dimension},
                        {"kernelDims", rep.fingerprint.interior_kernel_dims},
                        {"diagonalGenerators", rep.fingerprint.diagonal_generators},
                        {"digest", rep.fingerprint.digest()}};
    j["symbolicCrossIdentities"] = cross_identities_reduce_to_zero();
    j["allPass"] = rep.all_pass;
    return j.dump(indent);
}

}  // namespace qmb
