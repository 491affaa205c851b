#pragma once

#include "qmb/dynsys.hpp"
#include "qmb/representation.hpp"

#include <string>
#include <vector>

namespace qmb {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// One operator identity checked on interior vectors. The residual is
/// max over interior basis vectors v of ||(LHS - RHS) v|| / max(1, ||LHS v||).
struct ResidualReport {
    std::string id;    // "1".."16" for defining relations, names for the rest
    std::string name;
    double residual = 0;
    double tolerance = 0;
    int margin = 0;
    bool pass = false;
};

struct SpectrumEntry {
    std::vector<int> coords;
    std::array<double, 3> triple;  // (z21 z21*, z12 z12*, z22 z22*) eigenvalues
    bool matched = false;
    Exponents exponents;
    double match_error = 0;
};

struct SpectrumReport {
    OrbitTag orbit;                 // expected orbit for this series
    bool family_diagonal = false;   // commuting family diagonal in the basis
    double off_diagonal_mass = 0;
    std::vector<SpectrumEntry> entries;
    double max_match_error = 0;
    bool exponents_consistent = false;  // interior labels match lattice coords
    double tolerance = 0;
    bool pass = false;
};

/// Checks around the splitting of z11 into its joint-eigenspace-preserving
/// part and the closed-form correction.
struct DecompositionReport {
    bool applicable = false;   // false on the z22 z22* = I series (OneDim, Pi)
    double split_residual = 0; // direct eigenspace compression == correction route
    double diag_zero_residual = 0;       // Rho12/Rho1/Rho2: diagonal part vanishes
    double block_identity_residual = 0;  // HatRho/RhoFull: a*a = q^2 aa* + (1-q^2) q^(2(m+l))
    double q_commutation_residual = 0;   // against z21, z12 (factor q) and z22 (factor 1)
    double tolerance = 0;
    double zero_tolerance = 0;
    bool pass = false;
};

/// Per-basis-vector values of the four commuting positive operators
/// (z22 z22*, z21 z21*, z12 z12*, a0 a0* with a0 the diagonal part of z11).
/// Gaps below the double-precision certification floor (values like
/// 1 - q^(2k) saturate against 1 once q^(2k) drops under an ulp) make the
/// distinctness question inconclusive at this cutoff rather than failed;
/// resolution_limited records that state and pass treats it as non-failing.
struct WeightReport {
    std::vector<std::array<double, 4>> tuples;
    double max_commutator = 0;
    bool commuting = false;
    bool simple = false;   // all tuples pairwise distinct as stored
    double min_gap = 0;    // +inf for a single tuple
    double resolution_floor = 0;     // 64 ulp at the tuple magnitude
    bool resolution_limited = false; // min_gap below the floor
    double commutator_tolerance = 0;
    bool pass = false;     // commuting && (simple || resolution_limited)
};

/// Structural summary separating the series from one another at equal
/// cutoffs: lattice rank, rounded spectrum multiset, interior kernel counts,
/// and which generators act diagonally.
struct Fingerprint {
    int rank = 0;
    std::size_t dimension = 0;
    std::vector<std::array<double, 3>> spectrum;  // sorted, rounded to 1e-9
    std::array<std::size_t, 4> interior_kernel_dims{};
    std::array<bool, 4> diagonal_generators{};

    bool operator==(const Fingerprint&) const = default;
    std::string digest() const;  // stable hex digest of the record
};

/// Residuals of the sixteen defining relations under the representation.
std::vector<ResidualReport> relation_residuals(const TruncatedRep& rep, int margin, double tol);

/// Residuals of the three z z* / z11 exchange identities.
std::vector<ResidualReport> cross_identity_checks(const TruncatedRep& rep, int margin, double tol);

/// Symbolic route: the exchange identities reduce to zero in the algebra.
bool cross_identities_reduce_to_zero();

/// Which orbit carries each series' joint spectrum.
OrbitTag series_orbit(Series s);

SpectrumReport joint_spectrum(const TruncatedRep& rep, double tol = 1e-10, int margin = 3);

DecompositionReport diagonal_decomposition_check(const TruncatedRep& rep, int margin, double tol,
                                                 double zero_tol = 1e-14);

WeightReport weight_diagnostics(const TruncatedRep& rep, double commutator_tol = 1e-12);

Fingerprint series_fingerprint(const TruncatedRep& rep, int margin = 3);

struct VerificationOptions {
    int margin = 3;
    double relation_tol = 1e-10;
    double spectrum_tol = 1e-10;
    double decomposition_tol = 1e-10;
    double decomposition_zero_tol = 1e-14;
    double commutator_tol = 1e-12;
};

struct VerificationReport {
    SeriesSpec spec;
    int cutoff = 0;
    VerificationOptions options;
    std::vector<ResidualReport> relations;  // 16 defining + 3 exchange identities
    SpectrumReport spectrum;
    DecompositionReport decomposition;
    WeightReport weights;
    Fingerprint fingerprint;
    bool all_pass = false;
};

/// Rank-based default cutoff (20 / 12 / 8 / 6 by rank, 1 at rank 0), raised
/// to 2*margin + 1 when the margin would leave no interior vector.
int default_cutoff(Series s, int margin = 3);

/// Throws ConfigError when the margin leaves no interior vector.
VerificationReport run_verification(const SeriesSpec& spec, int cutoff,
                                    const VerificationOptions& opts = {});

std::string report_to_json(const VerificationReport& rep, int indent = -1);

}  // namespace qmb
