#pragma once

#include "qmb/algebra.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qmb {

using Complex = std::complex<double>;

/// The six series of irreducible bounded representations (the two rank-2
/// families are listed separately, so seven tags).
enum class Series { OneDim, Pi, Rho12, Rho1, Rho2, HatRho, RhoFull };

inline constexpr std::array<Series, 7> kAllSeries = {
    Series::OneDim, Series::Pi, Series::Rho12, Series::Rho1,
    Series::Rho2,   Series::HatRho, Series::RhoFull};

int series_rank(Series s);         // 0,1,1,2,2,3,4
int series_phase_count(Series s);  // 2,1,2,1,1,1,0
std::string series_name(Series s); // "one-dim", "pi", "rho12", ...
std::optional<Series> series_from_name(const std::string& name);

struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Selects one representation: series tag, phase parameters, numeric q.
struct SeriesSpec {
    Series series = Series::OneDim;
    std::vector<double> phases;  // arity must match series_phase_count
    double q = 0.5;

    void validate() const;  // throws SpecError
};

/// Truncated multi-index basis [0,cutoff)^rank, enumerated lexicographically
/// with the last axis fastest. Rank 0 is the one-dimensional space.
class BasisLattice {
public:
    BasisLattice(int rank, int cutoff);

    int rank() const { return rank_; }
    int cutoff() const { return cutoff_; }
    std::size_t dimension() const { return dim_; }

    std::size_t index_of(std::span<const int> coords) const;
    std::vector<int> coords_of(std::size_t flat) const;

    /// All coordinates in [margin, cutoff - margin); rank 0 is interior.
    bool interior(std::size_t flat, int margin) const;
    std::vector<std::size_t> interior_indices(int margin) const;

private:
    int rank_;
    int cutoff_;
    std::size_t dim_;
};

/// Sparse complex operator on the truncated space.
class SparseOperator {
public:
    using Matrix = Eigen::SparseMatrix<Complex>;
    using Triplet = Eigen::Triplet<Complex>;

    explicit SparseOperator(std::size_t dim) : mat_(static_cast<Eigen::Index>(dim),
                                                    static_cast<Eigen::Index>(dim)) {}
    explicit SparseOperator(Matrix m) : mat_(std::move(m)) { mat_.prune(0.0, 0.0); }

    static SparseOperator identity(std::size_t dim);
    static SparseOperator from_triplets(std::size_t dim, const std::vector<Triplet>& ts);

    std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }

    SparseOperator adjoint() const { return SparseOperator(Matrix(mat_.adjoint())); }

    friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
        return SparseOperator(Matrix(a.mat_ * b.mat_));
    }
    friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
        return SparseOperator(Matrix(a.mat_ + b.mat_));
    }
    friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
        return SparseOperator(Matrix(a.mat_ - b.mat_));
    }
    friend SparseOperator operator*(Complex s, const SparseOperator& a) {
        return SparseOperator(Matrix(s * a.mat_));
    }

    /// Euclidean norm of the image of basis vector j (the j-th column).
    double column_norm(std::size_t j) const;
    std::size_t column_nonzeros(std::size_t j) const;
    std::size_t max_column_nonzeros() const;

    double max_abs() const;           // entrywise sup norm
    double off_diagonal_max_abs() const;
    std::vector<Complex> diagonal() const;

    std::vector<Triplet> triplets() const;  // column-major, deterministic

private:
    Matrix mat_;
};

/// Diagonal operator from per-basis-vector values.
SparseOperator diagonal_operator(const std::vector<Complex>& values);

/// A representation truncated to the lattice box: one sparse matrix per
/// generator plus its exact conjugate-transpose. Transitions leaving the box
/// are annihilated, so operator identities are claimed only on interior
/// vectors.
struct TruncatedRep {
    SeriesSpec spec;
    BasisLattice lattice;
    std::array<SparseOperator, 4> gen;  // z11, z21, z12, z22
    std::array<SparseOperator, 4> adj;

    const SparseOperator& op(Letter l) const {
        return l.starred() ? adj[static_cast<int>(l.gen())] : gen[static_cast<int>(l.gen())];
    }
};

/// Build the truncated representation; cutoff >= 1.
TruncatedRep build_representation(const SeriesSpec& spec, int cutoff);

/// Product of generator/adjoint matrices in the word's letter order.
SparseOperator represent_word(const TruncatedRep& rep, const Word& w);

/// Linear extension to normal polynomials (coefficients evaluated at the
/// representation's q) and to explicit coefficient*word sums.
SparseOperator represent_polynomial(const TruncatedRep& rep, const NormalPolynomial& p);
SparseOperator represent_terms(const TruncatedRep& rep,
                               const std::vector<std::pair<Laurent, Word>>& terms);

/// The part of z11 that preserves each joint eigenspace of the commuting
/// family: z11 minus the correction -q z21 z12 z22* (1 - z22 z22*)^-1, with
/// the inverse taken diagonally. For the two series living where
/// z22 z22* = I (OneDim, Pi) the correction vanishes and z11 is returned
/// unchanged.
SparseOperator diagonal_part_z11(const TruncatedRep& rep);

/// Deterministic JSON dump of a truncated representation (spec, lattice,
/// triplet lists per generator).
std::string rep_to_json(const TruncatedRep& rep, int indent = -1);

}  // namespace qmb
