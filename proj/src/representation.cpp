#include "qmb/representation.hpp"

#include <json.hpp>

#include <cmath>
#include <numeric>

namespace qmb {

int series_rank(Series s) {
    switch (s) {
        case Series::OneDim: return 0;
        case Series::Pi: return 1;
        case Series::Rho12: return 1;
        case Series::Rho1: return 2;
        case Series::Rho2: return 2;
        case Series::HatRho: return 3;
        case Series::RhoFull: return 4;
    }
    std::abort();
}

int series_phase_count(Series s) {
    switch (s) {
        case Series::OneDim: return 2;
        case Series::Pi: return 1;
        case Series::Rho12: return 2;
        case Series::Rho1: return 1;
        case Series::Rho2: return 1;
        case Series::HatRho: return 1;
        case Series::RhoFull: return 0;
    }
    std::abort();
}

std::string series_name(Series s) {
    switch (s) {
        case Series::OneDim: return "one-dim";
        case Series::Pi: return "pi";
        case Series::Rho12: return "rho12";
        case Series::Rho1: return "rho1";
        case Series::Rho2: return "rho2";
        case Series::HatRho: return "hat-rho";
        case Series::RhoFull: return "rho-full";
    }
    std::abort();
}

std::optional<Series> series_from_name(const std::string& name) {
    for (Series s : kAllSeries)
        if (series_name(s) == name) return s;
    return std::nullopt;
}

void SeriesSpec::validate() const {
    int want = series_phase_count(series);
    if (static_cast<int>(phases.size()) != want)
        throw SpecError(series_name(series) + " takes " + std::to_string(want) +
                        " phase(s), got " + std::to_string(phases.size()));
    if (!(q > 0.0 && q < 1.0)) throw SpecError("q must lie in (0,1)");
}

BasisLattice::BasisLattice(int rank, int cutoff) : rank_(rank), cutoff_(cutoff) {
    if (rank < 0 || rank > 4) throw SpecError("lattice rank must be in [0,4]");
    if (cutoff < 1) throw SpecError("cutoff must be >= 1");
    dim_ = 1;
    for (int i = 0; i < rank; ++i) dim_ *= static_cast<std::size_t>(cutoff);
}

std::size_t BasisLattice::index_of(std::span<const int> coords) const {
    std::size_t flat = 0;
    for (int c : coords) flat = flat * static_cast<std::size_t>(cutoff_) + static_cast<std::size_t>(c);
    return flat;
}

std::vector<int> BasisLattice::coords_of(std::size_t flat) const {
    std::vector<int> coords(static_cast<std::size_t>(rank_));
    for (int i = rank_ - 1; i >= 0; --i) {
        coords[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(cutoff_));
        flat /= static_cast<std::size_t>(cutoff_);
    }
    return coords;
}

bool BasisLattice::interior(std::size_t flat, int margin) const {
    for (int c : coords_of(flat))
        if (c < margin || c >= cutoff_ - margin) return false;
    return true;
}

std::vector<std::size_t> BasisLattice::interior_indices(int margin) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dim_; ++i)
        if (interior(i, margin)) out.push_back(i);
    return out;
}

SparseOperator SparseOperator::identity(std::size_t dim) {
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setIdentity();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::from_triplets(std::size_t dim, const std::vector<Triplet>& ts) {
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(ts.begin(), ts.end());
    return SparseOperator(std::move(m));
}

double SparseOperator::column_norm(std::size_t j) const {
    return mat_.innerVector(static_cast<Eigen::Index>(j)).norm();
}

std::size_t SparseOperator::column_nonzeros(std::size_t j) const {
    std::size_t n = 0;
    for (Matrix::InnerIterator it(mat_, static_cast<Eigen::Index>(j)); it; ++it)
        if (it.value() != Complex(0)) ++n;
    return n;
}

std::size_t SparseOperator::max_column_nonzeros() const {
    std::size_t best = 0;
    for (std::size_t j = 0; j < dim(); ++j) best = std::max(best, column_nonzeros(j));
    return best;
}

double SparseOperator::max_abs() const {
    double best = 0;
    for (Eigen::Index k = 0; k < mat_.outerSize(); ++k)
        for (Matrix::InnerIterator it(mat_, k); it; ++it)
            best = std::max(best, std::abs(it.value()));
    return best;
}

double SparseOperator::off_diagonal_max_abs() const {
    double best = 0;
    for (Eigen::Index k = 0; k < mat_.outerSize(); ++k)
        for (Matrix::InnerIterator it(mat_, k); it; ++it)
            if (it.row() != it.col()) best = std::max(best, std::abs(it.value()));
    return best;
}

std::vector<Complex> SparseOperator::diagonal() const {
    std::vector<Complex> out(dim(), Complex(0));
    for (Eigen::Index k = 0; k < mat_.outerSize(); ++k)
        for (Matrix::InnerIterator it(mat_, k); it; ++it)
            if (it.row() == it.col()) out[static_cast<std::size_t>(it.row())] = it.value();
    return out;
}

std::vector<SparseOperator::Triplet> SparseOperator::triplets() const {
    std::vector<Triplet> out;
    out.reserve(static_cast<std::size_t>(mat_.nonZeros()));
    for (Eigen::Index k = 0; k < mat_.outerSize(); ++k)
        for (Matrix::InnerIterator it(mat_, k); it; ++it)
            out.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    return out;
}

SparseOperator diagonal_operator(const std::vector<Complex>& values) {
    std::vector<SparseOperator::Triplet> ts;
    ts.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != Complex(0))
            ts.emplace_back(static_cast<int>(i), static_cast<int>(i), values[i]);
    return SparseOperator::from_triplets(values.size(), ts);
}

namespace {

// Weighted-shift triplet collector; out-of-box targets are annihilated.
struct ShiftBuilder {
    const BasisLattice& lat;
    std::array<std::vector<SparseOperator::Triplet>, 4> trips;

    explicit ShiftBuilder(const BasisLattice& l) : lat(l) {}

    void add(int g, std::size_t from, std::vector<int> to, Complex v) {
        if (v == Complex(0)) return;
        for (int c : to)
            if (c < 0 || c >= lat.cutoff()) return;
        trips[static_cast<std::size_t>(g)].emplace_back(
            static_cast<int>(lat.index_of(to)), static_cast<int>(from), v);
    }
};

}  // namespace

TruncatedRep build_representation(const SeriesSpec& spec, int cutoff) {
    spec.validate();
    const double q = spec.q;
    BasisLattice lat(series_rank(spec.series), cutoff);
    ShiftBuilder b(lat);

    auto phase = [&](int i) { return std::exp(Complex(0.0, spec.phases[static_cast<std::size_t>(i)])); };
    auto qp = [&](int n) { return std::pow(q, n); };
    // w(j) = sqrt(1 - q^(2j)); multi-factor weights are built as products of
    // these so that the verifier's alternative routes hit the same floats.
    auto w = [&](int j) { return std::sqrt(1.0 - std::pow(q, 2.0 * j)); };

    switch (spec.series) {
        case Series::OneDim:
            b.add(0, 0, {}, phase(0) / q);
            b.add(3, 0, {}, phase(1));
            break;
        case Series::Pi:
            for (int k = 0; k < cutoff; ++k) {
                b.add(0, lat.index_of(std::array{k}), {k + 1}, w(k + 1) / q);
                b.add(3, lat.index_of(std::array{k}), {k}, phase(0));
            }
            break;
        case Series::Rho12:
            for (int k = 0; k < cutoff; ++k) {
                std::size_t i = lat.index_of(std::array{k});
                b.add(0, i, {k - 1}, -phase(0) * phase(1) / q * w(k));
                b.add(1, i, {k}, phase(0) * qp(k));
                b.add(2, i, {k}, phase(1) * qp(k));
                b.add(3, i, {k + 1}, w(k + 1));
            }
            break;
        case Series::Rho1:
        case Series::Rho2:
            for (int m = 0; m < cutoff; ++m)
                for (int k = 0; k < cutoff; ++k) {
                    std::size_t i = lat.index_of(std::array{m, k});
                    b.add(0, i, {m + 1, k - 1}, -phase(0) / q * w(m + 1) * w(k));
                    if (spec.series == Series::Rho1) {
                        b.add(1, i, {m + 1, k}, qp(k) * w(m + 1));
                        b.add(2, i, {m, k}, phase(0) * qp(k));
                    } else {
                        b.add(1, i, {m, k}, phase(0) * qp(k));
                        b.add(2, i, {m + 1, k}, qp(k) * w(m + 1));
                    }
                    b.add(3, i, {m, k + 1}, w(k + 1));
                }
            break;
        case Series::HatRho:
            for (int m = 0; m < cutoff; ++m)
                for (int l = 0; l < cutoff; ++l)
                    for (int k = 0; k < cutoff; ++k) {
                        std::size_t i = lat.index_of(std::array{m, l, k});
                        b.add(0, i, {m, l, k}, phase(0) * qp(m + l));
                        b.add(0, i, {m + 1, l + 1, k - 1}, -w(l + 1) * w(m + 1) * w(k) / q);
                        b.add(1, i, {m + 1, l, k}, qp(k) * w(m + 1));
                        b.add(2, i, {m, l + 1, k}, qp(k) * w(l + 1));
                        b.add(3, i, {m, l, k + 1}, w(k + 1));
                    }
            break;
        case Series::RhoFull:
            for (int s = 0; s < cutoff; ++s)
                for (int m = 0; m < cutoff; ++m)
                    for (int l = 0; l < cutoff; ++l)
                        for (int k = 0; k < cutoff; ++k) {
                            std::size_t i = lat.index_of(std::array{s, m, l, k});
                            b.add(0, i, {s + 1, m, l, k}, qp(m + l) * w(s + 1));
                            b.add(0, i, {s, m + 1, l + 1, k - 1}, -w(l + 1) * w(m + 1) * w(k) / q);
                            b.add(1, i, {s, m + 1, l, k}, qp(k) * w(m + 1));
                            b.add(2, i, {s, m, l + 1, k}, qp(k) * w(l + 1));
                            b.add(3, i, {s, m, l, k + 1}, w(k + 1));
                        }
            break;
    }

    std::size_t dim = lat.dimension();
    TruncatedRep rep{spec, lat,
                     {SparseOperator(dim), SparseOperator(dim), SparseOperator(dim), SparseOperator(dim)},
                     {SparseOperator(dim), SparseOperator(dim), SparseOperator(dim), SparseOperator(dim)}};
    for (int g = 0; g < 4; ++g) {
        rep.gen[static_cast<std::size_t>(g)] =
            SparseOperator::from_triplets(dim, b.trips[static_cast<std::size_t>(g)]);
        rep.adj[static_cast<std::size_t>(g)] = rep.gen[static_cast<std::size_t>(g)].adjoint();
    }
    return rep;
}

SparseOperator represent_word(const TruncatedRep& rep, const Word& w) {
    SparseOperator out = SparseOperator::identity(rep.lattice.dimension());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out = rep.op(*it) * out;
    return out;
}

SparseOperator represent_terms(const TruncatedRep& rep,
                               const std::vector<std::pair<Laurent, Word>>& terms) {
    SparseOperator out(rep.lattice.dimension());
    for (const auto& [c, w] : terms)
        out = out + Complex(c.eval(rep.spec.q), 0.0) * represent_word(rep, w);
    return out;
}

SparseOperator represent_polynomial(const TruncatedRep& rep, const NormalPolynomial& p) {
    std::vector<std::pair<Laurent, Word>> terms;
    for (const auto& [m, c] : p.terms()) terms.emplace_back(c, m.word());
    return represent_terms(rep, terms);
}

SparseOperator diagonal_part_z11(const TruncatedRep& rep) {
    if (rep.spec.series == Series::OneDim || rep.spec.series == Series::Pi)
        return rep.gen[0];  // z22 z22* = I there, the correction vanishes
    const BasisLattice& lat = rep.lattice;
    // 1 - z22 z22* has exact diagonal q^(2k) (k = last lattice axis); the
    // floating product would lose the low bits the cancellation needs, so
    // the inverse is formed from the exact values.
    std::vector<Complex> inv(lat.dimension());
    for (std::size_t i = 0; i < inv.size(); ++i) {
        int k = lat.coords_of(i).back();
        inv[i] = std::pow(rep.spec.q, -2.0 * k);
    }
    SparseOperator correction =
        Complex(-rep.spec.q, 0.0) * (rep.gen[1] * rep.gen[2] * rep.adj[3] * diagonal_operator(inv));
    return rep.gen[0] - correction;
}

std::string rep_to_json(const TruncatedRep& rep, int indent) {
    nlohmann::json j;
    j["series"] = series_name(rep.spec.series);
    j["phases"] = rep.spec.phases;
    j["q"] = rep.spec.q;
    j["cutoff"] = rep.lattice.cutoff();
    static const std::array<std::vector<std::string>, 5> axes = {
        std::vector<std::string>{}, {"k"}, {"m", "k"}, {"m", "l", "k"}, {"s", "m", "l", "k"}};
    const std::vector<std::string>& axis_names = axes[static_cast<std::size_t>(rep.lattice.rank())];
    j["lattice"] = {{"rank", rep.lattice.rank()},
                    {"cutoff", rep.lattice.cutoff()},
                    {"dimension", rep.lattice.dimension()},
                    {"axes", axis_names}};
    nlohmann::json ops = nlohmann::json::object();
    for (int g = 0; g < 4; ++g) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& t : rep.gen[static_cast<std::size_t>(g)].triplets())
            list.push_back({t.row(), t.col(), t.value().real(), t.value().imag()});
        ops[gen_name(static_cast<Gen>(g))] = std::move(list);
    }
    j["operators"] = std::move(ops);
    return j.dump(indent);
}

}  // namespace qmb
