#pragma once

#include "qmb/laurent.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmb {

// The four generators z_a^alpha, named subscript-first: token "z21" is the
// generator with a=2, alpha=1.
enum class Gen : std::uint8_t { z11 = 0, z21 = 1, z12 = 2, z22 = 3 };

inline const char* gen_name(Gen g) {
    static const char* names[4] = {"z11", "z21", "z12", "z22"};
    return names[static_cast<int>(g)];
}

/// One of the eight letters of the free *-monoid: a generator or its adjoint.
/// The code packs (generator index | starred bit << 2); the induced total
/// order z11 < z21 < z12 < z22 < z11* < z21* < z12* < z22* is the normal
/// order used everywhere: a word is normal iff its codes are non-decreasing.
struct Letter {
    std::uint8_t code = 0;

    constexpr Letter() = default;
    constexpr explicit Letter(std::uint8_t c) : code(c) {}
    constexpr Letter(Gen g, bool starred)
        : code(static_cast<std::uint8_t>(static_cast<std::uint8_t>(g) | (starred ? 4 : 0))) {}

    constexpr Gen gen() const { return static_cast<Gen>(code & 3); }
    constexpr bool starred() const { return (code & 4) != 0; }
    constexpr Letter star() const { return Letter(static_cast<std::uint8_t>(code ^ 4)); }

    auto operator<=>(const Letter&) const = default;
};

inline constexpr Letter z11{Gen::z11, false}, z21{Gen::z21, false},
    z12{Gen::z12, false}, z22{Gen::z22, false};
inline constexpr Letter z11s{Gen::z11, true}, z21s{Gen::z21, true},
    z12s{Gen::z12, true}, z22s{Gen::z22, true};

/// A word in the eight letters; the empty word is the unit.
using Word = std::vector<Letter>;

struct ParseError : std::runtime_error {
    std::size_t token_index;  // 1-based position of the offending token
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg), token_index(pos) {}
};

/// Whitespace-separated tokens z11|z21|z12|z22 with optional `*` suffix.
/// Empty input is the unit word.
Word parse_word(const std::string& text);
std::string word_str(const Word& w);
std::string letter_str(Letter l);

/// Exponent vector of a normal monomial
///   z11^a0 z21^a1 z12^a2 z22^a3 (z11*)^a4 (z21*)^a5 (z12*)^a6 (z22*)^a7,
/// unstarred block before starred block, each block in generator order.
struct NormalMonomial {
    std::array<std::uint32_t, 8> exps{};

    static NormalMonomial unit() { return {}; }
    static NormalMonomial from_word(const Word& w);  // w must be normal
    Word word() const;
    std::uint64_t degree() const;
    bool is_unit() const { return degree() == 0; }

    auto operator<=>(const NormalMonomial&) const = default;
};

/// Element of the algebra in normal form: monomial -> Laurent coefficient,
/// no zero coefficients stored. Coefficients stay real (Laurent in q);
/// complex scalars enter only at the representation level.
class NormalPolynomial {
public:
    NormalPolynomial() = default;
    static NormalPolynomial unit() { return monomial(NormalMonomial::unit(), Laurent(1)); }
    static NormalPolynomial monomial(const NormalMonomial& m, const Laurent& c);
    static NormalPolynomial letter(Letter l);

    bool is_zero() const { return terms_.empty(); }
    const std::map<NormalMonomial, Laurent>& terms() const { return terms_; }

    void add_term(const NormalMonomial& m, const Laurent& c);
    NormalPolynomial& operator+=(const NormalPolynomial& o);
    NormalPolynomial& operator-=(const NormalPolynomial& o);
    NormalPolynomial operator*(const Laurent& c) const;
    bool operator==(const NormalPolynomial&) const = default;

    /// Laurent coefficients evaluated at a numeric q in (0,1).
    /// Throws std::domain_error outside that interval.
    std::map<NormalMonomial, double> evaluate(double q_value) const;

    /// `coeff * monomial` terms joined by " + "; zero prints "0".
    std::string str() const;
    std::string str_at(double q_value) const;

private:
    std::map<NormalMonomial, Laurent> terms_;
};

/// Position preference when several out-of-order pairs are reducible.
/// Both strategies reach the same normal form (confluence is part of the
/// test suite); the option exists so tests can compare them.
enum class Strategy { LeftmostFirst, RightmostFirst };

/// Unique normal-form expansion of a word. Terminates: every rewrite
/// strictly decreases the degree-then-lexicographic word order.
NormalPolynomial normal_form(const Word& w, Strategy s = Strategy::LeftmostFirst);

/// Linear extension of normal_form to formal sums of coefficient*word.
NormalPolynomial normal_form(const std::vector<std::pair<Laurent, Word>>& terms,
                             Strategy s = Strategy::LeftmostFirst);

NormalPolynomial multiply(const NormalPolynomial& a, const NormalPolynomial& b);

/// Antilinear anti-homomorphism: reverse letters, toggle stars, renormalize.
/// Coefficients are real Laurent polynomials and stay fixed.
NormalPolynomial star(const NormalPolynomial& p);

/// One defining relation, sides kept as written: sum(lhs) = sum(rhs).
struct DefiningRelation {
    int id = 0;               // 1..16
    std::string name;         // e.g. "z11 z21 = q z21 z11"
    std::vector<std::pair<Laurent, Word>> lhs;
    std::vector<std::pair<Laurent, Word>> rhs;
};

/// The sixteen defining relations of the algebra: six holomorphic
/// reorderings, four diagonal *-relations, six mixed ones.
const std::vector<DefiningRelation>& defining_relations();

/// The three exchange identities between the positive products z z* and
/// z11 (consequences of the defining relations, used by the verifier):
///   w w* z11 = z11 w w* +- (q - q^-1) z21 z12 z22*   for w in {z21, z12, z22}.
const std::vector<DefiningRelation>& cross_identities();

/// star-image of a term list: coefficients fixed, words reversed and starred.
std::vector<std::pair<Laurent, Word>> star_terms(const std::vector<std::pair<Laurent, Word>>& terms);

/// Coefficient in display form: multi-term Laurents get parentheses.
std::string coeff_str(const Laurent& c);

}  // namespace qmb
