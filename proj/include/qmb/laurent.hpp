#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>

namespace qmb {

using Rational = boost::multiprecision::cpp_rational;

/// Laurent polynomial in the deformation parameter q with exact rational
/// coefficients. Zero coefficients are never stored, so equality of the
/// term maps is equality of ring elements.
class Laurent {
public:
    Laurent() = default;
    Laurent(int constant) { if (constant != 0) terms_[0] = constant; }
    Laurent(const Rational& c, int exponent = 0) {
        if (c != 0) terms_[exponent] = c;
    }

    static Laurent q_power(int e) { return Laurent(Rational(1), e); }

    bool is_zero() const { return terms_.empty(); }
    const std::map<int, Rational>& terms() const { return terms_; }

    Laurent& operator+=(const Laurent& o) {
        for (const auto& [e, c] : o.terms_) {
            Rational& r = terms_[e];
            r += c;
            if (r == 0) terms_.erase(e);
        }
        return *this;
    }
    Laurent& operator-=(const Laurent& o) {
        for (const auto& [e, c] : o.terms_) {
            Rational& r = terms_[e];
            r -= c;
            if (r == 0) terms_.erase(e);
        }
        return *this;
    }
    Laurent operator-() const {
        Laurent out;
        for (const auto& [e, c] : terms_) out.terms_[e] = -c;
        return out;
    }
    friend Laurent operator+(Laurent a, const Laurent& b) { a += b; return a; }
    friend Laurent operator-(Laurent a, const Laurent& b) { a -= b; return a; }
    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Rational& r = out.terms_[ea + eb];
                r += ca * cb;
                if (r == 0) out.terms_.erase(ea + eb);
            }
        return out;
    }
    bool operator==(const Laurent&) const = default;

    /// Evaluate at a numeric q, term by term in increasing exponent order.
    double eval(double q) const;

    /// "1 - q^2", "q^-1", "3/2*q", ... Multi-term coefficients are not
    /// parenthesized here; see coeff_str for the display form.
    std::string str() const;

private:
    std::map<int, Rational> terms_;
};

/// q - q^-1, the coefficient appearing throughout the mixed relations.
inline Laurent q_minus_qinv() {
    return Laurent::q_power(1) - Laurent::q_power(-1);
}

/// 1 - q^2.
inline Laurent one_minus_q2() {
    return Laurent(1) - Laurent::q_power(2);
}

}  // namespace qmb
