#include "qmb/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <sstream>

namespace qmb {

double Laurent::eval(double q) const {
    double out = 0.0;
    for (const auto& [e, c] : terms_)
        out += c.convert_to<double>() * std::pow(q, e);
    return out;
}

namespace {

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

std::string laurent_term_str(const Rational& mag, int e) {
    // |mag| with the q-power; sign handled by the caller.
    if (e == 0) return rational_str(mag);
    std::string qp = (e == 1) ? "q" : "q^" + std::to_string(e);
    if (mag == 1) return qp;
    return rational_str(mag) + "*" + qp;
}

}  // namespace

std::string Laurent::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        bool neg = c < 0;
        Rational mag = neg ? Rational(-c) : c;
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        out += laurent_term_str(mag, e);
    }
    return out;
}

std::string coeff_str(const Laurent& c) {
    if (c.terms().size() > 1) return "(" + c.str() + ")";
    return c.str();
}

std::string letter_str(Letter l) {
    std::string s = gen_name(l.gen());
    if (l.starred()) s += '*';
    return s;
}

std::string word_str(const Word& w) {
    std::string out;
    for (const Letter& l : w) {
        if (!out.empty()) out += ' ';
        out += letter_str(l);
    }
    return out;
}

Word parse_word(const std::string& text) {
    Word out;
    std::istringstream is(text);
    std::string tok;
    std::size_t pos = 0;
    while (is >> tok) {
        ++pos;
        bool starred = false;
        std::string body = tok;
        if (!body.empty() && body.back() == '*') {
            starred = true;
            body.pop_back();
        }
        int gen = -1;
        for (int g = 0; g < 4; ++g)
            if (body == gen_name(static_cast<Gen>(g))) gen = g;
        if (gen < 0)
            throw ParseError("unknown token '" + tok + "' at token " + std::to_string(pos), pos);
        out.push_back(Letter(static_cast<Gen>(gen), starred));
    }
    return out;
}

NormalMonomial NormalMonomial::from_word(const Word& w) {
    NormalMonomial m;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0 && w[i] < w[i - 1])
            throw std::invalid_argument("word is not in normal order: " + word_str(w));
        ++m.exps[w[i].code];
    }
    return m;
}

Word NormalMonomial::word() const {
    Word w;
    for (std::uint8_t c = 0; c < 8; ++c)
        for (std::uint32_t i = 0; i < exps[c]; ++i) w.push_back(Letter(c));
    return w;
}

std::uint64_t NormalMonomial::degree() const {
    std::uint64_t d = 0;
    for (auto e : exps) d += e;
    return d;
}

NormalPolynomial NormalPolynomial::monomial(const NormalMonomial& m, const Laurent& c) {
    NormalPolynomial p;
    p.add_term(m, c);
    return p;
}

NormalPolynomial NormalPolynomial::letter(Letter l) {
    NormalMonomial m;
    ++m.exps[l.code];
    return monomial(m, Laurent(1));
}

void NormalPolynomial::add_term(const NormalMonomial& m, const Laurent& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

NormalPolynomial& NormalPolynomial::operator+=(const NormalPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

NormalPolynomial& NormalPolynomial::operator-=(const NormalPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

NormalPolynomial NormalPolynomial::operator*(const Laurent& c) const {
    NormalPolynomial out;
    for (const auto& [m, k] : terms_) out.add_term(m, k * c);
    return out;
}

std::map<NormalMonomial, double> NormalPolynomial::evaluate(double q_value) const {
    if (!(q_value > 0.0 && q_value < 1.0))
        throw std::domain_error("q must lie in (0,1)");
    std::map<NormalMonomial, double> out;
    for (const auto& [m, c] : terms_) out[m] = c.eval(q_value);
    return out;
}

namespace {

std::string monomial_str(const NormalMonomial& m) {
    if (m.is_unit()) return "1";
    return word_str(m.word());
}

// Display order: total degree descending, then exponent vector descending,
// so leading terms print first.
std::vector<const std::pair<const NormalMonomial, Laurent>*> display_order(
    const std::map<NormalMonomial, Laurent>& terms) {
    std::vector<const std::pair<const NormalMonomial, Laurent>*> out;
    for (const auto& t : terms) out.push_back(&t);
    std::sort(out.begin(), out.end(), [](auto* a, auto* b) {
        auto da = a->first.degree(), db = b->first.degree();
        if (da != db) return da > db;
        return a->first.exps > b->first.exps;
    });
    return out;
}

}  // namespace

std::string NormalPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto* t : display_order(terms_)) {
        if (!out.empty()) out += " + ";
        if (t->first.is_unit() && t->second == Laurent(1))
            out += "1";  // the bare unit, not "1 * 1"
        else
            out += coeff_str(t->second) + " * " + monomial_str(t->first);
    }
    return out;
}

std::string NormalPolynomial::str_at(double q_value) const {
    if (!(q_value > 0.0 && q_value < 1.0))
        throw std::domain_error("q must lie in (0,1)");
    if (terms_.empty()) return "0";
    std::string out;
    char buf[64];
    for (auto* t : display_order(terms_)) {
        if (!out.empty()) out += " + ";
        if (t->first.is_unit() && t->second == Laurent(1)) {
            out += "1";
            continue;
        }
        std::snprintf(buf, sizeof buf, "%g", t->second.eval(q_value));
        out += std::string(buf) + " * " + monomial_str(t->first);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Defining relations and the rewrite table.

namespace {

using Terms = std::vector<std::pair<Laurent, Word>>;

DefiningRelation rel(int id, std::string name, Terms lhs, Terms rhs) {
    return DefiningRelation{id, std::move(name), std::move(lhs), std::move(rhs)};
}

const Laurent kOne{1};
const Laurent kQ = Laurent::q_power(1);
const Laurent kQ2 = Laurent::q_power(2);

std::vector<DefiningRelation> make_relations() {
    const Laurent o = kOne;
    const Laurent dq = q_minus_qinv();
    const Laurent u = one_minus_q2();
    const Laurent u2q = Laurent::q_power(-2) * u * u;  // q^-2 (1-q^2)^2
    std::vector<DefiningRelation> r;
    // Holomorphic reorderings (reading order of the six-entry display).
    r.push_back(rel(1, "z11 z21 = q z21 z11", {{o, {z11, z21}}}, {{kQ, {z21, z11}}}));
    r.push_back(rel(2, "z21 z12 = z12 z21", {{o, {z21, z12}}}, {{o, {z12, z21}}}));
    r.push_back(rel(3, "z11 z12 = q z12 z11", {{o, {z11, z12}}}, {{kQ, {z12, z11}}}));
    r.push_back(rel(4, "z21 z22 = q z22 z21", {{o, {z21, z22}}}, {{kQ, {z22, z21}}}));
    r.push_back(rel(5, "z11 z22 - z22 z11 = (q - q^-1) z12 z21",
                    {{o, {z11, z22}}, {-o, {z22, z11}}}, {{dq, {z12, z21}}}));
    r.push_back(rel(6, "z12 z22 = q z22 z12", {{o, {z12, z22}}}, {{kQ, {z22, z12}}}));
    // Diagonal *-relations.
    r.push_back(rel(7, "z11* z11 diagonal relation", {{o, {z11s, z11}}},
                    {{kQ2, {z11, z11s}},
                     {-u, {z21, z21s}},
                     {-u, {z12, z12s}},
                     {u2q, {z22, z22s}},
                     {u, {}}}));
    r.push_back(rel(8, "z21* z21 diagonal relation", {{o, {z21s, z21}}},
                    {{kQ2, {z21, z21s}}, {-u, {z22, z22s}}, {u, {}}}));
    r.push_back(rel(9, "z12* z12 diagonal relation", {{o, {z12s, z12}}},
                    {{kQ2, {z12, z12s}}, {-u, {z22, z22s}}, {u, {}}}));
    r.push_back(rel(10, "z22* z22 = q^2 z22 z22* + 1 - q^2", {{o, {z22s, z22}}},
                    {{kQ2, {z22, z22s}}, {u, {}}}));
    // Mixed relations.
    r.push_back(rel(11, "z11* z21 - q z21 z11* = (q - q^-1) z22 z12*",
                    {{o, {z11s, z21}}, {-kQ, {z21, z11s}}}, {{dq, {z22, z12s}}}));
    r.push_back(rel(12, "z22* z21 = q z21 z22*", {{o, {z22s, z21}}}, {{kQ, {z21, z22s}}}));
    r.push_back(rel(13, "z11* z12 - q z12 z11* = (q - q^-1) z22 z21*",
                    {{o, {z11s, z12}}, {-kQ, {z12, z11s}}}, {{dq, {z22, z21s}}}));
    r.push_back(rel(14, "z22* z12 = q z12 z22*", {{o, {z22s, z12}}}, {{kQ, {z12, z22s}}}));
    r.push_back(rel(15, "z11* z22 = z22 z11*", {{o, {z11s, z22}}}, {{o, {z22, z11s}}}));
    r.push_back(rel(16, "z21* z12 = z12 z21*", {{o, {z21s, z12}}}, {{o, {z12, z21s}}}));
    return r;
}

}  // namespace

const std::vector<DefiningRelation>& defining_relations() {
    static const std::vector<DefiningRelation> rels = make_relations();
    return rels;
}

const std::vector<DefiningRelation>& cross_identities() {
    static const std::vector<DefiningRelation> rels = [] {
        const Laurent o = kOne;
        const Laurent dq = q_minus_qinv();
        std::vector<DefiningRelation> r;
        // w w* z11 = z11 w w* - sign (q - q^-1) z21 z12 z22*,
        // sign = -1 for w in {z21, z12} and +1 for w = z22.
        r.push_back(rel(17, "z21 z21* exchange with z11",
                        {{o, {z21, z21s, z11}}},
                        {{o, {z11, z21, z21s}}, {dq, {z21, z12, z22s}}}));
        r.push_back(rel(18, "z12 z12* exchange with z11",
                        {{o, {z12, z12s, z11}}},
                        {{o, {z11, z12, z12s}}, {dq, {z21, z12, z22s}}}));
        r.push_back(rel(19, "z22 z22* exchange with z11",
                        {{o, {z22, z22s, z11}}},
                        {{o, {z11, z22, z22s}}, {-dq, {z21, z12, z22s}}}));
        return r;
    }();
    return rels;
}

std::vector<std::pair<Laurent, Word>> star_terms(const std::vector<std::pair<Laurent, Word>>& terms) {
    std::vector<std::pair<Laurent, Word>> out;
    out.reserve(terms.size());
    for (const auto& [c, w] : terms) {
        Word sw;
        sw.reserve(w.size());
        for (auto it = w.rbegin(); it != w.rend(); ++it) sw.push_back(it->star());
        out.emplace_back(c, std::move(sw));
    }
    return out;
}

namespace {

// One oriented rewrite rule: the out-of-order pair (hi, lo) expands into a
// combination of strictly deglex-smaller words.
struct Rule {
    std::vector<std::pair<Laurent, Word>> replacement;
};

bool deglex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

// The table is generated from the sixteen relations plus their star-images:
// each relation is oriented on its deglex-maximal word. The star-images of
// the holomorphic block supply the ordering rules inside the starred block;
// the diagonal relations are self-adjoint. This yields exactly one rule per
// out-of-order letter pair (28 in total).
std::array<Rule, 64> build_rule_table() {
    std::array<Rule, 64> table{};
    std::array<bool, 64> have{};
    auto orient = [&](const Terms& lhs, const Terms& rhs) {
        std::map<Word, Laurent> comb;
        for (const auto& [c, w] : lhs) {
            comb[w] += c;
            if (comb[w].is_zero()) comb.erase(w);
        }
        for (const auto& [c, w] : rhs) {
            comb[w] -= c;
            if (comb[w].is_zero()) comb.erase(w);
        }
        auto top = comb.begin();
        for (auto it = comb.begin(); it != comb.end(); ++it)
            if (deglex_less(top->first, it->first)) top = it;
        const Word& tw = top->first;
        assert(tw.size() == 2 && tw[1] < tw[0]);
        // top coefficient is a single +-q^e monomial in every relation
        assert(top->second.terms().size() == 1);
        auto [te, tc] = *top->second.terms().begin();
        Laurent inv(Rational(1) / tc, -te);
        Rule rule;
        for (const auto& [w, c] : comb) {
            if (w == tw) continue;
            rule.replacement.emplace_back((-c) * inv, w);
        }
        std::size_t slot = tw[0].code * 8 + tw[1].code;
        if (have[slot]) {
            assert(table[slot].replacement == rule.replacement);
        } else {
            table[slot] = std::move(rule);
            have[slot] = true;
        }
    };
    for (const DefiningRelation& r : defining_relations()) {
        orient(r.lhs, r.rhs);
        orient(star_terms(r.lhs), star_terms(r.rhs));
    }
    int count = 0;
    for (int hi = 0; hi < 8; ++hi)
        for (int lo = 0; lo < 8; ++lo)
            if (hi > lo) {
                assert(have[hi * 8 + lo]);
                ++count;
            }
    assert(count == 28);
    return table;
}

const std::array<Rule, 64>& rule_table() {
    static const std::array<Rule, 64> table = build_rule_table();
    return table;
}

// Generous per-call bound; the deglex argument guarantees termination, this
// guards against table bugs turning into hangs.
constexpr std::size_t kStepBudget = std::size_t(1) << 26;

int find_descent(const Word& w, Strategy s) {
    if (s == Strategy::LeftmostFirst) {
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i + 1] < w[i]) return static_cast<int>(i);
    } else {
        for (std::size_t i = w.size(); i-- > 1;)
            if (w[i] < w[i - 1]) return static_cast<int>(i - 1);
    }
    return -1;
}

}  // namespace

NormalPolynomial normal_form(const std::vector<std::pair<Laurent, Word>>& terms, Strategy s) {
    const auto& table = rule_table();
    NormalPolynomial out;
    std::map<Word, Laurent> work;
    for (const auto& [c, w] : terms) {
        work[w] += c;
        if (work[w].is_zero()) work.erase(w);
    }
    std::size_t steps = 0;
    while (!work.empty()) {
        auto node = work.extract(work.begin());
        const Word& w = node.key();
        const Laurent& c = node.mapped();
        int pos = find_descent(w, s);
        if (pos < 0) {
            out.add_term(NormalMonomial::from_word(w), c);
            continue;
        }
        if (++steps > kStepBudget)
            throw std::runtime_error("rewrite step budget exceeded");
        const Rule& rule = table[w[pos].code * 8 + w[pos + 1].code];
        for (const auto& [rc, rw] : rule.replacement) {
            Word nw;
            nw.reserve(w.size() - 2 + rw.size());
            nw.insert(nw.end(), w.begin(), w.begin() + pos);
            nw.insert(nw.end(), rw.begin(), rw.end());
            nw.insert(nw.end(), w.begin() + pos + 2, w.end());
            Laurent& slot = work[nw];
            slot += c * rc;
            if (slot.is_zero()) work.erase(nw);
        }
    }
    return out;
}

NormalPolynomial normal_form(const Word& w, Strategy s) {
    return normal_form(std::vector<std::pair<Laurent, Word>>{{Laurent(1), w}}, s);
}

NormalPolynomial multiply(const NormalPolynomial& a, const NormalPolynomial& b) {
    std::vector<std::pair<Laurent, Word>> terms;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            Word w = ma.word();
            Word wb = mb.word();
            w.insert(w.end(), wb.begin(), wb.end());
            terms.emplace_back(ca * cb, std::move(w));
        }
    return normal_form(terms);
}

NormalPolynomial star(const NormalPolynomial& p) {
    std::vector<std::pair<Laurent, Word>> terms;
    for (const auto& [m, c] : p.terms()) {
        Word w = m.word();
        Word sw;
        sw.reserve(w.size());
        for (auto it = w.rbegin(); it != w.rend(); ++it) sw.push_back(it->star());
        terms.emplace_back(c, std::move(sw));
    }
    return normal_form(terms);
}

}  // namespace qmb
