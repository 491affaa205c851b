#include "qmb.h"

#include "qmb/algebra.hpp"
#include "qmb/dynsys.hpp"
#include "qmb/representation.hpp"
#include "qmb/verify.hpp"

#include <json.hpp>

#include <cstring>
#include <new>
#include <string>

struct qmb_poly {
    qmb::NormalPolynomial value;
};

struct qmb_rep {
    qmb::TruncatedRep value;
};

namespace {

thread_local std::string t_last_error = "";

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

qmb_status fail(qmb_status code, const std::string& message) {
    t_last_error = message;
    return code;
}

// Maps C++ failures onto status codes; PARSE and INVALID carry the what().
template <typename F>
qmb_status guarded(F&& f) {
    try {
        return f();
    } catch (const qmb::ParseError& e) {
        return fail(QMB_ERROR_PARSE, e.what());
    } catch (const qmb::SpecError& e) {
        return fail(QMB_ERROR_INVALID, e.what());
    } catch (const qmb::ConfigError& e) {
        return fail(QMB_ERROR_INVALID, e.what());
    } catch (const std::domain_error& e) {
        return fail(QMB_ERROR_INVALID, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(QMB_ERROR_INVALID, e.what());
    } catch (const std::bad_alloc&) {
        return fail(QMB_ERROR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(QMB_ERROR_INTERNAL, e.what());
    }
}

qmb_status require(bool cond, const char* message) {
    return cond ? QMB_OK : fail(QMB_ERROR_INVALID, message);
}

qmb::SeriesSpec make_spec(const char* series, const double* phases, size_t n_phases, double q) {
    if (series == nullptr) throw qmb::SpecError("series name is null");
    auto tag = qmb::series_from_name(series);
    if (!tag) throw qmb::SpecError(std::string("unknown series '") + series + "'");
    qmb::SeriesSpec spec;
    spec.series = *tag;
    if (n_phases > 0) spec.phases.assign(phases, phases + n_phases);
    spec.q = q;
    spec.validate();
    return spec;
}

}  // namespace

extern "C" {

const char* qmb_last_error(void) { return t_last_error.c_str(); }

void qmb_string_free(char* s) { delete[] s; }

qmb_status qmb_poly_parse(const char* text, qmb_poly** out) {
    if (qmb_status st = require(text && out, "null argument"); st != QMB_OK) return st;
    return guarded([&] {
        auto word = qmb::parse_word(text);
        *out = new qmb_poly{qmb::normal_form(word)};
        return QMB_OK;
    });
}

qmb_status qmb_poly_star(const qmb_poly* p, qmb_poly** out) {
    if (qmb_status st = require(p && out, "null argument"); st != QMB_OK) return st;
    return guarded([&] {
        *out = new qmb_poly{qmb::star(p->value)};
        return QMB_OK;
    });
}

qmb_status qmb_poly_multiply(const qmb_poly* a, const qmb_poly* b, qmb_poly** out) {
    if (qmb_status st = require(a && b && out, "null argument"); st != QMB_OK) return st;
    return guarded([&] {
        *out = new qmb_poly{qmb::multiply(a->value, b->value)};
        return QMB_OK;
    });
}

int qmb_poly_equal(const qmb_poly* a, const qmb_poly* b) {
    if (!a || !b) return -1;
    return a->value == b->value ? 1 : 0;
}

int qmb_poly_is_zero(const qmb_poly* p) {
    if (!p) return -1;
    return p->value.is_zero() ? 1 : 0;
}

qmb_status qmb_poly_format(const qmb_poly* p, char** out) {
    if (qmb_status st = require(p && out, "null argument"); st != QMB_OK) return st;
    return guarded([&] {
        *out = dup_string(p->value.str());
        return QMB_OK;
    });
}

qmb_status qmb_poly_format_at(const qmb_poly* p, double q, char** out) {
    if (qmb_status st = require(p && out, "null argument"); st != QMB_OK) return st;
    return guarded([&] {
        if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q must lie in (0,1)");
        *out = dup_string(p->value.str_at(q));
        return QMB_OK;
    });
}

void qmb_poly_free(qmb_poly* p) { delete p; }

qmb_status qmb_rep_build(const char* series, const double* phases, size_t n_phases, double q,
                         int cutoff, qmb_rep** out) {
    if (qmb_status st = require(out && (phases || n_phases == 0), "null argument"); st != QMB_OK)
        return st;
    return guarded([&] {
        auto spec = make_spec(series, phases, n_phases, q);
        *out = new qmb_rep{qmb::build_representation(spec, cutoff)};
        return QMB_OK;
    });
}

qmb_status qmb_rep_to_json(const qmb_rep* rep, int indent, char** out) {
    if (qmb_status st = require(rep && out, "null argument"); st != QMB_OK) return st;
    return guarded([&] {
        *out = dup_string(qmb::rep_to_json(rep->value, indent));
        return QMB_OK;
    });
}

void qmb_rep_free(qmb_rep* rep) { delete rep; }

int qmb_default_cutoff(const char* series, int margin) {
    if (!series) return -1;
    auto tag = qmb::series_from_name(series);
    if (!tag) return -1;
    return qmb::default_cutoff(*tag, margin);
}

qmb_status qmb_orbit_patch_json(const char* base, long m_lo, long m_hi, long l_lo, long l_hi,
                                long k_lo, long k_hi, double q, int indent, char** out) {
    if (qmb_status st = require(base && out, "null argument"); st != QMB_OK) return st;
    return guarded([&] {
        auto tag = qmb::orbit_tag_parse(base);
        if (!tag) throw qmb::SpecError(std::string("unknown orbit base '") + base + "'");
        auto points = qmb::orbit_patch(*tag, {m_lo, m_hi}, {l_lo, l_hi}, {k_lo, k_hi}, q);
        nlohmann::json j;
        j["base"] = base;
        j["q"] = q;
        nlohmann::json list = nlohmann::json::array();
        for (const auto& p : points) {
            // points of the nonnegative cone are the candidate spectra of
            // the positive operator family
            bool physical = p.value.x1 >= 0 && p.value.x2 >= 0 && p.value.x3 >= 0;
            list.push_back({{"m", p.m},
                            {"l", p.l},
                            {"k", p.k},
                            {"x", {p.value.x1, p.value.x2, p.value.x3}},
                            {"physical", physical}});
        }
        j["points"] = std::move(list);
        *out = dup_string(j.dump(indent));
        return QMB_OK;
    });
}

qmb_status qmb_verify_json(const char* series, const double* phases, size_t n_phases, double q,
                           int cutoff, int margin, int indent, char** json_out, int* all_pass) {
    if (qmb_status st = require(json_out && (phases || n_phases == 0), "null argument");
        st != QMB_OK)
        return st;
    return guarded([&] {
        auto spec = make_spec(series, phases, n_phases, q);
        qmb::VerificationOptions opts;
        opts.margin = margin;
        int n = cutoff > 0 ? cutoff : qmb::default_cutoff(spec.series, margin);
        auto report = qmb::run_verification(spec, n, opts);
        *json_out = dup_string(qmb::report_to_json(report, indent));
        if (all_pass) *all_pass = report.all_pass ? 1 : 0;
        return QMB_OK;
    });
}

}  // extern "C"
