// Command-line front end for the quantum matrix ball library. Talks to the
// core exclusively through the C API in qmb.h.
#include <qmb.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

struct CString {
    char* ptr = nullptr;
    ~CString() { qmb_string_free(ptr); }
    std::string str() const { return ptr ? ptr : ""; }
};

int fail_config(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return kExitConfig;
}

int map_status(qmb_status st) {
    if (st == QMB_OK) return kExitOk;
    std::cerr << "error: " << qmb_last_error() << "\n";
    return kExitConfig;
}

bool write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return true;
    }
    std::ofstream os(out_path);
    os << text << "\n";
    return static_cast<bool>(os);
}

std::optional<std::pair<long, long>> parse_range(const std::string& s) {
    auto colon = s.find(':');
    try {
        if (colon == std::string::npos) {
            long hi = std::stol(s);
            return std::make_pair(0L, hi - 1);  // "N" means [0, N)
        }
        return std::make_pair(std::stol(s.substr(0, colon)), std::stol(s.substr(colon + 1)));
    } catch (...) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------

int cmd_normal_form(const std::string& expr, std::optional<double> q) {
    qmb_poly* p = nullptr;
    if (qmb_status st = qmb_poly_parse(expr.c_str(), &p); st != QMB_OK) return map_status(st);
    CString text;
    int rc = map_status(qmb_poly_format(p, &text.ptr));
    if (rc == kExitOk) {
        std::cout << text.str() << "\n";
        if (q) {
            CString numeric;
            rc = map_status(qmb_poly_format_at(p, *q, &numeric.ptr));
            if (rc == kExitOk) std::cout << numeric.str() << "\n";
        }
    }
    qmb_poly_free(p);
    return rc;
}

int cmd_orbit(const std::string& base, const std::string& mr, const std::string& lr,
              const std::string& kr, double q, const std::string& out_path) {
    auto m = parse_range(mr), l = parse_range(lr), k = parse_range(kr);
    if (!m || !l || !k) return fail_config("ranges must be N or lo:hi");
    CString json;
    qmb_status st = qmb_orbit_patch_json(base.c_str(), m->first, m->second, l->first, l->second,
                                         k->first, k->second, q, 2, &json.ptr);
    if (st != QMB_OK) return map_status(st);
    return write_output(json.str(), out_path) ? kExitOk : fail_config("cannot write " + out_path);
}

int cmd_build(const std::string& series, const std::vector<double>& phases, double q, int cutoff,
              const std::string& out_path) {
    int n = cutoff > 0 ? cutoff : qmb_default_cutoff(series.c_str(), 3);
    if (n < 0) return fail_config("unknown series '" + series + "'");
    qmb_rep* rep = nullptr;
    qmb_status st = qmb_rep_build(series.c_str(), phases.data(), phases.size(), q, n, &rep);
    if (st != QMB_OK) return map_status(st);
    CString json;
    int rc = map_status(qmb_rep_to_json(rep, 2, &json.ptr));
    qmb_rep_free(rep);
    if (rc != kExitOk) return rc;
    return write_output(json.str(), out_path) ? kExitOk : fail_config("cannot write " + out_path);
}

std::string markdown_summary(const nlohmann::json& r) {
    std::string md;
    md += "| check | value | pass |\n|---|---|---|\n";
    char buf[64];
    double worst = 0;
    for (const auto& rel : r.at("relations"))
        worst = std::max(worst, rel.at("residual").get<double>());
    std::snprintf(buf, sizeof buf, "%.3e", worst);
    md += std::string("| relation residual (max of ") + std::to_string(r.at("relations").size()) +
          ") | " + buf + " | " +
          (std::all_of(r.at("relations").begin(), r.at("relations").end(),
                       [](const nlohmann::json& x) { return x.at("pass").get<bool>(); })
               ? "yes"
               : "no") +
          " |\n";
    std::snprintf(buf, sizeof buf, "%.3e", r.at("spectrum").at("maxError").get<double>());
    md += std::string("| spectrum on orbit ") + r.at("spectrum").at("orbit").get<std::string>() +
          " | " + buf + " | " + (r.at("spectrum").at("pass").get<bool>() ? "yes" : "no") + " |\n";
    md += std::string("| decomposition | - | ") +
          (r.at("decomposition").at("pass").get<bool>() ? "yes" : "no") + " |\n";
    md += std::string("| simple spectrum | - | ") +
          (r.at("weights").at("pass").get<bool>() ? "yes" : "no") + " |\n";
    md += std::string("| all | - | ") + (r.at("allPass").get<bool>() ? "yes" : "no") + " |\n";
    return md;
}

int cmd_verify_single(const std::string& series, const std::vector<double>& phases, double q,
                      int cutoff, int margin, const std::string& out_path,
                      const std::string& format) {
    // Requesting the series' nominal default cutoff behaves like the
    // default: it is revised upward when the margin leaves no interior
    // vector (rank 4: 6 becomes 7 at margin 3). Other explicit values are
    // taken literally and may be rejected as configuration errors.
    if (cutoff > 0 && cutoff == qmb_default_cutoff(series.c_str(), 0))
        cutoff = qmb_default_cutoff(series.c_str(), margin);
    CString json;
    int all_pass = 0;
    qmb_status st = qmb_verify_json(series.c_str(), phases.data(), phases.size(), q, cutoff,
                                    margin, 2, &json.ptr, &all_pass);
    if (st != QMB_OK) return map_status(st);
    std::string rendered = json.str();
    if (format == "md") rendered = markdown_summary(nlohmann::json::parse(rendered));
    if (!write_output(rendered, out_path)) return fail_config("cannot write " + out_path);
    return all_pass ? kExitOk : kExitCheckFailed;
}

struct SweepJob {
    std::string series;
    std::vector<double> phases;
    double q = 0;
};

std::vector<SweepJob> sweep_jobs() {
    const std::vector<std::string> series = {"one-dim", "pi",      "rho12",   "rho1",
                                             "rho2",    "hat-rho", "rho-full"};
    const std::vector<double> qs = {0.3, 0.5, 0.8};
    std::vector<double> grid;
    for (int i = 0; i < 5; ++i) grid.push_back(2.0 * M_PI * i / 5.0);
    grid.push_back(1.0);  // an irrational multiple of pi guards phase bugs

    std::vector<SweepJob> jobs;
    for (const auto& s : series) {
        int arity = 0;
        if (s == "one-dim" || s == "rho12") arity = 2;
        else if (s != "rho-full") arity = 1;
        std::vector<std::vector<double>> phase_sets;
        if (arity == 0) phase_sets.push_back({});
        else if (arity == 1)
            for (double p : grid) phase_sets.push_back({p});
        else
            for (double p1 : grid)
                for (double p2 : grid) phase_sets.push_back({p1, p2});
        for (const auto& ps : phase_sets)
            for (double q : qs) jobs.push_back({s, ps, q});
    }
    return jobs;
}

int cmd_verify_all(int margin, const std::string& out_path, const std::string& format) {
    auto jobs = sweep_jobs();
    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("QMB_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) workers = static_cast<unsigned>(w);
    }
    workers = std::max(1u, std::min<unsigned>(workers, jobs.size()));

    std::vector<nlohmann::json> reports(jobs.size());
    std::vector<int> ok(jobs.size(), 0);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> config_error{false};
    std::mutex io;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size() || config_error) return;
            const SweepJob& job = jobs[i];
            CString json;
            int pass = 0;
            qmb_status st = qmb_verify_json(job.series.c_str(), job.phases.data(),
                                            job.phases.size(), job.q, 0, margin, -1, &json.ptr,
                                            &pass);
            if (st != QMB_OK) {
                std::lock_guard<std::mutex> lock(io);
                std::cerr << "error: " << job.series << ": " << qmb_last_error() << "\n";
                config_error = true;
                return;
            }
            reports[i] = nlohmann::json::parse(json.str());
            ok[i] = pass;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (config_error) return kExitConfig;

    bool all = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        all = all && ok[i];
        std::printf("%-8s q=%.1f phases=%zu : %s\n", jobs[i].series.c_str(), jobs[i].q,
                    jobs[i].phases.size(), ok[i] ? "pass" : "FAIL");
    }
    std::printf("%zu verification jobs, %s\n", jobs.size(), all ? "all passed" : "FAILURES");
    if (!out_path.empty()) {
        nlohmann::json combined = nlohmann::json::array();
        for (auto& r : reports) combined.push_back(std::move(r));
        if (format == "md") {
            std::string md = "| series | q | phases | pass |\n|---|---|---|---|\n";
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                char qbuf[16];
                std::snprintf(qbuf, sizeof qbuf, "%.1f", jobs[i].q);
                md += "| " + jobs[i].series + " | " + qbuf + " | " +
                      std::to_string(jobs[i].phases.size()) + " | " + (ok[i] ? "yes" : "no") +
                      " |\n";
            }
            if (!write_output(md, out_path)) return fail_config("cannot write " + out_path);
        } else if (!write_output(combined.dump(2), out_path)) {
            return fail_config("cannot write " + out_path);
        }
    }
    return all ? kExitOk : kExitCheckFailed;
}

int cmd_report_check(const std::string& path) {
    std::ifstream is(path);
    if (!is) return fail_config("cannot read " + path);
    nlohmann::json stored;
    try {
        is >> stored;
    } catch (const std::exception& e) {
        return fail_config(std::string("bad report JSON: ") + e.what());
    }
    std::vector<double> phases;
    for (const auto& p : stored.at("phases")) phases.push_back(p.get<double>());
    CString json;
    int pass = 0;
    qmb_status st = qmb_verify_json(stored.at("series").get<std::string>().c_str(), phases.data(),
                                    phases.size(), stored.at("q").get<double>(),
                                    stored.at("cutoff").get<int>(), stored.at("margin").get<int>(),
                                    -1, &json.ptr, &pass);
    if (st != QMB_OK) return map_status(st);
    nlohmann::json fresh = nlohmann::json::parse(json.str());

    auto flags = [](const nlohmann::json& r) {
        std::vector<std::pair<std::string, bool>> out;
        for (const auto& rel : r.at("relations"))
            out.emplace_back(rel.at("id").get<std::string>(), rel.at("pass").get<bool>());
        for (const char* key : {"spectrum", "decomposition", "weights"})
            out.emplace_back(key, r.at(key).at("pass").get<bool>());
        out.emplace_back("allPass", r.at("allPass").get<bool>());
        return out;
    };
    if (flags(stored) != flags(fresh)) {
        std::cerr << "report check: pass/fail flags changed on re-run\n";
        return kExitCheckFailed;
    }
    std::cout << "report check: flags reproduce\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum matrix ball: normal forms, representations, verification"};
    app.require_subcommand(1);

    std::string expr;
    std::optional<double> nf_q;
    auto* nf = app.add_subcommand("normal-form", "reduce a word to normal form");
    nf->add_option("expr", expr, "word, e.g. \"z22* z22\"");
    nf->add_option("--q", nf_q, "also print coefficients evaluated at q");

    std::string base = "0,0,0", mr = "0:0", lr = "0:0", kr = "0:0", out_path, range;
    double q = 0.5;
    auto* orbit = app.add_subcommand("orbit", "enumerate an orbit patch");
    orbit->add_option("--base", base, "orbit base point: 0,0,1 | 1,1,0 | 1,0,0 | 0,1,0 | 0,0,0")
        ->required();
    orbit->add_option("--range", range, "N for [0,N) on every exponent");
    orbit->add_option("--m", mr, "m range, N or lo:hi");
    orbit->add_option("--l", lr, "l range, N or lo:hi");
    orbit->add_option("--k", kr, "k range, N or lo:hi");
    orbit->add_option("--q", q, "deformation parameter");
    orbit->add_option("--out", out_path, "write JSON here instead of stdout");

    std::string series;
    std::vector<double> phases;
    int cutoff = 0, margin = 3;
    std::string format = "json";
    auto* build = app.add_subcommand("build", "build a truncated representation (JSON)");
    build->add_option("--series", series, "one-dim|pi|rho12|rho1|rho2|hat-rho|rho-full")
        ->required();
    build->add_option("--phi", phases, "phase parameter(s), repeatable");
    build->add_option("--q", q, "deformation parameter");
    build->add_option("--cutoff", cutoff, "per-axis truncation (default per rank)");
    build->add_option("--out", out_path, "write JSON here instead of stdout");

    bool verify_all = false;
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--series", series, "series tag (omit with --all)");
    verify->add_option("--phi", phases, "phase parameter(s), repeatable");
    verify->add_option("--q", q, "deformation parameter");
    verify->add_option("--cutoff", cutoff, "per-axis truncation (0 = default per rank)");
    verify->add_option("--margin", margin, "interior margin");
    verify->add_option("--out", out_path, "write the JSON report here");
    verify->add_option("--format", format, "json|md")->check(CLI::IsMember({"json", "md"}));
    verify->add_flag("--all", verify_all, "sweep all series, the phase grid and q in {0.3,0.5,0.8}");

    std::string report_path;
    auto* report = app.add_subcommand("report", "re-check a stored verification report");
    report->add_option("--check", report_path, "path to a report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (nf->parsed()) return cmd_normal_form(expr, nf_q);
    if (orbit->parsed()) {
        if (!range.empty()) mr = lr = kr = range;
        return cmd_orbit(base, mr, lr, kr, q, out_path);
    }
    if (build->parsed()) return cmd_build(series, phases, q, cutoff, out_path);
    if (verify->parsed()) {
        if (verify_all) return cmd_verify_all(margin, out_path, format);
        if (series.empty()) return fail_config("verify needs --series or --all");
        return cmd_verify_single(series, phases, q, cutoff, margin, out_path, format);
    }
    if (report->parsed()) return cmd_report_check(report_path);
    return kExitConfig;
}
