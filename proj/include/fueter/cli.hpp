#pragma once

// Batch command surface.  Every command produces a Report; run_cli parses
// arguments, renders the report as JSON or a table and maps failures to
// exit codes (0 pass, 1 check failed, 2 input error, 3 resource cap).

#include "fueter/crfsolve.hpp"
#include "fueter/integrate.hpp"
#include "fueter/json_io.hpp"
#include "fueter/suites.hpp"
#include "fueter/syzygy.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

namespace fueter::cli {

enum ExitCode { kPass = 0, kFail = 1, kInputError = 2, kResourceCap = 3 };

class ResourceLimit : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline std::string fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

class Report {
  public:
    Report(std::string command, std::vector<std::string> args) : command_(std::move(command)), args_(std::move(args)) {}

    /// Reads and parses an input file, recording its digest.
    Json input(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw InputError(path, "cannot open file");
        std::ostringstream ss;
        ss << in.rdbuf();
        inputs_.push_back(Json{{"path", path}, {"fnv1a64", fnv1a64(ss.str())}});
        return parse_json(ss.str(), path);
    }

    /// status is "pass", "fail" or "value" (informational, never fails).
    void check(const std::string& name, const std::string& status, const std::string& backend, double tol, Json value) {
        if (status == "fail")
            failed_ = true;
        checks_.push_back(Json{{"name", name}, {"status", status}, {"backend", backend}, {"tolerance", tol}, {"value", std::move(value)}});
    }
    void check(const std::string& name, const char* status, const std::string& backend, double tol, Json value) {
        check(name, std::string(status), backend, tol, std::move(value));
    }
    void check(const std::string& name, bool ok, const std::string& backend, double tol, Json value) {
        check(name, std::string(ok ? "pass" : "fail"), backend, tol, std::move(value));
    }

    Json& result() { return result_; }
    bool failed() const { return failed_; }
    void set_timing(double ms) { timing_ms_ = ms; }

    Json to_json() const {
        Json j{{"schema_version", kSchemaVersion}, {"command", command_}, {"args", args_}, {"inputs", inputs_},
               {"checks", checks_}, {"result", result_}, {"status", failed_ ? "fail" : "pass"}};
        if (timing_ms_ >= 0)
            j["timing_ms"] = timing_ms_;
        return j;
    }

    std::string render(const std::string& format) const {
        if (format == "json")
            return to_json().dump(2) + "\n";
        std::ostringstream os;
        os << "command:";
        for (const auto& a : args_)
            os << ' ' << a.get<std::string>();
        os << '\n';
        for (const auto& in : inputs_)
            os << "input:   " << in["path"].get<std::string>() << "  fnv1a64=" << in["fnv1a64"].get<std::string>() << '\n';
        os << std::left << std::setw(44) << "check" << std::setw(7) << "status" << std::setw(16) << "backend"
           << std::setw(10) << "tol" << "value\n";
        for (const auto& c : checks_) {
            std::ostringstream tol;
            tol << c["tolerance"].get<double>();
            os << std::setw(44) << c["name"].get<std::string>() << std::setw(7) << c["status"].get<std::string>()
               << std::setw(16) << c["backend"].get<std::string>() << std::setw(10) << tol.str() << c["value"].dump() << '\n';
        }
        for (const auto& [k, v] : result_.items())
            os << "result." << k << ": " << v.dump() << '\n';
        if (timing_ms_ >= 0)
            os << "timing_ms: " << timing_ms_ << '\n';
        os << "status: " << (failed_ ? "fail" : "pass") << '\n';
        return os.str();
    }

  private:
    std::string command_;
    Json args_ = Json::array();
    Json inputs_ = Json::array();
    Json checks_ = Json::array();
    Json result_ = Json::object();
    bool failed_ = false;
    double timing_ms_ = -1;
};

namespace detail {

inline Json hnum_json(const HExact& x) { return to_json(x); }
inline Json hnum_json(const HFloat& x) {
    Json c = Json::array();
    for (int i = 0; i < x.dim(); ++i)
        c.push_back(x[i]);
    return Json{{"algebra", algebra_name(x.algebra())}, {"c", c}};
}

template <class T>
Json point_json(const Point<T>& p) {
    Json a = Json::array();
    for (const auto& v : p) {
        if constexpr (std::is_same_v<T, Rational>)
            a.push_back(rational_to_json(v));
        else
            a.push_back(v);
    }
    return a;
}

inline const char* qbar_name(int h) { return h == 0 ? "qbar1" : "qbar2"; }

template <class T>
Json witness_json(const std::optional<Witness<T>>& w, const std::vector<Point<T>>& pts) {
    if (!w)
        return nullptr;
    return Json{{"sample", w->sample}, {"point", point_json(pts[w->sample])}, {"operator", qbar_name(w->h)}, {"value", hnum_json(w->value)}};
}

inline HPoly require_boundary_function(const Json& j, const std::string& path) {
    HPoly f = hpoly_from_json(j, path);
    if (f.algebra() != Algebra::H || f.nvars() != 2)
        throw InputError(path, "boundary data must be quaternionic in two variables");
    return f;
}

/// First point where a nonzero polynomial does not vanish.
inline Json symbolic_witness(const HPoly& P, const std::vector<Point<Rational>>& pts, const std::string& op) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const HExact v = P.evaluate(pts[i]);
        if (!v.is_zero())
            return Json{{"sample", i}, {"point", point_json(pts[i])}, {"operator", op}, {"value", to_json(v)}};
    }
    return Json{{"operator", op}, {"restricted", to_json(P)}};
}

template <class T>
void pointwise_check(Report& rep, const HPoly& f, const Hypersurface& S, const std::vector<Point<T>>& pts, bool admissible,
                     double tol, const std::string& backend) {
    const double t = std::is_same_v<T, Rational> ? 0.0 : tol;
    if (!admissible) {
        const auto r = is_crf(f, S, pts, tol);
        rep.check("crf", r.crf, backend, t, r.crf);
        rep.result()["crf"] = r.crf;
        rep.result()["crf_witness"] = witness_json(r.witness, pts);
        return;
    }
    const auto r = is_admissible(f, S, pts, tol);
    rep.check("crf", r.crf.crf, backend, t, r.crf.crf);
    rep.result()["crf"] = r.crf.crf;
    rep.result()["crf_witness"] = witness_json(r.crf.witness, pts);
    Json failing = Json::array();
    for (int b = 0; b < 8; ++b) {
        const auto& d = r.derived[static_cast<std::size_t>(b)];
        rep.check(derived_names()[static_cast<std::size_t>(b)] + " crf", d.crf, backend, t, d.crf);
        if (!d.crf) {
            Json w = witness_json(d.witness, pts);
            w["derived"] = derived_names()[static_cast<std::size_t>(b)];
            failing.push_back(std::move(w));
        }
    }
    rep.result()["admissible"] = r.admissible();
    rep.result()["admissibility_witnesses"] = std::move(failing);
}

}  // namespace detail

struct CheckArgs {
    std::string f_path, surface_path, samples_path;
    bool admissible = false;
    double tol = 1e-10;
    std::uint64_t seed = 7;
    int count = 20;
};

inline void cmd_check(Report& rep, const CheckArgs& a) {
    const HPoly f = detail::require_boundary_function(rep.input(a.f_path), a.f_path);
    const Hypersurface S = surface_from_json(rep.input(a.surface_path), a.surface_path);
    CorpusRng rng(a.seed);
    if (!a.samples_path.empty()) {
        const auto pts = samples_from_json(rep.input(a.samples_path), S, a.samples_path);
        rep.result()["samples"] = pts.size();
        detail::pointwise_check(rep, f, S, pts, a.admissible, a.tol, "exact");
        return;
    }
    if (!S.is_affine()) {
        const auto pts = sample_projected(S, static_cast<std::size_t>(a.count), rng);
        rep.result()["samples"] = pts.size();
        detail::pointwise_check(rep, f, S, pts, a.admissible, a.tol, "float");
        return;
    }
    // affine: decided on all of S by restriction, witnesses at rational samples
    const auto pts = sample_affine(S, static_cast<std::size_t>(a.count), rng);
    const AffineAdmissibility r = admissibility_affine(f, S);
    rep.check("crf", r.crf, "exact-symbolic", 0, r.crf);
    rep.result()["crf"] = r.crf;
    Json cw = nullptr;
    for (int h = 0; h < 2 && cw.is_null(); ++h)
        if (!r.fqbar_on_S[static_cast<std::size_t>(h)].is_zero())
            cw = detail::symbolic_witness(r.fqbar_on_S[static_cast<std::size_t>(h)], pts, detail::qbar_name(h));
    rep.result()["crf_witness"] = cw;
    const auto pw = is_crf(f, S, pts);
    // exact samples can miss a nonzero restriction but never invent one
    rep.check("samples agree", pw.crf == r.crf || (pw.crf && !r.crf), "exact", 0, pw.crf);
    if (!a.admissible)
        return;
    Json failing = Json::array();
    for (int b = 0; b < 8; ++b) {
        const bool ok = r.derived_crf[static_cast<std::size_t>(b)];
        rep.check(derived_names()[static_cast<std::size_t>(b)] + " crf", ok, "exact-symbolic", 0, ok);
        if (ok)
            continue;
        const auto& fq = r.derived_fqbar_on_S[static_cast<std::size_t>(b)];
        const int h = fq[0].is_zero() ? 1 : 0;
        Json w = detail::symbolic_witness(fq[static_cast<std::size_t>(h)], pts, detail::qbar_name(h));
        w["derived"] = derived_names()[static_cast<std::size_t>(b)];
        w["derived_function"] = to_json(r.derived[static_cast<std::size_t>(b)]);
        failing.push_back(std::move(w));
    }
    rep.result()["admissible"] = r.admissible();
    rep.result()["admissibility_witnesses"] = std::move(failing);
}

inline HPolyVector read_system(const Json& j, const std::string& path) {
    const Json* arr = &j;
    std::string p = path;
    if (j.is_object()) {
        json_detail::check_schema(j, path);
        arr = &json_detail::field_array(j, "g", path);
        p += "/g";
    }
    if (!arr->is_array() || arr->empty())
        throw InputError(p, "expected a nonempty array of polynomials");
    HPolyVector g;
    for (std::size_t i = 0; i < arr->size(); ++i)
        g.push_back(hpoly_from_json((*arr)[i], p + "/" + std::to_string(i)));
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i].algebra() != g[0].algebra() || g[i].nvars() != static_cast<int>(g.size()))
            throw InputError(p + "/" + std::to_string(i), "system of n polynomials in n variables over one algebra expected");
    return g;
}

struct SolveArgs {
    std::string g_path;
    int degree = -1;
};

inline void cmd_solve(Report& rep, const SolveArgs& a) {
    const HPolyVector g = read_system(rep.input(a.g_path), a.g_path);
    SolveOptions opt;
    opt.degree_budget = a.degree;
    try {
        const HPoly u = solve_crf(g, opt);
        const bool compat = is_zero(compat_Pbar(g));
        const bool matches = dbar_system(u) == g;
        rep.check("compatibility residual = 0", compat, "exact", 0, compat);
        rep.check("dbar u = g", matches, "exact", 0, matches);
        rep.result()["u"] = to_json(u);
    } catch (const CompatibilityViolation& e) {
        Json res = Json::array();
        for (const auto& r : e.residuals())
            res.push_back(Json{{"l", r.l + 1}, {"m", r.m + 1}, {"residual", to_json(r.residual)}});
        rep.check("compatibility residual = 0", false, "exact", 0, res.size());
        rep.result()["residuals"] = std::move(res);
    } catch (const BudgetExceeded& e) {
        throw ResourceLimit(e.what());
    }
}

struct ExtendArgs {
    std::string f_path, surface_path;
    int order = 2;
    int degree = -1;
};

inline void cmd_extend(Report& rep, const ExtendArgs& a) {
    const HPoly f = detail::require_boundary_function(rep.input(a.f_path), a.f_path);
    const Hypersurface S = surface_from_json(rep.input(a.surface_path), a.surface_path);
    if (!S.is_affine())
        throw InputError(a.surface_path, "extensions are computed on affine hypersurfaces only");
    if (a.order < 1)
        throw InputError("--order", "extension order must be at least 1");
    ExtendOptions opt;
    opt.degree_budget = a.degree;
    rep.result()["order"] = a.order;
    try {
        const ExtensionResult r = crf_extend(f, S, a.order, opt);
        const bool restricts = restrict_to(r.F - f, S).is_zero();
        bool divisible = true;
        for (const auto& g : dbar_system(r.F))
            divisible = divisible && divisible_by_rho_power(g, S, a.order);
        rep.check("F restricts to f", restricts, "exact", 0, restricts);
        rep.check("dbar F in (rho^m)", divisible, "exact", 0, divisible);
        rep.result()["F"] = to_json(r.F);
        rep.result()["degree"] = r.degree;
        rep.result()["degrees_tried"] = r.degrees_tried;
    } catch (const NotAdmissibleOrBudget& e) {
        if (e.degrees_tried().empty())
            throw ResourceLimit(std::string(e.what()) + " (budget below deg f)");
        rep.check("extension exists", false, "exact", 0, e.what());
        rep.result()["degrees_tried"] = e.degrees_tried();
    }
}

inline void cmd_jump(Report& rep, const ExtendArgs& a) {
    const HPoly f = detail::require_boundary_function(rep.input(a.f_path), a.f_path);
    const Hypersurface S = surface_from_json(rep.input(a.surface_path), a.surface_path);
    if (!S.is_affine())
        throw InputError(a.surface_path, "jumps are computed on affine hypersurfaces only");
    ExtendOptions opt;
    opt.degree_budget = a.degree;
    try {
        const JumpSplit r = jump_split(f, S, opt);
        const bool regular = is_zero(dbar_system(r.plus)) && is_zero(dbar_system(r.minus));
        const bool jump = restrict_to(r.plus - r.minus - f, S).is_zero();
        rep.check("admissible", true, "exact-symbolic", 0, true);
        rep.check("F+ and F- regular", regular, "exact", 0, regular);
        rep.check("F+ - F- = f on S", jump, "exact", 0, jump);
        rep.result()["plus"] = to_json(r.plus);
        rep.result()["minus"] = to_json(r.minus);
        rep.result()["degree"] = r.degree;
        rep.result()["degrees_tried"] = r.degrees_tried;
    } catch (const NotAdmissible& e) {
        rep.check("admissible", false, "exact-symbolic", 0, false);
    } catch (const NoPolynomialExtensionWithinBudget& e) {
        rep.check("admissible", true, "exact-symbolic", 0, true);
        throw ResourceLimit(e.what());
    }
}

struct SyzygyArgs {
    Algebra algebra = Algebra::O;
    int n = 2;
    int degree = 2;
    std::string backend = "exact";
    std::size_t max_entries = 200'000'000;
};

inline void cmd_syzygy(Report& rep, const SyzygyArgs& a) {
    if (a.n < 2 || a.n > 4)
        throw InputError("--n", "syzygies are computed for 2 <= n <= 4");
    if (a.degree < 0 || a.degree > 4)
        throw InputError("--degree", "degree must be between 0 and 4");
    SyzygyOptions opt;
    opt.max_entries = a.max_entries;
    if (a.backend == "exact")
        opt.backend = RankBackend::exact;
    else if (a.backend == "modp")
        opt.backend = RankBackend::modp;
    else
        throw InputError("--backend", "expected exact or modp");
    const std::string bname = backend_name(opt.backend);

    const OperatorMatrix D = build_dbar_matrix(a.n, a.algebra);
    const auto rows = all_compat_rows(a.n, a.algebra);
    bool all_syz = true;
    for (const auto& v : rows)
        all_syz = all_syz && verify_syzygy(v, D);
    rep.check("compat rows are syzygies", all_syz, "exact", 0, rows.size());

    Json dims = Json::array();
    try {
        for (int k = 0; k <= a.degree; ++k) {
            const SyzygyDim d = syzygy_dim(k, a.n, a.algebra, opt);
            Json entry{{"degree", k}, {"dim", d.dim}, {"unknowns", d.unknowns}, {"equations", d.equations}};
            if (k >= 2) {
                const std::size_t span = compat_span_rank(k, a.n, a.algebra, opt);
                entry["compat_span_rank"] = span;
                rep.check("compat rows span degree " + std::to_string(k), "value", bname, 0, span == d.dim);
            }
            rep.check("syzygy dim degree " + std::to_string(k), "value", bname, 0, d.dim);
            dims.push_back(std::move(entry));
        }
    } catch (const ResourceCapExceeded& e) {
        throw ResourceLimit(e.what());
    }
    rep.result()["dims"] = std::move(dims);
    if (a.degree >= 2)
        rep.result()["basis_rank"] = rep.result()["dims"][2]["compat_span_rank"];

    Json tables = Json::array();
    bool pattern = true;
    for (int p = 0; p < a.n; ++p)
        for (int b = 0; b < a.n; ++b) {
            if (p == b)
                continue;
            Json nz = Json::array();
            for (const auto& w : independence_witness(p, b, a.n, a.algebra)) {
                if (w.nonzero)
                    nz.push_back(Json::array({w.l + 1, w.m + 1}));
                pattern = pattern && (w.nonzero == (w.l == p && w.m == b));
            }
            tables.push_back(Json{{"a", p + 1}, {"b", b + 1}, {"nonzero", std::move(nz)}});
        }
    rep.check("witness: z_(l,m) != 0 iff (l,m) = (a,b)", pattern, "exact", 0, pattern);
    rep.result()["witness"] = std::move(tables);
}

struct CfArgs {
    std::string f_path;
    std::string point = "0,0,0,0";
    std::string center = "0,0,0,0";
    double radius = 1.0;
    int order = 32;
    double tol = 1e-8;
};

inline Vec4 parse_vec4(const std::string& text, const std::string& flag) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(parse_rational(item).get_d());
        } catch (const std::invalid_argument& e) {
            throw InputError(flag, e.what());
        }
    }
    if (v.size() != 4)
        throw InputError(flag, "expected four comma-separated components");
    return {v[0], v[1], v[2], v[3]};
}

inline void cmd_cf_integral(Report& rep, const CfArgs& a) {
    const HPoly F = hpoly_from_json(rep.input(a.f_path), a.f_path);
    if (F.algebra() != Algebra::H || F.nvars() != 1)
        throw InputError(a.f_path, "the Cauchy-Fueter integral needs a quaternionic function of one variable");
    if (a.order < 1 || a.order > 512)
        throw InputError("--order", "order must be between 1 and 512");
    if (!(a.radius > 0))
        throw InputError("--radius", "radius must be positive");
    const Vec4 q = parse_vec4(a.point, "--point");
    const Vec4 c = parse_vec4(a.center, "--center");
    double r2 = 0;
    for (int i = 0; i < 4; ++i)
        r2 += (q[static_cast<std::size_t>(i)] - c[static_cast<std::size_t>(i)]) * (q[static_cast<std::size_t>(i)] - c[static_cast<std::size_t>(i)]);
    const double dist = std::sqrt(r2);
    if (std::abs(dist - a.radius) < 1e-12)
        throw InputError("--point", "point lies on the sphere");
    const bool regular = fueter_dbar(F, 0).is_zero();
    rep.check("F regular", regular, "exact", 0, regular);

    HFloat q0(Algebra::H);
    for (int i = 0; i < 4; ++i)
        q0[i] = q[static_cast<std::size_t>(i)];
    const HFloat value = cauchy_fueter_integral(as_function(F), sphere_rule(c, a.radius, a.order), q0);
    const bool inside = dist < a.radius;
    const HFloat want = inside ? F.evaluate(std::vector<double>(q.begin(), q.end())) : HFloat(Algebra::H);
    const double err = max_abs(value - want);
    rep.check(inside ? "integral = F(q0)" : "integral = 0 outside", err <= a.tol, "float", a.tol, err);
    rep.result()["inside"] = inside;
    rep.result()["order"] = a.order;
    rep.result()["value"] = detail::hnum_json(value);
    rep.result()["expected"] = detail::hnum_json(want);
}

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = 7;
};

inline void cmd_verify_identities(Report& rep, const VerifyArgs& a) {
    std::vector<CheckResult> results;
    try {
        results = run_suite(a.suite, a.seed);
    } catch (const std::invalid_argument& e) {
        throw InputError("--suite", e.what());
    }
    for (const auto& r : results) {
        rep.check(r.name, r.passed(), r.backend, r.tolerance,
                  Json{{"cases", r.cases}, {"failures", r.failures}, {"max_error", r.max_error}});
    }
    rep.result()["suite"] = a.suite;
    rep.result()["seed"] = a.seed;
    Json notes = Json::object();
    for (const auto& r : results)
        notes[r.name] = r.note;
    rep.result()["corpora"] = std::move(notes);
}

/// Entry point. args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hypercomplex function theory toolkit: CRF checks, extensions, syzygies and integrals"};
    app.name("fueter-cli");
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    bool timing = false;
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
    app.add_flag("--timing", timing, "Add wall-clock time to the report (reports are then no longer byte-identical)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify-identities", "Run seeded identity suites");
    verify->add_option("--suite", va.suite, "dq-closure, seven-form, laplacian, compat, restricted-forms, tangential-dbar, transform or all")
        ->capture_default_str();
    verify->add_option("--seed", va.seed, "Corpus seed")->capture_default_str();

    CheckArgs ca;
    auto* check = app.add_subcommand("check", "CRF and admissibility of boundary data");
    check->add_option("f", ca.f_path, "Boundary function (HPoly JSON, H, n=2)")->required();
    check->add_option("surface", ca.surface_path, "Surface JSON")->required();
    check->add_option("--samples", ca.samples_path, "Sample points JSON (default: random samples)");
    check->add_flag("--admissible", ca.admissible, "Also test the eight derived functions");
    check->add_option("--tol", ca.tol, "Tolerance for float samples")->capture_default_str();
    check->add_option("--seed", ca.seed, "Sampling seed")->capture_default_str();
    check->add_option("--count", ca.count, "Number of random samples")->capture_default_str()->check(CLI::Range(1, 10000));

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Solve dbar u = g");
    solve->add_option("g", sa.g_path, "System JSON: {\"g\": [HPoly, ...]}")->required();
    solve->add_option("--degree", sa.degree, "Degree budget for the data (default: deg g)");

    ExtendArgs ea;
    auto* extend = app.add_subcommand("extend", "Extension with dbar F in (rho^m)");
    extend->add_option("f", ea.f_path, "Boundary function")->required();
    extend->add_option("surface", ea.surface_path, "Affine surface")->required();
    extend->add_option("--order", ea.order, "Order m")->capture_default_str();
    extend->add_option("--degree", ea.degree, "Largest total degree of F searched (default: deg f + 2)");

    ExtendArgs ja;
    auto* jump = app.add_subcommand("jump", "Polynomial jump decomposition");
    jump->add_option("f", ja.f_path, "Boundary function")->required();
    jump->add_option("surface", ja.surface_path, "Affine surface")->required();
    jump->add_option("--degree", ja.degree, "Largest total degree searched (default: deg f + 2)");

    SyzygyArgs ya;
    std::string alg = "O";
    auto* syz = app.add_subcommand("syzygy", "Graded syzygy dimensions and witness tables");
    syz->add_option("--algebra", alg, "H or O")->check(CLI::IsMember({"H", "O"}))->capture_default_str();
    syz->add_option("--n", ya.n, "Number of variables")->capture_default_str();
    syz->add_option("--degree", ya.degree, "Highest degree")->capture_default_str();
    syz->add_option("--backend", ya.backend, "exact or modp")->capture_default_str();
    syz->add_option("--max-entries", ya.max_entries, "Elimination storage cap")->capture_default_str();

    CfArgs fa;
    auto* cf = app.add_subcommand("cf-integral", "Cauchy-Fueter integral over a 3-sphere");
    cf->add_option("f", fa.f_path, "Function (HPoly JSON, H, n=1)")->required();
    cf->add_option("--point", fa.point, "q0 as a,b,c,d")->capture_default_str();
    cf->add_option("--center", fa.center, "Sphere center")->capture_default_str();
    cf->add_option("--radius", fa.radius, "Sphere radius")->capture_default_str();
    cf->add_option("--order", fa.order, "Gauss-Legendre nodes per angle")->capture_default_str();
    cf->add_option("--tol", fa.tol, "Tolerance")->capture_default_str();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    ya.algebra = parse_algebra(alg);
    CLI::App* sub = app.get_subcommands().front();
    Report rep(sub->get_name(), args);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (sub == verify)
            cmd_verify_identities(rep, va);
        else if (sub == check)
            cmd_check(rep, ca);
        else if (sub == solve)
            cmd_solve(rep, sa);
        else if (sub == extend)
            cmd_extend(rep, ea);
        else if (sub == jump)
            cmd_jump(rep, ja);
        else if (sub == syz)
            cmd_syzygy(rep, ya);
        else
            cmd_cf_integral(rep, fa);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const ResourceLimit& e) {
        err << "resource cap: " << e.what() << "\n";
        return kResourceCap;
    } catch (const ResourceCapExceeded& e) {
        err << "resource cap: " << e.what() << "\n";
        return kResourceCap;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::out_of_range& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    }
    if (timing)
        rep.set_timing(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    out << rep.render(format);
    return rep.failed() ? kFail : kPass;
}

}  // namespace fueter::cli
