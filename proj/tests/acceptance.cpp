// Acceptance run: one line per criterion, nonzero exit if any fails.

#include "fueter/crfsolve.hpp"
#include "fueter/integrate.hpp"
#include "fueter/suites.hpp"
#include "fueter/syzygy.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace fueter;

namespace {

constexpr Algebra H = Algebra::H;
constexpr Algebra O = Algebra::O;

struct Outcome {
    bool pass;
    std::string detail;
};

HPoly xc(int h, int a) { return HPoly::coordinate(H, 2, h, a); }

Outcome syzygy_dimensions() {
    std::ostringstream os;
    bool ok = true;
    std::vector<std::size_t> dims;
    for (int k = 0; k <= 2; ++k)
        dims.push_back(syzygy_dim(k, 2, O).dim);
    ok = ok && dims == std::vector<std::size_t>{0, 0, 16};
    const OperatorMatrix D = build_dbar_matrix(2, O);
    const auto rows = all_compat_rows(2, O);
    bool syz = rows.size() == 16;
    for (const auto& v : rows)
        syz = syz && verify_syzygy(v, D);
    // rank of the 16 rows themselves: independent iff 16, spanning iff = dim
    const std::size_t rank = compat_span_rank(2, 2, O);
    ok = ok && syz && rank == 16 && rank == dims[2];
    os << "dims(0,1,2)=(" << dims[0] << "," << dims[1] << "," << dims[2] << "), 16 rows are syzygies: " << (syz ? "yes" : "no")
       << ", rank " << rank;
    return {ok, os.str()};
}

Outcome witness() {
    int pairs = 0;
    bool ok = true;
    for (int n : {2, 3})
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (a == b)
                    continue;
                for (const auto& w : independence_witness(a, b, n, O))
                    ok = ok && (w.nonzero == (w.l == a && w.m == b));
                ++pairs;
            }
    return {ok, std::to_string(pairs) + " (a,b) pairs at n=2,3; z_(l,m) != 0 exactly at (a,b)"};
}

Outcome golden_values() {
    bool ok = true;
    std::ostringstream os;
    // Lap q1^3 = -4(2 q1 + conj q1)
    for (int n : {1, 2}) {
        const HPoly q = HPoly::variable(H, n, 0);
        ok = ok && laplacian(q * q * q, 0) == (q * Rational(2) + q.conj()) * Rational(-4);
    }
    os << "Lap q1^3 " << (ok ? "ok" : "wrong");

    const Hypersurface S = surfaces::y3_plane();
    const HPoly f = surfaces::counterexample();
    const AffineAdmissibility aff = admissibility_affine(f, S);
    const HPoly perp = xc(0, 0) * Rational(-1) + xc(0, 1) * HExact::unit(H, 1);
    const bool sym = aff.crf && !aff.admissible() && aff.derived_ambient_dbar[7][0] == HPoly::constant(H, 2, Rational(-2)) &&
                     aff.derived_fqbar_on_S[7][0] == HPoly::constant(H, 2, Rational(-2)) &&
                     restrict_to(affine_derived_functions(f, S).scaled_perp, S) == perp;
    CorpusRng rng(2024);
    const auto pts = sample_affine(S, 20, rng);
    const auto rep = is_admissible(f, S, pts);
    bool pw = rep.crf.crf && !rep.admissible() && rep.derived[7].witness &&
              rep.derived[7].witness->value == HExact::real(H, Rational(-2));
    for (const auto& p : pts)
        pw = pw && f_perp(f, S, p) == perp.evaluate(p);
    ok = ok && sym && pw;
    os << "; counterexample CRF=" << (aff.crf ? "true" : "false") << ", admissible=" << (aff.admissible() ? "true" : "false")
       << ", d f_(y3)/d qbar1 = -2: " << (sym && pw ? "yes" : "no") << ", f_perp = -x0 + x1 i on " << pts.size() << " points";
    return {ok, os.str()};
}

Outcome cauchy_fueter() {
    const auto t0 = std::chrono::steady_clock::now();
    const SphereRule rule = sphere_rule({0, 0, 0, 0}, 1.0);
    auto hq = [](double a, double b, double c, double d) {
        HFloat q(H);
        q[0] = a;
        q[1] = b;
        q[2] = c;
        q[3] = d;
        return q;
    };
    double e_const = 0, e_reg = 0, e_out = 0;
    const HFunction one = [](const Vec4&) { return HFloat::real(H, 1.0); };
    CorpusRng rng(77);
    for (int i = 0; i < 10; ++i) {
        const HFloat q0 = hq(rng.uniform_real(-0.25, 0.25), rng.uniform_real(-0.25, 0.25), rng.uniform_real(-0.25, 0.25), rng.uniform_real(-0.25, 0.25));
        e_const = std::max(e_const, max_abs(cauchy_fueter_integral(one, rule, q0) - HFloat::real(H, 1.0)));
    }
    // regular degree-1 F = c0 + sum_a zeta_a c_a
    HPoly F = HPoly::constant(H, 1, rng.hnumber(H, 3, 2));
    for (int a = 1; a < 4; ++a)
        F += (HPoly::coordinate(H, 1, 0, a) - HExact::unit(H, a) * HPoly::coordinate(H, 1, 0, 0)) * rng.hnumber(H, 3, 2);
    const bool regular = fueter_dbar(F, 0).is_zero();
    int interior = 0;
    for (int i = 0; i < 12; ++i) {
        const HFloat q0 = hq(rng.uniform_real(-0.25, 0.25), rng.uniform_real(-0.25, 0.25), rng.uniform_real(-0.25, 0.25), rng.uniform_real(-0.25, 0.25));
        const HFloat want = F.evaluate(std::vector<double>{q0[0], q0[1], q0[2], q0[3]});
        e_reg = std::max(e_reg, max_abs(cauchy_fueter_integral(as_function(F), rule, q0) - want));
        ++interior;
    }
    for (const HFloat& q0 : {hq(2, 0, 0, 0), hq(0, -1.5, 1, 0.5), hq(1.2, 1.0, 0, -0.4)}) {
        e_out = std::max(e_out, max_abs(cauchy_fueter_integral(one, rule, q0)));
        e_out = std::max(e_out, max_abs(cauchy_fueter_integral(as_function(F), rule, q0)));
    }
    // order doubling on a regular non-polynomial function
    const HFloat pole = hq(1.6, 0.3, 0, -0.2);
    const HFunction K = [pole](const Vec4& x) {
        HFloat d(H);
        for (int i = 0; i < 4; ++i)
            d[i] = x[static_cast<std::size_t>(i)] - pole[i];
        const double r2 = d.norm_sq();
        return d.conj() / (r2 * r2);
    };
    const HFloat q0 = hq(0.3, -0.2, 0.1, 0.25);
    const HFloat want = K({q0[0], q0[1], q0[2], q0[3]});
    bool decreasing = true;
    double prev = 1e300;
    std::ostringstream errs;
    for (int order : {6, 12, 24, 48}) {
        const double e = max_abs(cauchy_fueter_integral(K, sphere_rule({0, 0, 0, 0}, 1.0, order), q0) - want);
        decreasing = decreasing && e < prev;
        prev = e;
        errs << (order == 6 ? "" : ",") << e;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = regular && e_const <= 1e-8 && e_reg <= 1e-8 && interior >= 10 && e_out <= 1e-8 && decreasing && secs < 10;
    std::ostringstream os;
    os << "F=1 err " << e_const << ", degree-1 regular err " << e_reg << " at " << interior << " points, exterior " << e_out
       << ", doubling errors (" << errs.str() << "), " << secs << " s";
    return {ok, os.str()};
}

Outcome identity_suites() {
    const std::uint64_t seed = 7;
    const CheckResult r[] = {suite_dq_closure(seed, 50), suite_seven_form(seed, 20), suite_laplacian(seed, 100),
                             suite_compat(seed, 100)};
    bool ok = true;
    std::ostringstream os;
    for (const auto& c : r) {
        ok = ok && c.passed();
        os << (&c == r ? "" : ", ") << c.name << " " << (c.cases - c.failures) << "/" << c.cases;
    }
    return {ok, os.str()};
}

Outcome solver_round_trip() {
    CorpusRng rng(606);
    int good = 0, total = 0;
    for (Algebra a : {H, O})
        for (int t = 0; t < 50; ++t) {
            const HPoly u = rng.hpoly(a, 2, 4, 5);
            const HPolyVector g = dbar_system(u);
            ++total;
            try {
                if (dbar_system(solve_crf(g)) == g)
                    ++good;
            } catch (const std::exception&) {
            }
        }
    // incompatible data: g_1 = x_(2,0)^2, g_2 = 0, and random perturbations
    int rejected = 0, attempts = 0;
    auto expect_rejection = [&](const HPolyVector& g) {
        ++attempts;
        try {
            solve_crf(g);
        } catch (const CompatibilityViolation& e) {
            bool nonzero = !e.residuals().empty();
            for (const auto& r : e.residuals())
                nonzero = nonzero && !r.residual.is_zero();
            if (nonzero && !is_zero(compat_Pbar(g)))
                ++rejected;
        }
    };
    for (Algebra a : {H, O}) {
        const HPoly x20 = HPoly::coordinate(a, 2, 1, 0);
        expect_rejection({x20 * x20, HPoly(a, 2)});
        for (int t = 0; t < 5; ++t) {
            HPolyVector g = dbar_system(rng.hpoly(a, 2, 3, 4));
            g[0] += x20 * x20 * Rational(t + 1);
            expect_rejection(g);
        }
    }
    std::ostringstream os;
    os << good << "/" << total << " round trips exact, " << rejected << "/" << attempts << " incompatible systems rejected";
    return {good == total && rejected == attempts, os.str()};
}

HPoly random_regular(CorpusRng& rng, int deg) {
    static const auto basis = regular_kernel_basis(H, 2, deg);
    HPoly F(H, 2);
    for (int t = 0; t < 5; ++t)
        F += basis[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(basis.size()) - 1))] * rng.hnumber(H, 2, 2);
    return F;
}

Outcome extension_consistency() {
    const std::vector<Hypersurface> planes{surfaces::y3_plane(), surfaces::oblique_plane(), surfaces::skew_plane()};
    CorpusRng rng(707);
    struct Case {
        HPoly f;
        const Hypersurface* S;
    };
    std::vector<Case> corpus;
    for (const auto& S : planes)
        for (int t = 0; t < 8; ++t)
            corpus.push_back({random_regular(rng, 3) + S.rho() * rng.hpoly(H, 2, 1, 2) + S.rho() * S.rho() * rng.hpoly(H, 2, 1, 2), &S});
    const Hypersurface& y3 = planes[0];
    const HPoly ce = surfaces::counterexample();
    corpus.push_back({ce, &y3});
    corpus.push_back({ce * Rational(3) + random_regular(rng, 3), &y3});
    corpus.push_back({ce + y3.rho() * rng.hpoly(H, 2, 2, 3), &y3});
    corpus.push_back({xc(0, 1) * xc(1, 0) * xc(1, 0) * HExact::unit(H, 2, -1) + xc(0, 0) * xc(1, 0) * xc(1, 0) * HExact::unit(H, 3), &y3});
    for (const auto& S : planes)
        corpus.push_back({rng.hpoly(H, 2, 2, 4), &S});

    int adm = 0, crf_not_adm = 0, other = 0, agree = 0;
    for (const auto& c : corpus) {
        const AffineAdmissibility a = admissibility_affine(c.f, *c.S);
        if (a.admissible())
            ++adm;
        else if (a.crf)
            ++crf_not_adm;
        else
            ++other;
        bool extended = true;
        try {
            crf_extend(c.f, *c.S, 2);
        } catch (const NotAdmissibleOrBudget&) {
            extended = false;
        }
        if (extended == a.admissible())
            ++agree;
    }
    std::ostringstream os;
    os << adm << " admissible, " << crf_not_adm << " CRF but not admissible, " << other << " not CRF; m=2 extension agrees on "
       << agree << "/" << corpus.size() << " (budget deg f + 2)";
    return {adm >= 20 && crf_not_adm + other >= 5 && agree == static_cast<int>(corpus.size()), os.str()};
}

Outcome forms_and_transform() {
    const std::uint64_t seed = 7;
    const CheckResult lu = suite_restricted_forms(seed, 20, 1e-10);
    const CheckResult td = suite_tangential_dbar(seed, 20);
    const auto tr = suite_transform(seed, 50);
    const bool ok = lu.passed() && td.passed() && tr[0].passed() && tr[1].passed();
    std::ostringstream os;
    os << "restricted 3-forms " << (lu.cases - lu.failures) << "/" << lu.cases << " (max " << lu.max_error << "), tangential dbar "
       << (td.cases - td.failures) << "/" << td.cases << " exact, (z^3)# max " << tr[0].max_error << ", Lap (1/z)# rel "
       << tr[1].max_error;
    return {ok, os.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 syzygy dimensions", syzygy_dimensions},
        {"2 independence witness", witness},
        {"3 golden values", golden_values},
        {"4 Cauchy-Fueter formula", cauchy_fueter},
        {"5 identity suites", identity_suites},
        {"6 solver round trip", solver_round_trip},
        {"7 extension vs admissibility", extension_consistency},
        {"8 restricted forms and transform", forms_and_transform},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %-34s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), s);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
