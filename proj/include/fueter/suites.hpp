#pragma once

// Seeded identity suites shared by the command line and the acceptance
// binary.  Every result records its case count, worst error, tolerance
// and arithmetic backend.

#include "fueter/forms.hpp"
#include "fueter/hypersurface.hpp"
#include "fueter/random.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace fueter {

struct CheckResult {
    std::string name;
    std::string backend;  // "exact" or "float"
    double tolerance = 0;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double max_error = 0;
    std::string note;

    bool passed() const { return cases > 0 && failures == 0; }
    void record(bool ok, double err = 0) {
        ++cases;
        if (!ok)
            ++failures;
        if (err > max_error)
            max_error = err;
    }
};

namespace surfaces {

inline HPoly xc(int h, int a) { return HPoly::coordinate(Algebra::H, 2, h, a); }
inline HPoly cst(const Rational& r) { return HPoly::constant(Algebra::H, 2, r); }

inline Hypersurface y3_plane() { return Hypersurface(xc(1, 3)); }
inline Hypersurface oblique_plane() { return Hypersurface(xc(0, 0) + xc(1, 1) * Rational(2) - cst(1)); }
inline Hypersurface skew_plane() { return Hypersurface(xc(0, 1) - xc(1, 2) + xc(0, 3) * Rational(3) - cst(2)); }
inline Hypersurface unit_sphere() {
    HPoly r = cst(-1);
    for (int h = 0; h < 2; ++h)
        for (int a = 0; a < 4; ++a)
            r += xc(h, a) * xc(h, a);
    return Hypersurface(r);
}

/// The fixed counterexample on {y3 = 0}: x1 y0 (-j) + x0 y0 k.
inline HPoly counterexample() {
    return xc(0, 1) * xc(1, 0) * HExact::unit(Algebra::H, 2, -1) + xc(0, 0) * xc(1, 0) * HExact::unit(Algebra::H, 3);
}

}  // namespace surfaces

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"dq-closure", "seven-form", "laplacian", "compat",
                                                "restricted-forms", "tangential-dbar", "transform"};
    return names;
}

/// d(Dq F) = F_qbar dx in one quaternionic variable.
inline CheckResult suite_dq_closure(std::uint64_t seed, int count = 50) {
    CheckResult r{"dq-closure", "exact", 0, 0, 0, 0, "random H polynomials, n=1, degree <= 4"};
    CorpusRng rng(seed ^ 0x11);
    for (int t = 0; t < count; ++t)
        r.record(identity_lu1(rng.hpoly(Algebra::H, 1, 4, 5)).holds());
    return r;
}

/// The 7-form identity for dF in two quaternionic variables.
inline CheckResult suite_seven_form(std::uint64_t seed, int count = 20) {
    CheckResult r{"seven-form", "exact", 0, 0, 0, 0, "random H polynomials, n=2, degree <= 3"};
    CorpusRng rng(seed ^ 0x22);
    for (int t = 0; t < count; ++t)
        r.record(identity_luB(rng.hpoly(Algebra::H, 2, 3, 4)).holds());
    return r;
}

/// Lap = d dbar = dbar d on random polynomials of both algebras, plus
/// Lap q^3 = -4(2q + conj q) over H.
inline CheckResult suite_laplacian(std::uint64_t seed, int count = 100) {
    CheckResult r{"laplacian", "exact", 0, 0, 0, 0, "random polynomials, n=1, degree <= 6, both algebras; Lap q^3"};
    CorpusRng rng(seed ^ 0x33);
    for (Algebra a : {Algebra::H, Algebra::O}) {
        for (int t = 0; t < count; ++t) {
            const HPoly p = rng.hpoly(a, 1, 6, 6);
            const HPoly lap = laplacian(p, 0);
            r.record(fueter_d(fueter_dbar(p, 0), 0) == lap && fueter_dbar(fueter_d(p, 0), 0) == lap);
        }
    }
    const HPoly q = HPoly::variable(Algebra::H, 1, 0);
    r.record(laplacian(q * q * q, 0) == (q * Rational(2) + q.conj()) * Rational(-4));
    return r;
}

/// Pbar(dbar u) = 0 on random polynomials of both algebras, n = 2.
inline CheckResult suite_compat(std::uint64_t seed, int count = 100) {
    CheckResult r{"compat", "exact", 0, 0, 0, 0, "random polynomials, n=2, degree <= 5, both algebras"};
    CorpusRng rng(seed ^ 0x44);
    for (Algebra a : {Algebra::H, Algebra::O})
        for (int t = 0; t < count; ++t)
            r.record(is_zero(compat_Pbar(dbar_system(rng.hpoly(a, 2, 5, 6)))));
    return r;
}

namespace detail {

inline std::vector<Point<Rational>> suite_points(const Hypersurface& S, std::size_t count, CorpusRng& rng) {
    return S.is_affine() ? sample_affine(S, count, rng) : sample_sphere(Point<Rational>(8, Rational(0)), 1, count, rng);
}

}  // namespace detail

/// (conj Dq_1 ^ dy)|_S = -conj(nu_1) omega and (dx ^ conj Dq_2)|_S =
/// -conj(nu_2) omega on oriented tangent frames.
inline CheckResult suite_restricted_forms(std::uint64_t seed, int points = 20, double tol = 1e-10) {
    CheckResult r{"restricted-forms", "float", tol, 0, 0, 0, "planes {y3=0}, {x0+2y1=1}, {x1-y2+3x3=2} and the unit sphere"};
    const Form A = wedge(Dqbar_form(2, 0), dx_form(2, 1));
    const Form B = wedge(dx_form(2, 0), Dqbar_form(2, 1));
    CorpusRng rng(seed ^ 0x55);
    for (const auto& S : {surfaces::y3_plane(), surfaces::oblique_plane(), surfaces::skew_plane(), surfaces::unit_sphere()})
        for (const auto& p : detail::suite_points(S, static_cast<std::size_t>(points), rng)) {
            const auto pd = to_double_point(p);
            const Frame fr = tangent_frame(S, p);
            const double om = volume_form(S, p, fr);
            const auto nu = normal(S, p);
            const double e = std::max(max_abs(pullback_at(A, fr, pd) + nu[0].conj() * om),
                                      max_abs(pullback_at(B, fr, pd) + nu[1].conj() * om));
            r.record(e <= tol, e);
        }
    return r;
}

/// Dq_h ^ d_(q_h) f = -f_(qbar_h) dx_h with the derived functions frozen at
/// rational points of affine hypersurfaces.
inline CheckResult suite_tangential_dbar(std::uint64_t seed, int points = 20) {
    CheckResult r{"tangential-dbar", "exact", 0, 0, 0, 0, "random f of degree <= 3 on three affine planes"};
    CorpusRng rng(seed ^ 0x66);
    for (const auto& S : {surfaces::y3_plane(), surfaces::oblique_plane(), surfaces::skew_plane()})
        for (const auto& p : sample_affine(S, static_cast<std::size_t>(points), rng)) {
            const HPoly f = rng.hpoly(Algebra::H, 2, 3, 5);
            const auto t = derived_functions(f, S, p);
            const auto b = dbar_b(f, S, p);
            bool ok = true;
            for (int h = 0; h < 2; ++h) {
                Form d(Algebra::H, 2, 1);
                for (int a = 0; a < 4; ++a)
                    d = d + Form::monomial(Algebra::H, 2, {static_cast<std::uint8_t>(4 * h + a)},
                                           t.derived[static_cast<std::size_t>(4 * h + a)]);
                const Form lhs = wedge(Dq_form(2, h), d);
                const Form rhs = dx_form(2, h).right_multiply(HPoly::constant(Algebra::H, 2, b[static_cast<std::size_t>(h)]));
                ok = ok && lhs == rhs && b[static_cast<std::size_t>(h)] == -t.fqbar[static_cast<std::size_t>(h)];
            }
            r.record(ok);
        }
    return r;
}

/// (z^3)# = q^3 at random points, and the central-difference Laplacian of
/// (1/z)# against -4 conj(q)/|q|^4.
inline std::vector<CheckResult> suite_transform(std::uint64_t seed, int points = 50) {
    CheckResult cube{"transform-cube", "float", 1e-12, 0, 0, 0, "|(z^3)# - q^3| at random points of [-2,2]^4"};
    CheckResult inv{"transform-laplacian", "float", 1e-5, 0, 0, 0, "relative error, central differences with step 1e-4"};
    CorpusRng rng(seed ^ 0x77);
    const auto cu = [](double a, double b) { return std::real(std::pow(std::complex<double>(a, b), 3)); };
    const auto cv = [](double a, double b) { return std::imag(std::pow(std::complex<double>(a, b), 3)); };
    for (int t = 0; t < points; ++t) {
        HFloat q(Algebra::H);
        for (int i = 0; i < 4; ++i)
            q[i] = rng.uniform_real(-2, 2);
        const double e = max_abs(fueter_transform(cu, cv, q) - q * q * q);
        cube.record(e <= cube.tolerance, e);
    }
    const auto iu = [](double a, double b) { return a / (a * a + b * b); };
    const auto iv = [](double a, double b) { return -b / (a * a + b * b); };
    const double h = 1e-4;
    for (int t = 0; t < 10; ++t) {
        HFloat q(Algebra::H);
        for (int i = 0; i < 4; ++i)
            q[i] = rng.uniform_real(-1, 1);
        if (q.norm_sq() < 0.09 || q[1] * q[1] + q[2] * q[2] + q[3] * q[3] < 0.04) {
            --t;
            continue;
        }
        HFloat lap(Algebra::H);
        const HFloat center = fueter_transform(iu, iv, q);
        for (int k = 0; k < 4; ++k) {
            HFloat qp = q, qm = q;
            qp[k] += h;
            qm[k] -= h;
            lap += (fueter_transform(iu, iv, qp) + fueter_transform(iu, iv, qm) - center * 2.0) / (h * h);
        }
        const double n2 = q.norm_sq();
        const HFloat want = q.conj() * (-4.0 / (n2 * n2));
        const double e = max_abs(lap - want) / max_abs(want);
        inv.record(e <= inv.tolerance, e);
    }
    return {cube, inv};
}

/// Runs one named suite; throws std::invalid_argument for unknown names.
inline std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed) {
    if (name == "dq-closure")
        return {suite_dq_closure(seed)};
    if (name == "seven-form")
        return {suite_seven_form(seed)};
    if (name == "laplacian")
        return {suite_laplacian(seed)};
    if (name == "compat")
        return {suite_compat(seed)};
    if (name == "restricted-forms")
        return {suite_restricted_forms(seed)};
    if (name == "tangential-dbar")
        return {suite_tangential_dbar(seed)};
    if (name == "transform")
        return suite_transform(seed);
    if (name == "all") {
        std::vector<CheckResult> out;
        for (const auto& n : suite_names())
            for (auto& r : run_suite(n, seed))
                out.push_back(std::move(r));
        return out;
    }
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace fueter
