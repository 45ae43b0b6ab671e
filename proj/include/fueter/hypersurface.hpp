#pragma once

// Real hypersurfaces S = {rho = 0} in H^2 and the tangential calculus of
// boundary functions: f_perp, the derived functions f_(x_a), f_(y_a),
// f_(qbar_h), the CRF and admissibility tests, the complex rank test, and
// the Levi form on the tangent right H-line.
//
// Everything is computed from the gradient g = grad rho, never from the
// unit normal, so that rational points on any S give exact results:
//   <g, DbarF> = sum_h conj(G_h) dF/dqbar_h   (G_h = quaternion of block h of g)
//   f_(x_b)    = d_b F - g_b |g|^-2 <g, DbarF>
//   |g| f_perp = d_g F - <g, DbarF>

#include "fueter/forms.hpp"
#include "fueter/random.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace fueter {

class SingularSurface : public std::domain_error {
  public:
    SingularSurface() : std::domain_error("grad rho vanishes at the sample point") {}
};

class OffSurface : public std::domain_error {
  public:
    OffSurface() : std::domain_error("sample point does not lie on the hypersurface") {}
};

template <class T>
using Point = std::vector<T>;

template <class T>
T scalar_from(const Rational& r) {
    if constexpr (std::is_same_v<T, Rational>)
        return r;
    else
        return r.get_d();
}

template <class T>
double scalar_to_double(const T& v) {
    if constexpr (std::is_same_v<T, Rational>)
        return v.get_d();
    else
        return v;
}

template <class T>
HNumber<T> quaternion_block(const std::array<T, 8>& v, int h) {
    HNumber<T> q(Algebra::H);
    for (int a = 0; a < 4; ++a)
        q[a] = v[static_cast<std::size_t>(4 * h + a)];
    return q;
}

class Hypersurface {
  public:
    explicit Hypersurface(HPoly rho) : rho_(std::move(rho)) {
        if (rho_.algebra() != Algebra::H || rho_.nvars() != 2)
            throw std::invalid_argument("hypersurfaces live in H^2");
        if (!rho_.is_real())
            throw std::invalid_argument("defining function must be real valued");
        if (rho_.degree() < 1)
            throw std::invalid_argument("defining function must be nonconstant");
        for (int k = 0; k < 8; ++k)
            grad_.push_back(partial_flat(rho_, k));
        for (int j = 0; j < 8; ++j)
            for (int k = 0; k < 8; ++k)
                hess_.push_back(partial_flat(grad_[static_cast<std::size_t>(j)], k));
    }

    const HPoly& rho() const { return rho_; }
    const HPoly& gradient(int k) const { return grad_[static_cast<std::size_t>(k)]; }
    const HPoly& hessian(int j, int k) const { return hess_[static_cast<std::size_t>(8 * j + k)]; }
    bool is_affine() const { return rho_.degree() == 1; }

    /// rho = sum c_k x_k + c_0 for affine S.
    std::array<Rational, 8> linear_part() const {
        require_affine();
        std::array<Rational, 8> c;
        for (int k = 0; k < 8; ++k)
            c[static_cast<std::size_t>(k)] = grad_[static_cast<std::size_t>(k)].coefficient(Exponent(8, 0))[0];
        return c;
    }
    Rational constant_term() const { return rho_.coefficient(Exponent(8, 0))[0]; }

    /// First coordinate with a nonzero linear coefficient (affine S).
    int chart_coordinate() const {
        const auto c = linear_part();
        for (int k = 0; k < 8; ++k)
            if (!is_zero(c[static_cast<std::size_t>(k)]))
                return k;
        throw std::logic_error("affine surface without linear part");
    }

    /// L with S = {x_k = L}, k the chart coordinate, L free of x_k.
    HPoly chart_solution() const {
        const int k = chart_coordinate();
        const Rational ck = linear_part()[static_cast<std::size_t>(k)];
        HPoly L = rho_ - HPoly::coordinate(Algebra::H, 2, k / 4, k % 4) * ck;
        return L * Rational(-1 / ck);
    }

    template <class T>
    T value(const Point<T>& p) const {
        return rho_.evaluate(std::span<const T>(p))[0];
    }

    template <class T>
    std::array<T, 8> gradient_at(const Point<T>& p) const {
        std::array<T, 8> g;
        for (int k = 0; k < 8; ++k)
            g[static_cast<std::size_t>(k)] = grad_[static_cast<std::size_t>(k)].evaluate(std::span<const T>(p))[0];
        return g;
    }

    template <class T>
    std::array<std::array<T, 8>, 8> hessian_at(const Point<T>& p) const {
        std::array<std::array<T, 8>, 8> H;
        for (int j = 0; j < 8; ++j)
            for (int k = 0; k < 8; ++k)
                H[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = hessian(j, k).evaluate(std::span<const T>(p))[0];
        return H;
    }

    /// Validates p as a sample: on S (exactly, or |rho| <= tol for floats)
    /// with nonvanishing gradient.
    template <class T>
    void require_sample(const Point<T>& p, double tol = 1e-10) const {
        if (p.size() != 8)
            throw std::invalid_argument("sample points live in R^8");
        const T v = value(p);
        if constexpr (std::is_same_v<T, Rational>) {
            if (!is_zero(v))
                throw OffSurface();
        } else if (!(std::abs(v) <= tol)) {
            throw OffSurface();
        }
        const auto g = gradient_at(p);
        T n2(0);
        for (const auto& x : g)
            n2 += x * x;
        if (is_zero(n2))
            throw SingularSurface();
    }

  private:
    void require_affine() const {
        if (!is_affine())
            throw std::invalid_argument("operation requires an affine hypersurface");
    }

    HPoly rho_;
    std::vector<HPoly> grad_;
    std::vector<HPoly> hess_;
};

/// A boundary function given by a polynomial extension, with its first
/// and second partials cached.
class BoundaryFunction {
  public:
    explicit BoundaryFunction(HPoly f) : f_(std::move(f)) {
        if (f_.algebra() != Algebra::H || f_.nvars() != 2)
            throw std::invalid_argument("boundary functions are quaternionic in two variables");
        for (int k = 0; k < 8; ++k)
            d1_.push_back(partial_flat(f_, k));
        for (int j = 0; j < 8; ++j)
            for (int k = 0; k < 8; ++k)
                d2_.push_back(partial_flat(d1_[static_cast<std::size_t>(j)], k));
    }

    const HPoly& poly() const { return f_; }
    const HPoly& d1(int k) const { return d1_[static_cast<std::size_t>(k)]; }
    const HPoly& d2(int j, int k) const { return d2_[static_cast<std::size_t>(8 * j + k)]; }

    template <class T>
    std::array<HNumber<T>, 8> gradient_at(const Point<T>& p) const {
        std::array<HNumber<T>, 8> d;
        for (int k = 0; k < 8; ++k)
            d[static_cast<std::size_t>(k)] = d1(k).evaluate(std::span<const T>(p));
        return d;
    }

  private:
    HPoly f_;
    std::vector<HPoly> d1_;
    std::vector<HPoly> d2_;
};

template <class T>
struct TangentialData {
    std::array<T, 8> gradient;
    T grad_norm_sq;
    HNumber<T> pairing;                // <g, DbarF>
    HNumber<T> scaled_perp;            // |g| f_perp
    std::array<HNumber<T>, 8> derived;  // f_(x_0..3), f_(y_0..3)
    std::array<HNumber<T>, 2> fqbar;    // f_(qbar_1), f_(qbar_2)
};

/// Tangential data from the first partials dF of an extension and g.
template <class T>
TangentialData<T> tangential_from_partials(const std::array<HNumber<T>, 8>& dF, const std::array<T, 8>& g) {
    TangentialData<T> t;
    t.gradient = g;
    t.grad_norm_sq = T(0);
    for (const auto& x : g)
        t.grad_norm_sq += x * x;
    if (is_zero(t.grad_norm_sq))
        throw SingularSurface();
    t.pairing = HNumber<T>(Algebra::H);
    t.scaled_perp = HNumber<T>(Algebra::H);
    for (int h = 0; h < 2; ++h) {
        HNumber<T> dbar(Algebra::H);
        for (int a = 0; a < 4; ++a)
            dbar += HNumber<T>::unit(Algebra::H, a) * dF[static_cast<std::size_t>(4 * h + a)];
        t.pairing += quaternion_block(g, h).conj() * dbar;
    }
    for (int k = 0; k < 8; ++k)
        t.scaled_perp += dF[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
    t.scaled_perp -= t.pairing;
    for (int b = 0; b < 8; ++b)
        t.derived[static_cast<std::size_t>(b)] =
            dF[static_cast<std::size_t>(b)] - t.pairing * (g[static_cast<std::size_t>(b)] / t.grad_norm_sq);
    for (int h = 0; h < 2; ++h) {
        HNumber<T> s(Algebra::H);
        for (int a = 0; a < 4; ++a)
            s += HNumber<T>::unit(Algebra::H, a) * t.derived[static_cast<std::size_t>(4 * h + a)];
        t.fqbar[static_cast<std::size_t>(h)] = s;
    }
    return t;
}

template <class T>
TangentialData<T> derived_functions(const BoundaryFunction& f, const Hypersurface& S, const Point<T>& p) {
    S.require_sample(p);
    return tangential_from_partials(f.gradient_at(p), S.gradient_at(p));
}

template <class T>
TangentialData<T> derived_functions(const HPoly& f, const Hypersurface& S, const Point<T>& p) {
    return derived_functions(BoundaryFunction(f), S, p);
}

/// Unit normal grad rho / |grad rho| as two quaternions.
template <class T>
std::array<HFloat, 2> normal(const Hypersurface& S, const Point<T>& p) {
    const auto g = S.gradient_at(p);
    double n2 = 0;
    for (const auto& x : g)
        n2 += scalar_to_double(x) * scalar_to_double(x);
    if (n2 == 0)
        throw SingularSurface();
    std::array<HFloat, 2> nu{HFloat(Algebra::H), HFloat(Algebra::H)};
    for (int k = 0; k < 8; ++k)
        nu[static_cast<std::size_t>(k / 4)][k % 4] = scalar_to_double(g[static_cast<std::size_t>(k)]) / std::sqrt(n2);
    return nu;
}

class IrrationalNorm : public std::domain_error {
  public:
    IrrationalNorm() : std::domain_error("|grad rho| is irrational at this rational point; f_perp is not rational") {}
};

/// f_perp = dF/dnu - <nu, DbarF>.  Exact for rational points where
/// |grad rho| is rational.
template <class T>
HNumber<T> f_perp(const HPoly& f, const Hypersurface& S, const Point<T>& p) {
    const TangentialData<T> t = derived_functions(f, S, p);
    if constexpr (std::is_same_v<T, Rational>) {
        const auto r = exact_sqrt(t.grad_norm_sq);
        if (!r)
            throw IrrationalNorm();
        return t.scaled_perp / *r;
    } else {
        return t.scaled_perp / std::sqrt(t.grad_norm_sq);
    }
}

/// (Dq_1|S ^ d_(q1) f, Dq_2|S ^ d_(q2) f) as coefficients of dx|S, dy|S:
/// (-f_(qbar_1), -f_(qbar_2)).
template <class T>
std::array<HNumber<T>, 2> dbar_b(const HPoly& f, const Hypersurface& S, const Point<T>& p) {
    const TangentialData<T> t = derived_functions(f, S, p);
    return {-t.fqbar[0], -t.fqbar[1]};
}

template <class T>
struct Witness {
    std::size_t sample = 0;
    int h = 0;  // 0 for qbar_1, 1 for qbar_2
    HNumber<T> value;
};

template <class T>
struct CrfResult {
    bool crf = true;
    std::optional<Witness<T>> witness;
    double max_residual = 0;
};

namespace detail {

template <class T>
bool negligible(const HNumber<T>& v, double tol, double scale) {
    if constexpr (std::is_same_v<T, Rational>) {
        (void)tol;
        (void)scale;
        return v.is_zero();
    } else {
        return max_abs(v) <= tol * std::max(1.0, scale);
    }
}

template <class T>
double scale_of(const std::array<HNumber<T>, 8>& d) {
    double s = 0;
    for (const auto& x : d)
        for (int i = 0; i < 4; ++i)
            s = std::max(s, std::abs(scalar_to_double(x[i])));
    return s;
}

template <class T>
void record(CrfResult<T>& r, std::size_t sample, const std::array<HNumber<T>, 2>& fqbar, double tol, double scale) {
    for (int h = 0; h < 2; ++h) {
        const auto& v = fqbar[static_cast<std::size_t>(h)];
        double m = 0;
        for (int i = 0; i < 4; ++i)
            m = std::max(m, std::abs(scalar_to_double(v[i])));
        r.max_residual = std::max(r.max_residual, m);
        if (!negligible(v, tol, scale) && r.crf) {
            r.crf = false;
            r.witness = Witness<T>{sample, h, v};
        }
    }
}

}  // namespace detail

/// Tests f_(qbar_1) = f_(qbar_2) = 0 at every sample.  Exact for
/// rational samples; |value| <= tol * max(1, |dF|) for binary64 samples.
template <class T>
CrfResult<T> is_crf(const HPoly& f, const Hypersurface& S, const std::vector<Point<T>>& samples, double tol = 1e-10) {
    if (samples.empty())
        throw std::invalid_argument("no sample points");
    const BoundaryFunction F(f);
    CrfResult<T> r;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        S.require_sample(samples[s]);
        const auto dF = F.gradient_at(samples[s]);
        const auto t = tangential_from_partials(dF, S.gradient_at(samples[s]));
        detail::record(r, s, t.fqbar, tol, detail::scale_of(dF));
    }
    return r;
}

inline const std::array<std::string, 8>& derived_names() {
    static const std::array<std::string, 8> names{"f_(x0)", "f_(x1)", "f_(x2)", "f_(x3)",
                                                  "f_(y0)", "f_(y1)", "f_(y2)", "f_(y3)"};
    return names;
}

template <class T>
struct AdmissibilityReport {
    CrfResult<T> crf;
    std::array<CrfResult<T>, 8> derived;
    bool admissible() const {
        if (!crf.crf)
            return false;
        for (const auto& d : derived)
            if (!d.crf)
                return false;
        return true;
    }
};

/// First partials of the eight derived functions at p, from the second
/// partials of F and the Hessian of rho (product and quotient rules):
/// jet[b][k] = d_k f_(x_b).
template <class T>
std::array<std::array<HNumber<T>, 8>, 8> derived_jets(const BoundaryFunction& F, const Hypersurface& S, const Point<T>& p) {
    const auto g = S.gradient_at(p);
    const auto Hrho = S.hessian_at(p);
    const auto dF = F.gradient_at(p);
    std::array<std::array<HNumber<T>, 8>, 8> d2;
    for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 8; ++k)
            d2[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = F.d2(j, k).evaluate(std::span<const T>(p));
    T n2(0);
    for (const auto& x : g)
        n2 += x * x;
    const auto uH = [](int a) { return HNumber<T>::unit(Algebra::H, a); };
    std::array<HNumber<T>, 2> dbar{HNumber<T>(Algebra::H), HNumber<T>(Algebra::H)};
    for (int h = 0; h < 2; ++h)
        for (int a = 0; a < 4; ++a)
            dbar[static_cast<std::size_t>(h)] += uH(a) * dF[static_cast<std::size_t>(4 * h + a)];
    HNumber<T> pair(Algebra::H);
    for (int h = 0; h < 2; ++h)
        pair += quaternion_block(g, h).conj() * dbar[static_cast<std::size_t>(h)];

    std::array<std::array<HNumber<T>, 8>, 8> jet;
    for (int k = 0; k < 8; ++k) {
        std::array<T, 8> dg;
        T dn2(0);
        for (int j = 0; j < 8; ++j) {
            dg[static_cast<std::size_t>(j)] = Hrho[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            dn2 += T(2) * g[static_cast<std::size_t>(j)] * dg[static_cast<std::size_t>(j)];
        }
        HNumber<T> dpair(Algebra::H);
        for (int h = 0; h < 2; ++h) {
            HNumber<T> ddbar(Algebra::H);
            for (int a = 0; a < 4; ++a)
                ddbar += uH(a) * d2[static_cast<std::size_t>(4 * h + a)][static_cast<std::size_t>(k)];
            dpair += quaternion_block(dg, h).conj() * dbar[static_cast<std::size_t>(h)] +
                     quaternion_block(g, h).conj() * ddbar;
        }
        for (int b = 0; b < 8; ++b) {
            const T gb = g[static_cast<std::size_t>(b)];
            const T dcoef = dg[static_cast<std::size_t>(b)] / n2 - gb * dn2 / (n2 * n2);
            jet[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)] =
                d2[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)] - pair * dcoef - dpair * (gb / n2);
        }
    }
    return jet;
}

/// CRF test of f and of its eight derived functions at the samples.
template <class T>
AdmissibilityReport<T> is_admissible(const HPoly& f, const Hypersurface& S, const std::vector<Point<T>>& samples,
                                     double tol = 1e-10) {
    if (samples.empty())
        throw std::invalid_argument("no sample points");
    const BoundaryFunction F(f);
    AdmissibilityReport<T> rep;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const auto& p = samples[s];
        S.require_sample(p);
        const auto g = S.gradient_at(p);
        const auto dF = F.gradient_at(p);
        detail::record(rep.crf, s, tangential_from_partials(dF, g).fqbar, tol, detail::scale_of(dF));
        const auto jet = derived_jets(F, S, p);
        for (int b = 0; b < 8; ++b) {
            const auto& jb = jet[static_cast<std::size_t>(b)];
            detail::record(rep.derived[static_cast<std::size_t>(b)], s, tangential_from_partials(jb, g).fqbar, tol,
                           detail::scale_of(jb));
        }
    }
    return rep;
}

// Exact treatment of affine S: the derived functions are polynomials and
// vanishing on S is decided by substituting the chart solution.

struct AffineDerived {
    std::array<HPoly, 8> derived;
    std::array<HPoly, 2> fqbar;
    HPoly scaled_perp;
    Rational grad_norm_sq;
};

inline AffineDerived affine_derived_functions(const HPoly& f, const Hypersurface& S) {
    const auto c = S.linear_part();
    AffineDerived out;
    out.grad_norm_sq = 0;
    for (const auto& x : c)
        out.grad_norm_sq += x * x;
    std::array<HExact, 2> G{HExact(Algebra::H), HExact(Algebra::H)};
    for (int k = 0; k < 8; ++k)
        G[static_cast<std::size_t>(k / 4)][k % 4] = c[static_cast<std::size_t>(k)];
    HPoly pair(Algebra::H, 2);
    for (int h = 0; h < 2; ++h)
        pair += G[static_cast<std::size_t>(h)].conj() * fueter_dbar(f, h);
    out.scaled_perp = -pair;
    for (int k = 0; k < 8; ++k)
        out.scaled_perp += partial_flat(f, k) * c[static_cast<std::size_t>(k)];
    for (int b = 0; b < 8; ++b)
        out.derived[static_cast<std::size_t>(b)] = partial_flat(f, b) - pair * (c[static_cast<std::size_t>(b)] / out.grad_norm_sq);
    for (int h = 0; h < 2; ++h) {
        HPoly s(Algebra::H, 2);
        for (int a = 0; a < 4; ++a)
            s += HExact::unit(Algebra::H, a) * out.derived[static_cast<std::size_t>(4 * h + a)];
        out.fqbar[static_cast<std::size_t>(h)] = s;
    }
    return out;
}

/// p restricted to affine S, written in the chart coordinates (free of
/// the chart coordinate).
inline HPoly restrict_to(const HPoly& p, const Hypersurface& S) {
    return substitute(p, S.chart_coordinate(), S.chart_solution());
}

inline bool vanishes_on(const HPoly& p, const Hypersurface& S) { return restrict_to(p, S).is_zero(); }

struct AffineAdmissibility {
    bool crf = false;
    std::array<HPoly, 2> fqbar_on_S;  // restrictions, zero iff CRF
    std::array<bool, 8> derived_crf{};
    std::array<HPoly, 8> derived;
    std::array<std::array<HPoly, 2>, 8> derived_fqbar_on_S;
    std::array<std::array<HPoly, 2>, 8> derived_ambient_dbar;  // d f_(x_b) / d qbar_h of the polynomial
    bool admissible() const {
        return crf && std::all_of(derived_crf.begin(), derived_crf.end(), [](bool b) { return b; });
    }
};

/// Exact CRF and admissibility decision on all of an affine S.
inline AffineAdmissibility admissibility_affine(const HPoly& f, const Hypersurface& S) {
    AffineAdmissibility out;
    const AffineDerived d = affine_derived_functions(f, S);
    out.crf = true;
    for (int h = 0; h < 2; ++h) {
        out.fqbar_on_S[static_cast<std::size_t>(h)] = restrict_to(d.fqbar[static_cast<std::size_t>(h)], S);
        out.crf = out.crf && out.fqbar_on_S[static_cast<std::size_t>(h)].is_zero();
    }
    for (int b = 0; b < 8; ++b) {
        const HPoly& P = d.derived[static_cast<std::size_t>(b)];
        out.derived[static_cast<std::size_t>(b)] = P;
        const AffineDerived dd = affine_derived_functions(P, S);
        bool ok = true;
        for (int h = 0; h < 2; ++h) {
            auto r = restrict_to(dd.fqbar[static_cast<std::size_t>(h)], S);
            ok = ok && r.is_zero();
            out.derived_fqbar_on_S[static_cast<std::size_t>(b)][static_cast<std::size_t>(h)] = std::move(r);
            out.derived_ambient_dbar[static_cast<std::size_t>(b)][static_cast<std::size_t>(h)] = fueter_dbar(P, h);
        }
        out.derived_crf[static_cast<std::size_t>(b)] = ok;
    }
    return out;
}

// Complex rank test.  With F = U + V j, U = F_0 + i F_1, V = F_2 + i F_3,
// z_h = x_{h,0} + i x_{h,1}, w_h = x_{h,2} + i x_{h,3}, the 4x3 matrix has
// rows, for each h,
//   [ U_{zbar_h} - (Vbar)_{wbar_h},  rho_{zbar_h}, -rho_{wbar_h} ]
//   [ (Vbar)_{z_h} + U_{w_h},        rho_{w_h},     rho_{z_h}    ].

template <class T>
struct ComplexOf {
    T re{0}, im{0};
    friend ComplexOf operator+(ComplexOf a, const ComplexOf& b) { return {a.re + b.re, a.im + b.im}; }
    friend ComplexOf operator-(ComplexOf a, const ComplexOf& b) { return {a.re - b.re, a.im - b.im}; }
    friend ComplexOf operator*(const ComplexOf& a, const ComplexOf& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexOf operator/(const ComplexOf& a, const ComplexOf& b) {
        const T d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    bool zero() const { return is_zero(re) && is_zero(im); }
};

template <class T>
using RankMatrix = std::array<std::array<ComplexOf<T>, 3>, 4>;

template <class T>
RankMatrix<T> rank_matrix(const HPoly& f, const Hypersurface& S, const Point<T>& p) {
    S.require_sample(p);
    const BoundaryFunction F(f);
    const auto dF = F.gradient_at(p);
    const auto g = S.gradient_at(p);
    const T half = scalar_from<T>(make_rational(1, 2));
    // complex partials d/dx_k of U and Vbar, and of rho
    auto U = [&](int k) { return ComplexOf<T>{dF[static_cast<std::size_t>(k)][0], dF[static_cast<std::size_t>(k)][1]}; };
    auto Vb = [&](int k) { return ComplexOf<T>{dF[static_cast<std::size_t>(k)][2], -dF[static_cast<std::size_t>(k)][3]}; };
    auto R = [&](int k) { return ComplexOf<T>{g[static_cast<std::size_t>(k)], T(0)}; };
    const ComplexOf<T> I{T(0), T(1)}, H{half, T(0)};
    // d/dzbar = (d0 + i d1)/2, d/dz = (d0 - i d1)/2, likewise w with d2, d3
    auto bar = [&](auto fn, int k0) { return H * (fn(k0) + I * fn(k0 + 1)); };
    auto hol = [&](auto fn, int k0) { return H * (fn(k0) - I * fn(k0 + 1)); };
    RankMatrix<T> M;
    for (int h = 0; h < 2; ++h) {
        const int z = 4 * h, w = 4 * h + 2;
        auto& r1 = M[static_cast<std::size_t>(2 * h)];
        auto& r2 = M[static_cast<std::size_t>(2 * h + 1)];
        r1 = {bar(U, z) - bar(Vb, w), bar(R, z), ComplexOf<T>{} - bar(R, w)};
        r2 = {hol(Vb, z) + hol(U, w), hol(R, w), hol(R, z)};
    }
    return M;
}

template <class T>
int matrix_rank(const RankMatrix<T>& M, double tol = 1e-9) {
    if constexpr (std::is_same_v<T, Rational>) {
        (void)tol;
        auto A = M;
        int rank = 0;
        for (int c = 0; c < 3 && rank < 4; ++c) {
            int piv = -1;
            for (int r = rank; r < 4; ++r)
                if (!A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0)
                continue;
            std::swap(A[static_cast<std::size_t>(piv)], A[static_cast<std::size_t>(rank)]);
            const auto& pr = A[static_cast<std::size_t>(rank)];
            for (int r = rank + 1; r < 4; ++r) {
                const auto f = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / pr[static_cast<std::size_t>(c)];
                for (int k = c; k < 3; ++k)
                    A[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] =
                        A[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] - f * pr[static_cast<std::size_t>(k)];
            }
            ++rank;
        }
        return rank;
    } else {
        Eigen::Matrix<std::complex<double>, 4, 3> A;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 3; ++c)
                A(r, c) = {M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].re,
                           M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].im};
        const Eigen::JacobiSVD<decltype(A)> svd(A);
        const auto& s = svd.singularValues();
        if (s(0) == 0)
            return 0;
        int rank = 0;
        for (int i = 0; i < 3; ++i)
            rank += s(i) > tol * s(0);
        return rank;
    }
}

/// rank < 3 at p: exact over Q(i) for rational p, relative singular value
/// tolerance for binary64 p.
template <class T>
bool rank_condition(const HPoly& f, const Hypersurface& S, const Point<T>& p, double tol = 1e-9) {
    return matrix_rank(rank_matrix(f, S, p), tol) < 3;
}

// Tangent frames and the volume form of S.

/// omega(t_1..t_7) = det[t_1, ..., t_7, nu].
inline double volume_on_frame(const Frame& fr, const Eigen::Matrix<double, 8, 1>& n) {
    Eigen::Matrix<double, 8, 8> M;
    for (int i = 0; i < 7; ++i)
        for (int k = 0; k < 8; ++k)
            M(k, i) = fr[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    M.col(7) = n;
    return M.determinant();
}

/// Orthonormal basis (t_1..t_7) of the tangent space at p with
/// det[t_1, ..., t_7, nu] = +1, i.e. (nu, t_1, ..., t_7) negatively oriented.
template <class T>
Frame tangent_frame(const Hypersurface& S, const Point<T>& p) {
    const auto nu = normal(S, p);
    Eigen::Matrix<double, 8, 1> n;
    for (int k = 0; k < 8; ++k)
        n(k) = nu[static_cast<std::size_t>(k / 4)][k % 4];
    Eigen::Matrix<double, 8, 8> Q = Eigen::HouseholderQR<Eigen::Matrix<double, 8, 1>>(n).householderQ();
    Frame fr(7, std::vector<double>(8));
    for (int i = 0; i < 7; ++i)
        for (int k = 0; k < 8; ++k)
            fr[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = Q(k, i + 1);
    if (volume_on_frame(fr, n) < 0)
        for (auto& x : fr[0])
            x = -x;
    return fr;
}

template <class T>
double volume_form(const Hypersurface& S, const Point<T>& p, const Frame& fr) {
    const auto nu = normal(S, p);
    Eigen::Matrix<double, 8, 1> n;
    for (int k = 0; k < 8; ++k)
        n(k) = nu[static_cast<std::size_t>(k / 4)][k % 4];
    return volume_on_frame(fr, n);
}

// Levi form on the tangent right H-line.

enum class LeviClass { positive_definite, negative_definite, indefinite, degenerate };

inline const char* levi_class_name(LeviClass c) {
    switch (c) {
    case LeviClass::positive_definite:
        return "positive-definite";
    case LeviClass::negative_definite:
        return "negative-definite";
    case LeviClass::indefinite:
        return "indefinite";
    case LeviClass::degenerate:
        break;
    }
    return "degenerate";
}

/// Which component of the complement of S is the domain: rho < 0 or rho > 0.
enum class Side { rho_negative, rho_positive };

struct LeviResult {
    LeviClass classification;
    std::array<double, 4> eigenvalues;  // ascending
    std::array<HFloat, 2> direction;    // v with l = p + v H
};

/// Second fundamental form h = sigma Hess(rho) / |grad rho| (sigma = +1 for
/// the domain rho < 0, -1 for rho > 0) in an orthonormal basis of the real
/// span of v i_b, b = 0..3, where v = (-(conj nu_1)^-1 conj nu_2, 1) or (1, 0) if
/// nu_1 = 0.
template <class T>
LeviResult levi_h_convexity(const Hypersurface& S, const Point<T>& p, Side side, double tol = 1e-10) {
    const auto g = S.gradient_at(p);
    double n2 = 0;
    for (const auto& x : g)
        n2 += scalar_to_double(x) * scalar_to_double(x);
    if (n2 == 0)
        throw SingularSurface();
    const auto nu = normal(S, p);
    const auto Hr = S.hessian_at(p);
    std::array<HFloat, 2> v{HFloat(Algebra::H), HFloat(Algebra::H)};
    if (nu[0].norm_sq() < 1e-28) {
        v[0] = HFloat::real(Algebra::H, 1.0);
    } else {
        v[0] = -(nu[0].conj().inverse() * nu[1].conj());
        v[1] = HFloat::real(Algebra::H, 1.0);
    }
    const double sigma = side == Side::rho_negative ? 1.0 : -1.0;
    const double vn = std::sqrt(v[0].norm_sq() + v[1].norm_sq());
    Eigen::Matrix<double, 8, 4> B;  // orthonormal basis v i_b / |v|
    for (int b = 0; b < 4; ++b)
        for (int h = 0; h < 2; ++h) {
            const HFloat w = v[static_cast<std::size_t>(h)] * HFloat::unit(Algebra::H, b);
            for (int a = 0; a < 4; ++a)
                B(4 * h + a, b) = w[a] / vn;
        }
    Eigen::Matrix<double, 8, 8> Hm;
    for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 8; ++k)
            Hm(j, k) = scalar_to_double(Hr[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
    const Eigen::Matrix4d L = sigma / std::sqrt(n2) * (B.transpose() * Hm * B);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(L);
    LeviResult res;
    for (int i = 0; i < 4; ++i)
        res.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    res.direction = v;
    const double lo = res.eigenvalues[0], hi = res.eigenvalues[3];
    const double eps = tol * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    if (lo > eps)
        res.classification = LeviClass::positive_definite;
    else if (hi < -eps)
        res.classification = LeviClass::negative_definite;
    else if (lo < -eps && hi > eps)
        res.classification = LeviClass::indefinite;
    else
        res.classification = LeviClass::degenerate;
    return res;
}

/// Nondegeneracy at the samples: definite of one fixed sign everywhere.
template <class T>
bool levi_nondegenerate(const Hypersurface& S, const std::vector<Point<T>>& samples, Side side) {
    if (samples.empty())
        throw std::invalid_argument("no sample points");
    const LeviClass first = levi_h_convexity(S, samples.front(), side).classification;
    if (first != LeviClass::positive_definite && first != LeviClass::negative_definite)
        return false;
    for (const auto& p : samples)
        if (levi_h_convexity(S, p, side).classification != first)
            return false;
    return true;
}

// Sample generation.

/// Random rational points of an affine S: free coordinates drawn from
/// small rationals, the chart coordinate solved.
inline std::vector<Point<Rational>> sample_affine(const Hypersurface& S, std::size_t count, CorpusRng& rng) {
    const int k = S.chart_coordinate();
    const HPoly L = S.chart_solution();
    std::vector<Point<Rational>> out;
    for (std::size_t i = 0; i < count; ++i) {
        Point<Rational> p(8);
        for (int j = 0; j < 8; ++j)
            if (j != k)
                p[static_cast<std::size_t>(j)] = rng.rational(4, 3);
        p[static_cast<std::size_t>(k)] = 0;
        p[static_cast<std::size_t>(k)] = L.evaluate(std::span<const Rational>(p))[0];
        out.push_back(std::move(p));
    }
    return out;
}

/// Product grid on the chart of an affine S: every listed free coordinate
/// runs over `values`, others are zero, the chart coordinate is solved.
inline std::vector<Point<Rational>> grid_affine(const Hypersurface& S, const std::vector<int>& coords,
                                                const std::vector<Rational>& values) {
    const int k = S.chart_coordinate();
    for (int c : coords)
        if (c == k || c < 0 || c >= 8)
            throw std::invalid_argument("grid coordinate must be a free chart coordinate");
    if (values.empty())
        throw std::invalid_argument("grid needs at least one value");
    const HPoly L = S.chart_solution();
    std::vector<Point<Rational>> out;
    std::vector<std::size_t> idx(coords.size(), 0);
    while (true) {
        Point<Rational> p(8, Rational(0));
        for (std::size_t i = 0; i < coords.size(); ++i)
            p[static_cast<std::size_t>(coords[i])] = values[idx[i]];
        p[static_cast<std::size_t>(k)] = L.evaluate(std::span<const Rational>(p))[0];
        out.push_back(std::move(p));
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == values.size())
            idx[i++] = 0;
        if (i == idx.size())
            break;
    }
    return out;
}

/// Rational points on the sphere |x - c|^2 = r^2 (r rational) by inverse
/// stereographic projection of random rational t in R^7.
inline std::vector<Point<Rational>> sample_sphere(const Point<Rational>& center, const Rational& radius, std::size_t count,
                                                  CorpusRng& rng) {
    std::vector<Point<Rational>> out;
    while (out.size() < count) {
        std::array<Rational, 7> t;
        Rational s = 0;
        for (auto& x : t) {
            x = rng.rational(3, 3);
            s += x * x;
        }
        Point<Rational> p(8);
        for (int i = 0; i < 7; ++i)
            p[static_cast<std::size_t>(i)] = center[static_cast<std::size_t>(i)] + radius * 2 * t[static_cast<std::size_t>(i)] / (s + 1);
        p[7] = center[7] + radius * (s - 1) / (s + 1);
        out.push_back(std::move(p));
    }
    return out;
}

/// Binary64 points near S: random points in the box, pulled onto S by
/// Newton steps along grad rho.
inline std::vector<Point<double>> sample_projected(const Hypersurface& S, std::size_t count, CorpusRng& rng,
                                                   double box = 1.5, double tol = 1e-13) {
    std::vector<Point<double>> out;
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (++attempts > 100 * count + 100)
            throw std::runtime_error("could not project sample points onto the hypersurface");
        Point<double> p(8);
        for (auto& x : p)
            x = rng.uniform_real(-box, box);
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            const double v = S.value(p);
            const auto g = S.gradient_at(p);
            double n2 = 0;
            for (double x : g)
                n2 += x * x;
            if (n2 < 1e-12)
                break;
            if (std::abs(v) < tol) {
                ok = true;
                break;
            }
            for (int k = 0; k < 8; ++k)
                p[static_cast<std::size_t>(k)] -= v * g[static_cast<std::size_t>(k)] / n2;
        }
        if (ok)
            out.push_back(std::move(p));
    }
    return out;
}

template <class T>
Point<double> to_double_point(const Point<T>& p) {
    Point<double> d;
    for (const auto& x : p)
        d.push_back(scalar_to_double(x));
    return d;
}

}  // namespace fueter
