#pragma once

// Polynomials in the real coordinates x_{h,alpha} of n hypercomplex
// variables with exact H- or O-valued coefficients, and the Fueter
// calculus acting on them.  Coordinate (h, alpha) has flat index
// h * dim + alpha with h, alpha zero based (h = 0 is q_1, h = 1 is q_2).
// Coefficients are kept to the left of the (real) monomials; operators
// multiply by the units i_alpha from the left.

#include "fueter/hypercomplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fueter {

using Exponent = std::vector<std::uint8_t>;

inline int total_degree(const Exponent& e) {
    int d = 0;
    for (auto x : e)
        d += x;
    return d;
}

/// Graded lexicographic order: lower total degree first, ties broken
/// lexicographically with x_{0,0} most significant.
struct GrlexLess {
    bool operator()(const Exponent& a, const Exponent& b) const {
        const int da = total_degree(a), db = total_degree(b);
        if (da != db)
            return da < db;
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

class HPoly {
  public:
    using TermMap = std::map<Exponent, HExact, GrlexLess>;

    HPoly() : HPoly(Algebra::H, 1) {}
    HPoly(Algebra a, int n) : algebra_(a), n_(n) {
        if (n < 1)
            throw std::invalid_argument("HPoly needs at least one hypercomplex variable");
    }

    static HPoly constant(Algebra a, int n, const HExact& c) {
        HPoly p(a, n);
        p.add_term(Exponent(static_cast<std::size_t>(p.ncoords()), 0), c);
        return p;
    }
    static HPoly constant(Algebra a, int n, const Rational& c) { return constant(a, n, HExact::real(a, c)); }

    /// The real coordinate x_{h,alpha}.
    static HPoly coordinate(Algebra a, int n, int h, int alpha) {
        HPoly p(a, n);
        Exponent e(static_cast<std::size_t>(p.ncoords()), 0);
        e[static_cast<std::size_t>(p.flat(h, alpha))] = 1;
        p.add_term(std::move(e), HExact::real(a, Rational(1)));
        return p;
    }

    /// q_h = sum_alpha x_{h,alpha} i_alpha.
    static HPoly variable(Algebra a, int n, int h) {
        HPoly p(a, n);
        for (int al = 0; al < dimension(a); ++al) {
            Exponent e(static_cast<std::size_t>(p.ncoords()), 0);
            e[static_cast<std::size_t>(p.flat(h, al))] = 1;
            p.add_term(std::move(e), HExact::unit(a, al));
        }
        return p;
    }

    /// conj(q_h) = x_{h,0} - sum_{alpha>0} x_{h,alpha} i_alpha.
    static HPoly conj_variable(Algebra a, int n, int h) { return variable(a, n, h).conj(); }

    Algebra algebra() const { return algebra_; }
    int dim() const { return dimension(algebra_); }
    int nvars() const { return n_; }
    int ncoords() const { return dim() * n_; }
    int flat(int h, int alpha) const {
        if (h < 0 || h >= n_ || alpha < 0 || alpha >= dim())
            throw std::out_of_range("coordinate index out of range");
        return h * dim() + alpha;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    int degree() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }

    /// Degree in the coordinates of variable h.
    int degree_in(int h) const {
        int best = -1;
        for (const auto& [e, c] : terms_) {
            int d = 0;
            for (int al = 0; al < dim(); ++al)
                d += e[static_cast<std::size_t>(flat(h, al))];
            best = std::max(best, d);
        }
        return best;
    }

    bool is_real() const {
        for (const auto& [e, c] : terms_)
            for (int i = 1; i < dim(); ++i)
                if (!fueter::is_zero(c[i]))
                    return false;
        return true;
    }

    void add_term(Exponent e, const HExact& c) {
        if (static_cast<int>(e.size()) != ncoords())
            throw std::invalid_argument("exponent length does not match coordinate count");
        if (c.algebra() != algebra_)
            throw AlgebraMismatch();
        if (c.is_zero())
            return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), c);
            return;
        }
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }

    HExact coefficient(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? HExact(algebra_) : it->second;
    }

    HPoly conj() const {
        HPoly r(algebra_, n_);
        for (const auto& [e, c] : terms_)
            r.terms_.emplace(e, c.conj());
        return r;
    }

    /// Real component alpha as a real-valued polynomial.
    HPoly component(int alpha) const {
        HPoly r(algebra_, n_);
        for (const auto& [e, c] : terms_)
            r.add_term(e, HExact::real(algebra_, c[alpha]));
        return r;
    }

    HPoly& operator+=(const HPoly& o) {
        check(o);
        for (const auto& [e, c] : o.terms_)
            add_term(e, c);
        return *this;
    }
    HPoly& operator-=(const HPoly& o) {
        check(o);
        for (const auto& [e, c] : o.terms_)
            add_term(e, -c);
        return *this;
    }
    HPoly& operator*=(const Rational& s) {
        if (fueter::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_)
            c *= s;
        return *this;
    }

    friend HPoly operator+(HPoly a, const HPoly& b) { return a += b; }
    friend HPoly operator-(HPoly a, const HPoly& b) { return a -= b; }
    friend HPoly operator-(HPoly a) {
        for (auto& [e, c] : a.terms_)
            c = -c;
        return a;
    }
    friend HPoly operator*(HPoly a, const Rational& s) { return a *= s; }
    friend HPoly operator*(const Rational& s, HPoly a) { return a *= s; }

    /// Product of polynomials; coefficients multiply in argument order.
    friend HPoly operator*(const HPoly& a, const HPoly& b) {
        a.check(b);
        HPoly r(a.algebra_, a.n_);
        Exponent e(static_cast<std::size_t>(a.ncoords()));
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i)
                    e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
                r.add_term(e, ca * cb);
            }
        return r;
    }

    /// c * p (constant on the left).
    friend HPoly operator*(const HExact& c, const HPoly& p) {
        HPoly r(p.algebra_, p.n_);
        for (const auto& [e, pc] : p.terms_)
            r.add_term(e, c * pc);
        return r;
    }
    /// p * c (constant on the right).
    friend HPoly operator*(const HPoly& p, const HExact& c) {
        HPoly r(p.algebra_, p.n_);
        for (const auto& [e, pc] : p.terms_)
            r.add_term(e, pc * c);
        return r;
    }

    friend bool operator==(const HPoly& a, const HPoly& b) {
        return a.algebra_ == b.algebra_ && a.n_ == b.n_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const HPoly& a, const HPoly& b) { return !(a == b); }

    HPoly pow(int k) const {
        HPoly r = constant(algebra_, n_, Rational(1));
        for (int i = 0; i < k; ++i)
            r = r * *this;
        return r;
    }

    /// Value at a real point (ncoords entries).
    template <class T>
    HNumber<T> evaluate(std::span<const T> point) const {
        if (static_cast<int>(point.size()) != ncoords())
            throw std::invalid_argument("evaluation point has wrong dimension");
        HNumber<T> acc(algebra_);
        for (const auto& [e, c] : terms_) {
            T mono(1);
            for (std::size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k)
                    mono *= point[i];
            if (fueter::is_zero(mono))
                continue;
            for (int i = 0; i < dim(); ++i)
                acc[i] += scalar_as<T>(c[i]) * mono;
        }
        return acc;
    }

    template <class T>
    HNumber<T> evaluate(const std::vector<T>& point) const {
        return evaluate(std::span<const T>(point));
    }

  private:
    template <class T>
    static T scalar_as(const Rational& r) {
        if constexpr (std::is_same_v<T, Rational>)
            return r;
        else
            return static_cast<T>(r.get_d());
    }

    void check(const HPoly& o) const {
        if (algebra_ != o.algebra_)
            throw AlgebraMismatch();
        if (n_ != o.n_)
            throw std::invalid_argument("polynomials have different variable counts");
    }

    Algebra algebra_;
    int n_;
    TermMap terms_;
};

using HPolyVector = std::vector<HPoly>;

/// Exact formal partial derivative with respect to flat coordinate k.
inline HPoly partial_flat(const HPoly& p, int k) {
    if (k < 0 || k >= p.ncoords())
        throw std::out_of_range("coordinate index out of range");
    HPoly r(p.algebra(), p.nvars());
    for (const auto& [e, c] : p.terms()) {
        const auto ek = e[static_cast<std::size_t>(k)];
        if (ek == 0)
            continue;
        Exponent d = e;
        d[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(ek - 1);
        r.add_term(std::move(d), c * Rational(ek));
    }
    return r;
}

inline HPoly partial(const HPoly& p, int h, int alpha) { return partial_flat(p, p.flat(h, alpha)); }

/// d/d(conj q_h) = sum_alpha i_alpha d/dx_{h,alpha}, units on the left.
inline HPoly fueter_dbar(const HPoly& p, int h) {
    HPoly r(p.algebra(), p.nvars());
    for (int al = 0; al < p.dim(); ++al)
        r += HExact::unit(p.algebra(), al) * partial(p, h, al);
    return r;
}

/// d/dq_h = sum_alpha conj(i_alpha) d/dx_{h,alpha}.
inline HPoly fueter_d(const HPoly& p, int h) {
    HPoly r(p.algebra(), p.nvars());
    for (int al = 0; al < p.dim(); ++al)
        r += HExact::unit(p.algebra(), al, al == 0 ? 1 : -1) * partial(p, h, al);
    return r;
}

/// Right-acting variants (units multiply from the right); quaternions only.
inline HPoly fueter_dbar_right(const HPoly& p, int h) {
    if (p.algebra() != Algebra::H)
        throw std::invalid_argument("right Fueter operators are provided for quaternions only");
    HPoly r(p.algebra(), p.nvars());
    for (int al = 0; al < 4; ++al)
        r += partial(p, h, al) * HExact::unit(Algebra::H, al);
    return r;
}

inline HPoly fueter_d_right(const HPoly& p, int h) {
    if (p.algebra() != Algebra::H)
        throw std::invalid_argument("right Fueter operators are provided for quaternions only");
    HPoly r(p.algebra(), p.nvars());
    for (int al = 0; al < 4; ++al)
        r += partial(p, h, al) * HExact::unit(Algebra::H, al, al == 0 ? 1 : -1);
    return r;
}

/// Laplacian in the real coordinates of variable h.
inline HPoly laplacian(const HPoly& p, int h) {
    HPoly r(p.algebra(), p.nvars());
    for (int al = 0; al < p.dim(); ++al)
        r += partial(partial(p, h, al), h, al);
    return r;
}

/// u -> (du/d conj(q_1), ..., du/d conj(q_n)).
inline HPolyVector dbar_system(const HPoly& u) {
    HPolyVector g;
    g.reserve(static_cast<std::size_t>(u.nvars()));
    for (int h = 0; h < u.nvars(); ++h)
        g.push_back(fueter_dbar(u, h));
    return g;
}

inline void check_vector(const HPolyVector& g) {
    if (g.empty())
        throw std::invalid_argument("empty polynomial vector");
    const int n = g.front().nvars();
    if (static_cast<int>(g.size()) != n)
        throw std::invalid_argument("vector length must equal the number of hypercomplex variables");
    for (const auto& p : g)
        if (p.algebra() != g.front().algebra() || p.nvars() != n)
            throw std::invalid_argument("vector entries disagree on algebra or variable count");
}

/// z_{l,m}(g) = Lap_m g_l - dbar_l(d_m g_m), nested in exactly this order.
inline HPoly compat_residual(const HPolyVector& g, int l, int m) {
    check_vector(g);
    if (l == m)
        throw std::invalid_argument("compatibility residual needs l != m");
    return laplacian(g[static_cast<std::size_t>(l)], m) -
           fueter_dbar(fueter_d(g[static_cast<std::size_t>(m)], m), l);
}

struct CompatResidual {
    int l = 0;
    int m = 0;
    HPoly residual;
};

/// All n(n-1) residuals, ordered by (l, m).
inline std::vector<CompatResidual> compat_residuals(const HPolyVector& g) {
    check_vector(g);
    std::vector<CompatResidual> out;
    const int n = static_cast<int>(g.size());
    for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
            if (l != m)
                out.push_back({l, m, compat_residual(g, l, m)});
    return out;
}

/// (P_1(g), P_2(g)) with P_1 = dbar_1 d_2 g_2 - Lap_2 g_1 and
/// P_2 = dbar_2 d_1 g_1 - Lap_1 g_2; two variables only.
inline HPolyVector compat_Pbar(const HPolyVector& g) {
    check_vector(g);
    if (g.size() != 2)
        throw std::invalid_argument("compat_Pbar is defined for two variables");
    return {fueter_dbar(fueter_d(g[1], 1), 0) - laplacian(g[0], 1),
            fueter_dbar(fueter_d(g[0], 0), 1) - laplacian(g[1], 0)};
}

inline bool is_zero(const HPolyVector& v) {
    return std::all_of(v.begin(), v.end(), [](const HPoly& p) { return p.is_zero(); });
}

/// p with the coordinate x_k replaced by the real polynomial L.
inline HPoly substitute(const HPoly& p, int k, const HPoly& L) {
    if (k < 0 || k >= p.ncoords())
        throw std::out_of_range("coordinate index out of range");
    if (!L.is_real())
        throw std::invalid_argument("substituted polynomial must be real valued");
    std::vector<HPoly> powers{HPoly::constant(p.algebra(), p.nvars(), Rational(1))};
    HPoly r(p.algebra(), p.nvars());
    for (const auto& [e, c] : p.terms()) {
        const int j = e[static_cast<std::size_t>(k)];
        while (static_cast<int>(powers.size()) <= j)
            powers.push_back(powers.back() * L);
        Exponent rest = e;
        rest[static_cast<std::size_t>(k)] = 0;
        HPoly mono(p.algebra(), p.nvars());
        mono.add_term(std::move(rest), c);
        r += mono * powers[static_cast<std::size_t>(j)];
    }
    return r;
}

class SingularAxis : public std::domain_error {
  public:
    SingularAxis() : std::domain_error("Fueter transform is undefined on the real axis (|Im q| = 0)") {}
};

/// F#(q) = u(Re q, |Im q|) + Im q / |Im q| * v(Re q, |Im q|) for a planar
/// holomorphic F = u + i v.
inline HFloat fueter_transform(const std::function<double(double, double)>& u_fn,
                               const std::function<double(double, double)>& v_fn, const HFloat& q) {
    double im2 = 0;
    for (int i = 1; i < q.dim(); ++i)
        im2 += q[i] * q[i];
    if (im2 == 0)
        throw SingularAxis();
    const double r = std::sqrt(im2);
    const double u = u_fn(q[0], r);
    const double v = v_fn(q[0], r);
    HFloat out(q.algebra());
    out[0] = u;
    for (int i = 1; i < q.dim(); ++i)
        out[i] = q[i] / r * v;
    return out;
}

}  // namespace fueter
