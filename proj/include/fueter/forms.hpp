#pragma once

// Exterior calculus over R^(dim*n) with hypercomplex coefficients taken in
// the ring of polynomials divided by powers of r^2, the squared distance to
// a marked pole.  Coefficients multiply in argument order, so wedge is
// graded-antisymmetric only up to the noncommutativity of the coefficients.

#include "fueter/polycalc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fueter {

class MixedPoles : public std::invalid_argument {
  public:
    MixedPoles() : std::invalid_argument("coefficients carry different poles") {}
};

/// numerator / r^(2m) where r^2 = |x - pole|^2.  m = 0 is a plain polynomial.
class PoleElement {
  public:
    PoleElement(Algebra a, int n) : num_(a, n) {}
    explicit PoleElement(HPoly num) : num_(std::move(num)) {}
    PoleElement(HPoly num, std::vector<Rational> pole, int m) : num_(std::move(num)), m_(m) {
        if (m < 0)
            throw std::invalid_argument("pole exponent must be nonnegative");
        if (static_cast<int>(pole.size()) != num_.ncoords())
            throw std::invalid_argument("pole has wrong dimension");
        if (m > 0)
            pole_ = std::move(pole);
    }

    const HPoly& numerator() const { return num_; }
    int exponent() const { return m_; }
    const std::optional<std::vector<Rational>>& pole() const { return pole_; }
    Algebra algebra() const { return num_.algebra(); }
    int nvars() const { return num_.nvars(); }
    int ncoords() const { return num_.ncoords(); }
    bool is_zero() const { return num_.is_zero(); }

    /// r^2 as a real polynomial (requires a pole).
    HPoly r_squared() const { return r_squared_for(*pole_); }

    PoleElement& operator+=(const PoleElement& o) {
        auto pole = merged_pole(o);
        const int m = std::max(m_, o.m_);
        HPoly a = lifted(m, pole), b = o.lifted(m, pole);
        num_ = a + b;
        m_ = m;
        if (m > 0)
            pole_ = pole;
        return *this;
    }
    PoleElement& operator-=(const PoleElement& o) { return *this += -o; }
    friend PoleElement operator+(PoleElement a, const PoleElement& b) { return a += b; }
    friend PoleElement operator-(PoleElement a, const PoleElement& b) { return a -= b; }
    friend PoleElement operator-(PoleElement a) {
        a.num_ = -a.num_;
        return a;
    }

    friend PoleElement operator*(const PoleElement& a, const PoleElement& b) {
        PoleElement r = a;
        auto pole = a.merged_pole(b);
        r.num_ = a.num_ * b.num_;
        r.m_ = a.m_ + b.m_;
        if (r.m_ > 0)
            r.pole_ = pole;
        return r;
    }
    friend PoleElement operator*(const HExact& c, PoleElement a) {
        a.num_ = c * a.num_;
        return a;
    }
    friend PoleElement operator*(PoleElement a, const HExact& c) {
        a.num_ = a.num_ * c;
        return a;
    }
    friend PoleElement operator*(PoleElement a, const Rational& s) {
        a.num_ *= s;
        return a;
    }

    /// d/dx_k (N r^-2m) = ((dN) r^2 - 2 m N (x_k - p_k)) r^-(2m+2).
    PoleElement partial(int k) const {
        if (m_ == 0)
            return PoleElement(partial_flat(num_, k));
        HPoly shifted = HPoly::coordinate(algebra(), nvars(), k / num_.dim(), k % num_.dim()) -
                        HPoly::constant(algebra(), nvars(), (*pole_)[static_cast<std::size_t>(k)]);
        HPoly n = partial_flat(num_, k) * r_squared() - Rational(2 * m_) * (num_ * shifted);
        return PoleElement(std::move(n), *pole_, m_ + 1);
    }

    friend bool operator==(const PoleElement& a, const PoleElement& b) { return (a - b).is_zero(); }

    HFloat evaluate(std::span<const double> x) const {
        HFloat v = num_.evaluate(x);
        if (m_ == 0)
            return v;
        double r2 = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double d = x[k] - (*pole_)[k].get_d();
            r2 += d * d;
        }
        return v / std::pow(r2, m_);
    }

    /// Components as a vector of real-valued elements sharing the pole.
    std::vector<PoleElement> components() const {
        std::vector<PoleElement> out;
        for (int al = 0; al < num_.dim(); ++al) {
            PoleElement c = *this;
            c.num_ = num_.component(al);
            out.push_back(std::move(c));
        }
        return out;
    }

  private:
    HPoly r_squared_for(const std::vector<Rational>& pole) const {
        HPoly r(algebra(), nvars());
        for (int k = 0; k < ncoords(); ++k) {
            HPoly d = HPoly::coordinate(algebra(), nvars(), k / num_.dim(), k % num_.dim()) -
                      HPoly::constant(algebra(), nvars(), pole[static_cast<std::size_t>(k)]);
            r += d * d;
        }
        return r;
    }

    std::optional<std::vector<Rational>> merged_pole(const PoleElement& o) const {
        if (algebra() != o.algebra() || nvars() != o.nvars())
            throw AlgebraMismatch();
        if (pole_ && o.pole_ && *pole_ != *o.pole_)
            throw MixedPoles();
        return pole_ ? pole_ : o.pole_;
    }

    HPoly lifted(int m, const std::optional<std::vector<Rational>>& pole) const {
        if (m == m_)
            return num_;
        return num_ * r_squared_for(*pole).pow(m - m_);
    }

    HPoly num_;
    std::optional<std::vector<Rational>> pole_;
    int m_ = 0;
};

using IndexTuple = std::vector<std::uint8_t>;

/// Sorts `idx` in place and returns the permutation sign, or 0 if an index
/// repeats.
inline int canonicalize_indices(IndexTuple& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j])
                return 0;
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    return sign;
}

class Form {
  public:
    using TermMap = std::map<IndexTuple, PoleElement>;

    Form(Algebra a, int n, int degree) : algebra_(a), n_(n), degree_(degree) {
        if (degree < 0 || degree > ambient_dim())
            throw std::invalid_argument("form degree out of range");
    }

    /// coef * dx_{i_1} ^ ... ^ dx_{i_k} for indices in any order.
    static Form monomial(Algebra a, int n, IndexTuple idx, const PoleElement& coef) {
        Form f(a, n, static_cast<int>(idx.size()));
        const int s = canonicalize_indices(idx);
        if (s != 0)
            f.add(idx, s > 0 ? coef : -coef);
        return f;
    }
    static Form monomial(Algebra a, int n, IndexTuple idx, const HExact& c) {
        return monomial(a, n, std::move(idx), PoleElement(HPoly::constant(a, n, c)));
    }

    /// Degree-0 form.
    static Form function(const PoleElement& c) { return monomial(c.algebra(), c.nvars(), {}, c); }
    static Form function(const HPoly& p) { return function(PoleElement(p)); }

    Algebra algebra() const { return algebra_; }
    int nvars() const { return n_; }
    int degree() const { return degree_; }
    int ambient_dim() const { return dimension(algebra_) * n_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Adds to the coefficient of a sorted index tuple.
    void add(const IndexTuple& idx, const PoleElement& c) {
        if (static_cast<int>(idx.size()) != degree_)
            throw std::invalid_argument("index tuple length differs from form degree");
        if (c.is_zero())
            return;
        auto it = terms_.find(idx);
        if (it == terms_.end()) {
            terms_.emplace(idx, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }

    Form& operator+=(const Form& o) {
        check(o);
        for (const auto& [i, c] : o.terms_)
            add(i, c);
        return *this;
    }
    Form& operator-=(const Form& o) {
        check(o);
        for (const auto& [i, c] : o.terms_)
            add(i, -c);
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator-(Form a) {
        for (auto& [i, c] : a.terms_)
            c = -c;
        return a;
    }
    friend Form operator*(Form a, const Rational& s) {
        Form r(a.algebra_, a.n_, a.degree_);
        for (auto& [i, c] : a.terms_)
            r.add(i, c * s);
        return r;
    }

    /// Coefficients multiplied by c on the right (the "Dq . F" product).
    Form right_multiply(const PoleElement& c) const {
        Form r(algebra_, n_, degree_);
        for (const auto& [i, a] : terms_)
            r.add(i, a * c);
        return r;
    }
    Form right_multiply(const HPoly& p) const { return right_multiply(PoleElement(p)); }
    Form left_multiply(const PoleElement& c) const {
        Form r(algebra_, n_, degree_);
        for (const auto& [i, a] : terms_)
            r.add(i, c * a);
        return r;
    }
    Form left_multiply(const HPoly& p) const { return left_multiply(PoleElement(p)); }

    friend bool operator==(const Form& a, const Form& b) { return a.degree_ == b.degree_ && (a - b).is_zero(); }
    friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

    void check(const Form& o) const {
        if (algebra_ != o.algebra_ || n_ != o.n_)
            throw AlgebraMismatch();
        if (degree_ != o.degree_)
            throw std::invalid_argument("forms of different degree");
    }

  private:
    Algebra algebra_;
    int n_;
    int degree_;
    TermMap terms_;
};

inline Form wedge(const Form& a, const Form& b) {
    if (a.algebra() != b.algebra() || a.nvars() != b.nvars())
        throw AlgebraMismatch();
    if (a.degree() + b.degree() > a.ambient_dim())
        return Form(a.algebra(), a.nvars(), a.ambient_dim());
    Form r(a.algebra(), a.nvars(), a.degree() + b.degree());
    for (const auto& [ia, ca] : a.terms())
        for (const auto& [ib, cb] : b.terms()) {
            IndexTuple idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            const int s = canonicalize_indices(idx);
            if (s == 0)
                continue;
            PoleElement c = ca * cb;
            r.add(idx, s > 0 ? c : -c);
        }
    return r;
}

inline Form exterior_d(const Form& a) {
    if (a.degree() == a.ambient_dim())
        return Form(a.algebra(), a.nvars(), a.degree());
    Form r(a.algebra(), a.nvars(), a.degree() + 1);
    for (const auto& [idx, c] : a.terms())
        for (int k = 0; k < a.ambient_dim(); ++k) {
            if (std::find(idx.begin(), idx.end(), static_cast<std::uint8_t>(k)) != idx.end())
                continue;
            PoleElement dc = c.partial(k);
            if (dc.is_zero())
                continue;
            IndexTuple j{static_cast<std::uint8_t>(k)};
            j.insert(j.end(), idx.begin(), idx.end());
            const int s = canonicalize_indices(j);
            r.add(j, s > 0 ? dc : -dc);
        }
    return r;
}

/// Euclidean Hodge star for the orientation dx_0 ^ ... ^ dx_{D-1}:
/// *(dx_I) = sign(I, I^c) dx_{I^c}.
inline Form hodge_star(const Form& a) {
    const int D = a.ambient_dim();
    Form r(a.algebra(), a.nvars(), D - a.degree());
    for (const auto& [idx, c] : a.terms()) {
        IndexTuple comp;
        for (int k = 0; k < D; ++k)
            if (std::find(idx.begin(), idx.end(), static_cast<std::uint8_t>(k)) == idx.end())
                comp.push_back(static_cast<std::uint8_t>(k));
        IndexTuple all = idx;
        all.insert(all.end(), comp.begin(), comp.end());
        const int s = canonicalize_indices(all);
        r.add(comp, s > 0 ? c : -c);
    }
    return r;
}

/// dF = sum_k dF/dx_k dx_k.
inline Form differential(const HPoly& f) {
    Form r(f.algebra(), f.nvars(), 1);
    for (int k = 0; k < f.ncoords(); ++k)
        r.add({static_cast<std::uint8_t>(k)}, PoleElement(partial_flat(f, k)));
    return r;
}

// Constant forms attached to the quaternionic variable q_h (flat
// coordinates 4h .. 4h+3).

namespace detail {
inline std::uint8_t coord(int h, int alpha) { return static_cast<std::uint8_t>(4 * h + alpha); }

inline void require_quaternionic(int n, int h) {
    if (h < 0 || h >= n)
        throw std::out_of_range("variable index out of range");
}

inline Form one_form(int n, int h, bool conjugate) {
    require_quaternionic(n, h);
    Form r(Algebra::H, n, 1);
    for (int al = 0; al < 4; ++al)
        r += Form::monomial(Algebra::H, n, {coord(h, al)},
                            HExact::unit(Algebra::H, al, conjugate && al > 0 ? -1 : 1));
    return r;
}

inline Form three_form(int n, int h, bool conjugate) {
    require_quaternionic(n, h);
    Form r(Algebra::H, n, 3);
    for (int al = 0; al < 4; ++al) {
        IndexTuple idx;
        for (int b = 0; b < 4; ++b)
            if (b != al)
                idx.push_back(coord(h, b));
        int sign = (al % 2 == 0) ? 1 : -1;
        if (conjugate && al > 0)
            sign = -sign;
        r += Form::monomial(Algebra::H, n, idx, HExact::unit(Algebra::H, al, sign));
    }
    return r;
}
}  // namespace detail

/// dq_h = sum_alpha i_alpha dx_{h,alpha}
inline Form dq_form(int n, int h) { return detail::one_form(n, h, false); }
/// conj(dq_h) = sum_alpha conj(i_alpha) dx_{h,alpha}
inline Form dqbar_form(int n, int h) { return detail::one_form(n, h, true); }
/// Dq_h = sum_alpha (-1)^alpha i_alpha dX_{h, alpha-hat}
inline Form Dq_form(int n, int h) { return detail::three_form(n, h, false); }
/// conj(Dq_h) = sum_alpha (-1)^alpha conj(i_alpha) dX_{h, alpha-hat}
inline Form Dqbar_form(int n, int h) { return detail::three_form(n, h, true); }
/// dx_{h,0} ^ dx_{h,1} ^ dx_{h,2} ^ dx_{h,3}
inline Form dx_form(int n, int h) {
    detail::require_quaternionic(n, h);
    return Form::monomial(Algebra::H, n, {detail::coord(h, 0), detail::coord(h, 1), detail::coord(h, 2), detail::coord(h, 3)},
                          HExact::real(Algebra::H, Rational(1)));
}

struct FormIdentity {
    Form lhs;
    Form rhs;
    bool holds() const { return lhs == rhs; }
};

/// d(Dq . F) and (dF/d conj q) dx in one quaternionic variable.
inline FormIdentity identity_lu1(const HPoly& F) {
    if (F.algebra() != Algebra::H || F.nvars() != 1)
        throw std::invalid_argument("identity d(Dq F) = F_qbar dx is stated for one quaternionic variable");
    Form lhs = exterior_d(Dq_form(1, 0).right_multiply(F));
    Form rhs = dx_form(1, 0).right_multiply(fueter_dbar(F, 0));
    return {std::move(lhs), std::move(rhs)};
}

/// Both sides of the 7-form identity in two quaternionic variables:
///   1/2 (conj(dq1) ^ dq1 ^ dy ^ dF + dx ^ conj(dq2) ^ dq2 ^ dF)
///     = -(conj(Dq1) F_qbar1 ^ dy + dx ^ conj(Dq2) F_qbar2) + *dF
inline FormIdentity identity_luB(const HPoly& F) {
    if (F.algebra() != Algebra::H || F.nvars() != 2)
        throw std::invalid_argument("the 7-form identity is stated for two quaternionic variables");
    const Form dx = dx_form(2, 0), dy = dx_form(2, 1), dF = differential(F);
    Form lhs = wedge(wedge(wedge(dqbar_form(2, 0), dq_form(2, 0)), dy), dF) +
               wedge(wedge(wedge(dx, dqbar_form(2, 1)), dq_form(2, 1)), dF);
    lhs = lhs * make_rational(1, 2);
    Form rhs = -(wedge(Dqbar_form(2, 0).right_multiply(fueter_dbar(F, 0)), dy) +
                 wedge(dx, Dqbar_form(2, 1).right_multiply(fueter_dbar(F, 1)))) +
               hodge_star(dF);
    return {std::move(lhs), std::move(rhs)};
}

/// Cauchy-Fueter kernel G(q - q0) = (conj q - conj q0) / |q - q0|^4.
inline PoleElement cf_kernel(const HExact& q0) {
    if (q0.algebra() != Algebra::H)
        throw std::invalid_argument("Cauchy-Fueter kernel is quaternionic");
    HPoly num = HPoly::conj_variable(Algebra::H, 1, 0) - HPoly::constant(Algebra::H, 1, q0.conj());
    std::vector<Rational> pole(4);
    for (int i = 0; i < 4; ++i)
        pole[static_cast<std::size_t>(i)] = q0[i];
    return PoleElement(std::move(num), std::move(pole), 2);
}

/// sum_alpha i_alpha d/dx_{h,alpha} applied from the left (or right) in
/// the pole ring.
inline PoleElement fueter_dbar(const PoleElement& e, int h, bool right = false) {
    PoleElement r(e.algebra(), e.nvars());
    const int d = dimension(e.algebra());
    for (int al = 0; al < d; ++al) {
        const HExact u = HExact::unit(e.algebra(), al);
        PoleElement p = e.partial(h * d + al);
        r += right ? p * u : u * p;
    }
    return r;
}

/// Complex differentials in the coordinates z_h = x_{h,0} + i x_{h,1},
/// w_h = x_{h,2} + i x_{h,3} (so that q_h = z_h + w_h j).
enum class ComplexKind { dz, dzbar, dw, dwbar };

struct ComplexDifferential {
    int h;
    ComplexKind kind;
};

inline Form complex_one_form(int n, const ComplexDifferential& c) {
    const bool w = c.kind == ComplexKind::dw || c.kind == ComplexKind::dwbar;
    const bool bar = c.kind == ComplexKind::dzbar || c.kind == ComplexKind::dwbar;
    const int base = w ? 2 : 0;
    return Form::monomial(Algebra::H, n, {detail::coord(c.h, base)}, HExact::real(Algebra::H, Rational(1))) +
           Form::monomial(Algebra::H, n, {detail::coord(c.h, base + 1)}, HExact::unit(Algebra::H, 1, bar ? -1 : 1));
}

/// prefactor * form, with words recording the complex wedge monomials.
struct ScaledForm {
    double prefactor = 1.0;
    std::vector<std::vector<ComplexDifferential>> words;
    Form form;
};

/// omega_2 = (8 pi^4)^-1 |(z,w) - (z0,w0)|^-6 (dzb1^dw1^dzb2^dz2^dwb2^dw2 + dzb1^dz1^dwb1^dw1^dzb2^dw2)
inline ScaledForm omega2(const std::vector<Rational>& pole) {
    if (pole.size() != 8)
        throw std::invalid_argument("omega_2 pole must lie in R^8");
    using K = ComplexKind;
    std::vector<std::vector<ComplexDifferential>> words = {
        {{0, K::dzbar}, {0, K::dw}, {1, K::dzbar}, {1, K::dz}, {1, K::dwbar}, {1, K::dw}},
        {{0, K::dzbar}, {0, K::dz}, {0, K::dwbar}, {0, K::dw}, {1, K::dzbar}, {1, K::dw}},
    };
    const PoleElement weight(HPoly::constant(Algebra::H, 2, Rational(1)), pole, 3);
    Form total(Algebra::H, 2, 6);
    for (const auto& word : words) {
        Form f = Form::function(HPoly::constant(Algebra::H, 2, Rational(1)));
        for (const auto& c : word)
            f = wedge(f, complex_one_form(2, c));
        total += f.right_multiply(weight);
    }
    return {1.0 / (8.0 * std::pow(std::numbers::pi, 4)), std::move(words), std::move(total)};
}

/// K_2 = d omega_2.
inline ScaledForm k2(const std::vector<Rational>& pole) {
    ScaledForm w = omega2(pole);
    return {w.prefactor, w.words, exterior_d(w.form)};
}

using Frame = std::vector<std::vector<double>>;

namespace detail {
inline double det(std::vector<std::vector<double>> m) {
    const std::size_t n = m.size();
    double d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c]))
                piv = r;
        if (m[piv][c] == 0)
            return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k)
                m[r][k] -= f * m[c][k];
        }
    }
    return d;
}
}  // namespace detail

/// A form with coefficients frozen at a point, evaluable on frames.
struct NumericForm {
    int degree = 0;
    std::vector<std::pair<IndexTuple, HFloat>> terms;

    HFloat apply(const Frame& frame) const {
        if (static_cast<int>(frame.size()) != degree)
            throw std::invalid_argument("frame length differs from form degree");
        HFloat acc(terms.empty() ? Algebra::H : terms.front().second.algebra());
        std::vector<std::vector<double>> m(static_cast<std::size_t>(degree), std::vector<double>(static_cast<std::size_t>(degree)));
        for (const auto& [idx, c] : terms) {
            for (std::size_t i = 0; i < idx.size(); ++i)
                for (std::size_t j = 0; j < frame.size(); ++j)
                    m[i][j] = frame[j][idx[i]];
            const double d = degree == 0 ? 1.0 : detail::det(m);
            acc += c * d;
        }
        return acc;
    }
};

inline NumericForm freeze(const Form& f, std::span<const double> point) {
    if (static_cast<int>(point.size()) != f.ambient_dim())
        throw std::invalid_argument("point has wrong dimension");
    NumericForm nf{f.degree(), {}};
    for (const auto& [idx, c] : f.terms())
        nf.terms.emplace_back(idx, c.evaluate(point));
    return nf;
}

/// Value of the k-form at `point` on the tangent frame (v_1, ..., v_k).
inline HFloat pullback_at(const Form& f, const Frame& frame, std::span<const double> point) {
    if (static_cast<int>(frame.size()) != f.degree())
        throw std::invalid_argument("frame length differs from form degree");
    for (const auto& v : frame)
        if (static_cast<int>(v.size()) != f.ambient_dim())
            throw std::invalid_argument("frame vector has wrong dimension");
    return freeze(f, point).apply(frame);
}

}  // namespace fueter
