#pragma once

// The realified operator matrix Dbar (8n x 8 for octonions, 4n x 4 for
// quaternions) over the commutative ring of constant-coefficient
// differential operators, its left syzygies, and graded dimension counts
// by exact coefficient matching.

#include "fueter/polycalc.hpp"
#include "fueter/sparse_linalg.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace fueter {

/// Commutative polynomial in the derivative symbols d_{h,alpha}, flat index
/// dim*h + alpha.
class OperatorPoly {
  public:
    using TermMap = std::map<Exponent, Rational, GrlexLess>;

    OperatorPoly() = default;
    explicit OperatorPoly(int nsymbols) : nsym_(nsymbols) {}

    static OperatorPoly symbol(int nsymbols, int s, const Rational& c = 1) {
        OperatorPoly p(nsymbols);
        Exponent e(static_cast<std::size_t>(nsymbols), 0);
        e[static_cast<std::size_t>(s)] = 1;
        p.add_term(e, c);
        return p;
    }
    static OperatorPoly constant(int nsymbols, const Rational& c) {
        OperatorPoly p(nsymbols);
        p.add_term(Exponent(static_cast<std::size_t>(nsymbols), 0), c);
        return p;
    }

    int nsymbols() const { return nsym_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }

    void add_term(const Exponent& e, const Rational& c) {
        if (is_zero_scalar(c))
            return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (is_zero_scalar(it->second))
                terms_.erase(it);
        }
    }

    OperatorPoly& operator+=(const OperatorPoly& o) {
        adopt(o);
        for (const auto& [e, c] : o.terms_)
            add_term(e, c);
        return *this;
    }
    OperatorPoly& operator-=(const OperatorPoly& o) {
        adopt(o);
        for (const auto& [e, c] : o.terms_)
            add_term(e, -c);
        return *this;
    }
    friend OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b) { return a += b; }
    friend OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b) { return a -= b; }
    friend OperatorPoly operator-(OperatorPoly a) {
        for (auto& [e, c] : a.terms_)
            c = -c;
        return a;
    }
    friend OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b) {
        OperatorPoly r(std::max(a.nsym_, b.nsym_));
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponent e = ea;
                for (std::size_t i = 0; i < e.size(); ++i)
                    e[i] = static_cast<std::uint8_t>(e[i] + eb[i]);
                r.add_term(e, ca * cb);
            }
        return r;
    }
    friend bool operator==(const OperatorPoly& a, const OperatorPoly& b) { return a.terms_ == b.terms_; }

    /// Applies the operator to a real-valued polynomial component.
    HPoly apply(const HPoly& f) const {
        HPoly out(f.algebra(), f.nvars());
        for (const auto& [e, c] : terms_) {
            HPoly d = f;
            for (std::size_t s = 0; s < e.size(); ++s)
                for (int r = 0; r < e[s]; ++r)
                    d = partial_flat(d, static_cast<int>(s));
            out += d * c;
        }
        return out;
    }

    std::string to_string(int dim) const {
        if (terms_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            const bool neg = c < 0;
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
            const Rational a = neg ? Rational(-c) : c;
            bool any = false;
            if (a != 1) {
                os << fueter::to_string(a);
                any = true;
            }
            for (std::size_t s = 0; s < e.size(); ++s)
                for (int r = 0; r < e[s]; ++r) {
                    os << (any ? "*" : "") << "d" << (static_cast<int>(s) / dim + 1) << "_" << (static_cast<int>(s) % dim);
                    any = true;
                }
            if (!any)
                os << "1";
            first = false;
        }
        return os.str();
    }

  private:
    static bool is_zero_scalar(const Rational& c) { return sgn(c) == 0; }
    void adopt(const OperatorPoly& o) {
        if (nsym_ == 0)
            nsym_ = o.nsym_;
    }

    int nsym_ = 0;
    TermMap terms_;
};

struct OperatorMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<OperatorPoly> entries;  // row-major

    OperatorMatrix() = default;
    OperatorMatrix(int r, int c, int nsymbols) : rows(r), cols(c), entries(static_cast<std::size_t>(r * c), OperatorPoly(nsymbols)) {}
    OperatorPoly& at(int r, int c) { return entries[static_cast<std::size_t>(r * cols + c)]; }
    const OperatorPoly& at(int r, int c) const { return entries[static_cast<std::size_t>(r * cols + c)]; }
};

using OperatorRow = std::vector<OperatorPoly>;

namespace detail {

/// Realified left multiplication by sum_alpha u_alpha i_alpha d_{h,alpha}
/// with u_alpha = +1 (dbar) or conjugated units (d): entry (gamma, beta).
inline OperatorMatrix realified_fueter(Algebra a, int n, int h, bool conjugate_units) {
    const int d = dimension(a);
    const auto& sc = structure_constants(a);
    OperatorMatrix M(d, d, d * n);
    for (int alpha = 0; alpha < d; ++alpha)
        for (int beta = 0; beta < d; ++beta) {
            const UnitProduct& up = sc(alpha, beta);
            const int s = up.sign * ((conjugate_units && alpha > 0) ? -1 : 1);
            M.at(up.index, beta) += OperatorPoly::symbol(d * n, d * h + alpha, Rational(s));
        }
    return M;
}

inline OperatorMatrix multiply(const OperatorMatrix& A, const OperatorMatrix& B) {
    if (A.cols != B.rows)
        throw std::invalid_argument("operator matrix shapes do not match");
    const int nsym = A.entries.empty() ? 0 : A.entries.front().nsymbols();
    OperatorMatrix C(A.rows, B.cols, nsym);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            if (A.at(i, k).is_zero())
                continue;
            for (int j = 0; j < B.cols; ++j)
                if (!B.at(k, j).is_zero())
                    C.at(i, j) += A.at(i, k) * B.at(k, j);
        }
    return C;
}

}  // namespace detail

/// Dbar = [Dbar_{p_1}; ...; Dbar_{p_n}], row (h, gamma), column beta.
inline OperatorMatrix build_dbar_matrix(int n, Algebra a) {
    if (n < 1)
        throw std::invalid_argument("need at least one variable");
    const int d = dimension(a);
    OperatorMatrix M(d * n, d, d * n);
    for (int h = 0; h < n; ++h) {
        const OperatorMatrix B = detail::realified_fueter(a, n, h, false);
        for (int g = 0; g < d; ++g)
            for (int b = 0; b < d; ++b)
                M.at(d * h + g, b) = B.at(g, b);
    }
    return M;
}

/// Applies an operator matrix to a vector of real polynomials.
inline std::vector<HPoly> apply_matrix(const OperatorMatrix& M, const std::vector<HPoly>& v) {
    if (static_cast<int>(v.size()) != M.cols)
        throw std::invalid_argument("vector length does not match the operator matrix");
    std::vector<HPoly> out;
    for (int r = 0; r < M.rows; ++r) {
        HPoly s(v.front().algebra(), v.front().nvars());
        for (int c = 0; c < M.cols; ++c)
            if (!M.at(r, c).is_zero())
                s += M.at(r, c).apply(v[static_cast<std::size_t>(c)]);
        out.push_back(std::move(s));
    }
    return out;
}

/// Real components of a polynomial vector, flattened as (h, gamma).
inline std::vector<HPoly> realify(const HPolyVector& g) {
    std::vector<HPoly> out;
    for (const auto& p : g)
        for (int a = 0; a < p.dim(); ++a)
            out.push_back(p.component(a));
    return out;
}

inline std::vector<HPoly> realify(const HPoly& u) { return realify(HPolyVector{u}); }

/// v . M, a row of length M.cols.
inline OperatorRow row_times(const OperatorRow& v, const OperatorMatrix& M) {
    if (static_cast<int>(v.size()) != M.rows)
        throw std::invalid_argument("row length does not match the operator matrix");
    const int nsym = M.entries.empty() ? 0 : M.entries.front().nsymbols();
    OperatorRow out(static_cast<std::size_t>(M.cols), OperatorPoly(nsym));
    for (int r = 0; r < M.rows; ++r) {
        if (v[static_cast<std::size_t>(r)].is_zero())
            continue;
        for (int c = 0; c < M.cols; ++c)
            if (!M.at(r, c).is_zero())
                out[static_cast<std::size_t>(c)] += v[static_cast<std::size_t>(r)] * M.at(r, c);
    }
    return out;
}

inline bool verify_syzygy(const OperatorRow& v, const OperatorMatrix& D) {
    for (const auto& e : row_times(v, D))
        if (!e.is_zero())
            return false;
    return true;
}

/// The realified conditions Lap_m g_l = dbar_l (d_m g_m), one row per real
/// component delta: v_(l, delta) = Lap_m, v_(m, beta) = -(Dbar_l D_m)[delta][beta].
/// Indices are 0-based.
inline std::vector<OperatorRow> compat_syzygy_rows(int l, int m, int n, Algebra a) {
    if (l == m)
        throw std::invalid_argument("compatibility rows need l != m");
    if (l < 0 || m < 0 || l >= n || m >= n)
        throw std::out_of_range("variable index out of range");
    const int d = dimension(a);
    const int nsym = d * n;
    OperatorPoly lap(nsym);
    for (int alpha = 0; alpha < d; ++alpha) {
        Exponent e(static_cast<std::size_t>(nsym), 0);
        e[static_cast<std::size_t>(d * m + alpha)] = 2;
        lap.add_term(e, 1);
    }
    const OperatorMatrix P =
        detail::multiply(detail::realified_fueter(a, n, l, false), detail::realified_fueter(a, n, m, true));
    std::vector<OperatorRow> rows;
    for (int delta = 0; delta < d; ++delta) {
        OperatorRow v(static_cast<std::size_t>(d * n), OperatorPoly(nsym));
        v[static_cast<std::size_t>(d * l + delta)] = lap;
        for (int beta = 0; beta < d; ++beta)
            v[static_cast<std::size_t>(d * m + beta)] = -P.at(delta, beta);
        rows.push_back(std::move(v));
    }
    return rows;
}

inline std::vector<OperatorRow> all_compat_rows(int n, Algebra a) {
    std::vector<OperatorRow> out;
    for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
            if (l != m)
                for (auto& r : compat_syzygy_rows(l, m, n, a))
                    out.push_back(std::move(r));
    return out;
}

enum class RankBackend { exact, modp };

inline const char* backend_name(RankBackend b) { return b == RankBackend::exact ? "exact-rational" : "mod-p61"; }

struct SyzygyOptions {
    RankBackend backend = RankBackend::exact;
    std::size_t max_entries = 200'000'000;
};

struct SyzygyDim {
    int degree;
    std::size_t unknowns;
    std::size_t equations;
    std::size_t rank;
    std::size_t dim;  // unknowns - rank
    RankBackend backend;
};

namespace detail {

inline std::vector<Exponent> monomials_of_degree(int nsym, int k) {
    std::vector<Exponent> out;
    Exponent e(static_cast<std::size_t>(nsym), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == nsym - 1) {
            e[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(left);
            out.push_back(e);
            return;
        }
        for (int v = left; v >= 0; --v) {
            e[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(v);
            rec(pos + 1, left - v);
        }
    };
    rec(0, k);
    return out;
}

template <class T>
std::size_t rank_of(const std::vector<SparseRow<Rational>>& rows, std::size_t ncols, std::size_t cap) {
    Echelon<T> e(ncols, cap);
    for (const auto& r : rows) {
        if constexpr (std::is_same_v<T, Rational>) {
            e.insert(r);
        } else {
            SparseRow<T> m;
            for (std::size_t i = 0; i < r.size(); ++i)
                m.push(r.cols[i], T::from_rational(r.vals[i]));
            e.insert(m);
        }
    }
    return e.rank();
}

inline std::size_t rank_with(RankBackend b, const std::vector<SparseRow<Rational>>& rows, std::size_t ncols,
                             std::size_t cap) {
    return b == RankBackend::exact ? rank_of<Rational>(rows, ncols, cap) : rank_of<Mod61>(rows, ncols, cap);
}

}  // namespace detail

/// dim {v : entries homogeneous of degree k, v . Dbar = 0}.  One row per
/// unknown coefficient (r, M) maps to the coefficients of (v . Dbar)_beta
/// at M + e_s; the dimension is the nullity.
inline SyzygyDim syzygy_dim(int k, int n, Algebra a, const SyzygyOptions& opt = {}) {
    if (k < 0)
        throw std::invalid_argument("degree must be nonnegative");
    const OperatorMatrix D = build_dbar_matrix(n, a);
    const int d = dimension(a);
    const int nsym = d * n;
    const auto monos = detail::monomials_of_degree(nsym, k);
    const auto targets = detail::monomials_of_degree(nsym, k + 1);
    std::map<Exponent, std::uint32_t> tindex;
    for (std::uint32_t i = 0; i < targets.size(); ++i)
        tindex.emplace(targets[i], i);
    std::vector<SparseRow<Rational>> rows;
    rows.reserve(monos.size() * static_cast<std::size_t>(D.rows));
    for (int r = 0; r < D.rows; ++r)
        for (const auto& M : monos) {
            std::vector<std::pair<std::uint32_t, Rational>> entries;
            for (int beta = 0; beta < D.cols; ++beta)
                for (const auto& [e, c] : D.at(r, beta).terms()) {
                    Exponent N = M;
                    for (std::size_t s = 0; s < N.size(); ++s)
                        N[s] = static_cast<std::uint8_t>(N[s] + e[s]);
                    entries.emplace_back(static_cast<std::uint32_t>(tindex.at(N) * static_cast<std::size_t>(D.cols) + static_cast<std::size_t>(beta)), c);
                }
            rows.push_back(SparseRow<Rational>::from_entries(std::move(entries)));
        }
    const std::size_t ncols = targets.size() * static_cast<std::size_t>(D.cols);
    SyzygyDim out{k, rows.size(), ncols, 0, 0, opt.backend};
    try {
        out.rank = detail::rank_with(opt.backend, rows, ncols, opt.max_entries);
    } catch (const ResourceCapExceeded& e) {
        throw ResourceCapExceeded(std::string("syzygy dimension at degree ") + std::to_string(k) + ", n=" +
                                  std::to_string(n) + ", " + algebra_name(a) + ": " + std::to_string(rows.size()) +
                                  " unknowns x " + std::to_string(ncols) + " equations; " + e.what());
    }
    out.dim = out.unknowns - out.rank;
    return out;
}

namespace detail {

inline SparseRow<Rational> row_coefficients(const OperatorRow& v, int k, const std::map<Exponent, std::uint32_t>& index) {
    std::vector<std::pair<std::uint32_t, Rational>> entries;
    const std::size_t nm = index.size();
    for (std::size_t r = 0; r < v.size(); ++r)
        for (const auto& [e, c] : v[r].terms()) {
            if (total_degree(e) != k)
                throw std::invalid_argument("row is not homogeneous of the requested degree");
            entries.emplace_back(static_cast<std::uint32_t>(r * nm + index.at(e)), c);
        }
    return SparseRow<Rational>::from_entries(std::move(entries));
}

}  // namespace detail

/// Rank of the degree-k part of the submodule generated by the compat rows:
/// every compat row times every monomial of degree k - 2.
inline std::size_t compat_span_rank(int k, int n, Algebra a, const SyzygyOptions& opt = {}) {
    if (k < 2)
        return 0;
    const int nsym = dimension(a) * n;
    const auto monos = detail::monomials_of_degree(nsym, k);
    std::map<Exponent, std::uint32_t> index;
    for (std::uint32_t i = 0; i < monos.size(); ++i)
        index.emplace(monos[i], i);
    std::vector<SparseRow<Rational>> rows;
    for (const auto& base : all_compat_rows(n, a))
        for (const auto& s : detail::monomials_of_degree(nsym, k - 2)) {
            OperatorPoly mono(nsym);
            mono.add_term(s, 1);
            OperatorRow v;
            for (const auto& e : base)
                v.push_back(e * mono);
            rows.push_back(detail::row_coefficients(v, k, index));
        }
    return detail::rank_with(opt.backend, rows, monos.size() * static_cast<std::size_t>(dimension(a) * n), opt.max_entries);
}

struct WitnessEntry {
    int l;
    int m;
    bool nonzero;
};

/// Residuals z_(l,m) on the data g_a = x_(b,0)^2, g_k = 0 otherwise
/// (0-based a != b).
inline std::vector<WitnessEntry> independence_witness(int a, int b, int n, Algebra alg) {
    if (a == b)
        throw std::invalid_argument("witness needs a != b");
    if (a < 0 || b < 0 || a >= n || b >= n)
        throw std::out_of_range("variable index out of range");
    HPolyVector g(static_cast<std::size_t>(n), HPoly(alg, n));
    const HPoly xb0 = HPoly::coordinate(alg, n, b, 0);
    g[static_cast<std::size_t>(a)] = xb0 * xb0;
    std::vector<WitnessEntry> out;
    for (const auto& r : compat_residuals(g))
        out.push_back({r.l, r.m, !r.residual.is_zero()});
    return out;
}

}  // namespace fueter
