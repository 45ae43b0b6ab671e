#pragma once

// Exact polynomial solutions of the nonhomogeneous system dbar u = g,
// regular kernels, and extensions of boundary data off affine
// hypersurfaces.
//
// The unknown u is written in the divided-power basis x^A / A!, in which
// every d/dx is a shift and the realified operator has entries in
// {-1, 0, 1}.  The system splits into independent blocks by per-variable
// multidegree D: the coefficients of u of multidegree D meet only the
// coefficients of g_h of multidegree D - e_h.  Each block is factored
// once and reused.

#include "fueter/hypersurface.hpp"
#include "fueter/sparse_linalg.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <tuple>

namespace fueter {

class CompatibilityViolation : public std::invalid_argument {
  public:
    explicit CompatibilityViolation(std::vector<CompatResidual> r)
        : std::invalid_argument(describe(r)), residuals_(std::move(r)) {}
    const std::vector<CompatResidual>& residuals() const { return residuals_; }

  private:
    static std::string describe(const std::vector<CompatResidual>& r) {
        std::ostringstream os;
        os << "data violate the compatibility conditions:";
        for (const auto& c : r)
            os << " z_(" << c.l + 1 << "," << c.m + 1 << ") has " << c.residual.size() << " nonzero terms;";
        return os.str();
    }
    std::vector<CompatResidual> residuals_;
};

/// The graded system has no solution of the allowed degree.  For
/// compatible quaternionic data this never happens; for octonionic data
/// with three or more variables the compatibility conditions are not
/// sufficient and the message names the inconsistent block.
class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

using Multidegree = std::vector<int>;

inline Multidegree multidegree(const Exponent& e, int d, int n) {
    Multidegree D(static_cast<std::size_t>(n), 0);
    for (int h = 0; h < n; ++h)
        for (int a = 0; a < d; ++a)
            D[static_cast<std::size_t>(h)] += e[static_cast<std::size_t>(h * d + a)];
    return D;
}

/// Exponent vectors of length d summing to k, in ascending grlex-compatible
/// (reverse lexicographic on the vector) order.
inline std::vector<std::vector<std::uint8_t>> compositions(int k, int d) {
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> cur(static_cast<std::size_t>(d), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == d - 1) {
            cur[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(left);
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(v);
            rec(pos + 1, left - v);
        }
    };
    rec(0, k);
    return out;
}

/// All monomials of multidegree D in n variables of dimension d.
inline std::vector<Exponent> block_monomials(const Multidegree& D, int d) {
    std::vector<Exponent> out{Exponent{}};
    for (int v : D) {
        const auto parts = compositions(v, d);
        std::vector<Exponent> next;
        next.reserve(out.size() * parts.size());
        for (const auto& e : out)
            for (const auto& p : parts) {
                Exponent x = e;
                x.insert(x.end(), p.begin(), p.end());
                next.push_back(std::move(x));
            }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end(), GrlexLess{});
    return out;
}

inline mpz_class exponent_factorial(const Exponent& e) {
    mpz_class f = 1;
    for (auto v : e) {
        mpz_class t;
        mpz_fac_ui(t.get_mpz_t(), v);
        f *= t;
    }
    return f;
}

/// One block of the realified system.  Columns run over (monomial, beta)
/// in reverse, so that elimination pivots on the grlex-largest unknowns
/// first and the free unknowns set to zero are the smallest ones.
struct DbarBlock {
    Algebra algebra;
    int n;
    Multidegree D;
    std::vector<Exponent> unknowns;
    std::map<Exponent, std::uint32_t> unknown_index;
    std::vector<std::pair<int, Exponent>> equations;  // (h, B); rows (h, B, gamma)
    std::map<std::pair<int, Exponent>, std::uint32_t> equation_index;
    std::unique_ptr<Factorization<Rational>> factorization;

    int dim() const { return dimension(algebra); }
    std::size_t ncols() const { return unknowns.size() * static_cast<std::size_t>(dim()); }
    std::uint32_t column(std::uint32_t mono, int beta) const {
        return static_cast<std::uint32_t>(ncols() - 1 - (mono * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(beta)));
    }
    std::pair<std::uint32_t, int> unknown_of(std::uint32_t col) const {
        const std::size_t flat = ncols() - 1 - col;
        return {static_cast<std::uint32_t>(flat / static_cast<std::size_t>(dim())), static_cast<int>(flat % static_cast<std::size_t>(dim()))};
    }
};

inline std::unique_ptr<DbarBlock> build_block(Algebra a, int n, const Multidegree& D) {
    auto blk = std::make_unique<DbarBlock>();
    blk->algebra = a;
    blk->n = n;
    blk->D = D;
    const int d = dimension(a);
    blk->unknowns = block_monomials(D, d);
    for (std::uint32_t i = 0; i < blk->unknowns.size(); ++i)
        blk->unknown_index.emplace(blk->unknowns[i], i);
    for (int h = 0; h < n; ++h) {
        if (D[static_cast<std::size_t>(h)] == 0)
            continue;
        Multidegree E = D;
        --E[static_cast<std::size_t>(h)];
        for (auto& B : block_monomials(E, d)) {
            blk->equation_index.emplace(std::make_pair(h, B), static_cast<std::uint32_t>(blk->equations.size()));
            blk->equations.emplace_back(h, std::move(B));
        }
    }
    const auto& sc = structure_constants(a);
    std::vector<SparseRow<Rational>> rows;
    rows.reserve(blk->equations.size() * static_cast<std::size_t>(d));
    for (const auto& [h, B] : blk->equations)
        for (int gamma = 0; gamma < d; ++gamma) {
            std::vector<std::pair<std::uint32_t, Rational>> entries;
            for (int alpha = 0; alpha < d; ++alpha)
                for (int beta = 0; beta < d; ++beta) {
                    const UnitProduct& up = sc(alpha, beta);
                    if (up.index != gamma)
                        continue;
                    Exponent A = B;
                    ++A[static_cast<std::size_t>(h * d + alpha)];
                    entries.emplace_back(blk->column(blk->unknown_index.at(A), beta), Rational(up.sign));
                }
            rows.push_back(SparseRow<Rational>::from_entries(std::move(entries)));
        }
    blk->factorization = std::make_unique<Factorization<Rational>>(rows, blk->ncols());
    return blk;
}

class BlockCache {
  public:
    const DbarBlock& get(Algebra a, int n, const Multidegree& D) {
        const auto key = std::make_tuple(a, n, D);
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = blocks_.find(key);
            if (it != blocks_.end())
                return *it->second;
        }
        auto blk = build_block(a, n, D);
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = blocks_.emplace(key, std::move(blk));
        return *it->second;
    }

  private:
    std::mutex mu_;
    std::map<std::tuple<Algebra, int, Multidegree>, std::unique_ptr<DbarBlock>> blocks_;
};

inline BlockCache& block_cache() {
    static BlockCache cache;
    return cache;
}

}  // namespace detail

struct SolveOptions {
    /// Largest allowed degree of the data; the solution has degree at most
    /// one more.  Negative means deg g.
    int degree_budget = -1;
};

/// u with dbar_system(u) = g exactly and deg u <= deg g + 1.
inline HPoly solve_crf(const HPolyVector& g, const SolveOptions& opt = {}) {
    check_vector(g);
    const Algebra a = g.front().algebra();
    const int n = static_cast<int>(g.size());
    const int d = dimension(a);
    int deg = -1;
    for (const auto& p : g)
        deg = std::max(deg, p.degree());
    if (opt.degree_budget >= 0 && deg > opt.degree_budget)
        throw BudgetExceeded("data degree " + std::to_string(deg) + " exceeds the budget " +
                             std::to_string(opt.degree_budget));
    if (n >= 2) {
        std::vector<CompatResidual> bad;
        for (auto& r : compat_residuals(g))
            if (!r.residual.is_zero())
                bad.push_back(std::move(r));
        if (!bad.empty())
            throw CompatibilityViolation(std::move(bad));
    }

    // group data terms by the block they feed
    std::map<detail::Multidegree, std::vector<std::tuple<int, const Exponent*, const HExact*>>> by_block;
    for (int h = 0; h < n; ++h)
        for (const auto& [B, c] : g[static_cast<std::size_t>(h)].terms()) {
            detail::Multidegree D = detail::multidegree(B, d, n);
            ++D[static_cast<std::size_t>(h)];
            by_block[D].emplace_back(h, &B, &c);
        }

    HPoly u(a, n);
    for (const auto& [D, terms] : by_block) {
        const detail::DbarBlock& blk = detail::block_cache().get(a, n, D);
        std::vector<Rational> rhs(blk.equations.size() * static_cast<std::size_t>(d), Rational(0));
        for (const auto& [h, B, c] : terms) {
            const std::size_t row = blk.equation_index.at({h, *B}) * static_cast<std::size_t>(d);
            const Rational f(detail::exponent_factorial(*B));
            for (int gamma = 0; gamma < d; ++gamma)
                rhs[row + static_cast<std::size_t>(gamma)] = (*c)[gamma] * f;
        }
        const auto x = blk.factorization->solve(rhs);
        if (!x) {
            std::ostringstream os;
            os << "graded system is inconsistent in the block of multidegree (";
            for (std::size_t i = 0; i < D.size(); ++i)
                os << (i ? "," : "") << D[i];
            os << "); raising the degree budget cannot help because blocks are independent";
            throw BudgetExceeded(os.str());
        }
        std::vector<HExact> coef(blk.unknowns.size(), HExact(a));
        for (std::uint32_t col = 0; col < x->size(); ++col) {
            if (is_zero((*x)[col]))
                continue;
            const auto [mono, beta] = blk.unknown_of(col);
            coef[mono][beta] = (*x)[col];
        }
        for (std::size_t i = 0; i < coef.size(); ++i)
            if (!coef[i].is_zero())
                u.add_term(blk.unknowns[i], coef[i] / Rational(detail::exponent_factorial(blk.unknowns[i])));
    }
    if (dbar_system(u) != g)
        throw std::logic_error("solver output failed the exact residual check");
    return u;
}

/// Basis of {u : deg u <= d, dbar_system(u) = 0}, ordered by degree and
/// then by block.
inline std::vector<HPoly> regular_kernel_basis(Algebra a, int n, int d) {
    if (d < 0)
        throw std::invalid_argument("degree must be nonnegative");
    if (n < 1)
        throw std::invalid_argument("need at least one variable");
    const int dim = dimension(a);
    std::vector<HPoly> out;
    for (int k = 0; k <= d; ++k) {
        // multidegrees of total k, first variable most significant
        std::vector<detail::Multidegree> Ds;
        for (const auto& c : detail::compositions(k, n)) {
            detail::Multidegree D(c.begin(), c.end());
            Ds.push_back(std::move(D));
        }
        std::reverse(Ds.begin(), Ds.end());
        for (const auto& D : Ds) {
            const detail::DbarBlock& blk = detail::block_cache().get(a, n, D);
            for (const auto& v : blk.factorization->echelon().nullspace_basis()) {
                HPoly p(a, n);
                std::vector<HExact> coef(blk.unknowns.size(), HExact(a));
                for (std::uint32_t col = 0; col < v.size(); ++col)
                    if (!is_zero(v[col])) {
                        const auto [mono, beta] = blk.unknown_of(col);
                        coef[mono][beta] = v[col];
                    }
                for (std::size_t i = 0; i < coef.size(); ++i)
                    if (!coef[i].is_zero())
                        p.add_term(blk.unknowns[i], coef[i] / Rational(detail::exponent_factorial(blk.unknowns[i])));
                out.push_back(std::move(p));
            }
        }
        (void)dim;
    }
    return out;
}

// Extensions off an affine hypersurface S = {rho = 0}.  With k the chart
// coordinate and t = rho taking its slot, dbar_h = dbar'_h + G_h d/dt where
// G_h is the quaternion of block h of grad rho and dbar'_h skips slot k.
// F = f + sum_{j<m} t^(j+1) A_j(x') is then a linear problem in the A_j.

class NotAdmissibleOrBudget : public std::runtime_error {
  public:
    NotAdmissibleOrBudget(std::string what, std::vector<int> tried)
        : std::runtime_error(std::move(what)), tried_(std::move(tried)) {}
    /// Total degrees of F that were searched.
    const std::vector<int>& degrees_tried() const { return tried_; }

  private:
    std::vector<int> tried_;
};

class NoPolynomialExtensionWithinBudget : public NotAdmissibleOrBudget {
  public:
    using NotAdmissibleOrBudget::NotAdmissibleOrBudget;
};

class NotAdmissible : public std::invalid_argument {
  public:
    NotAdmissible() : std::invalid_argument("boundary data are not admissible on this hypersurface") {}
};

/// rho-adapted coordinates of an affine S.
struct AffineChart {
    int k;                      // slot carrying t = rho
    std::array<HExact, 2> G;    // gradient blocks
    HPoly to_chart;             // x_k as a polynomial in (t, x'), in slot k
    HPoly rho;

    explicit AffineChart(const Hypersurface& S) : k(S.chart_coordinate()), rho(S.rho()) {
        const auto c = S.linear_part();
        G = {HExact(Algebra::H), HExact(Algebra::H)};
        for (int i = 0; i < 8; ++i)
            G[static_cast<std::size_t>(i / 4)][i % 4] = c[static_cast<std::size_t>(i)];
        const Rational ck = c[static_cast<std::size_t>(k)];
        const HPoly xk = HPoly::coordinate(Algebra::H, 2, k / 4, k % 4);
        const HPoly rest = S.rho() - xk * ck;
        to_chart = (xk - rest) * Rational(1 / ck);
    }

    HPoly forward(const HPoly& p) const { return substitute(p, k, to_chart); }
    HPoly backward(const HPoly& p) const { return substitute(p, k, rho); }

    /// Coefficients p_i(x') of t^i.
    std::vector<HPoly> t_slices(const HPoly& p) const {
        std::vector<HPoly> out;
        for (const auto& [e, c] : p.terms()) {
            const int i = e[static_cast<std::size_t>(k)];
            while (static_cast<int>(out.size()) <= i)
                out.emplace_back(Algebra::H, 2);
            Exponent r = e;
            r[static_cast<std::size_t>(k)] = 0;
            out[static_cast<std::size_t>(i)].add_term(std::move(r), c);
        }
        return out;
    }
};

/// P in the ideal (rho^m): the t-slices below m vanish, checked through
/// derivatives along x_k restricted to S.
inline bool divisible_by_rho_power(const HPoly& P, const Hypersurface& S, int m) {
    const int k = S.chart_coordinate();
    HPoly Q = P;
    for (int j = 0; j < m; ++j) {
        if (!restrict_to(Q, S).is_zero())
            return false;
        Q = partial_flat(Q, k);
    }
    return true;
}

struct ExtensionResult {
    HPoly F;
    int degree;                 // budget at which it was found
    std::vector<int> degrees_tried;
};

namespace detail {

/// Searches F = f + sum_{j<m} t^(j+1) A_j with deg F <= b and the t^i
/// coefficients of dbar_h F zero for i < m.
inline std::optional<HPoly> extension_at_budget(const AffineChart& ch, const std::vector<HPoly>& fs, int m, int b) {
    constexpr int d = 4;
    const int k = ch.k;
    // unknowns: (j, monomial in x' of degree <= b - j - 1, beta)
    std::map<std::pair<int, Exponent>, std::uint32_t> uidx;
    std::vector<std::pair<int, Exponent>> unknowns;
    for (int j = 0; j < m; ++j) {
        const int maxdeg = b - j - 1;
        for (int deg = 0; deg <= maxdeg; ++deg)
            for (const auto& parts : compositions(deg, 7)) {
                Exponent e(8, 0);
                for (int s = 0, q = 0; s < 8; ++s)
                    if (s != k)
                        e[static_cast<std::size_t>(s)] = parts[static_cast<std::size_t>(q++)];
                uidx.emplace(std::make_pair(j, e), static_cast<std::uint32_t>(unknowns.size()));
                unknowns.emplace_back(j, e);
            }
    }
    const std::uint32_t ncols = static_cast<std::uint32_t>(unknowns.size()) * d;
    const std::uint32_t rhs_col = ncols;
    const auto& sc = structure_constants(Algebra::H);

    // equation (i, h, gamma, N) -> entries
    std::map<std::tuple<int, int, int, Exponent>, std::vector<std::pair<std::uint32_t, Rational>>> eqs;
    auto add = [&](int i, int h, int gamma, const Exponent& N, std::uint32_t col, const Rational& v) {
        if (!is_zero(v))
            eqs[{i, h, gamma, N}].emplace_back(col, v);
    };
    // dbar'_h X + (i+1) G_h Y contributions of a single coefficient c at x'^M,
    // component beta, either as X (slice i) or Y (slice i)
    auto apply_dprime = [&](int i, int h, const Exponent& M, int beta, const Rational& s, std::uint32_t col) {
        for (int alpha = 0; alpha < d; ++alpha) {
            const int slot = 4 * h + alpha;
            if (slot == k || M[static_cast<std::size_t>(slot)] == 0)
                continue;
            Exponent N = M;
            --N[static_cast<std::size_t>(slot)];
            const UnitProduct& up = sc(alpha, beta);
            add(i, h, up.index, N, col, s * up.sign * M[static_cast<std::size_t>(slot)]);
        }
    };
    auto apply_G = [&](int i, int h, const Exponent& M, int beta, const Rational& s, std::uint32_t col) {
        const HExact& G = ch.G[static_cast<std::size_t>(h)];
        for (int alpha = 0; alpha < d; ++alpha) {
            if (is_zero(G[alpha]))
                continue;
            const UnitProduct& up = sc(alpha, beta);
            add(i, h, up.index, M, col, s * (i + 1) * up.sign * G[alpha]);
        }
    };
    for (std::uint32_t u = 0; u < unknowns.size(); ++u) {
        const auto& [j, M] = unknowns[u];
        for (int beta = 0; beta < d; ++beta) {
            const std::uint32_t col = u * d + static_cast<std::uint32_t>(beta);
            for (int h = 0; h < 2; ++h) {
                // A_j sits in slice j+1: dbar' acts at i = j+1, G d/dt at i = j
                if (j + 1 < m)
                    apply_dprime(j + 1, h, M, beta, Rational(1), col);
                apply_G(j, h, M, beta, Rational(1), col);
            }
        }
    }
    // data: slice i of f enters dbar' at i and G d/dt at i - 1; moved to the right
    for (int i = 0; i < static_cast<int>(fs.size()); ++i)
        for (const auto& [M, c] : fs[static_cast<std::size_t>(i)].terms())
            for (int beta = 0; beta < d; ++beta) {
                if (is_zero(c[beta]))
                    continue;
                for (int h = 0; h < 2; ++h) {
                    if (i < m)
                        apply_dprime(i, h, M, beta, -c[beta], rhs_col);
                    if (i >= 1 && i - 1 < m)
                        apply_G(i - 1, h, M, beta, -c[beta], rhs_col);
                }
            }
    Echelon<Rational> ech(ncols + 1);
    for (auto& [key, entries] : eqs) {
        ech.insert(SparseRow<Rational>::from_entries(std::move(entries)));
        if (ech.has_pivot(rhs_col))
            return std::nullopt;
    }
    const std::vector<Rational> x = ech.back_substitute(rhs_col);
    HPoly Fc(Algebra::H, 2);
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (const auto& [M, c] : fs[i].terms()) {
            Exponent e = M;
            e[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(i);
            Fc.add_term(std::move(e), c);
        }
    for (std::uint32_t u = 0; u < unknowns.size(); ++u) {
        HExact c(Algebra::H);
        for (int beta = 0; beta < d; ++beta)
            c[beta] = x[u * d + static_cast<std::uint32_t>(beta)];
        if (c.is_zero())
            continue;
        Exponent e = unknowns[u].second;
        e[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(unknowns[u].first + 1);
        Fc.add_term(std::move(e), c);
    }
    return ch.backward(Fc);
}

}  // namespace detail

struct ExtendOptions {
    /// Largest total degree of F searched; negative means deg f + 2.
    int degree_budget = -1;
};

/// F with F - f in (rho) and every component of dbar_system(F) in (rho^m).
inline ExtensionResult crf_extend(const HPoly& f, const Hypersurface& S, int m, const ExtendOptions& opt = {}) {
    if (!S.is_affine())
        throw std::invalid_argument("extensions are computed on affine hypersurfaces only");
    if (m < 1)
        throw std::invalid_argument("extension order must be at least 1");
    if (f.algebra() != Algebra::H || f.nvars() != 2)
        throw std::invalid_argument("boundary data must be quaternionic in two variables");
    const AffineChart ch(S);
    const std::vector<HPoly> fs = ch.t_slices(ch.forward(f));
    const int lo = std::max(f.degree(), 0);
    const int hi = opt.degree_budget >= 0 ? opt.degree_budget : lo + 2;
    std::vector<int> tried;
    for (int b = lo; b <= hi; ++b) {
        tried.push_back(b);
        if (auto F = detail::extension_at_budget(ch, fs, m, b)) {
            for (const auto& g : dbar_system(*F))
                if (!divisible_by_rho_power(g, S, m))
                    throw std::logic_error("extension failed the divisibility check");
            if (!restrict_to(*F - f, S).is_zero())
                throw std::logic_error("extension does not restrict to the data");
            return {std::move(*F), b, std::move(tried)};
        }
    }
    std::ostringstream os;
    os << "no extension with dbar F in (rho^" << m << ") of degree " << lo << ".." << hi;
    throw NotAdmissibleOrBudget(os.str(), std::move(tried));
}

struct JumpSplit {
    HPoly plus;   // regular, restricts to f
    HPoly minus;  // zero
    int degree;
    std::vector<int> degrees_tried;
};

/// Polynomial jump decomposition f = F+|_S - F-|_S with F- = 0: a globally
/// regular polynomial F+ with F+ - f in (rho).
inline JumpSplit jump_split(const HPoly& f, const Hypersurface& S, const ExtendOptions& opt = {}) {
    if (!S.is_affine())
        throw std::invalid_argument("jumps are computed on affine hypersurfaces only");
    if (!admissibility_affine(f, S).admissible())
        throw NotAdmissible();
    const AffineChart ch(S);
    const std::vector<HPoly> fs = ch.t_slices(ch.forward(f));
    const int lo = std::max(f.degree(), 0);
    const int hi = opt.degree_budget >= 0 ? opt.degree_budget : lo + 2;
    std::vector<int> tried;
    for (int b = lo; b <= hi; ++b) {
        tried.push_back(b);
        // every t-slice of dbar F up to the top degree must vanish
        if (auto F = detail::extension_at_budget(ch, fs, b + 1, b)) {
            if (!is_zero(dbar_system(*F)) || !restrict_to(*F - f, S).is_zero())
                throw std::logic_error("jump extension failed its exact check");
            return {std::move(*F), HPoly(Algebra::H, 2), b, std::move(tried)};
        }
    }
    std::ostringstream os;
    os << "no regular polynomial extension of degree " << lo << ".." << hi;
    throw NoPolynomialExtensionWithinBudget(os.str(), std::move(tried));
}

}  // namespace fueter
