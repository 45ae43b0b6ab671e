#include "fueter/crfsolve.hpp"

#include <gtest/gtest.h>

using namespace fueter;

namespace {

constexpr Algebra H = Algebra::H;
constexpr Algebra O = Algebra::O;

HPoly x(int a) { return HPoly::coordinate(H, 2, 0, a); }
HPoly y(int a) { return HPoly::coordinate(H, 2, 1, a); }
HPoly c(const Rational& r) { return HPoly::constant(H, 2, r); }
HExact u(int a, int sign = 1) { return HExact::unit(H, a, sign); }

HPoly counterexample() { return x(1) * y(0) * u(2, -1) + x(0) * y(0) * u(3); }

std::vector<Hypersurface> planes() {
    return {Hypersurface(y(3)), Hypersurface(x(0) + y(1) * Rational(2) - c(1)),
            Hypersurface(x(1) - y(2) + x(3) * Rational(3) - c(2)), Hypersurface(y(0) * Rational(-2) + x(2) + c(3))};
}

// Dense rank over Q by plain Gaussian elimination, independent of the
// sparse code.
std::size_t dense_rank(std::vector<std::vector<Rational>> M) {
    std::size_t rank = 0;
    const std::size_t cols = M.empty() ? 0 : M[0].size();
    for (std::size_t c0 = 0; c0 < cols && rank < M.size(); ++c0) {
        std::size_t p = rank;
        while (p < M.size() && M[p][c0] == 0)
            ++p;
        if (p == M.size())
            continue;
        std::swap(M[p], M[rank]);
        for (std::size_t r = 0; r < M.size(); ++r)
            if (r != rank && M[r][c0] != 0) {
                const Rational f = M[r][c0] / M[rank][c0];
                for (std::size_t k = c0; k < cols; ++k)
                    M[r][k] -= f * M[rank][k];
            }
        ++rank;
    }
    return rank;
}

// dim {u : deg u = k, dbar u = 0} from the standard monomial basis
std::size_t brute_kernel_dim(Algebra a, int n, int k) {
    const int d = dimension(a);
    std::vector<Exponent> monos;
    Exponent e(static_cast<std::size_t>(d * n), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == d * n - 1) {
            e[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(left);
            monos.push_back(e);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            e[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(v);
            rec(pos + 1, left - v);
        }
    };
    rec(0, k);
    // columns: images of x^A i_beta, flattened over (h, monomial, gamma)
    std::map<std::tuple<int, Exponent, int>, std::size_t> rowid;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> cols;
    for (const auto& A : monos)
        for (int beta = 0; beta < d; ++beta) {
            HPoly p(a, n);
            p.add_term(A, HExact::unit(a, beta));
            std::vector<std::pair<std::size_t, Rational>> col;
            for (int h = 0; h < n; ++h) {
                const HPoly img = fueter_dbar(p, h);
                for (const auto& [B, cf] : img.terms())
                    for (int g = 0; g < d; ++g)
                        if (cf[g] != 0) {
                            auto key = std::make_tuple(h, B, g);
                            auto it = rowid.emplace(key, rowid.size()).first;
                            col.emplace_back(it->second, cf[g]);
                        }
            }
            cols.push_back(std::move(col));
        }
    std::vector<std::vector<Rational>> M(cols.size(), std::vector<Rational>(rowid.size(), Rational(0)));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [r, v] : cols[j])
            M[j][r] = v;
    return cols.size() - dense_rank(std::move(M));
}

// Closed-form triangular construction of the order-m extension: with
// t = rho in slot k, A_i = -f_(i+1) - G^-1 dbar'(f_i + A_(i-1)) / (i+1) from
// one gradient block, and every block must agree.
std::optional<HPoly> recursion_extension(const HPoly& f, const Hypersurface& S, int m) {
    const auto cs = S.linear_part();
    int k = 0;
    while (cs[static_cast<std::size_t>(k)] == 0)
        ++k;
    const HPoly xk = HPoly::coordinate(H, 2, k / 4, k % 4);
    const HPoly chart = (xk - (S.rho() - xk * cs[static_cast<std::size_t>(k)])) * Rational(1 / cs[static_cast<std::size_t>(k)]);
    const HPoly ft = substitute(f, k, chart);
    auto slice = [&](const HPoly& p, int i) {
        HPoly s(H, 2);
        for (const auto& [e, cf] : p.terms())
            if (e[static_cast<std::size_t>(k)] == i) {
                Exponent r = e;
                r[static_cast<std::size_t>(k)] = 0;
                s.add_term(r, cf);
            }
        return s;
    };
    auto dprime = [&](const HPoly& p, int h) {
        HPoly s(H, 2);
        for (int a = 0; a < 4; ++a)
            if (4 * h + a != k)
                s += u(a) * partial(p, h, a);
        return s;
    };
    std::array<HExact, 2> G{HExact(H), HExact(H)};
    for (int i = 0; i < 8; ++i)
        G[static_cast<std::size_t>(i / 4)][i % 4] = cs[static_cast<std::size_t>(i)];
    const int h0 = G[0].is_zero() ? 1 : 0;
    HPoly F = ft, prev(H, 2);
    HPoly t_pow = HPoly::constant(H, 2, Rational(1));
    const HPoly t = xk;
    for (int i = 0; i < m; ++i) {
        const HPoly X = slice(ft, i) + prev;
        const HPoly Ai = -slice(ft, i + 1) - G[static_cast<std::size_t>(h0)].inverse() * dprime(X, h0) * Rational(1, i + 1);
        for (int h = 0; h < 2; ++h)
            if (!(dprime(X, h) + G[static_cast<std::size_t>(h)] * (slice(ft, i + 1) + Ai) * Rational(i + 1)).is_zero())
                return std::nullopt;
        t_pow = t_pow * t;
        F += t_pow * Ai;
        prev = Ai;
    }
    return substitute(F, k, S.rho());
}

HPoly random_regular(CorpusRng& rng, int deg) {
    const auto basis = regular_kernel_basis(H, 2, deg);
    HPoly F(H, 2);
    for (int t = 0; t < 5; ++t)
        F += basis[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(basis.size()) - 1))] * rng.hnumber(H, 2, 2);
    return F;
}

}  // namespace

TEST(SolveCrf, ZeroData) {
    EXPECT_TRUE(solve_crf({HPoly(H, 2), HPoly(H, 2)}).is_zero());
    EXPECT_TRUE(solve_crf({HPoly(O, 2), HPoly(O, 2)}).is_zero());
}

TEST(SolveCrf, RoundTripQuaternions) {
    CorpusRng rng(101);
    for (int trial = 0; trial < 50; ++trial) {
        const HPoly u0 = rng.hpoly(H, 2, 4, 6);
        const HPolyVector g = dbar_system(u0);
        const HPoly sol = solve_crf(g);
        ASSERT_EQ(dbar_system(sol), g) << "trial " << trial;
        int dg = -1;
        for (const auto& p : g)
            dg = std::max(dg, p.degree());
        EXPECT_LE(sol.degree(), dg + 1);
    }
}

TEST(SolveCrf, RoundTripOctonions) {
    CorpusRng rng(102);
    for (int trial = 0; trial < 50; ++trial) {
        const HPoly u0 = rng.hpoly(O, 2, 4, 5);
        const HPolyVector g = dbar_system(u0);
        ASSERT_EQ(dbar_system(solve_crf(g)), g) << "trial " << trial;
    }
}

TEST(SolveCrf, OneVariableIsAlwaysSolvable) {
    CorpusRng rng(103);
    for (Algebra a : {H, O})
        for (int trial = 0; trial < 5; ++trial) {
            const HPolyVector g{rng.hpoly(a, 1, 3, 4)};
            EXPECT_EQ(dbar_system(solve_crf(g)), g);
        }
}

TEST(SolveCrf, IncompatibleDataRejected) {
    const HPoly x20 = HPoly::coordinate(O, 2, 1, 0);
    try {
        solve_crf({x20 * x20, HPoly(O, 2)});
        FAIL() << "expected a compatibility violation";
    } catch (const CompatibilityViolation& e) {
        ASSERT_FALSE(e.residuals().empty());
        for (const auto& r : e.residuals())
            EXPECT_FALSE(r.residual.is_zero());
    }
    CorpusRng rng(104);
    int rejected = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const HPolyVector g{rng.hpoly(H, 2, 3, 4), rng.hpoly(H, 2, 3, 4)};
        if (is_zero(compat_Pbar(g)))
            continue;
        EXPECT_THROW(solve_crf(g), CompatibilityViolation);
        ++rejected;
    }
    EXPECT_GT(rejected, 5);
}

TEST(SolveCrf, DegreeBudget) {
    const HPolyVector g = dbar_system(x(0) * x(1) * y(2));
    EXPECT_THROW(solve_crf(g, {1}), BudgetExceeded);
    EXPECT_EQ(dbar_system(solve_crf(g, {2})), g);
}

TEST(SolveCrf, Deterministic) {
    CorpusRng rng(105);
    const HPolyVector g = dbar_system(rng.hpoly(H, 2, 3, 5));
    EXPECT_EQ(solve_crf(g), solve_crf(g));
}

TEST(RegularKernel, Dimensions) {
    EXPECT_EQ(regular_kernel_basis(H, 1, 0).size(), 4u);
    EXPECT_EQ(regular_kernel_basis(O, 1, 0).size(), 8u);
    // brute-force rank of the standard-basis operator, degree by degree
    for (auto [a, n, d] : {std::tuple{H, 1, 1}, std::tuple{H, 1, 2}, std::tuple{H, 2, 2}, std::tuple{O, 1, 1}, std::tuple{O, 2, 1}}) {
        std::size_t want = 0;
        for (int k = 0; k <= d; ++k)
            want += brute_kernel_dim(a, n, k);
        EXPECT_EQ(regular_kernel_basis(a, n, d).size(), want) << algebra_name(a) << " n=" << n << " d=" << d;
    }
    // frozen values of the oracle above
    EXPECT_EQ(regular_kernel_basis(H, 1, 1).size(), 16u);
    EXPECT_EQ(regular_kernel_basis(H, 1, 2).size(), 40u);
}

TEST(RegularKernel, ElementsAreRegularHarmonicAndIndependent) {
    for (auto [a, n, d] : {std::tuple{H, 2, 3}, std::tuple{O, 2, 2}}) {
        const auto basis = regular_kernel_basis(a, n, d);
        std::map<std::pair<Exponent, int>, std::size_t> col;
        std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
        for (const auto& p : basis) {
            ASSERT_TRUE(is_zero(dbar_system(p)));
            ASSERT_LE(p.degree(), d);
            for (int h = 0; h < n; ++h)
                ASSERT_TRUE(laplacian(p, h).is_zero());
            std::vector<std::pair<std::size_t, Rational>> r;
            for (const auto& [e, cf] : p.terms())
                for (int g = 0; g < p.dim(); ++g)
                    if (cf[g] != 0)
                        r.emplace_back(col.emplace(std::make_pair(e, g), col.size()).first->second, cf[g]);
            rows.push_back(std::move(r));
        }
        std::vector<SparseRow<Rational>> sr;
        for (auto& r : rows) {
            std::vector<std::pair<std::uint32_t, Rational>> e;
            for (auto& [c0, v] : r)
                e.emplace_back(static_cast<std::uint32_t>(c0), v);
            sr.push_back(SparseRow<Rational>::from_entries(std::move(e)));
        }
        EXPECT_EQ(sparse_rank(sr, col.size()), basis.size());
    }
}

TEST(CrfExtend, ZeroAndTrivialCases) {
    const Hypersurface S(y(3));
    const auto r = crf_extend(HPoly(H, 2), S, 3);
    EXPECT_TRUE(r.F.is_zero());
    const HPoly k = HPoly::constant(H, 2, u(2));
    EXPECT_EQ(crf_extend(k, S, 2).F, k);
    EXPECT_THROW(crf_extend(k, Hypersurface(x(0) * x(0) - c(1)), 2), std::invalid_argument);
    EXPECT_THROW(crf_extend(k, S, 0), std::invalid_argument);
}

TEST(CrfExtend, CounterexampleIsNotExtendableToSecondOrder) {
    const Hypersurface S(y(3));
    const HPoly f = counterexample();
    // first order works since f is CRF
    const auto r1 = crf_extend(f, S, 1);
    for (const auto& g : dbar_system(r1.F))
        EXPECT_TRUE(divisible_by_rho_power(g, S, 1));
    try {
        crf_extend(f, S, 2, {6});
        FAIL() << "expected infeasibility";
    } catch (const NotAdmissibleOrBudget& e) {
        EXPECT_EQ(e.degrees_tried(), (std::vector<int>{2, 3, 4, 5, 6}));
    }
}

TEST(CrfExtend, RegularRestrictionsExtendToAnyOrder) {
    CorpusRng rng(106);
    for (const auto& S : planes())
        for (int trial = 0; trial < 3; ++trial) {
            const HPoly F0 = random_regular(rng, 3);
            const HPoly f = F0 + S.rho() * rng.hpoly(H, 2, 1, 2);
            for (int m : {1, 2, 3}) {
                const auto r = crf_extend(f, S, m);
                for (int mm = 1; mm <= m; ++mm)
                    for (const auto& g : dbar_system(r.F))
                        EXPECT_TRUE(divisible_by_rho_power(g, S, mm));
                EXPECT_TRUE(vanishes_on(r.F - f, S));
            }
        }
}

TEST(CrfExtend, AgreesWithTriangularRecursion) {
    CorpusRng rng(107);
    int feasible = 0, infeasible = 0;
    for (const auto& S : planes())
        for (int trial = 0; trial < 8; ++trial) {
            HPoly f;
            switch (trial % 4) {
            case 0:
                f = rng.hpoly(H, 2, 3, 4);
                break;
            case 1:
                f = random_regular(rng, 2) + S.rho() * rng.hpoly(H, 2, 1, 2);
                break;
            case 2:
                f = counterexample() * (S.rho() + c(1));
                break;
            default:
                f = HPoly::constant(H, 2, rng.hnumber(H)) + S.rho() * S.rho() * rng.hpoly(H, 2, 1, 2);
                break;
            }
            for (int m : {1, 2, 3}) {
                const auto want = recursion_extension(f, S, m);
                if (want) {
                    ++feasible;
                    EXPECT_EQ(crf_extend(f, S, m).F, *want);
                } else {
                    ++infeasible;
                    EXPECT_THROW(crf_extend(f, S, m), NotAdmissibleOrBudget);
                }
            }
        }
    EXPECT_GT(feasible, 10);
    EXPECT_GT(infeasible, 10);
}

TEST(CrfExtend, SecondOrderMatchesAdmissibility) {
    CorpusRng rng(108);
    int admissible = 0, other = 0;
    for (const auto& S : planes())
        for (int trial = 0; trial < 8; ++trial) {
            HPoly f;
            if (trial < 5)
                f = random_regular(rng, 3) + S.rho() * S.rho() * rng.hpoly(H, 2, 1, 2) +
                    S.rho() * rng.hpoly(H, 2, 1, 2);
            else if (trial == 5)
                f = counterexample() + S.rho() * rng.hpoly(H, 2, 1, 2);
            else
                f = rng.hpoly(H, 2, 2, 4);
            const bool adm = admissibility_affine(f, S).admissible();
            (adm ? admissible : other)++;
            bool ok = true;
            try {
                crf_extend(f, S, 2);
            } catch (const NotAdmissibleOrBudget&) {
                ok = false;
            }
            EXPECT_EQ(ok, adm) << "trial " << trial;
        }
    EXPECT_GE(admissible, 20);
    EXPECT_GE(other, 5);
}

TEST(JumpSplit, RecoversRegularExtension) {
    CorpusRng rng(109);
    for (const auto& S : planes())
        for (int trial = 0; trial < 3; ++trial) {
            const HPoly F0 = random_regular(rng, 3);
            const HPoly f = F0 + S.rho() * rng.hpoly(H, 2, 2, 3);
            const auto j = jump_split(f, S);
            EXPECT_TRUE(is_zero(dbar_system(j.plus)));
            EXPECT_TRUE(j.minus.is_zero());
            EXPECT_EQ(j.plus, F0);
        }
    const HPoly k = HPoly::constant(H, 2, u(1));
    EXPECT_EQ(jump_split(k, Hypersurface(y(3))).plus, k);
    EXPECT_THROW(jump_split(counterexample(), Hypersurface(y(3))), NotAdmissible);
}

TEST(JumpSplit, RefusalsAreReported) {
    const Hypersurface S(y(3));
    // CRF, but the normal derivative data are not CRF
    const HPoly f = x(1) * y(0) * y(0) * u(2, -1) + x(0) * y(0) * y(0) * u(3);
    EXPECT_TRUE(admissibility_affine(f, S).crf);
    EXPECT_THROW(jump_split(f, S), NotAdmissible);
    // admissible data with a budget below the data degree
    CorpusRng rng(110);
    const HPoly F0 = random_regular(rng, 3);
    ASSERT_EQ(F0.degree(), 3);
    try {
        jump_split(F0, S, {2});
        FAIL() << "expected a budget error";
    } catch (const NoPolynomialExtensionWithinBudget& e) {
        EXPECT_TRUE(e.degrees_tried().empty());
    }
}
