#include "fueter/integrate.hpp"
#include "fueter/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace fueter;

namespace {

constexpr Algebra H = Algebra::H;
constexpr double kPi = std::numbers::pi;

// zeta_a = x_a - x_0 i_a, the left regular linear functions
HPoly zeta(int a) {
    return HPoly::coordinate(H, 1, 0, a) - HExact::unit(H, a) * HPoly::coordinate(H, 1, 0, 0);
}

HFloat hf(double a, double b, double c, double d) {
    HFloat q(H);
    q[0] = a;
    q[1] = b;
    q[2] = c;
    q[3] = d;
    return q;
}

double dist(const HFloat& a, const HFloat& b) { return max_abs(a - b); }

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    const auto gl = gauss_legendre(7);
    double s0 = 0, s12 = 0, s13 = 0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        s0 += gl.weights[i];
        s12 += gl.weights[i] * std::pow(gl.nodes[i], 12);
        s13 += gl.weights[i] * std::pow(gl.nodes[i], 13);
    }
    EXPECT_NEAR(s0, 2.0, 1e-14);
    EXPECT_NEAR(s12, 2.0 / 13, 1e-14);
    EXPECT_NEAR(s13, 0.0, 1e-14);
    EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}

TEST(SphereRule, AreaAndMoments) {
    const auto rule = sphere_rule({0, 0, 0, 0}, 1.0);
    EXPECT_NEAR(rule.total_weight(), 2 * kPi * kPi, 1e-12);
    EXPECT_NEAR(integrate_scalar(rule, [](const Vec4& x) { return x[0]; }), 0.0, 1e-12);
    for (int i = 0; i < 4; ++i)
        EXPECT_NEAR(integrate_scalar(rule, [i](const Vec4& x) { return x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)]; }),
                    kPi * kPi / 2, 1e-12);
    // same moments at a different order
    const auto coarse = sphere_rule({0, 0, 0, 0}, 1.0, 24);
    EXPECT_NEAR(integrate_scalar(coarse, [](const Vec4& x) { return x[3] * x[3]; }), kPi * kPi / 2, 1e-12);
    EXPECT_NEAR(integrate_scalar(coarse, [](const Vec4& x) { return x[1] * x[1] * x[2] * x[2]; }), kPi * kPi / 12, 1e-12);
}

TEST(SphereRule, ScalesWithRadius) {
    const auto rule = sphere_rule({1, -2, 0.5, 3}, 2.5, 10);
    EXPECT_NEAR(rule.total_weight(), 2 * kPi * kPi * std::pow(2.5, 3), 1e-10);
    for (const auto& n : rule.nodes) {
        double r2 = 0;
        for (int i = 0; i < 4; ++i)
            r2 += std::pow(n.point[static_cast<std::size_t>(i)] - rule.center[static_cast<std::size_t>(i)], 2);
        ASSERT_NEAR(r2, 6.25, 1e-12);
    }
    EXPECT_THROW(sphere_rule({0, 0, 0, 0}, 0.0), std::invalid_argument);
    EXPECT_THROW(sphere_rule({0, 0, 0, 0}, 1.0, 0), std::invalid_argument);
}

TEST(SphereRule, FramesAreOrthonormalAndOriented) {
    const auto rule = sphere_rule({0, 0, 0, 0}, 1.0, 6);
    for (const auto& n : rule.nodes) {
        std::array<Vec4, 4> v{n.normal, n.tangent[0], n.tangent[1], n.tangent[2]};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double d = 0;
                for (int i = 0; i < 4; ++i)
                    d += v[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
                ASSERT_NEAR(d, a == b ? 1.0 : 0.0, 1e-13);
            }
        ASSERT_GT(detail::det4(v[0], v[1], v[2], v[3]), 0.0);
    }
}

TEST(SphereRule, DqPullsBackToTheNormal) {
    // On an oriented orthonormal frame (n, t) the 3-form Dq evaluates to n.
    const auto rule = sphere_rule({0, 0, 0, 0}, 1.0, 5);
    const NumericForm Dq = freeze(Dq_form(1, 0), std::vector<double>(4, 0.0));
    for (const auto& n : rule.nodes) {
        const Frame fr{{n.tangent[0].begin(), n.tangent[0].end()},
                       {n.tangent[1].begin(), n.tangent[1].end()},
                       {n.tangent[2].begin(), n.tangent[2].end()}};
        ASSERT_LT(dist(Dq.apply(fr), hf(n.normal[0], n.normal[1], n.normal[2], n.normal[3])), 1e-13);
    }
}

TEST(CauchyFueter, ConstantInsideAndOutside) {
    const auto rule = sphere_rule({0, 0, 0, 0}, 1.0);
    const HFunction one = [](const Vec4&) { return HFloat::real(H, 1.0); };
    EXPECT_LT(dist(cauchy_fueter_eval(one, rule, hf(0, 0, 0, 0)), HFloat::real(H, 1.0)), 1e-12);
    EXPECT_LT(dist(cauchy_fueter_eval(one, rule, hf(0.2, -0.3, 0.1, 0.4)), HFloat::real(H, 1.0)), 1e-8);
    EXPECT_LT(max_abs(cauchy_fueter_integral(one, rule, hf(2, 0, 0, 0))), 1e-10);
    EXPECT_LT(max_abs(cauchy_fueter_integral(one, rule, hf(1.5, 1.5, -1.5, 0))), 1e-10);
}

TEST(CauchyFueter, ReproducesRegularPolynomials) {
    CorpusRng rng(11);
    const auto rule = sphere_rule({0, 0, 0, 0}, 1.0);
    // symmetrised products of the zeta_a with right coefficients stay regular
    for (int trial = 0; trial < 4; ++trial) {
        HPoly F = HPoly::constant(H, 1, rng.hnumber(H, 3, 2));
        for (int a = 1; a < 4; ++a)
            F += zeta(a) * rng.hnumber(H, 3, 2);
        for (int a = 1; a < 4; ++a)
            for (int b = a; b < 4; ++b)
                F += (zeta(a) * zeta(b) + zeta(b) * zeta(a)) * rng.hnumber(H, 2, 2);
        ASSERT_TRUE(fueter_dbar(F, 0).is_zero());
        for (int k = 0; k < 10; ++k) {
            HFloat q0(H);
            for (int i = 0; i < 4; ++i)
                q0[i] = rng.uniform_real(-0.25, 0.25);
            const HFloat want = F.evaluate(std::vector<double>{q0[0], q0[1], q0[2], q0[3]});
            EXPECT_LT(dist(cauchy_fueter_eval(F, rule, q0), want), 1e-8) << "trial " << trial << " point " << k;
        }
    }
}

TEST(CauchyFueter, RejectsBadInput) {
    const auto rule = sphere_rule({0, 0, 0, 0}, 1.0, 8);
    EXPECT_THROW(cauchy_fueter_eval(zeta(1), rule, hf(1.0, 0, 0, 0)), std::domain_error);
    EXPECT_THROW(cauchy_fueter_eval(zeta(1), rule, hf(0, 3, 0, 0)), std::domain_error);
    const HPoly notreg = HPoly::coordinate(H, 1, 0, 1);
    EXPECT_THROW(cauchy_fueter_eval(notreg, rule, hf(0, 0, 0, 0)), NotRegular);
    EXPECT_THROW(cauchy_fueter_eval(HPoly::coordinate(H, 2, 0, 0), rule, hf(0, 0, 0, 0)), std::invalid_argument);
}

TEST(CauchyFueter, ConvergesUnderOrderDoubling) {
    // kernel with pole outside the ball: regular inside, not polynomial
    const HFloat a = hf(1.6, 0.3, 0, -0.2);
    const HFunction F = [a](const Vec4& x) {
        const HFloat d = hf(x[0], x[1], x[2], x[3]) - a;
        const double r2 = d.norm_sq();
        return d.conj() / (r2 * r2);
    };
    const HFloat q0 = hf(0.3, -0.2, 0.1, 0.25);
    const HFloat want = F({q0[0], q0[1], q0[2], q0[3]});
    double prev = 1e300;
    for (int order : {6, 12, 24, 48}) {
        const double err = dist(cauchy_fueter_eval(F, sphere_rule({0, 0, 0, 0}, 1.0, order), q0), want);
        EXPECT_LT(err, prev) << "order " << order;
        prev = err;
    }
    EXPECT_LT(prev, 1e-10);
}

TEST(CauchyFueter, TranslationCovariance) {
    const HPoly F = zeta(1) * HExact::unit(H, 2) + zeta(2) * zeta(3) + zeta(3) * zeta(2);
    const Vec4 c{0.5, -1, 2, 0.25};
    const HFunction shifted = [&](const Vec4& x) {
        return F.evaluate(std::vector<double>{x[0] + c[0], x[1] + c[1], x[2] + c[2], x[3] + c[3]});
    };
    const HFloat q0 = hf(0.7, -0.8, 2.1, 0.5);
    const HFloat a = cauchy_fueter_eval(F, sphere_rule(c, 1.0), q0);
    const HFloat b = cauchy_fueter_eval(shifted, sphere_rule({0, 0, 0, 0}, 1.0), q0 - hf(c[0], c[1], c[2], c[3]));
    EXPECT_LT(dist(a, b), 1e-12);
}
