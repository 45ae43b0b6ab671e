#pragma once

// Product Gauss-Legendre rules on 3-spheres in R^4 and the Cauchy-Fueter
// integral (2 pi^2)^-1 \int G(q - q0) Dq F(q).

#include "fueter/forms.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fueter {

struct GaussLegendre {
    std::vector<double> nodes;  // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point rule by Newton iteration on P_n from the Chebyshev guesses.
inline GaussLegendre gauss_legendre(int n) {
    if (n < 1)
        throw std::invalid_argument("Gauss-Legendre order must be positive");
    GaussLegendre r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // recompute the derivative at the converged node
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double w = 2 / ((1 - x * x) * dp * dp);
        r.nodes[static_cast<std::size_t>(i)] = -x;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.weights[static_cast<std::size_t>(i)] = w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1)
        r.nodes[static_cast<std::size_t>(n / 2)] = 0;
    return r;
}

using Vec4 = std::array<double, 4>;

struct SphereNode {
    Vec4 point;
    double weight;
    Vec4 normal;                  // outward unit normal
    std::array<Vec4, 3> tangent;  // orthonormal, (normal, t1, t2, t3) positively oriented
};

struct SphereRule {
    Vec4 center{};
    double radius = 1;
    int order = 0;
    std::vector<SphereNode> nodes;

    double total_weight() const {
        double s = 0;
        for (const auto& n : nodes)
            s += n.weight;
        return s;
    }
};

/// Neumaier's compensated sum.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            c_ += (sum_ - t) + x;
        else
            c_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + c_; }

  private:
    double sum_ = 0;
    double c_ = 0;
};

namespace detail {
inline double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
    return detail::det({{a[0], b[0], c[0], d[0]}, {a[1], b[1], c[1], d[1]}, {a[2], b[2], c[2], d[2]}, {a[3], b[3], c[3], d[3]}});
}
}  // namespace detail

/// Gauss-Legendre in each hyperspherical angle:
///   x = c + r (cos psi, sin psi cos theta, sin psi sin theta cos phi, sin psi sin theta sin phi)
/// with psi, theta in [0, pi], phi in [0, 2 pi] and Jacobian r^3 sin^2 psi sin theta.
/// `order` nodes per angle; polynomial integrands of degree below
/// roughly order are resolved to rounding.
inline SphereRule sphere_rule(const Vec4& center, double radius, int order = 32) {
    if (!(radius > 0))
        throw std::invalid_argument("sphere radius must be positive");
    if (order < 1)
        throw std::invalid_argument("quadrature order must be at least 1");
    const GaussLegendre gl = gauss_legendre(order);
    const double pi = std::numbers::pi;
    SphereRule rule{center, radius, order, {}};
    rule.nodes.reserve(static_cast<std::size_t>(order) * order * order);
    for (int a = 0; a < order; ++a) {
        const double psi = pi / 2 * (gl.nodes[static_cast<std::size_t>(a)] + 1);
        const double wpsi = pi / 2 * gl.weights[static_cast<std::size_t>(a)];
        const double sp = std::sin(psi), cp = std::cos(psi);
        for (int b = 0; b < order; ++b) {
            const double th = pi / 2 * (gl.nodes[static_cast<std::size_t>(b)] + 1);
            const double wth = pi / 2 * gl.weights[static_cast<std::size_t>(b)];
            const double st = std::sin(th), ct = std::cos(th);
            for (int c = 0; c < order; ++c) {
                const double ph = pi * (gl.nodes[static_cast<std::size_t>(c)] + 1);
                const double wph = pi * gl.weights[static_cast<std::size_t>(c)];
                const double sf = std::sin(ph), cf = std::cos(ph);
                SphereNode nd;
                nd.normal = {cp, sp * ct, sp * st * cf, sp * st * sf};
                for (int i = 0; i < 4; ++i)
                    nd.point[static_cast<std::size_t>(i)] = center[static_cast<std::size_t>(i)] + radius * nd.normal[static_cast<std::size_t>(i)];
                nd.weight = wpsi * wth * wph * radius * radius * radius * sp * sp * st;
                // unit angle partials
                nd.tangent[0] = {-sp, cp * ct, cp * st * cf, cp * st * sf};
                nd.tangent[1] = {0, -st, ct * cf, ct * sf};
                nd.tangent[2] = {0, 0, -sf, cf};
                if (detail::det4(nd.normal, nd.tangent[0], nd.tangent[1], nd.tangent[2]) < 0)
                    for (auto& x : nd.tangent[2])
                        x = -x;
                rule.nodes.push_back(nd);
            }
        }
    }
    return rule;
}

/// \int_sphere f dsigma.
inline double integrate_scalar(const SphereRule& rule, const std::function<double(const Vec4&)>& f) {
    CompensatedSum s;
    for (const auto& n : rule.nodes)
        s.add(n.weight * f(n.point));
    return s.value();
}

using HFunction = std::function<HFloat(const Vec4&)>;

/// (2 pi^2)^-1 \int G(q - q0) Dq F(q) over the sphere, with Dq the
/// pullback of the 3-form onto the oriented tangent frame.  No check on
/// the position of q0 beyond q0 not lying on a node.
inline HFloat cauchy_fueter_integral(const HFunction& F, const SphereRule& rule, const HFloat& q0) {
    if (q0.algebra() != Algebra::H)
        throw std::invalid_argument("Cauchy-Fueter formula is quaternionic");
    const NumericForm Dq = freeze(Dq_form(1, 0), std::vector<double>(4, 0.0));
    std::array<CompensatedSum, 4> acc;
    for (const auto& n : rule.nodes) {
        HFloat d(Algebra::H);
        for (int i = 0; i < 4; ++i)
            d[i] = n.point[static_cast<std::size_t>(i)] - q0[i];
        const double r2 = d.norm_sq();
        if (r2 == 0)
            throw std::domain_error("pole lies on a quadrature node");
        const HFloat G = d.conj() / (r2 * r2);
        const Frame frame{{n.tangent[0].begin(), n.tangent[0].end()},
                          {n.tangent[1].begin(), n.tangent[1].end()},
                          {n.tangent[2].begin(), n.tangent[2].end()}};
        const HFloat dq = Dq.apply(frame);
        const HFloat v = (G * dq) * F(n.point);
        for (int i = 0; i < 4; ++i)
            acc[static_cast<std::size_t>(i)].add(n.weight * v[i]);
    }
    HFloat out(Algebra::H);
    const double c = 1 / (2 * std::numbers::pi * std::numbers::pi);
    for (int i = 0; i < 4; ++i)
        out[i] = c * acc[static_cast<std::size_t>(i)].value();
    return out;
}

inline HFunction as_function(const HPoly& F) {
    if (F.algebra() != Algebra::H || F.nvars() != 1)
        throw std::invalid_argument("expected a polynomial in one quaternionic variable");
    return [F](const Vec4& x) { return F.evaluate(std::span<const double>(x.data(), 4)); };
}

/// Reconstruction of F(q0) for q0 strictly inside the sphere.
inline HFloat cauchy_fueter_eval(const HFunction& F, const SphereRule& rule, const HFloat& q0) {
    double d2 = 0;
    for (int i = 0; i < 4; ++i)
        d2 += (q0[i] - rule.center[static_cast<std::size_t>(i)]) * (q0[i] - rule.center[static_cast<std::size_t>(i)]);
    if (!(std::sqrt(d2) < rule.radius))
        throw std::domain_error("q0 must lie strictly inside the sphere");
    return cauchy_fueter_integral(F, rule, q0);
}

class NotRegular : public std::invalid_argument {
  public:
    NotRegular() : std::invalid_argument("polynomial is not left Fueter regular") {}
};

/// Polynomial overload; checks regularity exactly first.
inline HFloat cauchy_fueter_eval(const HPoly& F, const SphereRule& rule, const HFloat& q0) {
    HFunction f = as_function(F);
    if (!fueter_dbar(F, 0).is_zero())
        throw NotRegular();
    return cauchy_fueter_eval(f, rule, q0);
}

}  // namespace fueter
