#pragma once

// Seeded generators for test corpora.  Bits come from std::mt19937_64 and
// are mapped to ranges by hand so corpora are identical on every platform.

#include "fueter/polycalc.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fueter {

class CorpusRng {
  public:
    explicit CorpusRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [lo, hi].
    long uniform(long lo, long hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(engine_() % span);
    }

    double uniform_real(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    /// Small rational p/q with |p| <= max_num, 1 <= q <= max_den.
    Rational rational(long max_num = 5, long max_den = 3) {
        return make_rational(uniform(-max_num, max_num), uniform(1, max_den));
    }

    HExact hnumber(Algebra a, long max_num = 5, long max_den = 3) {
        HExact h(a);
        for (int i = 0; i < h.dim(); ++i)
            h[i] = rational(max_num, max_den);
        return h;
    }

    Exponent exponent(int ncoords, int degree) {
        Exponent e(static_cast<std::size_t>(ncoords), 0);
        for (int i = 0; i < degree; ++i)
            ++e[static_cast<std::size_t>(uniform(0, ncoords - 1))];
        return e;
    }

    /// Sparse polynomial with `terms` random monomials of degree <= max_degree.
    HPoly hpoly(Algebra a, int n, int max_degree, int terms) {
        HPoly p(a, n);
        for (int t = 0; t < terms; ++t)
            p.add_term(exponent(p.ncoords(), static_cast<int>(uniform(0, max_degree))), hnumber(a));
        return p;
    }

    /// Same as hpoly, restricted to real coefficients.
    HPoly real_hpoly(Algebra a, int n, int max_degree, int terms) {
        HPoly p(a, n);
        for (int t = 0; t < terms; ++t)
            p.add_term(exponent(p.ncoords(), static_cast<int>(uniform(0, max_degree))), HExact::real(a, rational()));
        return p;
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace fueter
