#pragma once

// Quaternion and octonion arithmetic over an exact (GMP rational) or a
// binary64 scalar.  Components are indexed by alpha, the coefficient of
// the unit i_alpha, with i_0 = 1.

#include "fueter/rational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fueter {

enum class Algebra { H, O };

constexpr int dimension(Algebra a) { return a == Algebra::H ? 4 : 8; }

inline const char* algebra_name(Algebra a) { return a == Algebra::H ? "H" : "O"; }

inline Algebra parse_algebra(const std::string& s) {
    if (s == "H")
        return Algebra::H;
    if (s == "O")
        return Algebra::O;
    throw std::invalid_argument("unknown algebra '" + s + "' (expected H or O)");
}

class AlgebraMismatch : public std::invalid_argument {
  public:
    AlgebraMismatch() : std::invalid_argument("operands belong to different algebras") {}
};

/// The real 8x8 operator matrix of the octonionic Fueter operator
/// sum_alpha i_alpha d/dx_alpha acting on the component vector (u_0..u_7).
/// Entry (row gamma, column beta) is +-(alpha+1) and stands for
/// +-d/dx_alpha.  This is the single source of the octonion table.
inline constexpr std::array<std::array<int, 8>, 8> kOctonionDbarMatrix{{
    {+1, -2, -3, -4, -5, -6, -7, -8},
    {+2, +1, -4, +3, -6, +5, +8, -7},
    {+3, +4, +1, -2, -7, -8, +5, +6},
    {+4, -3, +2, +1, -8, +7, -6, +5},
    {+5, +6, +7, +8, +1, -2, -3, -4},
    {+6, -5, +8, -7, +2, +1, +4, -3},
    {+7, -8, -5, +6, +3, -4, +1, +2},
    {+8, +7, -6, -5, +4, +3, -2, +1},
}};

/// i_alpha * i_beta = sign * i_index
struct UnitProduct {
    std::uint8_t index = 0;
    std::int8_t sign = 1;
};

class StructureConstants {
  public:
    explicit StructureConstants(Algebra a) : algebra_(a) {
        if (a == Algebra::O) {
            // row gamma, column beta carrying +-d_alpha encodes the
            // i_gamma component of i_alpha * i_beta
            std::array<std::array<bool, 8>, 8> seen{};
            for (int gamma = 0; gamma < 8; ++gamma)
                for (int beta = 0; beta < 8; ++beta) {
                    const int e = kOctonionDbarMatrix[gamma][beta];
                    const int alpha = std::abs(e) - 1;
                    if (seen[alpha][beta])
                        throw std::logic_error("octonion operator matrix is not a permutation pattern");
                    seen[alpha][beta] = true;
                    table_[alpha][beta] = {static_cast<std::uint8_t>(gamma),
                                           static_cast<std::int8_t>(e > 0 ? 1 : -1)};
                }
        } else {
            // 1, i, j, k with ij = k, jk = i, ki = j
            constexpr int idx[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
            constexpr int sgn[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
            for (int a1 = 0; a1 < 4; ++a1)
                for (int b1 = 0; b1 < 4; ++b1)
                    table_[a1][b1] = {static_cast<std::uint8_t>(idx[a1][b1]),
                                      static_cast<std::int8_t>(sgn[a1][b1])};
        }
    }

    Algebra algebra() const { return algebra_; }
    int dim() const { return dimension(algebra_); }
    const UnitProduct& operator()(int alpha, int beta) const { return table_[alpha][beta]; }

  private:
    Algebra algebra_;
    std::array<std::array<UnitProduct, 8>, 8> table_{};
};

inline const StructureConstants& structure_constants(Algebra a) {
    static const StructureConstants h(Algebra::H);
    static const StructureConstants o(Algebra::O);
    return a == Algebra::H ? h : o;
}

template <class T>
class HNumber {
  public:
    using scalar_type = T;

    explicit HNumber(Algebra a = Algebra::H) : algebra_(a) {
        for (auto& x : c_)
            x = T(0);
    }

    static HNumber real(Algebra a, const T& value) {
        HNumber r(a);
        r.c_[0] = value;
        return r;
    }

    static HNumber unit(Algebra a, int alpha, int sign = 1) {
        if (alpha < 0 || alpha >= dimension(a))
            throw std::out_of_range("unit index out of range");
        HNumber r(a);
        r.c_[alpha] = T(sign);
        return r;
    }

    template <class It>
    static HNumber from_components(Algebra a, It first, It last) {
        HNumber r(a);
        int i = 0;
        for (; first != last; ++first, ++i) {
            if (i >= r.dim())
                throw std::invalid_argument("too many components for algebra");
            r.c_[i] = T(*first);
        }
        if (i != r.dim())
            throw std::invalid_argument("component count does not match algebra");
        return r;
    }

    Algebra algebra() const { return algebra_; }
    int dim() const { return dimension(algebra_); }

    const T& operator[](int i) const { return c_[i]; }
    T& operator[](int i) { return c_[i]; }

    bool is_zero() const {
        for (int i = 0; i < dim(); ++i)
            if (!fueter::is_zero(c_[i]))
                return false;
        return true;
    }

    HNumber conj() const {
        HNumber r = *this;
        for (int i = 1; i < dim(); ++i)
            r.c_[i] = -r.c_[i];
        return r;
    }

    T norm_sq() const {
        T s(0);
        for (int i = 0; i < dim(); ++i)
            s += c_[i] * c_[i];
        return s;
    }

    HNumber inverse() const {
        T n = norm_sq();
        if (fueter::is_zero(n))
            throw std::domain_error("inverse of zero");
        HNumber r = conj();
        for (int i = 0; i < dim(); ++i)
            r.c_[i] /= n;
        return r;
    }

    HNumber& operator+=(const HNumber& o) {
        check(o);
        for (int i = 0; i < dim(); ++i)
            c_[i] += o.c_[i];
        return *this;
    }
    HNumber& operator-=(const HNumber& o) {
        check(o);
        for (int i = 0; i < dim(); ++i)
            c_[i] -= o.c_[i];
        return *this;
    }
    HNumber& operator*=(const T& s) {
        for (int i = 0; i < dim(); ++i)
            c_[i] *= s;
        return *this;
    }
    HNumber& operator/=(const T& s) {
        for (int i = 0; i < dim(); ++i)
            c_[i] /= s;
        return *this;
    }

    friend HNumber operator+(HNumber a, const HNumber& b) { return a += b; }
    friend HNumber operator-(HNumber a, const HNumber& b) { return a -= b; }
    friend HNumber operator-(HNumber a) {
        for (int i = 0; i < a.dim(); ++i)
            a.c_[i] = -a.c_[i];
        return a;
    }
    friend HNumber operator*(HNumber a, const T& s) { return a *= s; }
    friend HNumber operator*(const T& s, HNumber a) { return a *= s; }
    friend HNumber operator/(HNumber a, const T& s) { return a /= s; }

    /// Bilinear product through the structure constants (noncommutative,
    /// nonassociative for O).
    friend HNumber operator*(const HNumber& a, const HNumber& b) {
        a.check(b);
        const auto& sc = structure_constants(a.algebra_);
        HNumber r(a.algebra_);
        const int d = a.dim();
        for (int al = 0; al < d; ++al) {
            if (fueter::is_zero(a.c_[al]))
                continue;
            for (int be = 0; be < d; ++be) {
                if (fueter::is_zero(b.c_[be]))
                    continue;
                const UnitProduct& u = sc(al, be);
                if (u.sign > 0)
                    r.c_[u.index] += a.c_[al] * b.c_[be];
                else
                    r.c_[u.index] -= a.c_[al] * b.c_[be];
            }
        }
        return r;
    }

    friend bool operator==(const HNumber& a, const HNumber& b) {
        if (a.algebra_ != b.algebra_)
            return false;
        for (int i = 0; i < a.dim(); ++i)
            if (a.c_[i] != b.c_[i])
                return false;
        return true;
    }
    friend bool operator!=(const HNumber& a, const HNumber& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const HNumber& a) {
        os << '(';
        for (int i = 0; i < a.dim(); ++i)
            os << (i ? ", " : "") << a.c_[i];
        return os << ')';
    }

  private:
    void check(const HNumber& o) const {
        if (algebra_ != o.algebra_)
            throw AlgebraMismatch();
    }

    Algebra algebra_;
    std::array<T, 8> c_;
};

template <class T>
HNumber<T> conj(const HNumber<T>& a) {
    return a.conj();
}
template <class T>
T norm_sq(const HNumber<T>& a) {
    return a.norm_sq();
}
template <class T>
HNumber<T> inverse(const HNumber<T>& a) {
    return a.inverse();
}
template <class T>
HNumber<T> mul(const HNumber<T>& a, const HNumber<T>& b) {
    return a * b;
}

using HExact = HNumber<Rational>;
using HFloat = HNumber<double>;

inline HFloat to_float(const HExact& a) {
    HFloat r(a.algebra());
    for (int i = 0; i < a.dim(); ++i)
        r[i] = a[i].get_d();
    return r;
}

/// Largest absolute component; used for numeric tolerance checks.
inline double max_abs(const HFloat& a) {
    double m = 0;
    for (int i = 0; i < a.dim(); ++i)
        m = std::max(m, std::abs(a[i]));
    return m;
}

}  // namespace fueter
