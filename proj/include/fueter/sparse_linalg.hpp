#pragma once

// Sparse exact row echelon form over a field.  Rows are inserted one at a
// time and reduced against the current pivots with a dense scatter
// accumulator; pivot rows are stored normalized (leading entry 1) and hold
// only columns to the right of their pivot.

#include "fueter/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fueter {

/// Prime field Z/pZ with p = 2^61 - 1.
class Mod61 {
  public:
    static constexpr std::uint64_t p = (std::uint64_t{1} << 61) - 1;

    Mod61() = default;
    Mod61(long v) {  // NOLINT(google-explicit-constructor)
        long long r = v % static_cast<long long>(p);
        v_ = static_cast<std::uint64_t>(r < 0 ? r + static_cast<long long>(p) : r);
    }

    static Mod61 from_raw(std::uint64_t v) {
        Mod61 m;
        m.v_ = v % p;
        return m;
    }

    static Mod61 from_rational(const Rational& q) {
        const mpz_class pz = mpz_class(static_cast<unsigned long>(p >> 32)) * mpz_class(1UL << 32) +
                             mpz_class(static_cast<unsigned long>(p & 0xffffffffUL));
        mpz_class num = q.get_num() % pz;
        if (num < 0)
            num += pz;
        mpz_class den = q.get_den() % pz;
        if (den == 0)
            throw std::domain_error("denominator divisible by the modulus");
        return from_mpz(num) / from_mpz(den);
    }

    std::uint64_t raw() const { return v_; }

    friend Mod61 operator+(Mod61 a, Mod61 b) {
        std::uint64_t s = a.v_ + b.v_;
        if (s >= p)
            s -= p;
        return from_reduced(s);
    }
    friend Mod61 operator-(Mod61 a, Mod61 b) { return from_reduced(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + p - b.v_); }
    friend Mod61 operator-(Mod61 a) { return from_reduced(a.v_ == 0 ? 0 : p - a.v_); }
    friend Mod61 operator*(Mod61 a, Mod61 b) {
        unsigned __int128 m = static_cast<unsigned __int128>(a.v_) * b.v_;
        std::uint64_t lo = static_cast<std::uint64_t>(m & p);
        std::uint64_t hi = static_cast<std::uint64_t>(m >> 61);
        std::uint64_t s = lo + hi;
        if (s >= p)
            s -= p;
        return from_reduced(s);
    }
    friend Mod61 operator/(Mod61 a, Mod61 b) { return a * b.inverse(); }
    Mod61& operator+=(Mod61 o) { return *this = *this + o; }
    Mod61& operator-=(Mod61 o) { return *this = *this - o; }
    Mod61& operator*=(Mod61 o) { return *this = *this * o; }
    Mod61& operator/=(Mod61 o) { return *this = *this / o; }
    friend bool operator==(Mod61 a, Mod61 b) { return a.v_ == b.v_; }
    friend bool operator!=(Mod61 a, Mod61 b) { return a.v_ != b.v_; }

    Mod61 inverse() const {
        if (v_ == 0)
            throw std::domain_error("inverse of zero in Z/p");
        Mod61 result(1), base = *this;
        std::uint64_t e = p - 2;
        while (e) {
            if (e & 1)
                result *= base;
            base *= base;
            e >>= 1;
        }
        return result;
    }

  private:
    static Mod61 from_reduced(std::uint64_t v) {
        Mod61 m;
        m.v_ = v;
        return m;
    }
    static Mod61 from_mpz(const mpz_class& z) {
        // z already reduced to [0, p)
        mpz_class hi = z >> 32;
        mpz_class lo = z - (hi << 32);
        return from_raw((hi.get_ui() << 32) | lo.get_ui());
    }

    std::uint64_t v_ = 0;
};

inline bool is_zero(Mod61 x) { return x.raw() == 0; }

template <class T>
struct SparseRow {
    std::vector<std::uint32_t> cols;  // strictly increasing
    std::vector<T> vals;

    std::size_t size() const { return cols.size(); }
    bool empty() const { return cols.empty(); }
    void push(std::uint32_t c, T v) {
        cols.push_back(c);
        vals.push_back(std::move(v));
    }

    /// Builds a row from arbitrary (col, value) pairs, summing duplicates.
    static SparseRow from_entries(std::vector<std::pair<std::uint32_t, T>> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseRow r;
        for (auto& [c, v] : entries) {
            if (!r.cols.empty() && r.cols.back() == c)
                r.vals.back() += v;
            else
                r.push(c, std::move(v));
        }
        SparseRow out;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (!is_zero(r.vals[i]))
                out.push(r.cols[i], std::move(r.vals[i]));
        return out;
    }
};

class ResourceCapExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

template <class T>
class Echelon {
  public:
    explicit Echelon(std::size_t ncols, std::size_t max_stored_entries = 400'000'000)
        : ncols_(ncols), pivot_(ncols, -1), acc_(ncols, T(0)), mark_(ncols, 0),
          cap_(max_stored_entries) {}

    std::size_t cols() const { return ncols_; }
    std::size_t rank() const { return rows_.size(); }
    std::size_t stored_entries() const { return stored_; }
    bool has_pivot(std::size_t c) const { return pivot_[c] >= 0; }
    const SparseRow<T>& pivot_row(std::size_t c) const { return rows_[static_cast<std::size_t>(pivot_[c])]; }

    /// Reduces `row` against all pivots; the result has no entry in a
    /// pivot column.
    /// If `trace` is given, every (pivot row index, factor) used is appended
    /// to it so the same reduction can be replayed on a right-hand side.
    SparseRow<T> reduce(const SparseRow<T>& row, std::vector<std::pair<std::uint32_t, T>>* trace = nullptr) {
        std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> heap;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto c = row.cols[i];
            if (c >= ncols_)
                throw std::out_of_range("column index out of range");
            acc_[c] += row.vals[i];
            if (!mark_[c]) {
                mark_[c] = 1;
                heap.push(c);
            }
        }
        SparseRow<T> out;
        while (!heap.empty()) {
            const auto c = heap.top();
            heap.pop();
            mark_[c] = 0;
            if (is_zero(acc_[c]))
                continue;
            const int pr = pivot_[c];
            if (pr < 0) {
                out.push(c, acc_[c]);
                acc_[c] = T(0);
                continue;
            }
            const T factor = acc_[c];
            acc_[c] = T(0);
            if (trace)
                trace->emplace_back(static_cast<std::uint32_t>(pr), factor);
            const SparseRow<T>& p = rows_[static_cast<std::size_t>(pr)];
            for (std::size_t i = 1; i < p.size(); ++i) {
                const auto j = p.cols[i];
                acc_[j] -= factor * p.vals[i];
                if (!mark_[j]) {
                    mark_[j] = 1;
                    heap.push(j);
                }
            }
        }
        return out;
    }

    /// Inserts a row; returns true if it was independent of the current rows.
    bool insert(const SparseRow<T>& row) { return insert_traced(row, nullptr, nullptr); }

    /// As insert; records the reduction trace and the leading value before
    /// normalization.
    bool insert_traced(const SparseRow<T>& row, std::vector<std::pair<std::uint32_t, T>>* trace, T* lead_out) {
        SparseRow<T> r = reduce(row, trace);
        if (r.empty())
            return false;
        const T lead = r.vals[0];
        if (lead_out)
            *lead_out = lead;
        for (auto& v : r.vals)
            v /= lead;
        stored_ += r.size();
        if (stored_ > cap_)
            throw ResourceCapExceeded("sparse elimination exceeded " + std::to_string(cap_) +
                                      " stored entries (" + std::to_string(ncols_) + " columns, rank " +
                                      std::to_string(rows_.size()) + ")");
        pivot_[r.cols[0]] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(r));
        return true;
    }

    /// Back substitution for a consistent system: pivot variables solved,
    /// free variables zero.  `rhs_col` marks the augmented column.
    std::vector<T> back_substitute(std::size_t rhs_col) const {
        std::vector<T> rhs(rows_.size(), T(0));
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const auto& p = rows_[k];
            auto it = std::lower_bound(p.cols.begin(), p.cols.end(), static_cast<std::uint32_t>(rhs_col));
            if (it != p.cols.end() && *it == rhs_col)
                rhs[k] = p.vals[static_cast<std::size_t>(it - p.cols.begin())];
        }
        return solve_pivots(rhs, std::vector<T>(ncols_, T(0)), rhs_col);
    }

    /// x with x[c] = rhs[pivot row of c] - sum_{j>c} P_c[j] x[j] for pivot
    /// columns c < ncols; non-pivot entries are taken from `x`.
    std::vector<T> solve_pivots(const std::vector<T>& rhs, std::vector<T> x, std::size_t ncols) const {
        for (std::size_t c = ncols; c-- > 0;) {
            const int pr = pivot_[c];
            if (pr < 0)
                continue;
            const SparseRow<T>& p = rows_[static_cast<std::size_t>(pr)];
            T v = rhs[static_cast<std::size_t>(pr)];
            for (std::size_t i = 1; i < p.size(); ++i) {
                const auto j = p.cols[i];
                if (j < ncols)
                    v -= p.vals[i] * x[j];
            }
            x[c] = v;
        }
        return x;
    }

    std::vector<std::size_t> free_columns() const {
        std::vector<std::size_t> out;
        for (std::size_t c = 0; c < ncols_; ++c)
            if (pivot_[c] < 0)
                out.push_back(c);
        return out;
    }

    /// One nullspace vector per free column (that column 1, other free
    /// columns 0).
    std::vector<std::vector<T>> nullspace_basis() const {
        std::vector<std::vector<T>> out;
        const std::vector<T> zero(rows_.size(), T(0));
        for (std::size_t f : free_columns()) {
            std::vector<T> x(ncols_, T(0));
            x[f] = T(1);
            out.push_back(solve_pivots(zero, std::move(x), ncols_));
        }
        return out;
    }

  private:
    std::size_t ncols_;
    std::vector<int> pivot_;
    std::vector<SparseRow<T>> rows_;
    std::vector<T> acc_;
    std::vector<char> mark_;
    std::size_t stored_ = 0;
    std::size_t cap_;
};

/// Row-reduction of a fixed matrix A, kept so that A x = b can be solved
/// for many right-hand sides b.  Equations are processed in the given
/// order; pivots follow the column order.
template <class T>
class Factorization {
  public:
    Factorization(const std::vector<SparseRow<T>>& rows, std::size_t ncols,
                  std::size_t max_stored_entries = 400'000'000)
        : ech_(ncols, max_stored_entries) {
        steps_.reserve(rows.size());
        for (const auto& r : rows) {
            Step s;
            T lead(0);
            s.independent = ech_.insert_traced(r, &s.trace, &lead);
            if (s.independent)
                s.inv_lead = T(1) / lead;
            steps_.push_back(std::move(s));
        }
    }

    std::size_t rank() const { return ech_.rank(); }
    std::size_t cols() const { return ech_.cols(); }
    std::size_t equations() const { return steps_.size(); }
    const Echelon<T>& echelon() const { return ech_; }

    /// Solution with free unknowns zero, or nullopt if A x = b is
    /// inconsistent.
    std::optional<std::vector<T>> solve(const std::vector<T>& b) const {
        if (b.size() != steps_.size())
            throw std::invalid_argument("right-hand side length differs from equation count");
        std::vector<T> prhs;
        prhs.reserve(ech_.rank());
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            const Step& s = steps_[i];
            T v = b[i];
            for (const auto& [pr, f] : s.trace)
                v -= f * prhs[pr];
            if (s.independent)
                prhs.push_back(v * s.inv_lead);
            else if (!is_zero(v))
                return std::nullopt;
        }
        return ech_.solve_pivots(prhs, std::vector<T>(ech_.cols(), T(0)), ech_.cols());
    }

  private:
    struct Step {
        std::vector<std::pair<std::uint32_t, T>> trace;
        bool independent = false;
        T inv_lead = T(0);
    };
    Echelon<T> ech_;
    std::vector<Step> steps_;
};

/// Rank of a row list; rows may be given in any order.
template <class T>
std::size_t sparse_rank(const std::vector<SparseRow<T>>& rows, std::size_t ncols) {
    Echelon<T> e(ncols);
    for (const auto& r : rows)
        e.insert(r);
    return e.rank();
}

}  // namespace fueter
