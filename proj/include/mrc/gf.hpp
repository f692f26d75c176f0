#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace mrc {

namespace detail {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t q) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t q) {
    uint64_t acc = 1 % q;
    base %= q;
    while (exp != 0) {
        if (exp & 1) acc = mulmod(acc, base, q);
        base = mulmod(base, base, q);
        exp >>= 1;
    }
    return acc;
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs with this witness set.
inline bool is_prime64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

} // namespace detail

/// Default modulus 2^31 - 1. Large enough that a random evaluation of any
/// determinant arising here vanishes with negligible probability, and small
/// enough that products fit comfortably in 64-bit intermediates.
inline constexpr uint64_t kDefaultModulus = 2147483647ULL;

/// The prime field GF(q). Elements are plain uint64_t values in [0, q-1].
class Field {
  public:
    explicit Field(uint64_t q) : q_(q) {
        if (q < 2 || !detail::is_prime64(q))
            throw InvalidField("field modulus must be prime, got " + std::to_string(q));
        if (q >= (1ULL << 63))
            throw InvalidField("field modulus must be below 2^63");
    }

    uint64_t modulus() const { return q_; }

    uint64_t reduce(uint64_t v) const { return v % q_; }
    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + q_ - b; }
    uint64_t neg(uint64_t a) const { return a == 0 ? 0 : q_ - a; }
    uint64_t mul(uint64_t a, uint64_t b) const { return detail::mulmod(a, b, q_); }

    /// Multiplicative inverse by extended Euclid; valid for any prime modulus.
    uint64_t inv(uint64_t a) const {
        a %= q_;
        if (a == 0) throw Error("division by zero in GF(" + std::to_string(q_) + ")");
        int64_t t = 0, nt = 1;
        int64_t r = static_cast<int64_t>(q_), nr = static_cast<int64_t>(a);
        while (nr != 0) {
            int64_t quot = r / nr;
            t -= quot * nt;
            std::swap(t, nt);
            r -= quot * nr;
            std::swap(r, nr);
        }
        return t < 0 ? static_cast<uint64_t>(t + static_cast<int64_t>(q_)) : static_cast<uint64_t>(t);
    }

    bool operator==(const Field& other) const { return q_ == other.q_; }
    bool operator!=(const Field& other) const { return q_ != other.q_; }

  private:
    uint64_t q_;
};

/// Dense row-major matrix over GF(q). Values are kept reduced mod q.
class FieldMatrix {
  public:
    FieldMatrix(Field field, int rows, int cols)
        : field_(field), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {
        if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
    }

    static FieldMatrix identity(Field field, int n) {
        FieldMatrix m(field, n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static FieldMatrix from_rows(Field field, std::initializer_list<std::initializer_list<uint64_t>> rows) {
        int r = static_cast<int>(rows.size());
        int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
        FieldMatrix m(field, r, c);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != c) throw ShapeError("ragged row list");
            int j = 0;
            for (uint64_t v : row) m(i, j++) = field.reduce(v);
            ++i;
        }
        return m;
    }

    const Field& field() const { return field_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    uint64_t operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
    uint64_t& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }

    FieldMatrix transpose() const {
        FieldMatrix t(field_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Restriction to the given 0-based row and column index sets, order-preserving.
    FieldMatrix submatrix(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
        for (int r : row_idx)
            if (r < 0 || r >= rows_) throw IndexError("row index " + std::to_string(r) + " out of range");
        for (int c : col_idx)
            if (c < 0 || c >= cols_) throw IndexError("column index " + std::to_string(c) + " out of range");
        FieldMatrix m(field_, static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
        for (size_t i = 0; i < row_idx.size(); ++i)
            for (size_t j = 0; j < col_idx.size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = (*this)(row_idx[i], col_idx[j]);
        return m;
    }

    FieldMatrix columns(const std::vector<int>& col_idx) const {
        std::vector<int> all_rows(rows_);
        for (int i = 0; i < rows_; ++i) all_rows[i] = i;
        return submatrix(all_rows, col_idx);
    }

    FieldMatrix operator*(const FieldMatrix& rhs) const {
        if (field_ != rhs.field_) throw ShapeError("field mismatch in matrix product");
        if (cols_ != rhs.rows_) throw ShapeError("inner dimension mismatch in matrix product");
        FieldMatrix out(field_, rows_, rhs.cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int l = 0; l < cols_; ++l) {
                uint64_t v = (*this)(i, l);
                if (v == 0) continue;
                for (int j = 0; j < rhs.cols_; ++j)
                    out(i, j) = field_.add(out(i, j), field_.mul(v, rhs(l, j)));
            }
        }
        return out;
    }

    /// Row rank by Gaussian elimination, pivoting on the first nonzero entry.
    int rank() const {
        FieldMatrix w(*this);
        int r = 0;
        for (int c = 0; c < cols_ && r < rows_; ++c) {
            int pivot = -1;
            for (int i = r; i < rows_; ++i) {
                if (w(i, c) != 0) {
                    pivot = i;
                    break;
                }
            }
            if (pivot < 0) continue;
            w.swap_rows(r, pivot);
            const uint64_t inv_p = field_.inv(w(r, c));
            for (int i = r + 1; i < rows_; ++i) {
                if (w(i, c) == 0) continue;
                const uint64_t f = field_.mul(w(i, c), inv_p);
                for (int j = c; j < cols_; ++j) w(i, j) = field_.sub(w(i, j), field_.mul(f, w(r, j)));
            }
            ++r;
        }
        return r;
    }

    bool operator==(const FieldMatrix& o) const {
        return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const FieldMatrix& o) const { return !(*this == o); }

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }

  private:
    Field field_;
    int rows_;
    int cols_;
    std::vector<uint64_t> a_;
};

namespace detail {

/// Reduced row echelon form; returns pivot columns.
inline std::vector<int> rref_in_place(FieldMatrix& w) {
    const Field& f = w.field();
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < w.cols() && r < w.rows(); ++c) {
        int pivot = -1;
        for (int i = r; i < w.rows(); ++i) {
            if (w(i, c) != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) continue;
        w.swap_rows(r, pivot);
        const uint64_t inv_p = f.inv(w(r, c));
        for (int j = c; j < w.cols(); ++j) w(r, j) = f.mul(w(r, j), inv_p);
        for (int i = 0; i < w.rows(); ++i) {
            if (i == r || w(i, c) == 0) continue;
            const uint64_t v = w(i, c);
            for (int j = c; j < w.cols(); ++j) w(i, j) = f.sub(w(i, j), f.mul(v, w(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace detail

/// Solves A x = y for the unique x when A has full column rank.
/// Throws Underdetermined if rank(A) < cols, NoSolution if inconsistent.
inline std::vector<uint64_t> solve(const FieldMatrix& a, const std::vector<uint64_t>& y) {
    if (static_cast<int>(y.size()) != a.rows()) throw ShapeError("rhs length does not match row count");
    const Field& f = a.field();

    FieldMatrix w(f, a.rows(), a.cols() + 1);
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) w(i, j) = a(i, j);
        w(i, a.cols()) = f.reduce(y[i]);
    }
    FieldMatrix lhs(f, a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) lhs(i, j) = a(i, j);
    std::vector<int> pivots = detail::rref_in_place(w);

    // pivots in the augmented column do not count toward rank(A)
    int rank_a = 0;
    for (int c : pivots)
        if (c < a.cols()) ++rank_a;
    if (rank_a < a.cols()) throw Underdetermined("coefficient matrix is rank-deficient");

    std::vector<uint64_t> x(a.cols(), 0);
    for (int r = 0; r < rank_a; ++r) x[pivots[r]] = w(r, a.cols());

    for (int i = 0; i < a.rows(); ++i) {
        uint64_t acc = 0;
        for (int j = 0; j < a.cols(); ++j) acc = f.add(acc, f.mul(lhs(i, j), x[j]));
        if (acc != f.reduce(y[i])) throw NoSolution("inconsistent linear system", i);
    }
    return x;
}

/// Basis of the right nullspace {x : M x = 0}, one basis vector per row.
inline FieldMatrix nullspace_basis(const FieldMatrix& m) {
    const Field& f = m.field();
    FieldMatrix w(m);
    std::vector<int> pivots = detail::rref_in_place(w);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : pivots) is_pivot[c] = true;

    FieldMatrix basis(f, m.cols() - static_cast<int>(pivots.size()), m.cols());
    int k = 0;
    for (int c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        basis(k, c) = 1;
        for (size_t r = 0; r < pivots.size(); ++r) basis(k, pivots[r]) = f.neg(w(static_cast<int>(r), c));
        ++k;
    }
    return basis;
}

/// Kronecker product: block (i,j) of the result is a(i,j) * b.
inline FieldMatrix kron(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.field() != b.field()) throw ShapeError("field mismatch in Kronecker product");
    const Field& f = a.field();
    FieldMatrix out(f, a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const uint64_t v = a(i, j);
            if (v == 0) continue;
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q) out(i * b.rows() + p, j * b.cols() + q) = f.mul(v, b(p, q));
        }
    return out;
}

} // namespace mrc
