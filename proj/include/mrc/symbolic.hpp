#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gf.hpp"
#include "prng.hpp"

namespace mrc {

using VarId = int;

/// Product of variables. Empty factor list means the constant 1, which is how
/// the plain parity generator represents its unit entries.
struct Monomial {
    std::vector<VarId> factors; // sorted

    static Monomial unit() { return {}; }
    static Monomial var(VarId v) { return {{v}}; }

    int degree() const { return static_cast<int>(factors.size()); }

    Monomial operator*(const Monomial& o) const {
        Monomial out;
        out.factors.reserve(factors.size() + o.factors.size());
        std::merge(factors.begin(), factors.end(), o.factors.begin(), o.factors.end(),
                   std::back_inserter(out.factors));
        return out;
    }

    bool operator==(const Monomial& o) const { return factors == o.factors; }
};

/// Entry of a symbolic matrix: absent = structural zero.
using SymEntry = std::optional<Monomial>;

/// Values assigned to the variables of one symbolic matrix, keyed by VarId
/// and carrying the display names so the assignment is self-contained.
struct Assignment {
    Field field;
    uint64_t seed = 0;
    std::vector<std::string> names;  // names[id]
    std::vector<uint64_t> values;    // values[id], each in [1, q-1] when drawn

    uint64_t value_of(const std::string& name) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return values[i];
        throw IndexError("unknown variable '" + name + "'");
    }
};

/// Matrix whose entries are zero or monomials in named variables. Variables
/// belong to the matrix: ids index its own name table.
class SymbolicMatrix {
  public:
    SymbolicMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int n_vars() const { return static_cast<int>(var_names_.size()); }
    const std::vector<std::string>& var_names() const { return var_names_; }
    const std::string& var_name(VarId v) const { return var_names_[static_cast<size_t>(v)]; }

    VarId add_variable(std::string name) {
        var_names_.push_back(std::move(name));
        return static_cast<VarId>(var_names_.size() - 1);
    }

    const SymEntry& at(int r, int c) const { return entries_[index(r, c)]; }
    void set(int r, int c, SymEntry e) { entries_[index(r, c)] = std::move(e); }
    void set_unit(int r, int c) { entries_[index(r, c)] = Monomial::unit(); }
    void set_fresh_var(int r, int c, std::string name) {
        entries_[index(r, c)] = Monomial::var(add_variable(std::move(name)));
    }

    bool is_zero(int r, int c) const { return !entries_[index(r, c)].has_value(); }

    SymbolicMatrix submatrix(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
        for (int r : row_idx)
            if (r < 0 || r >= rows_) throw IndexError("row index out of range");
        for (int c : col_idx)
            if (c < 0 || c >= cols_) throw IndexError("column index out of range");
        SymbolicMatrix out(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
        out.var_names_ = var_names_;
        for (size_t i = 0; i < row_idx.size(); ++i)
            for (size_t j = 0; j < col_idx.size(); ++j)
                out.entries_[out.index(static_cast<int>(i), static_cast<int>(j))] = at(row_idx[i], col_idx[j]);
        return out;
    }

    bool row_is_zero(int r) const {
        for (int c = 0; c < cols_; ++c)
            if (!is_zero(r, c)) return false;
        return true;
    }

    /// Renders an entry as "0", "1", a variable name, or a '*'-joined product.
    std::string entry_string(int r, int c) const {
        const SymEntry& e = at(r, c);
        if (!e) return "0";
        if (e->factors.empty()) return "1";
        std::string out;
        for (size_t i = 0; i < e->factors.size(); ++i) {
            if (i > 0) out += "*";
            out += var_name(e->factors[i]);
        }
        return out;
    }

  private:
    size_t index(int r, int c) const { return static_cast<size_t>(r) * cols_ + c; }

    int rows_;
    int cols_;
    std::vector<SymEntry> entries_;
    std::vector<std::string> var_names_;
};

/// Kronecker (tensor) product. Block (i,j) of the result is a(i,j) * b, and
/// monomial degrees add. The variable table of the result is a's table
/// followed by b's table, so b's ids shift by a.n_vars().
inline SymbolicMatrix tensor(const SymbolicMatrix& a, const SymbolicMatrix& b) {
    SymbolicMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (const std::string& name : a.var_names()) out.add_variable(name);
    const VarId offset = a.n_vars();
    for (const std::string& name : b.var_names()) out.add_variable(name);

    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const SymEntry& av = a.at(i, j);
            if (!av) continue;
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q) {
                    const SymEntry& bv = b.at(p, q);
                    if (!bv) continue;
                    Monomial shifted = *bv;
                    for (VarId& f : shifted.factors) f += offset;
                    out.set(i * b.rows() + p, j * b.cols() + q, *av * shifted);
                }
        }
    return out;
}

/// Evaluates every entry under the given per-variable values.
inline FieldMatrix evaluate(const SymbolicMatrix& m, const Field& field, const std::vector<uint64_t>& values) {
    if (static_cast<int>(values.size()) < m.n_vars()) throw ShapeError("not enough values for evaluation");
    FieldMatrix out(field, m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            const SymEntry& e = m.at(r, c);
            if (!e) continue;
            uint64_t v = 1 % field.modulus();
            for (VarId f : e->factors) v = field.mul(v, values[static_cast<size_t>(f)]);
            out(r, c) = v;
        }
    return out;
}

/// Draws one nonzero value per variable (in id order, from a deterministic
/// seeded stream) and evaluates the matrix. Constants are preserved, so an
/// all-constant matrix instantiates identically for every seed.
inline std::pair<FieldMatrix, Assignment> instantiate(const SymbolicMatrix& m, const Field& field, uint64_t seed) {
    SplitMix64 rng(seed);
    Assignment asg{field, seed, m.var_names(), {}};
    asg.values.reserve(m.var_names().size());
    for (size_t i = 0; i < m.var_names().size(); ++i) asg.values.push_back(rng.nonzero(field.modulus()));
    return {evaluate(m, field, asg.values), std::move(asg)};
}

} // namespace mrc
