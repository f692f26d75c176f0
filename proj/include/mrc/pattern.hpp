#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace mrc {

/// Grid topology with `a` parity constraints per column and `b` per row
/// (no global parities). All row/column indices exposed by this module are
/// 1-based, matching the on-disk pattern format.
struct Topology {
    int m = 0; ///< rows
    int n = 0; ///< columns
    int a = 0; ///< column-code parities
    int b = 0; ///< row-code parities

    Topology() = default;
    Topology(int m_, int n_, int a_, int b_) : m(m_), n(n_), a(a_), b(b_) {
        if (!(1 <= a && a < m))
            throw InvalidTopology("need 1 <= a < m, got a=" + std::to_string(a) + " m=" + std::to_string(m));
        if (!(1 <= b && b < n))
            throw InvalidTopology("need 1 <= b < n, got b=" + std::to_string(b) + " n=" + std::to_string(n));
    }

    int cells() const { return m * n; }
    /// Dimension of any full product code instantiating the topology.
    int dimension() const { return (m - a) * (n - b); }

    bool operator==(const Topology& o) const { return m == o.m && n == o.n && a == o.a && b == o.b; }
    bool operator!=(const Topology& o) const { return !(*this == o); }
};

struct Cell {
    int row = 0;
    int col = 0;
    bool operator==(const Cell& o) const { return row == o.row && col == o.col; }
    bool operator<(const Cell& o) const { return row != o.row ? row < o.row : col < o.col; }
};

/// Set of erased cells of an m x n grid, stored as per-row sorted column lists.
class ErasurePattern {
  public:
    explicit ErasurePattern(Topology topo) : topo_(topo), rows_(topo.m) {}

    static ErasurePattern from_cells(Topology topo, const std::vector<Cell>& cells) {
        ErasurePattern e(topo);
        for (const Cell& c : cells) e.add(c.row, c.col);
        return e;
    }

    const Topology& topology() const { return topo_; }

    void add(int row, int col) {
        check_range(row, col);
        auto& r = rows_[row - 1];
        auto it = std::lower_bound(r.begin(), r.end(), col);
        if (it != r.end() && *it == col) return;
        r.insert(it, col);
        ++count_;
    }

    bool erased(int row, int col) const {
        check_range(row, col);
        const auto& r = rows_[row - 1];
        return std::binary_search(r.begin(), r.end(), col);
    }

    /// Sorted erased columns of the given row (the row's support V_i).
    const std::vector<int>& row_support(int row) const { return rows_[row - 1]; }
    int row_count(int row) const { return static_cast<int>(rows_[row - 1].size()); }

    int erasure_count() const { return count_; }
    bool empty() const { return count_ == 0; }

    std::vector<Cell> cells() const {
        std::vector<Cell> out;
        out.reserve(count_);
        for (int i = 1; i <= topo_.m; ++i)
            for (int c : rows_[i - 1]) out.push_back({i, c});
        return out;
    }

    /// Row-major bitmask with bit (i-1)*n + (j-1) for cell (i,j). Grids above
    /// 64 cells are not representable this way.
    uint64_t bitmask() const {
        if (topo_.cells() > 64) throw TooLarge("grid exceeds 64 cells, no bitmask form");
        uint64_t mask = 0;
        for (int i = 1; i <= topo_.m; ++i)
            for (int c : rows_[i - 1]) mask |= 1ULL << (static_cast<uint64_t>(i - 1) * topo_.n + (c - 1));
        return mask;
    }

    static ErasurePattern from_bitmask(Topology topo, uint64_t mask) {
        if (topo.cells() > 64) throw TooLarge("grid exceeds 64 cells, no bitmask form");
        ErasurePattern e(topo);
        for (int bit = 0; bit < topo.cells(); ++bit)
            if (mask & (1ULL << bit)) e.add(bit / topo.n + 1, bit % topo.n + 1);
        return e;
    }

    ErasurePattern transposed() const {
        ErasurePattern t(Topology(topo_.n, topo_.m, topo_.b, topo_.a));
        for (int i = 1; i <= topo_.m; ++i)
            for (int c : rows_[i - 1]) t.add(c, i);
        return t;
    }

    bool operator==(const ErasurePattern& o) const { return topo_ == o.topo_ && rows_ == o.rows_; }
    bool operator!=(const ErasurePattern& o) const { return !(*this == o); }

  private:
    void check_range(int row, int col) const {
        if (row < 1 || row > topo_.m || col < 1 || col > topo_.n)
            throw IndexError("cell (" + std::to_string(row) + "," + std::to_string(col) + ") outside " +
                             std::to_string(topo_.m) + "x" + std::to_string(topo_.n) + " grid");
    }

    Topology topo_;
    std::vector<std::vector<int>> rows_;
    int count_ = 0;
};

/// A subgrid U x V given by sorted 1-based row and column labels.
struct Grid {
    std::vector<int> rows;
    std::vector<int> cols;
    int u() const { return static_cast<int>(rows.size()); }
    int v() const { return static_cast<int>(cols.size()); }
};

/// Smallest grid containing every erasure. Throws EmptyPattern when there is none.
inline Grid enclosing_grid(const ErasurePattern& e) {
    if (e.empty()) throw EmptyPattern("empty pattern has no enclosing grid");
    Grid g;
    std::vector<bool> col_seen(e.topology().n + 1, false);
    for (int i = 1; i <= e.topology().m; ++i) {
        if (e.row_count(i) == 0) continue;
        g.rows.push_back(i);
        for (int c : e.row_support(i)) col_seen[c] = true;
    }
    for (int c = 1; c <= e.topology().n; ++c)
        if (col_seen[c]) g.cols.push_back(c);
    return g;
}

struct RegularityResult {
    bool regular = true;
    Grid witness; ///< a violating subgrid when regular is false
};

namespace detail {

/// Core of the regularity check, enumerating row subsets of `e` in
/// lexicographic order. For a fixed row subset U the worst column subset of
/// size v is the v columns with the most erasures inside U, so a single
/// sorted scan over v decides every V at once.
inline bool regular_scan(const ErasurePattern& e, Grid& witness) {
    const Topology& t = e.topology();
    const int m = t.m, n = t.n, a = t.a, b = t.b;

    std::vector<int> counts(n + 1, 0);
    std::vector<int> chosen;
    std::vector<int> order(n);

    // returns false on the first violation (lexicographically first U, then smallest v)
    auto check_current = [&]() -> bool {
        const int u = static_cast<int>(chosen.size());
        if (u <= a) return true;
        std::iota(order.begin(), order.end(), 1);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return counts[x] > counts[y]; });
        long long prefix = 0;
        for (int v = 1; v <= n; ++v) {
            prefix += counts[order[v - 1]];
            if (v <= b) continue;
            const long long bound = static_cast<long long>(u) * v - static_cast<long long>(u - a) * (v - b);
            if (prefix > bound) {
                witness.rows = chosen;
                witness.cols.assign(order.begin(), order.begin() + v);
                std::sort(witness.cols.begin(), witness.cols.end());
                return false;
            }
        }
        return true;
    };

    // depth-first extension = lexicographic subset order
    auto dfs = [&](auto&& self, int next_row) -> bool {
        for (int i = next_row; i <= m; ++i) {
            chosen.push_back(i);
            for (int c : e.row_support(i)) ++counts[c];
            if (!check_current()) return false;
            if (!self(self, i + 1)) return false;
            for (int c : e.row_support(i)) --counts[c];
            chosen.pop_back();
        }
        return true;
    };
    return dfs(dfs, 1);
}

} // namespace detail

/// Decides whether |E ∩ (U x V)| <= uv - max(u-a,0)·max(v-b,0) holds on every
/// subgrid. When it fails, reports one violating subgrid. Cost is
/// 2^min(m,n) sorted scans; grids beyond 25 on their short side are refused.
inline RegularityResult is_regular(const ErasurePattern& e) {
    RegularityResult res;
    if (e.empty()) return res;
    if (std::min(e.topology().m, e.topology().n) > 25)
        throw TooLarge("regularity enumeration guarded to 25 rows or columns on the short side");
    // enumerate over the smaller side
    if (e.topology().m > e.topology().n) {
        ErasurePattern tr = e.transposed();
        Grid w;
        if (!detail::regular_scan(tr, w)) {
            res.regular = false;
            res.witness.rows = w.cols;
            res.witness.cols = w.rows;
        }
        return res;
    }
    Grid w;
    if (!detail::regular_scan(e, w)) {
        res.regular = false;
        res.witness = w;
    }
    return res;
}

/// Every nonempty row carries at least b+1 erasures.
inline bool is_row_irreducible(const ErasurePattern& e) {
    for (int i = 1; i <= e.topology().m; ++i) {
        int c = e.row_count(i);
        if (c != 0 && c < e.topology().b + 1) return false;
    }
    return true;
}

/// Every nonempty column carries at least a+1 erasures.
inline bool is_col_irreducible(const ErasurePattern& e) {
    std::vector<int> col_counts(e.topology().n + 1, 0);
    for (int i = 1; i <= e.topology().m; ++i)
        for (int c : e.row_support(i)) ++col_counts[c];
    for (int c = 1; c <= e.topology().n; ++c)
        if (col_counts[c] != 0 && col_counts[c] < e.topology().a + 1) return false;
    return true;
}

inline bool is_irreducible(const ErasurePattern& e) { return is_row_irreducible(e) && is_col_irreducible(e); }

/// Keeps exactly the rows with >= b+1 erasures; clears the rest. The result
/// is row-wise irreducible and recoverability is unchanged.
inline ErasurePattern reduce_rowwise(const ErasurePattern& e) {
    ErasurePattern out(e.topology());
    for (int i = 1; i <= e.topology().m; ++i) {
        if (e.row_count(i) < e.topology().b + 1) continue;
        for (int c : e.row_support(i)) out.add(i, c);
    }
    return out;
}

struct RowProfile {
    int row = 0;               ///< grid row index
    std::vector<int> support;  ///< erased columns V_i
    int excess = 0;            ///< r_i = |V_i| - b
};

/// Per-row supports and excesses of a row-wise irreducible pattern.
inline std::vector<RowProfile> row_profiles(const ErasurePattern& e) {
    std::vector<RowProfile> out;
    for (int i = 1; i <= e.topology().m; ++i) {
        const int c = e.row_count(i);
        if (c == 0) continue;
        if (c < e.topology().b + 1)
            throw NotIrreducible("row " + std::to_string(i) + " has " + std::to_string(c) +
                                 " erasures, need at least " + std::to_string(e.topology().b + 1));
        out.push_back({i, e.row_support(i), c - e.topology().b});
    }
    return out;
}

/// An erasure pattern for two column parities built by appending rows that
/// replicate the supports of distinct rows of a one-parity base pattern.
struct ExtendedPattern {
    ErasurePattern base;      ///< pattern on the original m x n grid (a = 1)
    std::vector<int> sources; ///< base rows replicated, in order, all distinct
    ErasurePattern result;    ///< pattern on the (m+m') x n grid (a = 2)

    int m_prime() const { return static_cast<int>(sources.size()); }
};

inline ExtendedPattern extend_pattern(const ErasurePattern& e, const std::vector<int>& sources) {
    const Topology& t = e.topology();
    if (t.a != 1) throw PreconditionFailed("extension requires a base pattern with a=1");
    if (!is_row_irreducible(e)) throw PreconditionFailed("base pattern must be row-wise irreducible");
    if (!is_regular(e).regular) throw PreconditionFailed("base pattern must be regular");
    if (static_cast<int>(sources.size()) > t.m) throw ReplicationBound("more extension rows than base rows");

    std::vector<int> seen;
    for (int s : sources) {
        if (s < 1 || s > t.m) throw IndexError("source row " + std::to_string(s) + " out of range");
        if (std::find(seen.begin(), seen.end(), s) != seen.end())
            throw ReplicationBound("source row " + std::to_string(s) + " replicated twice");
        seen.push_back(s);
    }

    const int m_total = t.m + static_cast<int>(sources.size());
    if (m_total <= 2) throw PreconditionFailed("extended topology needs more than 2 rows for a=2");

    ExtendedPattern x{e, sources, ErasurePattern(Topology(m_total, t.n, 2, t.b))};
    for (int i = 1; i <= t.m; ++i)
        for (int c : e.row_support(i)) x.result.add(i, c);
    for (size_t l = 0; l < sources.size(); ++l)
        for (int c : e.row_support(sources[l])) x.result.add(t.m + static_cast<int>(l) + 1, c);
    return x;
}

/// Regularity of the extended pattern under its two-parity topology. Holds
/// for every valid extension of a regular irreducible base; kept as an
/// explicit cross-check rather than assumed.
inline RegularityResult check_extended_regular(const ExtendedPattern& x) { return is_regular(x.result); }

// --- text format ----------------------------------------------------------
//
// First line: "m n a b" (decimal). Then m lines of exactly n characters,
// '.' for intact and 'x' for erased.

inline ErasurePattern parse_pattern(std::string_view text) {
    std::vector<std::string> lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        std::string line(end == std::string_view::npos ? text.substr(start) : text.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("empty pattern file", 1, 1);

    std::istringstream head(lines[0]);
    long long m, n, a, b;
    if (!(head >> m >> n >> a >> b)) throw ParseError("header must be 'm n a b'", 1, 1);
    std::string trailing;
    if (head >> trailing) throw ParseError("trailing tokens after header", 1, 1);
    if (m < 2 || n < 2 || m > 4096 || n > 4096) throw ParseError("grid dimensions out of range", 1, 1);

    Topology topo;
    try {
        topo = Topology(static_cast<int>(m), static_cast<int>(n), static_cast<int>(a), static_cast<int>(b));
    } catch (const InvalidTopology& err) {
        throw ParseError(err.what(), 1, 1);
    }

    if (static_cast<long long>(lines.size()) - 1 != m)
        throw ParseError("expected " + std::to_string(m) + " grid lines, got " + std::to_string(lines.size() - 1),
                         static_cast<int>(lines.size()), 1);

    ErasurePattern e(topo);
    for (int i = 1; i <= topo.m; ++i) {
        const std::string& row = lines[i];
        if (static_cast<int>(row.size()) != topo.n)
            throw ParseError("row must have exactly " + std::to_string(topo.n) + " characters", i + 1,
                             static_cast<int>(row.size()) + 1);
        for (int j = 1; j <= topo.n; ++j) {
            char c = row[j - 1];
            if (c == 'x')
                e.add(i, j);
            else if (c != '.')
                throw ParseError(std::string("invalid character '") + c + "', expected '.' or 'x'", i + 1, j);
        }
    }
    return e;
}

inline std::string format_pattern(const ErasurePattern& e) {
    const Topology& t = e.topology();
    std::string out = std::to_string(t.m) + " " + std::to_string(t.n) + " " + std::to_string(t.a) + " " +
                      std::to_string(t.b) + "\n";
    for (int i = 1; i <= t.m; ++i) {
        std::string row(t.n, '.');
        for (int c : e.row_support(i)) row[c - 1] = 'x';
        out += row;
        out += '\n';
    }
    return out;
}

/// Renders a sorted index list compactly, e.g. {1:5} or {2,4:6,9}.
inline std::string format_index_set(const std::vector<int>& xs) {
    if (xs.empty()) return "{}";
    std::string out = "{";
    size_t i = 0;
    while (i < xs.size()) {
        size_t j = i;
        while (j + 1 < xs.size() && xs[j + 1] == xs[j] + 1) ++j;
        if (i > 0) out += ",";
        out += std::to_string(xs[i]);
        if (j > i) out += ":" + std::to_string(xs[j]);
        i = j + 1;
    }
    return out + "}";
}

} // namespace mrc
