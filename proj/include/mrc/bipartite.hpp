#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "errors.hpp"
#include "pattern.hpp"
#include "symbolic.hpp"

namespace mrc {

/// Bipartite graph over indexed left/right vertex sets with display labels.
struct BipartiteGraph {
    int n_left = 0;
    int n_right = 0;
    std::vector<std::vector<int>> adj; ///< adj[left] = sorted right indices
    std::vector<std::string> left_labels;
    std::vector<std::string> right_labels;

    void add_edge(int l, int r) {
        auto& row = adj[l];
        auto it = std::lower_bound(row.begin(), row.end(), r);
        if (it == row.end() || *it != r) row.insert(it, r);
    }
    bool has_edge(int l, int r) const {
        return std::binary_search(adj[l].begin(), adj[l].end(), r);
    }
    int edge_count() const {
        int c = 0;
        for (const auto& row : adj) c += static_cast<int>(row.size());
        return c;
    }
};

/// Outcome of the matching search: either a matching covering every left
/// vertex, or a left subset violating Hall's condition. `match` always holds
/// a maximum matching.
struct MatchingResult {
    bool complete = false;
    std::vector<int> match;              ///< right index per left vertex, -1 if unmatched
    std::vector<int> hall_set;           ///< when incomplete: A with |N(A)| < |A|
    std::vector<int> hall_neighborhood;  ///< N(A)

    int size() const {
        int s = 0;
        for (int r : match)
            if (r >= 0) ++s;
        return s;
    }
    std::vector<std::pair<int, int>> pairs() const {
        std::vector<std::pair<int, int>> out;
        for (int l = 0; l < static_cast<int>(match.size()); ++l)
            if (match[l] >= 0) out.emplace_back(l, match[l]);
        return out;
    }
};

/// Maximum matching by repeated augmenting-path search, processing vertices
/// in ascending index order so results are deterministic. When some left
/// vertex stays unmatched, extracts the alternating-reachability set from the
/// lowest such vertex: that set violates Hall's condition outright.
inline MatchingResult complete_matching(const BipartiteGraph& g) {
    MatchingResult res;
    res.match.assign(g.n_left, -1);
    std::vector<int> match_right(g.n_right, -1);

    std::vector<char> visited(g.n_right, 0);
    auto augment = [&](auto&& self, int u) -> bool {
        for (int r : g.adj[u]) {
            if (visited[r]) continue;
            visited[r] = 1;
            if (match_right[r] < 0 || self(self, match_right[r])) {
                res.match[u] = r;
                match_right[r] = u;
                return true;
            }
        }
        return false;
    };

    for (int u = 0; u < g.n_left; ++u) {
        std::fill(visited.begin(), visited.end(), 0);
        augment(augment, u);
    }

    int first_unmatched = -1;
    for (int u = 0; u < g.n_left; ++u)
        if (res.match[u] < 0) {
            first_unmatched = u;
            break;
        }
    res.complete = first_unmatched < 0;
    if (res.complete) return res;

    // alternating closure from the unmatched vertex; augmenting paths are
    // exhausted, so every reachable right vertex is matched into the set
    std::vector<char> seen_left(g.n_left, 0), seen_right(g.n_right, 0);
    std::vector<int> queue = {first_unmatched};
    seen_left[first_unmatched] = 1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int r : g.adj[u]) {
            if (seen_right[r]) continue;
            seen_right[r] = 1;
            int w = match_right[r];
            if (w >= 0 && !seen_left[w]) {
                seen_left[w] = 1;
                queue.push_back(w);
            }
        }
    }
    for (int u = 0; u < g.n_left; ++u)
        if (seen_left[u]) res.hall_set.push_back(u);
    for (int r = 0; r < g.n_right; ++r)
        if (seen_right[r]) res.hall_neighborhood.push_back(r);
    return res;
}

/// Left vertex of the erasure/non-erasure graph: copy `copy` of row `row`.
struct LeftVertexE {
    int row = 0;
    int copy = 0;
};

/// Right vertex: a non-erased cell in one of the designated rows.
struct RightVertexD {
    int row = 0;
    int col = 0;
};

/// The graph between row-excess copies and non-erasures. Left side has r_i
/// copies per row i outside u_r; right side has one vertex per non-erased
/// cell in the u_r rows; an edge means row i is erased at that cell's column.
struct ErasureNonerasureGraph {
    BipartiteGraph graph;
    std::vector<LeftVertexE> left;
    std::vector<RightVertexD> right;
    std::vector<int> u_r;
    std::vector<int> u_l;

    /// Sorted distinct columns used by a matching (the matched column set).
    std::vector<int> matched_columns(const MatchingResult& m) const {
        std::vector<int> cols;
        for (int l = 0; l < static_cast<int>(m.match.size()); ++l)
            if (m.match[l] >= 0) cols.push_back(right[m.match[l]].col);
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        return cols;
    }
};

/// Lowest `a` row labels of the enclosing grid: the default right-side rows.
inline std::vector<int> default_u_r(const ErasurePattern& e) {
    Grid g = enclosing_grid(e);
    if (static_cast<int>(g.rows.size()) < e.topology().a)
        throw BadPartition("fewer erased rows than column parities");
    return std::vector<int>(g.rows.begin(), g.rows.begin() + e.topology().a);
}

inline ErasureNonerasureGraph build_erasure_nonerasure_graph(const ErasurePattern& e, std::vector<int> u_r) {
    if (!is_row_irreducible(e)) throw NotIrreducible("pattern must be row-wise irreducible");
    const Topology& t = e.topology();
    Grid g = enclosing_grid(e);

    std::sort(u_r.begin(), u_r.end());
    u_r.erase(std::unique(u_r.begin(), u_r.end()), u_r.end());
    if (static_cast<int>(u_r.size()) != t.a)
        throw BadPartition("need exactly a=" + std::to_string(t.a) + " distinct right-side rows");
    for (int r : u_r)
        if (!std::binary_search(g.rows.begin(), g.rows.end(), r))
            throw BadPartition("row " + std::to_string(r) + " is not an erased row");

    ErasureNonerasureGraph out;
    out.u_r = u_r;
    for (int r : g.rows)
        if (!std::binary_search(u_r.begin(), u_r.end(), r)) out.u_l.push_back(r);

    for (int i : out.u_l) {
        const int excess = e.row_count(i) - t.b;
        for (int j = 1; j <= excess; ++j) out.left.push_back({i, j});
    }
    for (int s : u_r)
        for (int c = 1; c <= t.n; ++c)
            if (!e.erased(s, c)) out.right.push_back({s, c});

    BipartiteGraph& bg = out.graph;
    bg.n_left = static_cast<int>(out.left.size());
    bg.n_right = static_cast<int>(out.right.size());
    bg.adj.assign(bg.n_left, {});
    for (const LeftVertexE& lv : out.left)
        bg.left_labels.push_back("e(" + std::to_string(lv.row) + "," + std::to_string(lv.copy) + ")");
    for (const RightVertexD& rv : out.right)
        bg.right_labels.push_back("d(" + std::to_string(rv.row) + "," + std::to_string(rv.col) + ")");
    for (int l = 0; l < bg.n_left; ++l)
        for (int r = 0; r < bg.n_right; ++r)
            if (e.erased(out.left[l].row, out.right[r].col)) bg.add_edge(l, r);
    return out;
}

/// The row/column graph for one-parity analysis: rows other than `ell`
/// against columns outside row ell's support, joined where erased.
struct RowColGraph {
    BipartiteGraph graph;
    std::vector<int> left_rows;
    std::vector<int> right_cols;
    int ell = 0;
};

inline RowColGraph build_rowcol_graph(const ErasurePattern& e, int ell) {
    if (!is_row_irreducible(e)) throw NotIrreducible("pattern must be row-wise irreducible");
    Grid g = enclosing_grid(e);
    if (!std::binary_search(g.rows.begin(), g.rows.end(), ell))
        throw BadRow("row " + std::to_string(ell) + " is not an erased row");

    RowColGraph out;
    out.ell = ell;
    const std::vector<int>& v_ell = e.row_support(ell);
    for (int r : g.rows)
        if (r != ell) out.left_rows.push_back(r);
    for (int c : g.cols)
        if (!std::binary_search(v_ell.begin(), v_ell.end(), c)) out.right_cols.push_back(c);

    BipartiteGraph& bg = out.graph;
    bg.n_left = static_cast<int>(out.left_rows.size());
    bg.n_right = static_cast<int>(out.right_cols.size());
    bg.adj.assign(bg.n_left, {});
    for (int r : out.left_rows) bg.left_labels.push_back("row " + std::to_string(r));
    for (int c : out.right_cols) bg.right_labels.push_back("col " + std::to_string(c));
    for (int l = 0; l < bg.n_left; ++l)
        for (int r = 0; r < bg.n_right; ++r)
            if (e.erased(out.left_rows[l], out.right_cols[r])) bg.add_edge(l, r);
    return out;
}

/// Checks |N(A)| >= sum of r_i over A for every subset A of left rows, by
/// enumeration. Diagnostic-scale only: guarded to 20 left vertices.
inline bool neighborhood_check(const RowColGraph& g, const std::vector<RowProfile>& profiles) {
    const int L = g.graph.n_left;
    if (L > 20) throw TooLarge("neighborhood enumeration guarded to 20 left vertices");

    std::vector<int> excess(L, -1);
    for (int l = 0; l < L; ++l) {
        for (const RowProfile& p : profiles)
            if (p.row == g.left_rows[l]) excess[l] = p.excess;
        if (excess[l] < 0) throw PreconditionFailed("missing profile for row " + std::to_string(g.left_rows[l]));
    }

    std::vector<uint64_t> nbr(L, 0);
    for (int l = 0; l < L; ++l)
        for (int r : g.graph.adj[l]) nbr[l] |= 1ULL << r;

    for (uint64_t s = 1; s < (1ULL << L); ++s) {
        uint64_t ns = 0;
        long long need = 0;
        for (int l = 0; l < L; ++l)
            if (s & (1ULL << l)) {
                ns |= nbr[l];
                need += excess[l];
            }
        if (static_cast<long long>(__builtin_popcountll(ns)) < need) return false;
    }
    return true;
}

/// Support graph of a square symbolic matrix: rows left, columns right, an
/// edge wherever an entry is nonzero. A complete matching here certifies a
/// nonzero generic determinant.
inline BipartiteGraph matrix_pattern_graph(const SymbolicMatrix& m) {
    if (m.rows() != m.cols()) throw NotSquare("pattern graph requires a square matrix");
    BipartiteGraph g;
    g.n_left = m.rows();
    g.n_right = m.cols();
    g.adj.assign(g.n_left, {});
    for (int r = 0; r < m.rows(); ++r) g.left_labels.push_back("r" + std::to_string(r + 1));
    for (int c = 0; c < m.cols(); ++c) g.right_labels.push_back("c" + std::to_string(c + 1));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (!m.is_zero(r, c)) g.add_edge(r, c);
    return g;
}

namespace detail {

/// Same as matrix_pattern_graph without the squareness requirement; used on
/// rectangular blocks where only row coverage matters.
inline BipartiteGraph support_graph(const SymbolicMatrix& m) {
    BipartiteGraph g;
    g.n_left = m.rows();
    g.n_right = m.cols();
    g.adj.assign(g.n_left, {});
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (!m.is_zero(r, c)) g.add_edge(r, c);
    return g;
}

} // namespace detail

} // namespace mrc
