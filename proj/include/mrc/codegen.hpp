#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bipartite.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "pattern.hpp"
#include "prng.hpp"
#include "symbolic.hpp"

namespace mrc {

/// Layout of a structured row-code generator: an identity block on the
/// non-erased columns, per-erased-row blocks of r_i rows supported on a fixed
/// b-subset of the row's erasures plus one extra column each, and filler rows
/// fully supported on the enclosing columns.
struct GRowPlan {
    int n = 0;
    int b = 0;
    bool generic = false;            ///< true when the fallback all-variables code was used
    std::vector<int> v_cols;         ///< enclosing column set V, ascending
    std::vector<int> identity_cols;  ///< [n] \ V, ascending; one generator row each

    struct Block {
        int grid_row = 0;            ///< erased row this block serves
        std::vector<int> v_t;        ///< the b shared support columns
        std::vector<int> extras;     ///< one additional column per generator row
        int first_row = 0;           ///< 0-based index of the block's first generator row
    };
    std::vector<Block> blocks;       ///< ascending by grid_row

    int filler_first = 0;            ///< 0-based index of the first filler row
    int filler_count = 0;            ///< t = v - b - sum r_i

    int rows() const { return n - b; }
    int s_first() const { return static_cast<int>(identity_cols.size()); }
    int s_count() const {
        int c = 0;
        for (const Block& blk : blocks) c += static_cast<int>(blk.extras.size());
        return c;
    }
};

struct RowCode {
    SymbolicMatrix matrix;
    GRowPlan plan;
};

/// Structured (n-b) x n generator for the row code of a row-wise irreducible
/// pattern with erasures in at least two rows. Every nonzero entry is a fresh
/// degree-1 variable named x_<row>_<col> (1-based generator row, grid column).
/// By default each block's shared support is the b smallest columns of the
/// row's erasures; `vt_override` pins a different choice per grid row.
inline RowCode build_grow(const ErasurePattern& e,
                          const std::map<int, std::vector<int>>& vt_override = {}) {
    const Topology& t = e.topology();
    if (!is_row_irreducible(e)) throw NotIrreducible("row code construction needs a row-wise irreducible pattern");
    if (e.empty()) throw PreconditionFailed("row code construction needs a nonempty pattern");

    Grid g = enclosing_grid(e);
    if (g.u() < 2) throw PreconditionFailed("single-row patterns take the generic row code instead");

    GRowPlan plan;
    plan.n = t.n;
    plan.b = t.b;
    plan.v_cols = g.cols;
    {
        std::set<int> v_set(g.cols.begin(), g.cols.end());
        for (int c = 1; c <= t.n; ++c)
            if (!v_set.count(c)) plan.identity_cols.push_back(c);
    }

    int sum_excess = 0;
    for (int i : g.rows) sum_excess += e.row_count(i) - t.b;
    plan.filler_count = g.v() - t.b - sum_excess;
    if (plan.filler_count < 0)
        throw NotRegular("pattern too dense on its enclosing grid: filler row count would be negative");

    SymbolicMatrix m(t.n - t.b, t.n);
    int row = 0;
    auto cell_var = [&](int r, int c) { m.set_fresh_var(r, c - 1, "x_" + std::to_string(r + 1) + "_" + std::to_string(c)); };

    for (int c : plan.identity_cols) {
        cell_var(row, c);
        ++row;
    }

    for (int i : g.rows) {
        const std::vector<int>& vi = e.row_support(i);
        GRowPlan::Block blk;
        blk.grid_row = i;
        blk.first_row = row;
        auto it = vt_override.find(i);
        if (it != vt_override.end()) {
            blk.v_t = it->second;
            std::sort(blk.v_t.begin(), blk.v_t.end());
            if (static_cast<int>(blk.v_t.size()) != t.b)
                throw PreconditionFailed("support override for row " + std::to_string(i) + " must have b columns");
            for (int c : blk.v_t)
                if (!std::binary_search(vi.begin(), vi.end(), c))
                    throw PreconditionFailed("support override column " + std::to_string(c) +
                                             " is not erased in row " + std::to_string(i));
        } else {
            blk.v_t.assign(vi.begin(), vi.begin() + t.b);
        }
        for (int c : vi)
            if (!std::binary_search(blk.v_t.begin(), blk.v_t.end(), c)) blk.extras.push_back(c);

        for (int extra : blk.extras) {
            for (int c : blk.v_t) cell_var(row, c);
            cell_var(row, extra);
            ++row;
        }
        plan.blocks.push_back(std::move(blk));
    }

    plan.filler_first = row;
    for (int f = 0; f < plan.filler_count; ++f) {
        for (int c : plan.v_cols) cell_var(row, c);
        ++row;
    }
    return {std::move(m), std::move(plan)};
}

/// Fully generic (n-b) x n row code: every entry a distinct variable. Used
/// for empty or single-row patterns and as the universal reference code.
inline RowCode build_generic_grow(int n, int b) {
    if (!(1 <= b && b < n)) throw BadDimension("need 1 <= b < n");
    GRowPlan plan;
    plan.n = n;
    plan.b = b;
    plan.generic = true;
    for (int c = 1; c <= n; ++c) plan.v_cols.push_back(c);
    plan.filler_count = n - b;
    SymbolicMatrix m(n - b, n);
    for (int r = 0; r < n - b; ++r)
        for (int c = 1; c <= n; ++c) m.set_fresh_var(r, c - 1, "x_" + std::to_string(r + 1) + "_" + std::to_string(c));
    return {std::move(m), std::move(plan)};
}

/// Plain parity generator [1 | I]: the (m-1) x m column code for one parity
/// per column. Entries are units, not variables.
inline SymbolicMatrix build_gcol_a1(int m) {
    if (m < 2) throw BadDimension("parity column code needs m >= 2");
    SymbolicMatrix g(m - 1, m);
    for (int r = 0; r < m - 1; ++r) {
        g.set_unit(r, 0);
        g.set_unit(r, r + 1);
    }
    return g;
}

/// Two-parity column code [Sigma | Lambda]: a dense 2-column block of fresh
/// sigma variables next to a diagonal of fresh lambda variables.
inline SymbolicMatrix build_gcol_a2(int m_total) {
    if (m_total < 3) throw BadDimension("two-parity column code needs at least 3 rows");
    SymbolicMatrix g(m_total - 2, m_total);
    for (int r = 0; r < m_total - 2; ++r) {
        g.set_fresh_var(r, 0, "sigma_" + std::to_string(r + 1) + "_1");
        g.set_fresh_var(r, 1, "sigma_" + std::to_string(r + 1) + "_2");
        g.set_fresh_var(r, r + 2, "lambda_" + std::to_string(r + 1) + "_" + std::to_string(r + 1));
    }
    return g;
}

/// Generic (m-a) x m column code with all-distinct variables.
inline SymbolicMatrix build_generic_gcol(int m, int a) {
    if (!(1 <= a && a < m)) throw BadDimension("need 1 <= a < m");
    SymbolicMatrix g(m - a, m);
    for (int r = 0; r < m - a; ++r)
        for (int c = 0; c < m; ++c) g.set_fresh_var(r, c, "g_" + std::to_string(r + 1) + "_" + std::to_string(c + 1));
    return g;
}

/// One instantiation of a product code: the two factors and their Kronecker
/// product, evaluated under a single shared assignment.
struct InstantiatedProduct {
    FieldMatrix gcol;
    FieldMatrix grow;
    FieldMatrix g;
    Assignment assignment; ///< over the tensor's variable table (gcol vars, then grow vars)
    uint64_t seed = 0;
};

inline InstantiatedProduct instantiate_product(const SymbolicMatrix& sym_gcol, const SymbolicMatrix& sym_grow,
                                               const Field& field, uint64_t seed) {
    SymbolicMatrix sym_g = tensor(sym_gcol, sym_grow);
    auto [g, asg] = instantiate(sym_g, field, seed);
    std::vector<uint64_t> col_vals(asg.values.begin(), asg.values.begin() + sym_gcol.n_vars());
    std::vector<uint64_t> row_vals(asg.values.begin() + sym_gcol.n_vars(), asg.values.end());
    return {evaluate(sym_gcol, field, col_vals), evaluate(sym_grow, field, row_vals), std::move(g), std::move(asg),
            seed};
}

/// A verified per-pattern code: symbolic factors, the instantiation that
/// passed the punctured-rank check, and the construction plan.
struct SampledCode {
    Topology topology;
    SymbolicMatrix sym_gcol;
    SymbolicMatrix sym_grow;
    GRowPlan plan;
    InstantiatedProduct inst;
    int attempts = 1;
};

namespace detail {

/// 0-based vectorized column indices of the non-erased cells, row-major.
inline std::vector<int> surviving_columns(const ErasurePattern& e) {
    const Topology& t = e.topology();
    std::vector<int> cols;
    cols.reserve(t.cells() - e.erasure_count());
    for (int i = 1; i <= t.m; ++i)
        for (int j = 1; j <= t.n; ++j)
            if (!e.erased(i, j)) cols.push_back((i - 1) * t.n + (j - 1));
    return cols;
}

inline SampledCode sample_product_for(const ErasurePattern& verify_against, SymbolicMatrix sym_gcol,
                                      RowCode row_code, Topology topo, const Field& field, uint64_t seed,
                                      int max_retries) {
    const int target = topo.dimension();
    const std::vector<int> survivors = surviving_columns(verify_against);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        InstantiatedProduct inst = instantiate_product(sym_gcol, row_code.matrix, field, mix_seed(seed, attempt));
        if (inst.g.columns(survivors).rank() == target)
            return {topo, std::move(sym_gcol), std::move(row_code.matrix), std::move(row_code.plan),
                    std::move(inst), attempt + 1};
    }
    throw UnluckyField("no instantiation reached full punctured rank in " + std::to_string(max_retries) +
                       " attempts; modulus too small or construction bug");
}

} // namespace detail

/// Builds and instantiates a product code recovering the given pattern under
/// one column parity. The pattern is row-reduced first; construction and the
/// punctured-rank check both use the reduced pattern (recoverability of the
/// original follows from the reduction). Patterns with fewer than two erased
/// rows take the generic row code.
inline SampledCode sample_code(const ErasurePattern& e, const Field& field, uint64_t seed, int max_retries = 8) {
    const Topology& t = e.topology();
    if (t.a != 1) throw PreconditionFailed("sample_code handles a=1; use sample_code_a2 for extensions");
    ErasurePattern reduced = reduce_rowwise(e);
    if (!is_regular(reduced).regular) throw NotRegular("pattern is not regular; no instantiation can recover it");

    bool structured = false;
    if (!reduced.empty()) structured = enclosing_grid(reduced).u() >= 2;
    RowCode rc = structured ? build_grow(reduced) : build_generic_grow(t.n, t.b);
    return detail::sample_product_for(reduced, build_gcol_a1(t.m), std::move(rc), t, field, seed, max_retries);
}

/// Same for an extended pattern under two column parities: the row code comes
/// from the base pattern, the column code is the [Sigma | Lambda] form on
/// m + m' rows. Verifies full punctured rank on the extended pattern.
inline SampledCode sample_code_a2(const ExtendedPattern& x, const Field& field, uint64_t seed, int max_retries = 8) {
    const Topology& bt = x.base.topology();
    const int m_total = bt.m + x.m_prime();

    bool structured = false;
    if (!x.base.empty()) structured = enclosing_grid(x.base).u() >= 2;
    RowCode rc = structured ? build_grow(x.base) : build_generic_grow(bt.n, bt.b);
    return detail::sample_product_for(x.result, build_gcol_a2(m_total), std::move(rc), x.result.topology(), field,
                                      seed, max_retries);
}

/// Fully generic instantiated product code for a topology. Its punctured rank
/// dominates every structured instantiation, which makes it the reference
/// code for recoverability classification.
inline InstantiatedProduct sample_universal_mrc(const Topology& t, const Field& field, uint64_t seed) {
    return instantiate_product(build_generic_gcol(t.m, t.a), build_generic_grow(t.n, t.b).matrix, field, seed);
}

/// Diagnostic reconstruction of the block decomposition that underlies the
/// one-parity recoverability proof. Splits the punctured generator into the
/// identity block, per-row blocks, and the top block over the parity row's
/// surviving columns, then certifies a complete matching in each block's
/// support graph and distinctness of the top-minor variables.
struct DecompositionReport {
    int parity_row = 0;                ///< the single right-side row used
    std::vector<int> matched_columns;  ///< matched column set of the top block
    int p_rows = 0;
    int p_cols = 0;

    struct BlockCheck {
        std::string name;
        int rows = 0;
        int cols = 0;
        bool ok = false;
    };
    std::vector<BlockCheck> checks;
    bool all_ok = true;

    std::string summary() const {
        std::string out = "decomposition: parity row " + std::to_string(parity_row) + "; matched columns " +
                          format_index_set(matched_columns) + "; top block " + std::to_string(p_rows) + "x" +
                          std::to_string(p_cols) + "\n";
        for (const BlockCheck& c : checks)
            out += "  " + c.name + " (" + std::to_string(c.rows) + "x" + std::to_string(c.cols) + "): " +
                   (c.ok ? "ok" : "FAILED") + "\n";
        out += all_ok ? "  all checks passed\n" : "  CHECKS FAILED\n";
        return out;
    }
};

inline DecompositionReport proof_decomposition(const ErasurePattern& e, const GRowPlan& plan,
                                               std::optional<int> parity_row = std::nullopt) {
    const Topology& t = e.topology();
    if (t.a != 1) throw PreconditionFailed("decomposition diagnostics are defined for a=1");
    if (plan.generic) throw PreconditionFailed("decomposition diagnostics need the structured row code");

    // the caller's plan must describe this pattern: rebuild with the default
    // layout and compare the structure, then rebuild once more honoring the
    // plan's per-row support choices
    RowCode rc = build_grow(e);
    bool layout_matches = plan.n == rc.plan.n && plan.b == rc.plan.b &&
                          plan.identity_cols == rc.plan.identity_cols &&
                          plan.blocks.size() == rc.plan.blocks.size();
    for (size_t i = 0; layout_matches && i < plan.blocks.size(); ++i)
        layout_matches = plan.blocks[i].grid_row == rc.plan.blocks[i].grid_row;
    if (!layout_matches) throw DecompositionFailure("plan does not match the pattern's row code layout");
    if (!plan.blocks.empty()) {
        std::map<int, std::vector<int>> overrides;
        for (const GRowPlan::Block& blk : plan.blocks) overrides[blk.grid_row] = blk.v_t;
        rc = build_grow(e, overrides);
    }
    const SymbolicMatrix& grow = rc.matrix;
    Grid g = enclosing_grid(e);

    DecompositionReport rep;
    const int ell = parity_row.value_or(g.rows.front());
    rep.parity_row = ell;
    if (!std::binary_search(g.rows.begin(), g.rows.end(), ell)) throw BadRow("parity row must be an erased row");

    auto fail = [&](const std::string& what) {
        throw DecompositionFailure("decomposition check failed: " + what);
    };

    // 0-based generator row ranges
    std::vector<int> s_rows; // all per-row block rows
    for (const GRowPlan::Block& blk : plan.blocks)
        for (size_t k = 0; k < blk.extras.size(); ++k) s_rows.push_back(blk.first_row + static_cast<int>(k));
    std::vector<int> filler_rows;
    for (int f = 0; f < plan.filler_count; ++f) filler_rows.push_back(plan.filler_first + f);

    auto cols_excluding = [&](const std::vector<int>& v_cols, const std::vector<int>& minus) {
        std::vector<int> out;
        for (int c : v_cols)
            if (!std::binary_search(minus.begin(), minus.end(), c)) out.push_back(c - 1);
        return out;
    };

    // per-row blocks: restricted to the enclosing columns minus the row's
    // support, the block must lose exactly its own rows to zero, and the
    // surviving stack must have a row-complete matching
    for (int i = 1; i <= t.m; ++i) {
        const std::vector<int> keep = cols_excluding(plan.v_cols, e.row_support(i));
        SymbolicMatrix s_i = grow.submatrix(s_rows, keep);

        std::vector<int> zero_rows;
        for (int r = 0; r < s_i.rows(); ++r)
            if (s_i.row_is_zero(r)) zero_rows.push_back(r);

        std::vector<int> own_rows;
        for (const GRowPlan::Block& blk : plan.blocks)
            if (blk.grid_row == i)
                for (size_t k = 0; k < blk.extras.size(); ++k) {
                    // position of this generator row within s_rows
                    int gen_row = blk.first_row + static_cast<int>(k);
                    own_rows.push_back(static_cast<int>(std::lower_bound(s_rows.begin(), s_rows.end(), gen_row) -
                                                        s_rows.begin()));
                }

        DecompositionReport::BlockCheck zc{"zero rows of block " + std::to_string(i), s_i.rows(), s_i.cols(),
                                           zero_rows == own_rows};
        rep.checks.push_back(zc);
        if (!zc.ok) {
            rep.all_ok = false;
            fail(zc.name);
        }

        // stack the nonzero block rows over the filler rows
        std::vector<int> y_gen_rows;
        for (size_t k = 0; k < s_rows.size(); ++k)
            if (!std::binary_search(own_rows.begin(), own_rows.end(), static_cast<int>(k)))
                y_gen_rows.push_back(s_rows[k]);
        y_gen_rows.insert(y_gen_rows.end(), filler_rows.begin(), filler_rows.end());
        SymbolicMatrix y_i = grow.submatrix(y_gen_rows, keep);
        MatchingResult mr = complete_matching(detail::support_graph(y_i));
        DecompositionReport::BlockCheck yc{"matching in block " + std::to_string(i), y_i.rows(), y_i.cols(),
                                           mr.complete};
        rep.checks.push_back(yc);
        if (!mr.complete) {
            rep.all_ok = false;
            fail(yc.name);
        }
    }

    // top block: per-row block rows of every other row, over the parity
    // row's surviving columns
    std::vector<int> p_gen_rows;
    for (const GRowPlan::Block& blk : plan.blocks) {
        if (blk.grid_row == ell) continue;
        for (size_t k = 0; k < blk.extras.size(); ++k) p_gen_rows.push_back(blk.first_row + static_cast<int>(k));
    }
    std::vector<int> p_cols;
    for (int c = 1; c <= t.n; ++c)
        if (!e.erased(ell, c)) p_cols.push_back(c - 1);
    SymbolicMatrix p = grow.submatrix(p_gen_rows, p_cols);
    rep.p_rows = p.rows();
    rep.p_cols = p.cols();

    ErasureNonerasureGraph eg = build_erasure_nonerasure_graph(e, {ell});
    MatchingResult em = complete_matching(eg.graph);
    DecompositionReport::BlockCheck mc{"matching of excess rows into row " + std::to_string(ell),
                                       eg.graph.n_left, eg.graph.n_right, em.complete};
    rep.checks.push_back(mc);
    if (!em.complete) {
        rep.all_ok = false;
        fail(mc.name);
    }
    rep.matched_columns = eg.matched_columns(em);

    std::vector<int> minor_cols;
    for (int c : rep.matched_columns) {
        auto it = std::lower_bound(p_cols.begin(), p_cols.end(), c - 1);
        minor_cols.push_back(static_cast<int>(it - p_cols.begin()));
    }
    SymbolicMatrix p_minor = p.submatrix([&] {
        std::vector<int> all(p.rows());
        for (int i = 0; i < p.rows(); ++i) all[i] = i;
        return all;
    }(), minor_cols);

    MatchingResult pm = complete_matching(matrix_pattern_graph(p_minor));
    DecompositionReport::BlockCheck pc{"matching in the top minor", p_minor.rows(), p_minor.cols(), pm.complete};
    rep.checks.push_back(pc);
    if (!pm.complete) {
        rep.all_ok = false;
        fail(pc.name);
    }

    std::set<VarId> seen;
    bool distinct = true;
    for (int r = 0; r < p_minor.rows() && distinct; ++r)
        for (int c = 0; c < p_minor.cols() && distinct; ++c) {
            const SymEntry& en = p_minor.at(r, c);
            if (!en) continue;
            for (VarId v : en->factors)
                if (!seen.insert(v).second) distinct = false;
        }
    DecompositionReport::BlockCheck dc{"distinct variables in the top minor", p_minor.rows(), p_minor.cols(),
                                       distinct};
    rep.checks.push_back(dc);
    if (!distinct) {
        rep.all_ok = false;
        fail(dc.name);
    }

    return rep;
}

} // namespace mrc
