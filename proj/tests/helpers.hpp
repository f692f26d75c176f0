#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// here deliberately re-derive results by brute force so the library
// implementations are checked against a second, unrelated computation path.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "mrc/mrc.hpp"

namespace testutil {

/// The recurring 6x10 example with one column parity and two row parities:
/// rows erased at {7,8,9,10}, {6,7,8}, {3,9,10}, {4,5,6}, {3,4,5}; row 6 intact.
inline mrc::ErasurePattern reference_pattern_6x10() {
    mrc::ErasurePattern e(mrc::Topology(6, 10, 1, 2));
    for (int c : {7, 8, 9, 10}) e.add(1, c);
    for (int c : {6, 7, 8}) e.add(2, c);
    for (int c : {3, 9, 10}) e.add(3, c);
    for (int c : {4, 5, 6}) e.add(4, c);
    for (int c : {3, 4, 5}) e.add(5, c);
    return e;
}

/// Regularity by literal double-subset enumeration over all U x V.
inline bool naive_regular(const mrc::ErasurePattern& e) {
    const mrc::Topology& t = e.topology();
    std::vector<uint32_t> row_mask(static_cast<size_t>(t.m) + 1, 0);
    for (int i = 1; i <= t.m; ++i)
        for (int c : e.row_support(i)) row_mask[static_cast<size_t>(i)] |= 1u << (c - 1);

    for (uint32_t umask = 0; umask < (1u << t.m); ++umask) {
        const int u = __builtin_popcount(umask);
        for (uint32_t vmask = 0; vmask < (1u << t.n); ++vmask) {
            const int v = __builtin_popcount(vmask);
            long long count = 0;
            for (int i = 1; i <= t.m; ++i)
                if (umask & (1u << (i - 1))) count += __builtin_popcount(row_mask[static_cast<size_t>(i)] & vmask);
            const long long bound = static_cast<long long>(u) * v -
                                    static_cast<long long>(std::max(u - t.a, 0)) * std::max(v - t.b, 0);
            if (count > bound) return false;
        }
    }
    return true;
}

/// Maximum matching size by exhaustive recursion (small graphs only).
inline int brute_max_matching(const mrc::BipartiteGraph& g) {
    std::vector<uint64_t> nbr(static_cast<size_t>(g.n_left), 0);
    for (int l = 0; l < g.n_left; ++l)
        for (int r : g.adj[l]) nbr[static_cast<size_t>(l)] |= 1ULL << r;

    std::map<std::pair<int, uint64_t>, int> memo;
    auto rec = [&](auto&& self, int l, uint64_t used) -> int {
        if (l == g.n_left) return 0;
        auto key = std::make_pair(l, used);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        int best = self(self, l + 1, used); // leave l unmatched
        uint64_t avail = nbr[static_cast<size_t>(l)] & ~used;
        while (avail) {
            const int r = __builtin_ctzll(avail);
            avail &= avail - 1;
            best = std::max(best, 1 + self(self, l + 1, used | (1ULL << r)));
        }
        memo[key] = best;
        return best;
    };
    return rec(rec, 0, 0);
}

/// Rank by an elimination with a different pivoting order (last nonzero row,
/// columns processed right to left). Independent of FieldMatrix::rank's path.
inline int rank_alt_pivot(const mrc::FieldMatrix& m) {
    mrc::FieldMatrix w(m);
    const mrc::Field& f = w.field();
    int r = w.rows() - 1;
    int rank = 0;
    for (int c = w.cols() - 1; c >= 0 && r >= 0; --c) {
        int pivot = -1;
        for (int i = r; i >= 0; --i)
            if (w(i, c) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        w.swap_rows(r, pivot);
        const uint64_t inv_p = f.inv(w(r, c));
        for (int i = r - 1; i >= 0; --i) {
            if (w(i, c) == 0) continue;
            const uint64_t factor = f.mul(w(i, c), inv_p);
            for (int j = 0; j <= c; ++j) w(i, j) = f.sub(w(i, j), f.mul(factor, w(r, j)));
        }
        --r;
        ++rank;
    }
    return rank;
}

/// Kronecker product written directly from the definition.
inline mrc::FieldMatrix kron_oracle(const mrc::FieldMatrix& a, const mrc::FieldMatrix& b) {
    mrc::FieldMatrix out(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q)
                    out(i * b.rows() + p, j * b.cols() + q) = a.field().mul(a(i, j), b(p, q));
    return out;
}

/// Rejection-samples a nonempty regular, row-wise irreducible pattern on a
/// random grid within the given limits. Deterministic per rng state.
inline mrc::ErasurePattern random_regular_irreducible(mrc::SplitMix64& rng, int max_m, int max_n, int a) {
    while (true) {
        const int m = std::max(a + 1, 2 + static_cast<int>(rng.below(static_cast<uint64_t>(max_m) - 1)));
        const int n = 2 + static_cast<int>(rng.below(static_cast<uint64_t>(max_n) - 1));
        const int b = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(std::min(3, n - 1))));
        mrc::Topology t(m, n, a, b);

        mrc::ErasurePattern e(t);
        const int rows_hit = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(std::min(m, a + 3))));
        std::vector<int> rows(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) rows[static_cast<size_t>(i)] = i + 1;
        for (int i = 0; i < rows_hit; ++i)
            std::swap(rows[static_cast<size_t>(i)],
                      rows[static_cast<size_t>(i) + rng.below(static_cast<uint64_t>(m - i))]);
        for (int i = 0; i < rows_hit; ++i) {
            const int size = std::min(n, b + 1 + static_cast<int>(rng.below(3)));
            std::vector<int> cols(static_cast<size_t>(n));
            for (int c = 0; c < n; ++c) cols[static_cast<size_t>(c)] = c + 1;
            for (int c = 0; c < size; ++c)
                std::swap(cols[static_cast<size_t>(c)],
                          cols[static_cast<size_t>(c) + rng.below(static_cast<uint64_t>(n - c))]);
            for (int c = 0; c < size; ++c) e.add(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(c)]);
        }
        if (!e.empty() && mrc::is_row_irreducible(e) && mrc::is_regular(e).regular) return e;
    }
}

} // namespace testutil
