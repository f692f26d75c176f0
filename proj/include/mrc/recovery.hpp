#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codegen.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "pattern.hpp"

namespace mrc {

/// A full m x n codeword. Cell (i,j) corresponds to vectorized coordinate
/// (i-1)*n + (j-1): reading the grid row after row.
struct Codeword {
    Topology topo;
    FieldMatrix values; // m x n

    uint64_t at(int row, int col) const { return values(row - 1, col - 1); }
};

/// A codeword with erased cells; the erasures define the pattern.
struct PartialCodeword {
    Topology topo;
    std::vector<std::optional<uint64_t>> cells; // row-major, size m*n

    ErasurePattern pattern() const {
        ErasurePattern e(topo);
        for (int i = 0; i < topo.cells(); ++i)
            if (!cells[static_cast<size_t>(i)]) e.add(i / topo.n + 1, i % topo.n + 1);
        return e;
    }

    static PartialCodeword erase(const Codeword& cw, const ErasurePattern& e) {
        if (e.topology().m != cw.topo.m || e.topology().n != cw.topo.n)
            throw ShapeError("pattern grid does not match codeword grid");
        PartialCodeword pc{cw.topo, std::vector<std::optional<uint64_t>>(static_cast<size_t>(cw.topo.cells()))};
        for (int i = 1; i <= cw.topo.m; ++i)
            for (int j = 1; j <= cw.topo.n; ++j)
                if (!e.erased(i, j)) pc.cells[static_cast<size_t>((i - 1) * cw.topo.n + (j - 1))] = cw.at(i, j);
        return pc;
    }
};

struct RecoveryReport {
    uint64_t pattern_mask = 0;  ///< row-major bitmask of the erasures (when the grid fits 64 bits)
    uint64_t seed = 0;          ///< instantiation seed of the code, if known
    int punctured_rank = 0;
    int target_rank = 0;        ///< k = (m-a)(n-b)
    bool recoverable = false;
};

/// Rank test: the pattern is recoverable by this generator exactly when the
/// generator restricted to the surviving cells keeps the full dimension.
inline RecoveryReport is_recoverable_by(const FieldMatrix& g, const ErasurePattern& e, uint64_t seed = 0) {
    const Topology& t = e.topology();
    if (g.cols() != t.cells())
        throw ShapeError("generator has " + std::to_string(g.cols()) + " columns, grid has " +
                         std::to_string(t.cells()) + " cells");
    RecoveryReport rep;
    rep.seed = seed;
    rep.pattern_mask = t.cells() <= 64 ? e.bitmask() : 0;
    rep.target_rank = t.dimension();
    rep.punctured_rank = g.columns(detail::surviving_columns(e)).rank();
    rep.recoverable = rep.punctured_rank == rep.target_rank;
    return rep;
}

/// message * G, reshaped to the grid.
inline Codeword encode(const FieldMatrix& g, const Topology& t, const std::vector<uint64_t>& message) {
    if (g.cols() != t.cells()) throw ShapeError("generator does not match the grid");
    if (static_cast<int>(message.size()) != g.rows())
        throw ShapeError("message length " + std::to_string(message.size()) + " does not match code dimension " +
                         std::to_string(g.rows()));
    const Field& f = g.field();
    Codeword cw{t, FieldMatrix(f, t.m, t.n)};
    for (int r = 0; r < g.rows(); ++r) {
        const uint64_t mv = f.reduce(message[static_cast<size_t>(r)]);
        if (mv == 0) continue;
        for (int c = 0; c < g.cols(); ++c)
            cw.values(c / t.n, c % t.n) = f.add(cw.values(c / t.n, c % t.n), f.mul(mv, g(r, c)));
    }
    return cw;
}

/// Recovers the unique codeword agreeing with the received cells. Solves the
/// full overdetermined system over every surviving cell, so a corrupted
/// surviving value surfaces as an inconsistency instead of a wrong answer.
inline Codeword decode(const FieldMatrix& g, const PartialCodeword& received) {
    const Topology& t = received.topo;
    if (g.cols() != t.cells()) throw ShapeError("generator does not match the grid");

    std::vector<int> survivors;
    std::vector<uint64_t> values;
    for (int c = 0; c < t.cells(); ++c)
        if (received.cells[static_cast<size_t>(c)]) {
            survivors.push_back(c);
            values.push_back(g.field().reduce(*received.cells[static_cast<size_t>(c)]));
        }

    std::vector<uint64_t> message;
    try {
        message = solve(g.columns(survivors).transpose(), values);
    } catch (const Underdetermined&) {
        throw NotRecoverable("punctured generator is rank-deficient; the erasure pattern is not recoverable by this code");
    } catch (const NoSolution& ns) {
        const int cell = survivors[static_cast<size_t>(ns.constraint)];
        throw NotACodeword("received values are not consistent with any codeword; first violated constraint at cell (" +
                               std::to_string(cell / t.n + 1) + "," + std::to_string(cell % t.n + 1) + ")",
                           cell);
    }
    return encode(g, t, message);
}

/// Parity-check matrices of the two factor codes: nullspace bases of the
/// generators. Every encoded grid is annihilated row-wise by the first and
/// column-wise by the second.
inline std::pair<FieldMatrix, FieldMatrix> parity_checks(const FieldMatrix& grow, const FieldMatrix& gcol) {
    if (grow.rank() != grow.rows()) throw DegenerateCode("row generator is not full row rank");
    if (gcol.rank() != gcol.rows()) throw DegenerateCode("column generator is not full row rank");
    return {nullspace_basis(grow), nullspace_basis(gcol)};
}

} // namespace mrc
