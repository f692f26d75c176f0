// Acceptance suite: one self-contained criterion per function, each printing
// a single PASS/FAIL line. Run with no arguments for all criteria, or with a
// list of criterion numbers. Exits nonzero when any selected criterion fails.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "mrc/mrc.hpp"

using namespace mrc;

namespace {

struct Criterion {
    int number;
    std::string name;
    bool (*run)(std::string& detail);
};

// 1. The 6x10 reference pattern end to end: regularity, profiles, matching
//    with the golden matched-column set, construction rank, decode round trip.
bool criterion1(std::string& detail) {
    ErasurePattern ref = testutil::reference_pattern_6x10();
    const Topology& t = ref.topology();
    Field f(kDefaultModulus);

    if (!is_regular(ref).regular) return detail = "reference pattern not regular", false;
    if (!is_row_irreducible(ref)) return detail = "reference pattern not row-irreducible", false;

    Grid g = enclosing_grid(ref);
    if (g.rows != std::vector<int>{1, 2, 3, 4, 5}) return detail = "wrong enclosing rows", false;
    if (g.cols != std::vector<int>{3, 4, 5, 6, 7, 8, 9, 10}) return detail = "wrong enclosing cols", false;

    std::vector<int> excesses;
    for (const RowProfile& p : row_profiles(ref)) excesses.push_back(p.excess);
    if (excesses != std::vector<int>{2, 1, 1, 1, 1}) return detail = "wrong row excesses", false;

    // the published matching lands on columns {6..10}; that corresponds to
    // right-side row 5 (see the notes in the repository docs). Right-side
    // row 1 must also admit a complete matching (its columns are {3..6}).
    ErasureNonerasureGraph g5 = build_erasure_nonerasure_graph(ref, {5});
    MatchingResult m5 = complete_matching(g5.graph);
    if (!m5.complete) return detail = "no complete matching for right-side row 5", false;
    if (g5.matched_columns(m5) != std::vector<int>{6, 7, 8, 9, 10})
        return detail = "matched columns differ from {6,7,8,9,10}", false;
    ErasureNonerasureGraph g1 = build_erasure_nonerasure_graph(ref, {1});
    MatchingResult m1 = complete_matching(g1.graph);
    if (!m1.complete) return detail = "no complete matching for right-side row 1", false;

    SampledCode code = sample_code(ref, f, 1);
    RecoveryReport rep = is_recoverable_by(code.inst.g, ref);
    if (rep.punctured_rank != 40 || rep.target_rank != 40)
        return detail = "punctured rank " + std::to_string(rep.punctured_rank) + " != 40", false;

    DecompositionReport dec = proof_decomposition(ref, code.plan, 5);
    if (!dec.all_ok || dec.matched_columns != std::vector<int>{6, 7, 8, 9, 10})
        return detail = "decomposition diagnostics failed", false;

    SplitMix64 rng(2024);
    std::vector<uint64_t> msg(40);
    for (auto& v : msg) v = rng.below(f.modulus());
    Codeword cw = encode(code.inst.g, t, msg);
    Codeword out = decode(code.inst.g, PartialCodeword::erase(cw, ref));
    if (!(out.values == cw.values)) return detail = "decode round trip mismatch", false;

    detail = "grid, excesses, matching columns {6:10}, rank 40, decode all exact";
    return true;
}

// 2. Exhaustive equivalence of regularity and recoverability on 3x3 and 4x4.
bool criterion2(std::string& detail) {
    Field f(kDefaultModulus);
    SweepReport r33 = verify_equivalence_a1(Topology(3, 3, 1, 1), f, 1, 4);
    SweepReport r44 = verify_equivalence_a1(Topology(4, 4, 1, 1), f, 1, 4);
    detail = "3x3: " + std::to_string(r33.patterns) + " patterns, " + std::to_string(r33.violations) +
             " violations; 4x4: " + std::to_string(r44.patterns) + " patterns, " +
             std::to_string(r44.violations) + " violations";
    return r33.patterns == 512 && r44.patterns == 65536 && r33.violations == 0 && r44.violations == 0;
}

// 3. Every extension of every regular row-irreducible 3x4 base pattern stays
//    regular and is recovered at the extended rank target.
bool criterion3(std::string& detail) {
    Field f(kDefaultModulus);
    SweepReport rep = verify_extended_a2(Topology(3, 4, 1, 1), f, 1, 0, 4);
    detail = std::to_string(rep.patterns) + " extensions, " + std::to_string(rep.violations) + " violations";
    return rep.patterns > 0 && rep.violations == 0;
}

// 4. Generic universal codes: full dimension, all factor minors invertible,
//    all full-size subgrid restrictions full rank. Up to 3 seeds per topology.
bool criterion4(std::string& detail) {
    Field f(kDefaultModulus);
    SweepReport r34 = verify_mds_consequences(Topology(3, 4, 1, 1), f, 1, 3);
    SweepReport r44 = verify_mds_consequences(Topology(4, 4, 2, 1), f, 1, 3);
    detail = "3x4: " + std::to_string(r34.minor_checks) + " minor checks + " + std::to_string(r34.patterns) +
             " subgrids; 4x4(a=2): " + std::to_string(r44.minor_checks) + " + " + std::to_string(r44.patterns) +
             "; failures " + std::to_string(r34.minor_failures + r34.violations + r44.minor_failures + r44.violations);
    return r34.clean() && r44.clean();
}

// 5. 1000 random regular row-irreducible patterns on grids up to 6x8 with one
//    or two column parities: the excess/non-erasure matching is always
//    complete, and for a=1 the neighborhood bound holds for every row choice.
bool criterion5(std::string& detail) {
    SplitMix64 rng(31337);
    int matchings = 0, neighborhood_rows = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int a = 1 + static_cast<int>(rng.below(2));
        ErasurePattern e = testutil::random_regular_irreducible(rng, 6, 8, a);
        Grid g = enclosing_grid(e);
        if (g.u() < a) continue;

        std::vector<std::vector<int>> choices;
        if (a == 1)
            for (int r : g.rows) choices.push_back({r});
        else
            for (size_t i = 0; i < g.rows.size(); ++i)
                for (size_t j = i + 1; j < g.rows.size(); ++j) choices.push_back({g.rows[i], g.rows[j]});
        for (const std::vector<int>& ur : choices) {
            ErasureNonerasureGraph eg = build_erasure_nonerasure_graph(e, ur);
            MatchingResult m = complete_matching(eg.graph);
            ++matchings;
            if (!m.complete) {
                detail = "incomplete matching on a regular irreducible pattern (trial " + std::to_string(trial) + ")";
                return false;
            }
        }

        if (a == 1) {
            std::vector<RowProfile> ps = row_profiles(e);
            for (const RowProfile& p : ps) {
                RowColGraph rc = build_rowcol_graph(e, p.row);
                ++neighborhood_rows;
                if (rc.graph.n_left > 12) continue; // generator keeps grids small; guard anyway
                if (!neighborhood_check(rc, ps)) {
                    detail = "neighborhood bound violated (trial " + std::to_string(trial) + ")";
                    return false;
                }
            }
        }
    }
    detail = "1000 patterns, " + std::to_string(matchings) + " matchings, " + std::to_string(neighborhood_rows) +
             " neighborhood checks, 0 failures";
    return true;
}

// 6. Random square symbolic matrices with a guaranteed support matching:
//    random instantiation is invertible in >= 199/200 single tries and in
//    200/200 within the 8-retry budget.
bool criterion6(std::string& detail) {
    Field f(kDefaultModulus);
    SplitMix64 rng(777);
    int single_try = 0, within_budget = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(20));
        // a random permutation guarantees a complete support matching
        std::vector<int> perm(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[static_cast<size_t>(i)], perm[rng.below(static_cast<uint64_t>(i) + 1)]);

        SymbolicMatrix m(n, n);
        int var = 0;
        for (int i = 0; i < n; ++i) m.set_fresh_var(i, perm[static_cast<size_t>(i)], "v" + std::to_string(var++));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (m.is_zero(i, j) && rng.below(3) == 0) m.set_fresh_var(i, j, "v" + std::to_string(var++));
        if (!complete_matching(matrix_pattern_graph(m)).complete) {
            detail = "generator produced a matrix without a support matching";
            return false;
        }

        const uint64_t seed = rng.next();
        bool ok_first = instantiate(m, f, mix_seed(seed, 0)).first.rank() == n;
        if (ok_first) ++single_try;
        for (int attempt = 0; attempt < 8; ++attempt) {
            if (instantiate(m, f, mix_seed(seed, static_cast<uint64_t>(attempt))).first.rank() == n) {
                ++within_budget;
                break;
            }
        }
    }
    detail = std::to_string(single_try) + "/200 single-try, " + std::to_string(within_budget) +
             "/200 within 8 retries";
    return single_try >= 199 && within_budget == 200;
}

// 7. Conjecture exploration on 4x4 with two column parities: classify every
//    regular pattern by generic rank, re-verify candidates independently,
//    and produce the report deterministically. Candidates are findings; the
//    criterion checks the process, not an empty set.
bool criterion7(std::string& detail) {
    Field f(kDefaultModulus);
    Topology t(4, 4, 2, 1);
    SweepReport rep = explore_conjecture_a2(t, f, 1, 4);
    SweepReport again = explore_conjecture_a2(t, f, 1, 2);
    if (rep.to_jsonl() != again.to_jsonl()) {
        detail = "report not deterministic across shard counts";
        return false;
    }

    // independent re-verification of every candidate with two fresh seeds
    uint64_t confirmed = 0;
    for (const PatternRecord& r : rep.records) {
        if (r.verdict != Verdict::Candidate) continue;
        ErasurePattern e = ErasurePattern::from_bitmask(t, r.mask);
        std::vector<FieldMatrix> fresh;
        for (uint64_t i = 0; i < 2; ++i) fresh.push_back(sample_universal_mrc(t, f, mix_seed(987654321, i)).g);
        int best = 0;
        for (const FieldMatrix& g : fresh) best = std::max(best, is_recoverable_by(g, e).punctured_rank);
        if (best < r.k) {
            ++confirmed;
        } else {
            detail = "candidate 0x" + SweepReport::hex_mask(r.mask) + " failed independent re-verification";
            return false;
        }
    }

    detail = std::to_string(rep.regular_count) + " regular patterns, " + std::to_string(rep.candidates) +
             " candidate counterexamples";
    if (rep.candidates > 0) detail += " (every candidate re-confirmed rank-deficient on fresh seeds)";
    return true;
}

const std::vector<Criterion> kCriteria = {
    {1, "reference 6x10 pattern end to end", criterion1},
    {2, "regularity equals recoverability, exhaustive 3x3 and 4x4", criterion2},
    {3, "extensions stay regular and recoverable on 3x4", criterion3},
    {4, "generic code dimension, factor minors, subgrid ranks", criterion4},
    {5, "matchings and neighborhood bounds on 1000 random patterns", criterion5},
    {6, "support matching implies invertible instantiation", criterion6},
    {7, "conjecture exploration on 4x4 with two parities", criterion7},
};

} // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    bool all_ok = true;
    for (const Criterion& c : kCriteria) {
        if (!selected.empty() && !selected.count(c.number)) continue;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.number << " [" << c.name << "] (" << ms
                  << " ms): " << detail << "\n";
        if (!ok) all_ok = false;
    }
    return all_ok ? 0 : 1;
}
