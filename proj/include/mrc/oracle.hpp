#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "codegen.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "pattern.hpp"
#include "prng.hpp"
#include "recovery.hpp"

namespace mrc {

enum class PatternFilter { All, NonEmpty, Regular, RowIrreducible, Irreducible, RegularRowIrreducible };

/// Visits every erasure pattern of the grid in ascending bitmask order
/// (row-major bit layout), optionally filtered. Exhaustive enumeration is
/// guarded to 2^25 patterns.
template <typename Fn>
void enumerate_patterns(const Topology& t, PatternFilter filter, Fn&& fn) {
    if (t.cells() > 25) throw TooLarge("exhaustive enumeration guarded to 25 cells");
    const uint64_t total = 1ULL << t.cells();
    for (uint64_t mask = 0; mask < total; ++mask) {
        ErasurePattern e = ErasurePattern::from_bitmask(t, mask);
        switch (filter) {
            case PatternFilter::All: break;
            case PatternFilter::NonEmpty:
                if (e.empty()) continue;
                break;
            case PatternFilter::Regular:
                if (!is_regular(e).regular) continue;
                break;
            case PatternFilter::RowIrreducible:
                if (!is_row_irreducible(e)) continue;
                break;
            case PatternFilter::Irreducible:
                if (!is_irreducible(e)) continue;
                break;
            case PatternFilter::RegularRowIrreducible:
                if (!is_row_irreducible(e) || !is_regular(e).regular) continue;
                break;
        }
        fn(e, mask);
    }
}

enum class Verdict { Ok, Violation, Candidate };

struct PatternRecord {
    uint64_t mask = 0;
    bool regular = false;
    int rank = 0;
    int k = 0;
    Verdict verdict = Verdict::Ok;
};

/// Machine-readable result of one verification sweep: a record per examined
/// pattern plus totals. Serialization is fully deterministic, including
/// across shard counts.
struct SweepReport {
    std::string mode;
    Topology topo;
    uint64_t q = 0;
    uint64_t seed = 0;
    uint64_t patterns = 0;       ///< patterns examined
    uint64_t regular_count = 0;
    uint64_t violations = 0;
    uint64_t candidates = 0;
    int minor_checks = 0;        ///< factor-code minor checks (mds mode)
    int minor_failures = 0;
    std::vector<PatternRecord> records;

    bool clean() const { return violations == 0 && minor_failures == 0; }

    static std::string hex_mask(uint64_t mask) {
        std::ostringstream os;
        os << std::hex << mask;
        return os.str();
    }

    std::string summary_line() const {
        std::ostringstream os;
        os << "mode=" << mode << " topology=" << topo.m << "x" << topo.n << " a=" << topo.a << " b=" << topo.b
           << " q=" << q << " seed=" << seed << ": patterns=" << patterns << " regular=" << regular_count
           << " violations=" << violations << " candidates=" << candidates;
        if (minor_checks > 0) os << " minor_checks=" << minor_checks << " minor_failures=" << minor_failures;
        return os.str();
    }

    std::string to_jsonl() const {
        std::ostringstream os;
        for (const PatternRecord& r : records) {
            os << "{\"pattern\":\"" << hex_mask(r.mask) << "\",\"regular\":" << (r.regular ? "true" : "false")
               << ",\"rank\":" << r.rank << ",\"k\":" << r.k << ",\"verdict\":\""
               << (r.verdict == Verdict::Ok ? "ok" : r.verdict == Verdict::Violation ? "violation" : "candidate")
               << "\"}\n";
        }
        os << "{\"summary\":{\"mode\":\"" << mode << "\",\"m\":" << topo.m << ",\"n\":" << topo.n
           << ",\"a\":" << topo.a << ",\"b\":" << topo.b << ",\"q\":" << q << ",\"seed\":" << seed
           << ",\"patterns\":" << patterns << ",\"regular\":" << regular_count << ",\"violations\":" << violations
           << ",\"candidates\":" << candidates << ",\"minor_checks\":" << minor_checks
           << ",\"minor_failures\":" << minor_failures << "}}\n";
        return os.str();
    }
};

/// Throws when a sweep found what a theorem says cannot exist.
inline void require_clean(const SweepReport& rep) {
    if (rep.clean()) return;
    if (rep.mode == "mds")
        throw MdsViolation("mds sweep recorded " + std::to_string(rep.minor_failures) + " minor failures and " +
                           std::to_string(rep.violations) + " subgrid failures");
    for (const PatternRecord& r : rep.records)
        if (r.verdict == Verdict::Violation)
            throw TheoremViolation("sweep '" + rep.mode + "' found a violating pattern 0x" +
                                   SweepReport::hex_mask(r.mask));
    throw TheoremViolation("sweep '" + rep.mode + "' recorded violations");
}

namespace detail {

// salt ranges keep the derived seed streams of different purposes disjoint
inline constexpr uint64_t kGenericSalt = 1000;
inline constexpr uint64_t kRecheckSalt = 2000;
inline constexpr uint64_t kMdsSalt = 3000;
inline constexpr uint64_t kPerPatternSalt = 1ULL << 32;

struct ShardOut {
    std::vector<PatternRecord> records;
    uint64_t patterns = 0;
    uint64_t regular_count = 0;
    uint64_t violations = 0;
    uint64_t candidates = 0;
};

/// Runs fn(shard, mask_begin, mask_end) over a contiguous split of the mask
/// space and concatenates shard outputs in order, so the merged record list
/// is identical for every shard count.
template <typename Fn>
inline std::vector<ShardOut> run_sharded(uint64_t total, int jobs, Fn&& fn) {
    const int shards = std::max(1, std::min<int>(jobs, 64));
    std::vector<ShardOut> outs(static_cast<size_t>(shards));
    std::vector<std::thread> threads;
    for (int s = 0; s < shards; ++s) {
        const uint64_t lo = total / shards * s + std::min<uint64_t>(s, total % shards);
        const uint64_t hi = lo + total / shards + (static_cast<uint64_t>(s) < total % shards ? 1 : 0);
        threads.emplace_back([&, s, lo, hi] { fn(outs[static_cast<size_t>(s)], lo, hi); });
    }
    for (auto& th : threads) th.join();
    return outs;
}

inline void merge_shards(SweepReport& rep, std::vector<ShardOut>& outs) {
    for (ShardOut& o : outs) {
        rep.patterns += o.patterns;
        rep.regular_count += o.regular_count;
        rep.violations += o.violations;
        rep.candidates += o.candidates;
        rep.records.insert(rep.records.end(), o.records.begin(), o.records.end());
    }
}

/// Max punctured rank over the given instantiated generators: the observable
/// proxy for the generic punctured rank. A single full-rank observation is a
/// proof of recoverability; rank deficiency across independent draws
/// certifies non-recoverability up to negligible sampling error.
inline int generic_punctured_rank(const std::vector<FieldMatrix>& generics, const ErasurePattern& e) {
    int best = 0;
    const std::vector<int> survivors = surviving_columns(e);
    for (const FieldMatrix& g : generics) best = std::max(best, g.columns(survivors).rank());
    return best;
}

} // namespace detail

/// Exhaustive check that regularity and recoverability coincide for one
/// column parity: every regular pattern must be recovered by the structured
/// per-pattern code (checked on its row-wise reduction; recoverability of
/// the full pattern follows), and must keep full generic rank; every
/// non-regular pattern must be generic-rank-deficient and must be refused by
/// the constructor. Three independent generic instantiations guard against
/// unlucky draws on the deficiency side.
inline SweepReport verify_equivalence_a1(const Topology& t, const Field& field, uint64_t seed, int jobs = 1) {
    if (t.a != 1) throw PreconditionFailed("equivalence sweep is defined for a=1");
    if (t.cells() > 16) throw TooLarge("equivalence sweep guarded to 16 cells");

    std::vector<FieldMatrix> generics;
    for (uint64_t i = 0; i < 3; ++i)
        generics.push_back(sample_universal_mrc(t, field, mix_seed(seed, detail::kGenericSalt + i)).g);
    const int k = t.dimension();

    auto work = [&](detail::ShardOut& out, uint64_t lo, uint64_t hi) {
        for (uint64_t mask = lo; mask < hi; ++mask) {
            ErasurePattern e = ErasurePattern::from_bitmask(t, mask);
            const bool reg = is_regular(e).regular;
            const int grank = detail::generic_punctured_rank(generics, e);

            bool constructed = false;
            bool refused = false;
            try {
                SampledCode code = sample_code(e, field, mix_seed(seed, detail::kPerPatternSalt + mask));
                constructed = is_recoverable_by(code.inst.g, reduce_rowwise(e)).recoverable;
            } catch (const NotRegular&) {
                refused = true;
            } catch (const UnluckyField&) {
                constructed = false;
            }

            const bool ok = reg ? (constructed && grank == k) : (refused && grank < k);
            PatternRecord rec{mask, reg, grank, k, ok ? Verdict::Ok : Verdict::Violation};
            out.records.push_back(rec);
            ++out.patterns;
            if (reg) ++out.regular_count;
            if (!ok) ++out.violations;
        }
    };

    SweepReport rep;
    rep.mode = "equivalence";
    rep.topo = t;
    rep.q = field.modulus();
    rep.seed = seed;
    auto outs = detail::run_sharded(1ULL << t.cells(), jobs, work);
    detail::merge_shards(rep, outs);
    return rep;
}

/// Sweeps every regular row-wise irreducible base pattern and every set of
/// distinct source rows: each extension must stay regular and row-wise
/// irreducible under two column parities, and the extension code must reach
/// full punctured rank. `budget` > 0 caps the number of extensions examined
/// (deterministic prefix, single-threaded).
inline SweepReport verify_extended_a2(const Topology& base, const Field& field, uint64_t seed, uint64_t budget = 0,
                                      int jobs = 1) {
    if (base.a != 1) throw PreconditionFailed("extension sweep starts from an a=1 base topology");
    if (base.cells() > 16) throw TooLarge("extension sweep guarded to 16 cells");
    if (budget > 0) jobs = 1;

    const uint64_t source_sets = 1ULL << base.m;
    uint64_t examined = 0;

    auto work = [&](detail::ShardOut& out, uint64_t lo, uint64_t hi) {
        for (uint64_t mask = lo; mask < hi; ++mask) {
            ErasurePattern e = ErasurePattern::from_bitmask(base, mask);
            if (!is_row_irreducible(e) || !is_regular(e).regular) continue;
            for (uint64_t sm = 0; sm < source_sets; ++sm) {
                std::vector<int> sources;
                for (int r = 0; r < base.m; ++r)
                    if (sm & (1ULL << r)) sources.push_back(r + 1);
                if (base.m + static_cast<int>(sources.size()) <= 2) continue;
                if (budget > 0) { // budget forces a single shard, so this counter is unshared
                    if (examined >= budget) return;
                    ++examined;
                }

                ExtendedPattern x = extend_pattern(e, sources);
                const bool reg = check_extended_regular(x).regular && is_row_irreducible(x.result);

                bool recovered = false;
                int rank = 0;
                const uint64_t salt = detail::kPerPatternSalt * 2 + (mask << base.m | sm);
                try {
                    SampledCode code = sample_code_a2(x, field, mix_seed(seed, salt));
                    RecoveryReport rr = is_recoverable_by(code.inst.g, x.result);
                    recovered = rr.recoverable;
                    rank = rr.punctured_rank;
                } catch (const UnluckyField&) {
                    recovered = false;
                }

                const bool ok = reg && recovered;
                PatternRecord rec{x.result.bitmask(), reg, rank, x.result.topology().dimension(),
                                  ok ? Verdict::Ok : Verdict::Violation};
                out.records.push_back(rec);
                ++out.patterns;
                if (reg) ++out.regular_count;
                if (!ok) ++out.violations;
            }
        }
    };

    SweepReport rep;
    rep.mode = "extended";
    rep.topo = base;
    rep.q = field.modulus();
    rep.seed = seed;
    auto outs = detail::run_sharded(1ULL << base.cells(), jobs, work);
    detail::merge_shards(rep, outs);
    return rep;
}

/// Classifies every regular pattern of a two-parity topology by generic-rank
/// recoverability. A pattern that stays rank-deficient across the base draws
/// and the independent re-check draws is emitted as a candidate
/// counterexample to sufficiency of regularity; an empty candidate set is
/// the expected finding.
inline SweepReport explore_conjecture_a2(const Topology& t, const Field& field, uint64_t seed, int jobs = 1) {
    if (t.a != 2) throw PreconditionFailed("conjecture sweep is defined for a=2");
    if (t.cells() > 16) throw TooLarge("conjecture sweep guarded to 16 cells");

    std::vector<FieldMatrix> generics;
    for (uint64_t i = 0; i < 3; ++i)
        generics.push_back(sample_universal_mrc(t, field, mix_seed(seed, detail::kGenericSalt + i)).g);
    std::vector<FieldMatrix> recheck;
    for (uint64_t i = 0; i < 2; ++i)
        recheck.push_back(sample_universal_mrc(t, field, mix_seed(seed, detail::kRecheckSalt + i)).g);
    const int k = t.dimension();

    auto work = [&](detail::ShardOut& out, uint64_t lo, uint64_t hi) {
        for (uint64_t mask = lo; mask < hi; ++mask) {
            ErasurePattern e = ErasurePattern::from_bitmask(t, mask);
            ++out.patterns;
            if (!is_regular(e).regular) continue;
            ++out.regular_count;

            int grank = detail::generic_punctured_rank(generics, e);
            Verdict verdict = Verdict::Ok;
            if (grank < k) {
                grank = std::max(grank, detail::generic_punctured_rank(recheck, e));
                if (grank < k) verdict = Verdict::Candidate;
            }
            if (verdict == Verdict::Candidate) ++out.candidates;
            out.records.push_back({mask, true, grank, k, verdict});
        }
    };

    SweepReport rep;
    rep.mode = "conjecture";
    rep.topo = t;
    rep.q = field.modulus();
    rep.seed = seed;
    auto outs = detail::run_sharded(1ULL << t.cells(), jobs, work);
    detail::merge_shards(rep, outs);
    return rep;
}

/// Structural consequences of maximal recoverability for the generic code:
/// full dimension, every maximal minor of both factor generators invertible,
/// and full rank on every (m-a) x (n-b) subgrid. Retries with fresh seeds;
/// persistent failure indicates a bug rather than bad luck.
inline SweepReport verify_mds_consequences(const Topology& t, const Field& field, uint64_t seed, int max_retries = 3) {
    if (std::max(t.m - t.a, t.n - t.b) > t.dimension())
        throw PreconditionFailed("factor MDS consequences need max(m-a, n-b) <= (m-a)(n-b)");

    const int k = t.dimension();

    auto combinations = [](int n, int r) {
        std::vector<std::vector<int>> out;
        std::vector<int> idx(static_cast<size_t>(r));
        for (int i = 0; i < r; ++i) idx[static_cast<size_t>(i)] = i;
        while (true) {
            out.push_back(idx);
            int i = r - 1;
            while (i >= 0 && idx[static_cast<size_t>(i)] == n - r + i) --i;
            if (i < 0) break;
            ++idx[static_cast<size_t>(i)];
            for (int j = i + 1; j < r; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
        }
        return out;
    };

    SweepReport rep;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        SweepReport trial;
        trial.mode = "mds";
        trial.topo = t;
        trial.q = field.modulus();
        trial.seed = seed;
        InstantiatedProduct u = sample_universal_mrc(t, field, mix_seed(seed, detail::kMdsSalt + attempt));

        ++trial.minor_checks;
        if (u.g.rank() != k) ++trial.minor_failures;

        for (const auto& cols : combinations(t.n, t.n - t.b)) {
            ++trial.minor_checks;
            if (u.grow.columns(cols).rank() != t.n - t.b) ++trial.minor_failures;
        }
        for (const auto& cols : combinations(t.m, t.m - t.a)) {
            ++trial.minor_checks;
            if (u.gcol.columns(cols).rank() != t.m - t.a) ++trial.minor_failures;
        }

        for (const auto& rows : combinations(t.m, t.m - t.a)) {
            for (const auto& cols : combinations(t.n, t.n - t.b)) {
                // erase everything outside the subgrid; full rank there is the claim
                ErasurePattern outside(t);
                for (int i = 1; i <= t.m; ++i)
                    for (int j = 1; j <= t.n; ++j) {
                        const bool in_rows = std::find(rows.begin(), rows.end(), i - 1) != rows.end();
                        const bool in_cols = std::find(cols.begin(), cols.end(), j - 1) != cols.end();
                        if (!(in_rows && in_cols)) outside.add(i, j);
                    }
                const int rank = u.g.columns(detail::surviving_columns(outside)).rank();
                const bool ok = rank == k;
                trial.records.push_back({t.cells() <= 64 ? outside.bitmask() : 0, true, rank, k,
                                         ok ? Verdict::Ok : Verdict::Violation});
                ++trial.patterns;
                if (!ok) ++trial.violations;
            }
        }

        if (trial.clean()) return trial;
        rep = std::move(trial);
    }
    return rep; // persistent failures: caller inspects / require_clean throws MdsViolation-grade info
}

} // namespace mrc
