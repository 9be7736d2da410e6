#include "twwlab/builder.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace twwlab {

BuildParams BuildParams::make(int k, int t) {
    BuildParams p;
    p.k = k;
    p.t = t;
    return p;
}

int BuildParams::effectiveB() const { return b > 0 ? b : 4 * t * k; }

int BuildParams::effectiveC() const {
    if (c > 0) return c;
    long double v = 1;
    for (int i = 0; i < effectiveB(); ++i) {
        v *= k;
        if (v > cCeil) return cCeil;
    }
    return static_cast<int>(v);
}

namespace {

// parts of a convex partition as [lo,hi) pairs
std::vector<std::pair<int, int>> parts_of(const ConvexPartition& P) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < P.parts(); ++i) out.push_back(P.block(i));
    return out;
}

struct SideState {
    ConvexPartition parts;  // of rows (or of columns, on the transposed matrix)
};

// Greedy chain builder working on M for the row side and on the transpose
// for the column side. "bad columns" for a row interval are first columns of
// inclusion-minimal intervals showing more than k distinct rows.
struct ChainBuilder {
    const OrderedStructure& S;
    const BuildParams& params;
    TypeMatrix M, MT;
    int n;
    int badThreshold;
    std::map<std::pair<int, int>, std::vector<int>> badCacheRows, badCacheCols;

    ChainBuilder(const OrderedStructure& s, const BuildParams& p)
        : S(s), params(p), M(TypeMatrix::adjacency(s)), MT(M.transposed()), n(s.size()),
          badThreshold(p.k + 1) {}

    const std::vector<int>& bad_cols(bool rowSide, int lo, int hi) {
        auto& cache = rowSide ? badCacheRows : badCacheCols;
        auto it = cache.find({lo, hi});
        if (it != cache.end()) return it->second;
        auto cols = bad_columns(rowSide ? M : MT, lo, hi, badThreshold);
        return cache.emplace(std::make_pair(lo, hi), std::move(cols)).first->second;
    }

    // exceptional parts of the opposite partition and the distinct-pattern
    // count of rows [lo,hi) over the remaining columns
    std::pair<std::vector<int>, int> bookkeeping(bool rowSide, int lo, int hi,
                                                 const ConvexPartition& opposite) {
        const auto& bad = bad_cols(rowSide, lo, hi);
        auto blocks = parts_of(opposite);
        std::vector<char> isBad(blocks.size(), 0);
        size_t bi = 0;
        for (int col : bad) {
            while (bi < blocks.size() && blocks[bi].second <= col) ++bi;
            if (bi < blocks.size() && col >= blocks[bi].first) isBad[bi] = 1;
        }
        std::vector<int> exceptional;
        std::vector<int> keepCols;
        for (size_t i = 0; i < blocks.size(); ++i) {
            if (isBad[i]) {
                exceptional.push_back(static_cast<int>(i));
            } else {
                for (int c = blocks[i].first; c < blocks[i].second; ++c) keepCols.push_back(c);
            }
        }
        int residual = 0;
        if (!keepCols.empty()) {
            const TypeMatrix& Mat = rowSide ? M : MT;
            std::set<std::vector<TypeCode>> patterns;
            for (int r = lo; r < hi; ++r) {
                std::vector<TypeCode> pat;
                pat.reserve(keepCols.size());
                for (int c : keepCols) pat.push_back(Mat.at(r, c));
                patterns.insert(std::move(pat));
            }
            residual = static_cast<int>(patterns.size());
        }
        return {std::move(exceptional), residual};
    }
};

// convex coarsening of `base` into groups of two adjacent parts (a trailing
// odd part stays alone)
ConvexPartition group_by_two(const ConvexPartition& base) {
    ConvexPartition out;
    out.n = base.n;
    auto blocks = parts_of(base);
    for (size_t i = 1; i + 1 < blocks.size(); i += 2) out.cuts.push_back(blocks[i].second);
    return out;
}

MixedMinorWitness lift_grid_to_mixed(ChainBuilder& B, bool rowSide, const ConvexPartition& grouped,
                                     const ConvexPartition& opposite,
                                     const GridMinorWitness& gw, int k, int t) {
    // grouped: convex partition of M's rows (N's rows); opposite: of columns.
    // The grid minor's cuts are in part indices; lift them to element cuts.
    const TypeMatrix& Mat = rowSide ? B.M : B.MT;
    auto gBlocks = parts_of(grouped);
    auto oBlocks = parts_of(opposite);
    int tk = t * k;
    // tk consecutive groups of grouped parts / opposite parts
    auto liftCuts = [](const std::vector<int>& cuts, const std::vector<std::pair<int, int>>& blocks) {
        std::vector<int> out;
        for (int c : cuts) out.push_back(blocks[c].first);
        return out;
    };
    std::vector<int> rowCutsTk = liftCuts(gw.rowCuts, gBlocks);
    std::vector<int> colCutsTk = liftCuts(gw.colCuts, oBlocks);
    // regroup by k: keep every k-th cut
    auto everyKth = [&](const std::vector<int>& cuts) {
        std::vector<int> out;
        for (int i = k - 1; i + 1 < tk; i += k) out.push_back(cuts[i]);
        return out;
    };
    std::vector<int> rowCuts = everyKth(rowCutsTk);
    std::vector<int> colCuts = everyKth(colCutsTk);
    // zone bounds in element space
    auto bounds = [](const std::vector<int>& cuts, int n) {
        std::vector<std::pair<int, int>> bl;
        int lo = 0;
        for (int c : cuts) {
            bl.emplace_back(lo, c);
            lo = c;
        }
        bl.emplace_back(lo, n);
        return bl;
    };
    auto zoneRows = bounds(rowCuts, Mat.rows);
    auto zoneCols = bounds(colCuts, Mat.cols);
    auto tkRows = bounds(rowCutsTk, Mat.rows);
    (void)tkRows;

    // per N-minor zone, its recorded 1: (grouped part index, opposite part index)
    auto nZoneOne = [&](int zr, int zc) { return gw.zoneOnes[size_t(zr) * tk + zc]; };

    MixedMinorWitness w;
    w.rowCuts = rowCuts;
    w.colCuts = colCuts;
    for (int ZR = 0; ZR < t; ++ZR)
        for (int ZC = 0; ZC < t; ++ZC) {
            auto [zrLo, zrHi] = zoneRows[ZR];
            auto [zcLo, zcHi] = zoneCols[ZC];
            MixedZone zone;
            // bad columns from the first tk-row-group of this zone, one per
            // column group
            int g0 = ZR * k;  // first N-minor row group inside this zone
            std::vector<std::pair<int, std::pair<int, int>>> picks;  // (badCol, grouped part range)
            for (int h = ZC * k; h < (ZC + 1) * k; ++h) {
                auto [gIdx, oIdx] = nZoneOne(g0, h);
                auto [gLo, gHi] = gBlocks[gIdx];
                auto [oLo, oHi] = oBlocks[oIdx];
                int badCol = -1;
                for (int col : B.bad_cols(rowSide, gLo, gHi))
                    if (col >= oLo && col < oHi) {
                        badCol = col;
                        break;
                    }
                if (badCol < 0) throw std::logic_error("mixed-minor lift: missing bad column");
                picks.emplace_back(badCol, std::make_pair(gLo, gHi));
            }
            // contained minimal interval => row evidence from that part
            bool rowsEvidence = false;
            for (auto& [badCol, range] : picks) {
                for (const auto& bi :
                     minimal_bad_intervals(Mat, range.first, range.second, B.badThreshold)) {
                    if (bi.colLo != badCol) continue;
                    if (bi.colHi <= zcHi && bi.colLo >= zcLo) {
                        std::set<std::vector<TypeCode>> seen;
                        for (int r = range.first; r < range.second; ++r) {
                            std::vector<TypeCode> pat;
                            for (int c = zcLo; c < zcHi; ++c) pat.push_back(Mat.at(r, c));
                            if (seen.insert(std::move(pat)).second) zone.indices.push_back(r);
                            if (static_cast<int>(zone.indices.size()) == k) break;
                        }
                        if (static_cast<int>(zone.indices.size()) == k) {
                            zone.rowsKind = true;
                            rowsEvidence = true;
                        } else {
                            zone.indices.clear();
                        }
                    }
                    break;
                }
                if (rowsEvidence) break;
            }
            if (!rowsEvidence) {
                zone.rowsKind = false;
                for (auto& [badCol, range] : picks) zone.indices.push_back(badCol);
                std::sort(zone.indices.begin(), zone.indices.end());
            }
            (void)zrLo;
            (void)zrHi;
            w.zones.push_back(std::move(zone));
        }
    if (!rowSide) {
        // everything above lived on the transposed matrix
        std::swap(w.rowCuts, w.colCuts);
        for (auto& z : w.zones) z.rowsKind = !z.rowsKind;
        // transpose the zone order back to row-major
        std::vector<MixedZone> reordered(w.zones.size());
        for (int i = 0; i < t; ++i)
            for (int j = 0; j < t; ++j) reordered[size_t(j) * t + i] = w.zones[size_t(i) * t + j];
        w.zones = std::move(reordered);
    }
    return w;
}

}  // namespace

BuildOutcome build_convex_chain(const OrderedStructure& S, const BuildParams& params) {
    int n = S.size();
    if (n < 1) throw std::invalid_argument("build_convex_chain: empty structure");
    ChainBuilder B(S, params);
    int b = params.effectiveB();
    int c = params.effectiveC();
    ConvexPairChain chain;
    ConvexPartition rows{n, {}}, cols{n, {}};
    for (int i = 1; i < n; ++i) {
        rows.cuts.push_back(i);
        cols.cuts.push_back(i);
    }
    ChainStep initial;
    initial.rowParts = rows;
    initial.colParts = cols;
    initial.bInEffect = b;
    initial.cInEffect = c;
    chain.steps.push_back(initial);

    while (rows.parts() > 1 || cols.parts() > 1) {
        bool rowSide = rows.parts() >= cols.parts();
        if (rows.parts() == 1) rowSide = false;
        if (cols.parts() == 1) rowSide = true;
        ConvexPartition& side = rowSide ? rows : cols;
        ConvexPartition& other = rowSide ? cols : rows;
        auto blocks = parts_of(side);

        int bestIdx = -1, bestB = 0, bestResidual = 0;
        std::vector<int> bestExceptional;
        for (int i = 0; i + 1 < static_cast<int>(blocks.size()); ++i) {
            int lo = blocks[i].first, hi = blocks[i + 1].second;
            auto [exceptional, residual] = B.bookkeeping(rowSide, lo, hi, other);
            int bb = static_cast<int>(exceptional.size());
            if (bestIdx < 0 || bb < bestB || (bb == bestB && residual < bestResidual)) {
                bestIdx = i;
                bestB = bb;
                bestResidual = residual;
                bestExceptional = std::move(exceptional);
            }
        }
        if (bestB <= b && bestResidual <= c) {
            // commit the merge
            side.cuts.erase(side.cuts.begin() + bestIdx);
            ChainStep step;
            step.mergedRows = rowSide;
            step.mergeIndex = bestIdx;
            step.rowParts = rows;
            step.colParts = cols;
            step.exceptionalParts = bestExceptional;
            step.residualDistinct = bestResidual;
            step.bInEffect = b;
            step.cInEffect = c;
            chain.steps.push_back(step);
            continue;
        }
        // blocked: look for a tk-grid minor in the bad-part indicator matrix
        // of the by-two grouping, per the dichotomy
        int tk = params.t * params.k;
        ConvexPartition grouped = group_by_two(side);
        auto gBlocks = parts_of(grouped);
        auto oBlocks = parts_of(other);
        TypeMatrix N;
        N.rows = static_cast<int>(gBlocks.size());
        N.cols = static_cast<int>(oBlocks.size());
        N.entries.assign(size_t(N.rows) * N.cols, 0);
        for (int g = 0; g < N.rows; ++g) {
            const auto& bad = B.bad_cols(rowSide, gBlocks[g].first, gBlocks[g].second);
            size_t bi = 0;
            for (int col : bad) {
                while (bi < oBlocks.size() && oBlocks[bi].second <= col) ++bi;
                if (bi < oBlocks.size() && col >= oBlocks[bi].first) N.set(g, static_cast<int>(bi), 1);
            }
        }
        bool witnessFound = false;
        if (tk <= std::min(N.rows, N.cols)) {
            GridMinorResult gm = find_grid_minor(N, tk);
            if (gm.witness) {
                MixedMinorWitness w =
                    lift_grid_to_mixed(B, rowSide, grouped, other, *gm.witness, params.k, params.t);
                if (!validate_mixed_minor(B.M, params.k, params.t, w))
                    throw std::logic_error("build_convex_chain: constructed witness failed validation");
                return w;
            }
            witnessFound = false;
        }
        (void)witnessFound;
        // relax thresholds and retry, bounded by the domain size
        if (b >= n && c >= n)
            throw std::logic_error("build_convex_chain: blocked with saturated thresholds");
        b = std::min(std::max(b * 2, 1), std::max(n, 1));
        c = std::min(std::max(c * 2, 1), std::max(n, 1));
        ++chain.relaxations;
    }
    return chain;
}

namespace {

// finest common coarsening (join) via union-find
Partition join_partitions(int n, const Partition& A, const Partition& B) {
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (const auto& blk : A.blocks)
        for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
    for (const auto& blk : B.blocks)
        for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    Partition out;
    for (auto& [root, members] : groups) out.blocks.push_back(members);
    std::sort(out.blocks.begin(), out.blocks.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return out;
}

// partition of [lo,hi) by equality of row patterns over the kept columns
std::vector<std::vector<int>> pattern_classes(const TypeMatrix& M, int lo, int hi,
                                              const std::vector<int>& keepCols) {
    std::map<std::vector<TypeCode>, std::vector<int>> classes;
    for (int r = lo; r < hi; ++r) {
        std::vector<TypeCode> pat;
        pat.reserve(keepCols.size());
        for (int c : keepCols) pat.push_back(M.at(r, c));
        classes[pat].push_back(r);
    }
    std::vector<std::vector<int>> out;
    for (auto& [pat, rows] : classes) out.push_back(rows);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return out;
}

Partition refine_side(const TypeMatrix& M, const ConvexPartition& side,
                      const ConvexPartition& other, int badThreshold,
                      std::map<std::pair<int, int>, std::vector<int>>& badCache) {
    Partition out;
    for (int i = 0; i < side.parts(); ++i) {
        auto [lo, hi] = side.block(i);
        auto it = badCache.find({lo, hi});
        if (it == badCache.end())
            it = badCache.emplace(std::make_pair(lo, hi), bad_columns(M, lo, hi, badThreshold)).first;
        const auto& bad = it->second;
        // columns of the opposite parts free of bad columns
        std::vector<int> keep;
        size_t bi = 0;
        for (int p = 0; p < other.parts(); ++p) {
            auto [olo, ohi] = other.block(p);
            bool isBad = false;
            while (bi < bad.size() && bad[bi] < olo) ++bi;
            if (bi < bad.size() && bad[bi] < ohi) isBad = true;
            if (!isBad)
                for (int ccol = olo; ccol < ohi; ++ccol) keep.push_back(ccol);
        }
        if (keep.empty()) {
            std::vector<int> whole(hi - lo);
            for (int v = lo; v < hi; ++v) whole[v - lo] = v;
            out.blocks.push_back(std::move(whole));
        } else {
            for (auto& cls : pattern_classes(M, lo, hi, keep)) out.blocks.push_back(std::move(cls));
        }
    }
    std::sort(out.blocks.begin(), out.blocks.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return out;
}

// interpolate a coarsening jump into single merges; prev is refined in place
void interpolate_merges(Partition& prev, const Partition& next,
                        std::vector<std::pair<Partition, Partition>>& out, bool rowSide,
                        const Partition& fixedOther) {
    // map each prev block to its enclosing next block
    std::map<int, std::vector<int>> groups;  // next block min -> prev block ids
    std::map<int, int> ofElem;
    for (size_t bi = 0; bi < next.blocks.size(); ++bi)
        for (int v : next.blocks[bi]) ofElem[v] = static_cast<int>(bi);
    for (size_t pi = 0; pi < prev.blocks.size(); ++pi)
        groups[next.blocks[ofElem[prev.blocks[pi][0]]][0]].push_back(static_cast<int>(pi));
    // merge each group left to right by smallest member
    std::vector<std::vector<int>> cur = prev.blocks;
    for (auto& [mn, ids] : groups) {
        if (ids.size() <= 1) continue;
        std::sort(ids.begin(), ids.end(),
                  [&](int a, int b) { return cur[a][0] < cur[b][0]; });
        int into = ids[0];
        for (size_t j = 1; j < ids.size(); ++j) {
            auto& dst = cur[into];
            auto& src = cur[ids[j]];
            dst.insert(dst.end(), src.begin(), src.end());
            std::sort(dst.begin(), dst.end());
            src.clear();
            Partition snapshot;
            for (auto& blk : cur)
                if (!blk.empty()) snapshot.blocks.push_back(blk);
            std::sort(snapshot.blocks.begin(), snapshot.blocks.end(),
                      [](const auto& a, const auto& b) { return a[0] < b[0]; });
            if (rowSide)
                out.emplace_back(snapshot, fixedOther);
            else
                out.emplace_back(fixedOther, snapshot);
        }
    }
    prev = next;
}

}  // namespace

std::vector<std::pair<Partition, Partition>> refine_chain(const OrderedStructure& S,
                                                          const ConvexPairChain& chain,
                                                          const BuildParams& params) {
    if (chain.steps.empty()) throw std::invalid_argument("refine_chain: missing bookkeeping");
    int n = S.size();
    TypeMatrix M = TypeMatrix::adjacency(S);
    TypeMatrix MT = M.transposed();
    int badThreshold = params.k + 1;
    std::map<std::pair<int, int>, std::vector<int>> badRows, badCols;

    std::vector<std::pair<Partition, Partition>> out;
    Partition curRow = Partition::singletons(n), curCol = Partition::singletons(n);
    out.emplace_back(curRow, curCol);
    for (const auto& step : chain.steps) {
        Partition rowRef = refine_side(M, step.rowParts, step.colParts, badThreshold, badRows);
        Partition colRef = refine_side(MT, step.colParts, step.rowParts, badThreshold, badCols);
        // force monotonicity: coarsen just enough to extend the previous stage
        Partition rowNext = join_partitions(n, curRow, rowRef);
        Partition colNext = join_partitions(n, curCol, colRef);
        interpolate_merges(curRow, rowNext, out, true, curCol);
        interpolate_merges(curCol, colNext, out, false, curRow);
    }
    return out;
}

ContractionSequence contraction_from_chain(
    const OrderedStructure& S, const std::vector<std::pair<Partition, Partition>>& refined) {
    int n = S.size();
    ContractionSequence seq;
    if (n <= 1) return seq;
    // meet of each pair, then interpolate the coarsening jumps
    auto meet = [&](const Partition& A, const Partition& B) {
        std::map<std::pair<int, int>, std::vector<int>> cells;
        std::vector<int> aId(n), bId(n);
        for (size_t i = 0; i < A.blocks.size(); ++i)
            for (int v : A.blocks[i]) aId[v] = static_cast<int>(i);
        for (size_t i = 0; i < B.blocks.size(); ++i)
            for (int v : B.blocks[i]) bId[v] = static_cast<int>(i);
        for (int v = 0; v < n; ++v) cells[{aId[v], bId[v]}].push_back(v);
        Partition out;
        for (auto& [key, members] : cells) out.blocks.push_back(members);
        std::sort(out.blocks.begin(), out.blocks.end(),
                  [](const auto& x, const auto& y) { return x[0] < y[0]; });
        return out;
    };
    std::vector<int> blockOf(n);
    for (int i = 0; i < n; ++i) blockOf[i] = i;
    std::vector<int> blockMin(n);
    for (int i = 0; i < n; ++i) blockMin[i] = i;
    auto apply_target = [&](const Partition& target) {
        for (const auto& blk : target.blocks) {
            // merge the current blocks inside blk, smallest first
            std::set<int> roots;
            for (int v : blk) roots.insert(blockOf[v]);
            if (roots.size() <= 1) continue;
            std::vector<int> ordered(roots.begin(), roots.end());
            std::sort(ordered.begin(), ordered.end(),
                      [&](int a, int b) { return blockMin[a] < blockMin[b]; });
            int into = ordered[0];
            for (size_t i = 1; i < ordered.size(); ++i) {
                seq.merges.emplace_back(blockMin[into], blockMin[ordered[i]]);
                for (int v = 0; v < n; ++v)
                    if (blockOf[v] == ordered[i]) blockOf[v] = into;
                blockMin[into] = std::min(blockMin[into], blockMin[ordered[i]]);
            }
        }
    };
    for (const auto& [rowP, colP] : refined) apply_target(meet(rowP, colP));
    Partition one;
    one.blocks.push_back({});
    for (int v = 0; v < n; ++v) one.blocks[0].push_back(v);
    apply_target(one);
    if (static_cast<int>(seq.merges.size()) != n - 1)
        throw std::logic_error("contraction_from_chain: merge count mismatch");
    return seq;
}

AlgoOutcome algo_cor(const OrderedStructure& S, int k, int t) {
    BuildParams params = BuildParams::make(k, t);
    BuildOutcome built = build_convex_chain(S, params);
    if (std::holds_alternative<MixedMinorWitness>(built))
        return std::get<MixedMinorWitness>(std::move(built));
    auto refined = refine_chain(S, std::get<ConvexPairChain>(built), params);
    return contraction_from_chain(S, refined);
}

ApproxResult approx_twinwidth(const OrderedStructure& S) {
    ApproxResult result;
    int n = S.size();
    if (n <= 1) {
        result.kUsed = 1;
        return result;
    }
    for (int k = 1; k <= n; ++k) {
        AlgoOutcome out = algo_cor(S, k, k);
        if (std::holds_alternative<ContractionSequence>(out)) {
            result.kUsed = k;
            result.seq = std::get<ContractionSequence>(std::move(out));
            result.redDegree = verify_contraction_sequence(S, result.seq);
            return result;
        }
    }
    throw std::logic_error("approx_twinwidth: no k succeeded");  // k = n always succeeds
}

}  // namespace twwlab
