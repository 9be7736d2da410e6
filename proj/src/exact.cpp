#include "twwlab/exact.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "twwlab/semigrid.hpp"

namespace twwlab {

namespace {

struct PartitionState {
    std::vector<std::vector<int>> blocks;  // ordered by minimum element
    std::string key(int n) const {
        std::string k(n, '\0');
        for (size_t b = 0; b < blocks.size(); ++b)
            for (int v : blocks[b]) k[v] = static_cast<char>(b);
        return k;
    }
};

PartitionState merge_blocks(const PartitionState& P, int i, int j) {
    PartitionState Q;
    std::vector<int> merged = P.blocks[i];
    merged.insert(merged.end(), P.blocks[j].begin(), P.blocks[j].end());
    std::sort(merged.begin(), merged.end());
    for (int b = 0; b < static_cast<int>(P.blocks.size()); ++b) {
        if (b == i || b == j) continue;
        Q.blocks.push_back(P.blocks[b]);
    }
    Q.blocks.push_back(std::move(merged));
    std::sort(Q.blocks.begin(), Q.blocks.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return Q;
}

int state_red_degree(const OrderedStructure& S, const PartitionState& P) {
    Partition part;
    part.blocks = P.blocks;
    return red_degree(S, part);
}

struct ExactSearch {
    const OrderedStructure& S;
    int n;
    std::unordered_map<std::string, std::pair<int, int>> memo;  // key -> (red, g)

    // best achievable maximum red-degree of the chain continuing from P,
    // not counting red(P) itself
    int g(const PartitionState& P) {
        if (P.blocks.size() <= 1) return 0;
        std::string key = P.key(n);
        auto it = memo.find(key);
        if (it != memo.end() && it->second.second >= 0) return it->second.second;
        int best = n + 1;
        int p = static_cast<int>(P.blocks.size());
        for (int i = 0; i < p && best > 0; ++i)
            for (int j = i + 1; j < p && best > 0; ++j) {
                PartitionState Q = merge_blocks(P, i, j);
                std::string qk = Q.key(n);
                auto qit = memo.find(qk);
                int qRed;
                if (qit == memo.end()) {
                    qRed = state_red_degree(S, Q);
                    memo.emplace(qk, std::make_pair(qRed, -1));
                } else {
                    qRed = qit->second.first;
                }
                if (qRed >= best) continue;
                best = std::min(best, std::max(qRed, g(Q)));
            }
        memo[key].second = best;
        return best;
    }
};

}  // namespace

TwwExactResult twinwidth_exact(const OrderedStructure& S, int cap) {
    int n = S.size();
    if (n > cap) throw std::invalid_argument("twinwidth_exact: instance exceeds cap");
    TwwExactResult result;
    if (n <= 1) return result;
    PartitionState P;
    for (int i = 0; i < n; ++i) P.blocks.push_back({i});
    ExactSearch search{S, n, {}};
    search.memo.emplace(P.key(n), std::make_pair(0, -1));
    result.width = search.g(P);
    // reconstruct an optimal sequence by walking the memo greedily
    while (P.blocks.size() > 1) {
        int p = static_cast<int>(P.blocks.size());
        int bestI = -1, bestJ = -1, bestVal = n + 2;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) {
                PartitionState Q = merge_blocks(P, i, j);
                int red = state_red_degree(S, Q);
                if (red >= bestVal) continue;
                int val = std::max(red, search.g(Q));
                if (val < bestVal) {
                    bestVal = val;
                    bestI = i;
                    bestJ = j;
                }
            }
        result.seq.merges.emplace_back(P.blocks[bestI][0], P.blocks[bestJ][0]);
        P = merge_blocks(P, bestI, bestJ);
    }
    return result;
}

namespace {

template <typename Fn>
bool for_each_cut_vector(int n, int parts, Fn&& fn) {
    if (parts - 1 > n - 1) return false;
    std::vector<int> cuts(parts - 1);
    for (int i = 0; i < parts - 1; ++i) cuts[i] = i + 1;
    if (parts == 1) return fn(cuts);
    while (true) {
        if (fn(cuts)) return true;
        int i = parts - 2;
        while (i >= 0 && cuts[i] == n - 1 - (parts - 2 - i)) --i;
        if (i < 0) return false;
        ++cuts[i];
        for (int j = i + 1; j < parts - 1; ++j) cuts[j] = cuts[j - 1] + 1;
    }
}

}  // namespace

std::optional<SimplicityWitness> kt_simple_witness(const OrderedStructure& S, int k, int t) {
    int n = S.size();
    if (t < 1) throw std::invalid_argument("kt_simple: t must be positive");
    if (t > n) throw std::invalid_argument("kt_simple: t exceeds the domain size");
    if (k < 1) throw std::invalid_argument("kt_simple: k must be positive");
    // distinct-row counts for every pair of intervals, as a dense table
    int ivCount = n * (n + 1) / 2;
    auto ivId = [&](int lo, int hi) { return (lo * (2 * n - lo + 1)) / 2 + (hi - lo - 1); };
    std::vector<std::uint16_t> tc(size_t(ivCount) * ivCount);
    {
        std::vector<std::vector<TypeCode>> rows(n);
        for (int a = 0; a < n; ++a) {
            rows[a].resize(n);
            for (int b = 0; b < n; ++b) rows[a][b] = S.atp_code(a, b);
        }
        for (int aLo = 0; aLo < n; ++aLo)
            for (int aHi = aLo + 1; aHi <= n; ++aHi)
                for (int bLo = 0; bLo < n; ++bLo)
                    for (int bHi = bLo + 1; bHi <= n; ++bHi) {
                        std::set<std::vector<TypeCode>> distinct;
                        for (int a = aLo; a < aHi; ++a)
                            distinct.emplace(rows[a].begin() + bLo, rows[a].begin() + bHi);
                        tc[size_t(ivId(aLo, aHi)) * ivCount + ivId(bLo, bHi)] =
                            static_cast<std::uint16_t>(distinct.size());
                    }
    }
    auto good = [&](int li, int ri) {
        return tc[size_t(li) * ivCount + ri] <= k && tc[size_t(ri) * ivCount + li] <= k;
    };
    std::optional<SimplicityWitness> witness;
    for (int p = t; p <= n && !witness; ++p) {
        std::vector<std::vector<int>> partitions;  // interval ids per partition
        std::vector<std::vector<int>> cutSets;
        for_each_cut_vector(n, p, [&](const std::vector<int>& cuts) {
            std::vector<int> ids;
            int lo = 0;
            for (int c : cuts) {
                ids.push_back(ivId(lo, c));
                lo = c;
            }
            ids.push_back(ivId(lo, n));
            partitions.push_back(std::move(ids));
            cutSets.push_back(cuts);
            return false;
        });
        std::vector<char> anyGood(ivCount);
        for (size_t li = 0; li < partitions.size() && !witness; ++li) {
            std::fill(anyGood.begin(), anyGood.end(), 0);
            for (int iv = 0; iv < ivCount; ++iv)
                for (int L : partitions[li])
                    if (good(L, iv)) {
                        anyGood[iv] = 1;
                        break;
                    }
            for (size_t ri = 0; ri < partitions.size(); ++ri) {
                bool found = false;
                for (int R : partitions[ri])
                    if (anyGood[R]) {
                        found = true;
                        break;
                    }
                if (found) continue;
                SimplicityWitness w;
                w.parts = p;
                w.rowCuts = ConvexPartition{n, cutSets[li]};
                w.colCuts = ConvexPartition{n, cutSets[ri]};
                w.perZone.assign(p, std::vector<std::pair<int, int>>(p));
                for (int i = 0; i < p; ++i)
                    for (int j = 0; j < p; ++j)
                        w.perZone[i][j] = {
                            tc[size_t(partitions[li][i]) * ivCount + partitions[ri][j]],
                            tc[size_t(partitions[ri][j]) * ivCount + partitions[li][i]]};
                witness = std::move(w);
                break;
            }
        }
    }
    return witness;
}

bool is_kt_simple(const OrderedStructure& S, int k, int t) {
    return !kt_simple_witness(S, k, t).has_value();
}

int simplicity(const OrderedStructure& S) {
    if (S.size() < 1) throw std::invalid_argument("simplicity: empty structure");
    for (int k = 1;; ++k)
        if (is_kt_simple(S, k, k)) return k;
}

std::optional<std::vector<int>> embed_ordered_induced(const OrderedStructure& host,
                                                      const OrderedStructure& target) {
    if (!(host.sig() == target.sig()))
        throw std::invalid_argument("embed: signatures must match");
    int hv = host.size(), tv = target.size();
    if (tv > hv) return std::nullopt;
    std::vector<int> map(tv, -1);
    std::vector<TypeCode> targetCodes(size_t(tv) * tv);
    for (int i = 0; i < tv; ++i)
        for (int j = 0; j < tv; ++j) targetCodes[size_t(i) * tv + j] = target.atp_code(i, j);
    // depth-first over increasing host positions; the first complete map is
    // lexicographically least
    std::function<bool(int, int)> go = [&](int ti, int from) -> bool {
        if (ti == tv) return true;
        for (int hvtx = from; hvtx <= hv - (tv - ti); ++hvtx) {
            bool ok = targetCodes[size_t(ti) * tv + ti] == host.atp_code(hvtx, hvtx);
            for (int tj = 0; tj < ti && ok; ++tj)
                if (targetCodes[size_t(tj) * tv + ti] != host.atp_code(map[tj], hvtx)) ok = false;
            if (!ok) continue;
            map[ti] = hvtx;
            if (go(ti + 1, hvtx + 1)) return true;
        }
        return false;
    };
    if (go(0, 0)) return map;
    return std::nullopt;
}

int max_semigrid(const OrderedStructure& S, int cap) {
    if (cap < 1) return 0;
    SchemeList schemes = enumerate_schemes(S.sig());
    for (int m = cap; m >= 1; --m) {
        if ((m + 1) * (m + 1) > S.size()) continue;
        std::set<std::string> seen;  // dedupe targets agreeing as structures
        auto try_target = [&](const OrderedStructure& target) {
            std::string key = write_obs(target);
            if (!seen.insert(key).second) return false;
            return embed_ordered_induced(S, target).has_value();
        };
        if (schemes.graphCase) {
            for (const auto& sch : schemes.graph)
                if (try_target(generate_semigrid(sch, m, m))) return m;
        } else {
            for (const auto& sch : schemes.general)
                if (try_target(generate_semigrid(sch, S.sig(), m, m))) return m;
        }
    }
    return 0;
}

}  // namespace twwlab
