#include "twwlab/minors.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace twwlab {

TypeMatrix TypeMatrix::adjacency(const OrderedStructure& S) {
    TypeMatrix M;
    M.rows = M.cols = S.size();
    M.entries.resize(size_t(M.rows) * M.cols);
    for (int a = 0; a < M.rows; ++a)
        for (int b = 0; b < M.cols; ++b) M.set(a, b, S.atp_code(a, b));
    M.rowLabels.resize(M.rows);
    M.colLabels.resize(M.cols);
    for (int i = 0; i < M.rows; ++i) M.rowLabels[i] = i;
    for (int i = 0; i < M.cols; ++i) M.colLabels[i] = i;
    return M;
}

TypeMatrix TypeMatrix::from01(const std::vector<std::string>& rows01) {
    TypeMatrix M;
    M.rows = static_cast<int>(rows01.size());
    M.cols = M.rows ? static_cast<int>(rows01[0].size()) : 0;
    M.entries.resize(size_t(M.rows) * M.cols);
    for (int r = 0; r < M.rows; ++r) {
        if (static_cast<int>(rows01[r].size()) != M.cols)
            throw std::invalid_argument("matrix rows must have equal length");
        for (int c = 0; c < M.cols; ++c) {
            char ch = rows01[r][c];
            if (ch != '0' && ch != '1') throw std::invalid_argument("matrix entries must be 0/1");
            M.set(r, c, ch - '0');
        }
    }
    return M;
}

TypeMatrix TypeMatrix::transposed() const {
    TypeMatrix T;
    T.rows = cols;
    T.cols = rows;
    T.entries.resize(entries.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) T.set(c, r, at(r, c));
    T.rowLabels = colLabels;
    T.colLabels = rowLabels;
    return T;
}

int distinct_rows(const TypeMatrix& M, int rLo, int rHi, int cLo, int cHi) {
    if (rLo < 0 || rHi > M.rows || cLo < 0 || cHi > M.cols || rLo >= rHi || cLo >= cHi)
        throw std::invalid_argument("distinct_rows: empty or out-of-range zone");
    std::vector<std::vector<std::uint32_t>> rows;
    rows.reserve(rHi - rLo);
    for (int r = rLo; r < rHi; ++r)
        rows.emplace_back(M.entries.begin() + size_t(r) * M.cols + cLo,
                          M.entries.begin() + size_t(r) * M.cols + cHi);
    std::sort(rows.begin(), rows.end());
    return static_cast<int>(std::unique(rows.begin(), rows.end()) - rows.begin());
}

int distinct_cols(const TypeMatrix& M, int rLo, int rHi, int cLo, int cHi) {
    if (rLo < 0 || rHi > M.rows || cLo < 0 || cHi > M.cols || rLo >= rHi || cLo >= cHi)
        throw std::invalid_argument("distinct_cols: empty or out-of-range zone");
    std::vector<std::vector<std::uint32_t>> cols;
    cols.reserve(cHi - cLo);
    for (int c = cLo; c < cHi; ++c) {
        std::vector<std::uint32_t> col;
        col.reserve(rHi - rLo);
        for (int r = rLo; r < rHi; ++r) col.push_back(M.at(r, c));
        cols.push_back(std::move(col));
    }
    std::sort(cols.begin(), cols.end());
    return static_cast<int>(std::unique(cols.begin(), cols.end()) - cols.begin());
}

namespace {

// iterate strictly increasing cut vectors of length t-1 over 1..n-1,
// lexicographically; fn returns true to stop
template <typename Fn>
bool for_each_cuts(int n, int t, Fn&& fn) {
    std::vector<int> cuts(t - 1);
    for (int i = 0; i < t - 1; ++i) cuts[i] = i + 1;
    if (t - 1 == 0) return fn(cuts);
    if (t - 1 > n - 1) return false;
    while (true) {
        if (fn(cuts)) return true;
        int i = t - 2;
        while (i >= 0 && cuts[i] == n - 1 - (t - 2 - i)) --i;
        if (i < 0) return false;
        ++cuts[i];
        for (int j = i + 1; j < t - 1; ++j) cuts[j] = cuts[j - 1] + 1;
    }
}

std::vector<std::pair<int, int>> cut_blocks(const std::vector<int>& cuts, int n) {
    std::vector<std::pair<int, int>> blocks;
    int lo = 0;
    for (int c : cuts) {
        blocks.emplace_back(lo, c);
        lo = c;
    }
    blocks.emplace_back(lo, n);
    return blocks;
}

}  // namespace

GridMinorResult find_grid_minor(const TypeMatrix& M, int t, const MinorSearchConfig& cfg) {
    if (t < 1) throw std::invalid_argument("find_grid_minor: t must be positive");
    if (t > M.rows || t > M.cols) throw std::invalid_argument("find_grid_minor: t exceeds dimensions");
    // prefix sums of ones
    std::vector<std::vector<int>> pre(M.rows + 1, std::vector<int>(M.cols + 1, 0));
    for (int r = 0; r < M.rows; ++r)
        for (int c = 0; c < M.cols; ++c)
            pre[r + 1][c + 1] = pre[r][c + 1] + pre[r + 1][c] - pre[r][c] + (M.at(r, c) ? 1 : 0);
    auto onesIn = [&](int rLo, int rHi, int cLo, int cHi) {
        return pre[rHi][cHi] - pre[rLo][cHi] - pre[rHi][cLo] + pre[rLo][cLo];
    };
    auto makeWitness = [&](const std::vector<int>& rowCuts, const std::vector<int>& colCuts) {
        GridMinorWitness w;
        w.rowCuts = rowCuts;
        w.colCuts = colCuts;
        for (auto [rLo, rHi] : cut_blocks(rowCuts, M.rows))
            for (auto [cLo, cHi] : cut_blocks(colCuts, M.cols)) {
                std::pair<int, int> one{-1, -1};
                for (int r = rLo; r < rHi && one.first < 0; ++r)
                    for (int c = cLo; c < cHi; ++c)
                        if (M.at(r, c)) {
                            one = {r, c};
                            break;
                        }
                w.zoneOnes.push_back(one);
            }
        return w;
    };

    GridMinorResult result;
    bool exhaustive = std::min(M.rows, M.cols) <= cfg.gridExhaustiveMaxMin && t <= cfg.gridExhaustiveMaxT;
    result.exhaustive = exhaustive;
    if (exhaustive) {
        for_each_cuts(M.rows, t, [&](const std::vector<int>& rowCuts) {
            return for_each_cuts(M.cols, t, [&](const std::vector<int>& colCuts) {
                for (auto [rLo, rHi] : cut_blocks(rowCuts, M.rows))
                    for (auto [cLo, cHi] : cut_blocks(colCuts, M.cols))
                        if (onesIn(rLo, rHi, cLo, cHi) == 0) return false;
                result.witness = makeWitness(rowCuts, colCuts);
                return true;
            });
        });
        return result;
    }
    // greedy cut-advancing heuristic: equal row split, columns closed as soon
    // as every row stripe of the open group holds a 1
    std::vector<int> rowCuts;
    for (int i = 1; i < t; ++i) rowCuts.push_back(static_cast<int>(std::int64_t(i) * M.rows / t));
    std::sort(rowCuts.begin(), rowCuts.end());
    rowCuts.erase(std::unique(rowCuts.begin(), rowCuts.end()), rowCuts.end());
    if (static_cast<int>(rowCuts.size()) == t - 1 && (rowCuts.empty() || (rowCuts.front() > 0 && rowCuts.back() < M.rows))) {
        auto stripes = cut_blocks(rowCuts, M.rows);
        std::vector<int> colCuts;
        int groupStart = 0, closed = 0;
        for (int c = 0; c < M.cols && closed < t; ++c) {
            bool all = true;
            for (auto [rLo, rHi] : stripes)
                if (onesIn(rLo, rHi, groupStart, c + 1) == 0) {
                    all = false;
                    break;
                }
            if (all) {
                ++closed;
                if (closed < t) {
                    colCuts.push_back(c + 1);
                    groupStart = c + 1;
                }
            }
        }
        bool lastOk = closed == t - 1 && groupStart < M.cols;
        if (lastOk) {
            bool all = true;
            for (auto [rLo, rHi] : stripes)
                if (onesIn(rLo, rHi, groupStart, M.cols) == 0) all = false;
            if (all) ++closed;
        }
        if (closed >= t && static_cast<int>(colCuts.size()) == t - 1)
            result.witness = makeWitness(rowCuts, colCuts);
    }
    return result;
}

bool validate_grid_minor(const TypeMatrix& M, int t, const GridMinorWitness& w) {
    if (static_cast<int>(w.rowCuts.size()) != t - 1 || static_cast<int>(w.colCuts.size()) != t - 1)
        return false;
    auto ok_cuts = [](const std::vector<int>& cuts, int n) {
        int prev = 0;
        for (int c : cuts) {
            if (c <= prev || c >= n) return false;
            prev = c;
        }
        return true;
    };
    if (!ok_cuts(w.rowCuts, M.rows) || !ok_cuts(w.colCuts, M.cols)) return false;
    auto rBlocks = cut_blocks(w.rowCuts, M.rows);
    auto cBlocks = cut_blocks(w.colCuts, M.cols);
    if (w.zoneOnes.size() != rBlocks.size() * cBlocks.size()) return false;
    size_t z = 0;
    for (auto [rLo, rHi] : rBlocks)
        for (auto [cLo, cHi] : cBlocks) {
            auto [r, c] = w.zoneOnes[z++];
            if (r < rLo || r >= rHi || c < cLo || c >= cHi) return false;
            if (!M.at(r, c)) return false;
        }
    return true;
}

int mt_threshold(int t, const std::string& profile) {
    if (t < 1) throw std::invalid_argument("mt_threshold: t must be positive");
    if (profile == "exp8") return 8 * (1 << t);
    throw std::invalid_argument("mt_threshold: unknown profile \"" + profile + "\"");
}

namespace {

// representatives of the first k distinct row patterns of a zone
std::vector<int> distinct_row_reps(const TypeMatrix& M, int rLo, int rHi, int cLo, int cHi, int k) {
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<int> reps;
    for (int r = rLo; r < rHi && static_cast<int>(reps.size()) < k; ++r) {
        std::vector<std::uint32_t> row(M.entries.begin() + size_t(r) * M.cols + cLo,
                                       M.entries.begin() + size_t(r) * M.cols + cHi);
        if (seen.insert(std::move(row)).second) reps.push_back(r);
    }
    return reps;
}

std::vector<int> distinct_col_reps(const TypeMatrix& M, int rLo, int rHi, int cLo, int cHi, int k) {
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<int> reps;
    for (int c = cLo; c < cHi && static_cast<int>(reps.size()) < k; ++c) {
        std::vector<std::uint32_t> col;
        for (int r = rLo; r < rHi; ++r) col.push_back(M.at(r, c));
        if (seen.insert(std::move(col)).second) reps.push_back(c);
    }
    return reps;
}

}  // namespace

MixedMinorResult find_mixed_minor(const TypeMatrix& M, int k, int t, const MinorSearchConfig& cfg) {
    if (k < 1) throw std::invalid_argument("find_mixed_minor: k must be positive");
    if (t < 1 || t > std::min(M.rows, M.cols))
        throw std::invalid_argument("find_mixed_minor: t exceeds dimensions");
    MixedMinorResult result;
    result.exhaustive =
        std::min(M.rows, M.cols) <= cfg.mixedExhaustiveMaxMin && t <= cfg.mixedExhaustiveMaxT;

    // distinct-count tables over all interval pairs
    auto intervalId = [](int lo, int hi, int n) { return lo * (n + 1) + hi; };
    std::vector<std::vector<int>> dRows, dCols;
    auto ensure_tables = [&]() {
        dRows.assign((M.rows + 1) * (M.rows + 1), {});
        dCols.assign((M.rows + 1) * (M.rows + 1), {});
        for (int rLo = 0; rLo < M.rows; ++rLo)
            for (int rHi = rLo + 1; rHi <= M.rows; ++rHi) {
                auto& dr = dRows[intervalId(rLo, rHi, M.rows)];
                auto& dc = dCols[intervalId(rLo, rHi, M.rows)];
                dr.assign((M.cols + 1) * (M.cols + 1), 0);
                dc.assign((M.cols + 1) * (M.cols + 1), 0);
                for (int cLo = 0; cLo < M.cols; ++cLo)
                    for (int cHi = cLo + 1; cHi <= M.cols; ++cHi) {
                        dr[intervalId(cLo, cHi, M.cols)] = distinct_rows(M, rLo, rHi, cLo, cHi);
                        dc[intervalId(cLo, cHi, M.cols)] = distinct_cols(M, rLo, rHi, cLo, cHi);
                    }
            }
    };

    bool haveTables = false;
    auto zone_rows = [&](int rLo, int rHi, int cLo, int cHi) {
        return haveTables ? dRows[intervalId(rLo, rHi, M.rows)][intervalId(cLo, cHi, M.cols)]
                          : distinct_rows(M, rLo, rHi, cLo, cHi);
    };
    auto zone_cols = [&](int rLo, int rHi, int cLo, int cHi) {
        return haveTables ? dCols[intervalId(rLo, rHi, M.rows)][intervalId(cLo, cHi, M.cols)]
                          : distinct_cols(M, rLo, rHi, cLo, cHi);
    };
    auto try_pair = [&](const std::vector<int>& rowCuts, const std::vector<int>& colCuts) -> bool {
        auto rBlocks = cut_blocks(rowCuts, M.rows);
        auto cBlocks = cut_blocks(colCuts, M.cols);
        for (auto [rLo, rHi] : rBlocks)
            for (auto [cLo, cHi] : cBlocks) {
                if (zone_rows(rLo, rHi, cLo, cHi) >= k) continue;
                if (zone_cols(rLo, rHi, cLo, cHi) < k) return false;
            }
        MixedMinorWitness w;
        w.rowCuts = rowCuts;
        w.colCuts = colCuts;
        for (auto [rLo, rHi] : rBlocks)
            for (auto [cLo, cHi] : cBlocks) {
                MixedZone z;
                if (zone_rows(rLo, rHi, cLo, cHi) >= k) {
                    z.rowsKind = true;
                    z.indices = distinct_row_reps(M, rLo, rHi, cLo, cHi, k);
                } else {
                    z.rowsKind = false;
                    z.indices = distinct_col_reps(M, rLo, rHi, cLo, cHi, k);
                }
                w.zones.push_back(std::move(z));
            }
        result.witness = std::move(w);
        return true;
    };

    if (result.exhaustive) {
        ensure_tables();
        haveTables = true;
        for_each_cuts(M.rows, t, [&](const std::vector<int>& rowCuts) {
            return for_each_cuts(M.cols, t, [&](const std::vector<int>& colCuts) {
                return try_pair(rowCuts, colCuts);
            });
        });
        return result;
    }
    // heuristic regime: equally spaced cuts only
    std::vector<int> rowCuts, colCuts;
    for (int i = 1; i < t; ++i) {
        rowCuts.push_back(static_cast<int>(std::int64_t(i) * M.rows / t));
        colCuts.push_back(static_cast<int>(std::int64_t(i) * M.cols / t));
    }
    auto strictly_increasing = [](const std::vector<int>& cuts, int n) {
        int prev = 0;
        for (int c : cuts) {
            if (c <= prev || c >= n) return false;
            prev = c;
        }
        return true;
    };
    if (strictly_increasing(rowCuts, M.rows) && strictly_increasing(colCuts, M.cols))
        try_pair(rowCuts, colCuts);
    return result;
}

bool validate_mixed_minor(const TypeMatrix& M, int k, int t, const MixedMinorWitness& w) {
    if (static_cast<int>(w.rowCuts.size()) != t - 1 || static_cast<int>(w.colCuts.size()) != t - 1)
        return false;
    auto ok_cuts = [](const std::vector<int>& cuts, int n) {
        int prev = 0;
        for (int c : cuts) {
            if (c <= prev || c >= n) return false;
            prev = c;
        }
        return true;
    };
    if (!ok_cuts(w.rowCuts, M.rows) || !ok_cuts(w.colCuts, M.cols)) return false;
    auto rBlocks = cut_blocks(w.rowCuts, M.rows);
    auto cBlocks = cut_blocks(w.colCuts, M.cols);
    if (w.zones.size() != rBlocks.size() * cBlocks.size()) return false;
    size_t zi = 0;
    for (auto [rLo, rHi] : rBlocks)
        for (auto [cLo, cHi] : cBlocks) {
            const MixedZone& z = w.zones[zi++];
            if (static_cast<int>(z.indices.size()) != k) return false;
            std::set<std::vector<std::uint32_t>> patterns;
            for (int idx : z.indices) {
                std::vector<std::uint32_t> pattern;
                if (z.rowsKind) {
                    if (idx < rLo || idx >= rHi) return false;
                    pattern.assign(M.entries.begin() + size_t(idx) * M.cols + cLo,
                                   M.entries.begin() + size_t(idx) * M.cols + cHi);
                } else {
                    if (idx < cLo || idx >= cHi) return false;
                    for (int r = rLo; r < rHi; ++r) pattern.push_back(M.at(r, idx));
                }
                if (!patterns.insert(std::move(pattern)).second) return false;
            }
        }
    return true;
}

std::vector<BadInterval> minimal_bad_intervals(const TypeMatrix& M, int rowLo, int rowHi, int k) {
    if (rowLo < 0 || rowHi > M.rows || rowLo >= rowHi)
        throw std::invalid_argument("minimal_bad_intervals: empty row interval");
    if (k < 1) throw std::invalid_argument("minimal_bad_intervals: k must be positive");
    int n = M.cols;
    int rows = rowHi - rowLo;
    // e(lo) = least hi such that [lo,hi) shows >= k distinct rows; monotone in
    // lo, so minimal intervals are the [lo, e(lo)) with e(lo) < e(lo+1)
    std::vector<int> firstBadEnd(n + 1, n + 1);
    for (int lo = 0; lo < n; ++lo) {
        // incremental 128-bit row fingerprints; exactness is cross-checked below
        std::vector<std::uint64_t> h1(rows, 1469598103934665603ull), h2(rows, 88172645463325252ull);
        std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
        int end = n + 1;
        for (int c = lo; c < n; ++c) {
            seen.clear();
            for (int r = 0; r < rows; ++r) {
                h1[r] = (h1[r] ^ M.at(rowLo + r, c)) * 1099511628211ull;
                h2[r] = h2[r] * 6364136223846793005ull + M.at(rowLo + r, c) + 1442695040888963407ull;
                seen.emplace(h1[r], h2[r]);
            }
            if (static_cast<int>(seen.size()) >= k) {
                end = c + 1;
                break;
            }
        }
        firstBadEnd[lo] = end;
        if (end == n + 1) break;  // wider start windows cannot become bad either
    }
    std::vector<BadInterval> out;
    for (int lo = 0; lo < n; ++lo) {
        if (firstBadEnd[lo] > n) continue;
        if (lo + 1 < n && firstBadEnd[lo + 1] <= firstBadEnd[lo]) continue;
        BadInterval bi;
        bi.rowLo = rowLo;
        bi.rowHi = rowHi;
        bi.colLo = lo;
        bi.colHi = firstBadEnd[lo];
        bi.distinctRows = distinct_rows(M, rowLo, rowHi, lo, firstBadEnd[lo]);
        if (bi.distinctRows < k) throw std::logic_error("minimal_bad_intervals: fingerprint collision");
        out.push_back(bi);
    }
    return out;
}

std::vector<int> bad_columns(const TypeMatrix& M, int rowLo, int rowHi, int k) {
    std::vector<int> cols;
    for (const auto& bi : minimal_bad_intervals(M, rowLo, rowHi, k)) cols.push_back(bi.colLo);
    return cols;
}

std::string grid_witness_json(const GridMinorWitness& w) {
    nlohmann::json j;
    j["v"] = 1;
    j["rowCuts"] = w.rowCuts;
    j["colCuts"] = w.colCuts;
    auto& zones = j["zones"];
    zones = nlohmann::json::array();
    for (auto [r, c] : w.zoneOnes) zones.push_back({{"kind", "one"}, {"evidence", {r, c}}});
    return j.dump();
}

std::string mixed_witness_json(const MixedMinorWitness& w) {
    nlohmann::json j;
    j["v"] = 1;
    j["rowCuts"] = w.rowCuts;
    j["colCuts"] = w.colCuts;
    auto& zones = j["zones"];
    zones = nlohmann::json::array();
    for (const auto& z : w.zones)
        zones.push_back({{"kind", z.rowsKind ? "rows" : "cols"}, {"evidence", z.indices}});
    return j.dump();
}

}  // namespace twwlab
