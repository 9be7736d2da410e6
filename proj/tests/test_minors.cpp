#include <iostream>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "twwlab/minors.hpp"
#include "twwlab/semigrid.hpp"

using namespace twwlab;
using namespace twwlab::testing;

namespace {

TypeMatrix random01(int rows, int cols, std::mt19937& rng, double density = 0.5) {
    std::vector<std::string> lines(rows);
    std::bernoulli_distribution bit(density);
    for (auto& l : lines)
        for (int c = 0; c < cols; ++c) l.push_back(bit(rng) ? '1' : '0');
    return TypeMatrix::from01(lines);
}

// independent brute-force search over all cut pairs, used to cross-check
// exhaustive answers
bool brute_has_grid_minor(const TypeMatrix& M, int t) {
    std::vector<int> rc(t - 1), cc(t - 1);
    std::function<bool(int, int, std::vector<int>&, int)> choose =
        [&](int idx, int from, std::vector<int>& cuts, int n) {
            if (idx == t - 1) return true;
            for (int c = from; c < n; ++c) {
                cuts[idx] = c;
                if (choose(idx + 1, c + 1, cuts, n)) return true;
            }
            return false;
        };
    std::function<bool(std::vector<int>&, std::vector<int>&)> check =
        [&](std::vector<int>& rows, std::vector<int>& cols) {
            auto blocks = [](const std::vector<int>& cuts, int n) {
                std::vector<std::pair<int, int>> b;
                int lo = 0;
                for (int c : cuts) {
                    b.emplace_back(lo, c);
                    lo = c;
                }
                b.emplace_back(lo, n);
                return b;
            };
            for (auto [rLo, rHi] : blocks(rows, M.rows))
                for (auto [cLo, cHi] : blocks(cols, M.cols)) {
                    bool one = false;
                    for (int r = rLo; r < rHi && !one; ++r)
                        for (int c = cLo; c < cHi; ++c)
                            if (M.at(r, c)) {
                                one = true;
                                break;
                            }
                    if (!one) return false;
                }
            return true;
        };
    // enumerate all cut vectors for both sides
    std::vector<std::vector<int>> rowCutSets, colCutSets;
    std::function<void(int, int, std::vector<int>&, int, std::vector<std::vector<int>>&)> gen =
        [&](int idx, int from, std::vector<int>& cuts, int n, std::vector<std::vector<int>>& out) {
            if (idx == t - 1) {
                out.push_back(cuts);
                return;
            }
            for (int c = from; c < n; ++c) {
                cuts[idx] = c;
                gen(idx + 1, c + 1, cuts, n, out);
            }
        };
    gen(0, 1, rc, M.rows, rowCutSets);
    gen(0, 1, cc, M.cols, colCutSets);
    for (auto& r : rowCutSets)
        for (auto& c : colCutSets)
            if (check(r, c)) return true;
    return false;
}

bool brute_has_mixed_minor(const TypeMatrix& M, int k, int t) {
    std::vector<std::vector<int>> rowCutSets, colCutSets;
    std::vector<int> tmp(t - 1);
    std::function<void(int, int, int, std::vector<std::vector<int>>&)> gen =
        [&](int idx, int from, int n, std::vector<std::vector<int>>& out) {
            if (idx == t - 1) {
                out.push_back(tmp);
                return;
            }
            for (int c = from; c < n; ++c) {
                tmp[idx] = c;
                gen(idx + 1, c + 1, n, out);
            }
        };
    gen(0, 1, M.rows, rowCutSets);
    gen(0, 1, M.cols, colCutSets);
    auto blocks = [](const std::vector<int>& cuts, int n) {
        std::vector<std::pair<int, int>> b;
        int lo = 0;
        for (int c : cuts) {
            b.emplace_back(lo, c);
            lo = c;
        }
        b.emplace_back(lo, n);
        return b;
    };
    for (auto& rcv : rowCutSets)
        for (auto& ccv : colCutSets) {
            bool all = true;
            for (auto [rLo, rHi] : blocks(rcv, M.rows)) {
                for (auto [cLo, cHi] : blocks(ccv, M.cols)) {
                    if (distinct_rows(M, rLo, rHi, cLo, cHi) < k &&
                        distinct_cols(M, rLo, rHi, cLo, cHi) < k) {
                        all = false;
                        break;
                    }
                }
                if (!all) break;
            }
            if (all) return true;
        }
    return false;
}

std::vector<BadInterval> brute_bad_intervals(const TypeMatrix& M, int rowLo, int rowHi, int k) {
    auto isBad = [&](int lo, int hi) { return distinct_rows(M, rowLo, rowHi, lo, hi) >= k; };
    std::vector<BadInterval> out;
    for (int lo = 0; lo < M.cols; ++lo)
        for (int hi = lo + 1; hi <= M.cols; ++hi) {
            if (!isBad(lo, hi)) continue;
            bool minimal = !(hi - lo > 1 && (isBad(lo + 1, hi) || isBad(lo, hi - 1)));
            if (minimal)
                out.push_back({rowLo, rowHi, lo, hi, distinct_rows(M, rowLo, rowHi, lo, hi)});
        }
    return out;
}

}  // namespace

TEST_CASE("grid minor search") {
    TypeMatrix ones = TypeMatrix::from01({"1111", "1111", "1111", "1111"});
    auto res = find_grid_minor(ones, 2);
    REQUIRE(res.witness.has_value());
    CHECK(res.exhaustive);
    CHECK(res.witness->rowCuts == std::vector<int>{1});  // lex-least cuts
    CHECK(validate_grid_minor(ones, 2, *res.witness));

    TypeMatrix id = TypeMatrix::from01({"1000", "0100", "0010", "0001"});
    auto none = find_grid_minor(id, 2);
    CHECK(none.exhaustive);
    CHECK_FALSE(none.witness.has_value());
    CHECK_FALSE(brute_has_grid_minor(id, 2));

    TypeMatrix diag2 = TypeMatrix::from01({"1001", "0110", "0110", "1001"});
    auto both = find_grid_minor(diag2, 2);
    REQUIRE(both.witness.has_value());
    CHECK(validate_grid_minor(diag2, 2, *both.witness));

    CHECK_THROWS_AS(find_grid_minor(ones, 0), std::invalid_argument);
    CHECK_THROWS_AS(find_grid_minor(ones, 5), std::invalid_argument);
}

TEST_CASE("grid minor heuristic regime is flagged") {
    std::mt19937 rng(5);
    auto M = random01(20, 20, rng, 0.9);
    MinorSearchConfig cfg;
    cfg.gridExhaustiveMaxMin = 10;  // force the heuristic
    auto res = find_grid_minor(M, 3, cfg);
    CHECK_FALSE(res.exhaustive);
    if (res.witness) CHECK(validate_grid_minor(M, 3, *res.witness));
}

TEST_CASE("marcus-tardos threshold profile") {
    CHECK(mt_threshold(2) == 32);
    CHECK(mt_threshold(1) == 16);
    CHECK_THROWS_AS(mt_threshold(0), std::invalid_argument);
    CHECK_THROWS_AS(mt_threshold(2, "linear"), std::invalid_argument);
}

TEST_CASE("marcus-tardos statistical check, reported") {
    // threshold ones exceed the cell count at 12x12, clamped to all-ones
    int cells = 12 * 12;
    int want = mt_threshold(2) * 12;
    INFO("requested ones ", want, " clamped to ", cells);
    std::mt19937 rng(99);
    int found = 0, total = 200;
    for (int i = 0; i < total; ++i) {
        auto M = want >= cells ? random01(12, 12, rng, 1.0) : random01(12, 12, rng, 0.9);
        auto res = find_grid_minor(M, 2);
        if (res.witness && validate_grid_minor(M, 2, *res.witness)) ++found;
    }
    std::cout << "[mt-statistical] 2-grid minors found in " << found << "/" << total
              << " dense 12x12 matrices\n";
    CHECK(found == total);
}

TEST_CASE("mixed minor search") {
    TypeMatrix constant = TypeMatrix::from01({"111", "111", "111"});
    CHECK_FALSE(find_mixed_minor(constant, 2, 2).witness.has_value());

    // degenerate parameters: k=1, t=1 always yields a witness on nonempty input
    auto degenerate = find_mixed_minor(constant, 1, 1);
    REQUIRE(degenerate.witness.has_value());
    CHECK(validate_mixed_minor(constant, 1, 1, *degenerate.witness));

    auto neq = generate_semigrid(scheme_of(RType::Neq), 5, 5);
    TypeMatrix M = TypeMatrix::adjacency(neq);
    auto res = find_mixed_minor(M, 2, 3);
    REQUIRE(res.witness.has_value());
    CHECK(validate_mixed_minor(M, 2, 3, *res.witness));

    CHECK_THROWS_AS(find_mixed_minor(constant, 1, 4), std::invalid_argument);
}

TEST_CASE("mixed minor monotonicity in k and t") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        auto M = random01(8, 8, rng);
        for (int k = 2; k <= 3; ++k)
            for (int t = 2; t <= 3; ++t) {
                if (find_mixed_minor(M, k, t).witness.has_value()) {
                    CHECK(find_mixed_minor(M, k - 1, t).witness.has_value());
                    CHECK(find_mixed_minor(M, k, t - 1).witness.has_value());
                }
            }
    }
}

TEST_CASE("witnesses revalidate and exhaustive blanks cross-check") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        int rows = std::uniform_int_distribution<int>(3, 10)(rng);
        int cols = std::uniform_int_distribution<int>(3, 10)(rng);
        auto M = random01(rows, cols, rng);
        int t = std::uniform_int_distribution<int>(2, 3)(rng);
        if (t > std::min(rows, cols)) continue;
        auto g = find_grid_minor(M, t);
        CHECK(g.exhaustive);
        if (g.witness)
            CHECK(validate_grid_minor(M, t, *g.witness));
        else
            CHECK_FALSE(brute_has_grid_minor(M, t));
        int k = std::uniform_int_distribution<int>(2, 3)(rng);
        auto mm = find_mixed_minor(M, k, t);
        CHECK(mm.exhaustive);
        if (mm.witness)
            CHECK(validate_mixed_minor(M, k, t, *mm.witness));
        else
            CHECK_FALSE(brute_has_mixed_minor(M, k, t));
    }
}

TEST_CASE("minimal bad intervals") {
    TypeMatrix constant = TypeMatrix::from01({"111", "111"});
    CHECK(minimal_bad_intervals(constant, 0, 2, 2).empty());

    TypeMatrix id3 = TypeMatrix::from01({"100", "010", "001"});
    auto bad = minimal_bad_intervals(id3, 0, 3, 2);
    REQUIRE(bad.size() == 3);
    for (const auto& bi : bad) CHECK(bi.colHi - bi.colLo == 1);
    CHECK(bad_columns(id3, 0, 3, 2) == std::vector<int>{0, 1, 2});

    // k = 1: every singleton column interval is minimal bad
    auto all = minimal_bad_intervals(id3, 0, 3, 1);
    CHECK(all.size() == 3);
    for (const auto& bi : all) CHECK(bi.colHi - bi.colLo == 1);

    CHECK_THROWS_AS(minimal_bad_intervals(id3, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("minimal bad intervals agree with the all-intervals oracle") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 80; ++trial) {
        int rows = std::uniform_int_distribution<int>(1, 7)(rng);
        int cols = std::uniform_int_distribution<int>(1, 9)(rng);
        auto M = random01(rows, cols, rng);
        int k = std::uniform_int_distribution<int>(1, 3)(rng);
        auto fast = minimal_bad_intervals(M, 0, rows, k);
        auto slow = brute_bad_intervals(M, 0, rows, k);
        REQUIRE(fast.size() == slow.size());
        for (size_t i = 0; i < fast.size(); ++i) {
            CHECK(fast[i].colLo == slow[i].colLo);
            CHECK(fast[i].colHi == slow[i].colHi);
            CHECK(fast[i].distinctRows == slow[i].distinctRows);
        }
    }
}

TEST_CASE("witness json shape") {
    TypeMatrix ones = TypeMatrix::from01({"11", "11"});
    auto g = find_grid_minor(ones, 2);
    REQUIRE(g.witness);
    auto js = grid_witness_json(*g.witness);
    CHECK(js.find("\"v\":1") != std::string::npos);
    CHECK(js.find("\"kind\":\"one\"") != std::string::npos);
    auto mm = find_mixed_minor(ones, 1, 2);
    REQUIRE(mm.witness);
    auto js2 = mixed_witness_json(*mm.witness);
    CHECK(js2.find("\"zones\"") != std::string::npos);
}
