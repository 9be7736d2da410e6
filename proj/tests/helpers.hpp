#pragma once

#include <random>
#include <vector>

#include "twwlab/core.hpp"
#include "twwlab/semigrid.hpp"

namespace twwlab::testing {

inline OrderedStructure clique(int n) {
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) e.emplace_back(a, b);
    return OrderedStructure::graph(n, e);
}

inline OrderedStructure path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a + 1 < n; ++a) e.emplace_back(a, a + 1);
    return OrderedStructure::graph(n, e);
}

inline OrderedStructure edgeless(int n) { return OrderedStructure::graph(n, {}); }

// K_{t,t} with the two parts interleaved in the order
inline OrderedStructure alternating_biclique(int t) {
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < 2 * t; a += 2)
        for (int b = 1; b < 2 * t; b += 2) e.emplace_back(a, b);
    return OrderedStructure::graph(2 * t, e);
}

// half-graph on 2k vertices: top part first, i-th top adjacent to j-th bottom
// iff i <= j
inline OrderedStructure half_graph(int k) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) e.emplace_back(i, k + j);
    return OrderedStructure::graph(2 * k, e);
}

inline GraphScheme scheme_of(RType r, SOrient s = SOrient::IZeroFirst,
                             TFlag t = TFlag::Independent, unsigned dirs = 0) {
    GraphScheme sch;
    sch.r = r;
    sch.s = s;
    sch.t = t;
    sch.dirSet = dirs;
    return sch;
}

// graph on n vertices from the bits of `mask` over the strict upper triangle
inline OrderedStructure graph_from_mask(int n, std::uint64_t mask) {
    std::vector<std::pair<int, int>> e;
    int bit = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b, ++bit)
            if (mask >> bit & 1) e.emplace_back(a, b);
    return OrderedStructure::graph(n, e);
}

inline std::uint64_t pair_count(int n) { return std::uint64_t(n) * (n - 1) / 2; }

inline OrderedStructure random_graph(int n, std::mt19937& rng) {
    std::uint64_t bits = pair_count(n);
    std::uint64_t mask = std::uniform_int_distribution<std::uint64_t>(
        0, bits >= 64 ? ~0ull : (1ull << bits) - 1)(rng);
    return graph_from_mask(n, mask);
}

inline std::vector<int> range_vec(int lo, int hi) {
    std::vector<int> v;
    for (int i = lo; i < hi; ++i) v.push_back(i);
    return v;
}

}  // namespace twwlab::testing
