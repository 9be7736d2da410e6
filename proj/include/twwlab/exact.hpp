#pragma once

#include <optional>
#include <vector>

#include "twwlab/core.hpp"

namespace twwlab {

struct TwwExactResult {
    int width = 0;
    ContractionSequence seq;
};

// Minimum over all contraction sequences of the maximum red-degree, by
// memoized search over reached partitions. Throws when the instance exceeds
// the cap.
TwwExactResult twinwidth_exact(const OrderedStructure& S, int cap = 10);

struct SimplicityWitness {
    int parts = 0;  // |L| = |R|
    ConvexPartition rowCuts, colCuts;
    // perZone[i][j] = (types_count(L_i/R_j), types_count(R_j/L_i))
    std::vector<std::vector<std::pair<int, int>>> perZone;
};

// nullopt means S is (k,t)-simple; otherwise a partition pair all of whose
// zones exceed k in at least one direction.
std::optional<SimplicityWitness> kt_simple_witness(const OrderedStructure& S, int k, int t);
bool is_kt_simple(const OrderedStructure& S, int k, int t);

// least k such that S is (k,k)-simple
int simplicity(const OrderedStructure& S);

// largest m <= cap such that some regular m x m semigrid embeds into S as an
// order-preserving induced substructure; 0 if none
int max_semigrid(const OrderedStructure& S, int cap = 3);

// lexicographically least order-preserving induced embedding of target in
// host, as positions in the host
std::optional<std::vector<int>> embed_ordered_induced(const OrderedStructure& host,
                                                      const OrderedStructure& target);

}  // namespace twwlab
