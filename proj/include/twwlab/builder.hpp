#pragma once

#include <string>
#include <variant>
#include <vector>

#include "twwlab/core.hpp"
#include "twwlab/minors.hpp"

namespace twwlab {

struct BuildParams {
    int k = 1, t = 1;
    int b = 0, c = 0;  // 0 = derive from k and t
    int cCeil = 1 << 20;
    std::string mtProfile = "exp8";

    static BuildParams make(int k, int t);
    int effectiveB() const;
    int effectiveC() const;
};

struct ChainStep {
    bool mergedRows = true;  // side of the merge; ignored for step 0
    int mergeIndex = -1;     // left part index merged with its right neighbor
    ConvexPartition rowParts, colParts;
    std::vector<int> exceptionalParts;  // parts of the other side holding bad columns/rows
    int residualDistinct = 0;
    int bInEffect = 0, cInEffect = 0;
};

struct ConvexPairChain {
    std::vector<ChainStep> steps;  // steps[0] is the all-singletons state
    int relaxations = 0;
};

using BuildOutcome = std::variant<ConvexPairChain, MixedMinorWitness>;
BuildOutcome build_convex_chain(const OrderedStructure& S, const BuildParams& params);

// Refined, pattern-split partitions, interpolated so consecutive pairs differ
// by a single merge on one side.
std::vector<std::pair<Partition, Partition>> refine_chain(const OrderedStructure& S,
                                                          const ConvexPairChain& chain,
                                                          const BuildParams& params);

ContractionSequence contraction_from_chain(const OrderedStructure& S,
                                           const std::vector<std::pair<Partition, Partition>>& refined);

using AlgoOutcome = std::variant<ContractionSequence, MixedMinorWitness>;
AlgoOutcome algo_cor(const OrderedStructure& S, int k, int t);

struct ApproxResult {
    int kUsed = 0;
    int redDegree = 0;
    ContractionSequence seq;
};

ApproxResult approx_twinwidth(const OrderedStructure& S);

}  // namespace twwlab
