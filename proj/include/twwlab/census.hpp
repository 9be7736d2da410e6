#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "twwlab/core.hpp"

namespace twwlab {

using BigInt = boost::multiprecision::cpp_int;

struct ForbiddenSet {
    std::vector<OrderedStructure> patterns;
};

enum class StructureKind { Graph, General };

struct EnumOptions {
    StructureKind kind = StructureKind::Graph;
    std::uint64_t nodeBudget = 200'000'000;
    int threads = 1;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Count of ordered structures on domain [n] avoiding every pattern as an
// order-preserving induced substructure. Graph kind enumerates symmetric
// loopless matrices.
BigInt enumerate_avoiding(const ForbiddenSet& F, int n, const EnumOptions& opts = {});

bool pattern_embeds(const OrderedStructure& host, const OrderedStructure& pattern);

struct GrowthLb {
    BigInt floorFact, kPowK, binom;
};
GrowthLb growth_lb(int n);

BigInt growth_conjecture_sum(int n);

// ordered graph on [2n] with the perfect matching i ~ pi(i)+n (pi 0-based)
OrderedStructure generate_Hpi(const std::vector<int>& pi);

// the matching substructure carved out of the '='-scheme regular semigrid
OrderedStructure build_Gpi(const std::vector<int>& pi);

// generates the encoded structures of all k x k permutation matrices and
// checks pairwise distinctness; returns k!
BigInt count_GS_family(int k);

}  // namespace twwlab
