#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twwlab/core.hpp"

namespace twwlab {

// Rectangular matrix over a small integer alphabet; adjacency matrices of
// structures use packed atomic type codes as entries.
struct TypeMatrix {
    int rows = 0, cols = 0;
    std::vector<std::uint32_t> entries;  // row-major
    std::vector<int> rowLabels, colLabels;

    static TypeMatrix adjacency(const OrderedStructure& S);
    static TypeMatrix from01(const std::vector<std::string>& rows01);

    std::uint32_t at(int r, int c) const { return entries[size_t(r) * cols + c]; }
    void set(int r, int c, std::uint32_t v) { entries[size_t(r) * cols + c] = v; }
    TypeMatrix transposed() const;
};

// number of distinct rows of the submatrix [rLo,rHi) x [cLo,cHi)
int distinct_rows(const TypeMatrix& M, int rLo, int rHi, int cLo, int cHi);
int distinct_cols(const TypeMatrix& M, int rLo, int rHi, int cLo, int cHi);

struct MinorSearchConfig {
    int gridExhaustiveMaxMin = 16;  // min(rows,cols) bound for exhaustive grid search
    int gridExhaustiveMaxT = 4;
    int mixedExhaustiveMaxMin = 14;
    int mixedExhaustiveMaxT = 3;
};

struct GridMinorWitness {
    std::vector<int> rowCuts, colCuts;          // t-1 each
    std::vector<std::pair<int, int>> zoneOnes;  // row-major zone order
};

struct GridMinorResult {
    std::optional<GridMinorWitness> witness;
    bool exhaustive = true;  // when false, a missing witness is not authoritative
};

GridMinorResult find_grid_minor(const TypeMatrix& M01, int t, const MinorSearchConfig& cfg = {});
bool validate_grid_minor(const TypeMatrix& M01, int t, const GridMinorWitness& w);

int mt_threshold(int t, const std::string& profile = "exp8");

struct MixedZone {
    bool rowsKind = true;      // true: row evidence, false: column evidence
    std::vector<int> indices;  // k row or column indices with pairwise distinct patterns
};

struct MixedMinorWitness {
    std::vector<int> rowCuts, colCuts;
    std::vector<MixedZone> zones;  // row-major, t*t entries
};

struct MixedMinorResult {
    std::optional<MixedMinorWitness> witness;
    bool exhaustive = true;
};

MixedMinorResult find_mixed_minor(const TypeMatrix& M, int k, int t, const MinorSearchConfig& cfg = {});
bool validate_mixed_minor(const TypeMatrix& M, int k, int t, const MixedMinorWitness& w);

struct BadInterval {
    int rowLo = 0, rowHi = 0;  // [rowLo,rowHi)
    int colLo = 0, colHi = 0;  // [colLo,colHi)
    int distinctRows = 0;
};

// All inclusion-minimal column intervals over which the row block shows at
// least k distinct row patterns.
std::vector<BadInterval> minimal_bad_intervals(const TypeMatrix& M, int rowLo, int rowHi, int k);
std::vector<int> bad_columns(const TypeMatrix& M, int rowLo, int rowHi, int k);

std::string grid_witness_json(const GridMinorWitness& w);
std::string mixed_witness_json(const MixedMinorWitness& w);

}  // namespace twwlab
