#pragma once

#include <array>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "twwlab/core.hpp"

namespace twwlab {

enum class RType : int { Le = 0, Ge = 1, Eq = 2, Neq = 3 };
enum class SOrient : int { IZeroFirst = 0, IZeroLast = 1 };
enum class TFlag : int { Clique = 0, Independent = 1 };

// directions between cells of the inner rows, for p < q in the order:
// Right = same row, Down = same column, DownRight = row and column both
// increase, DownLeft = row increases while the column decreases
enum Dir : unsigned { DirRight = 1u, DirDown = 2u, DirDownRight = 4u, DirDownLeft = 8u };

struct GraphScheme {
    RType r = RType::Le;
    SOrient s = SOrient::IZeroFirst;
    TFlag t = TFlag::Clique;
    unsigned dirSet = 0;  // subset of Dir bits

    int id() const;  // canonical enumeration index, 0..255
    static GraphScheme from_id(int id);
    bool operator==(const GraphScheme&) const = default;
};

std::vector<GraphScheme> enumerate_graph_schemes();

// General-signature scheme: orientation plus the 15 atomic-type dependencies.
// depB: pairs within the first row, keyed by the order type of the pair;
// depC: pairs of inner cells, keyed by the (row,col) comparison pair;
// depCB: (cell, first-row element), keyed by column-position comparison.
// Key order for Cmp is Equal, Less, Greater; depC keys are c1*3+c2.
struct GeneralScheme {
    SOrient orient = SOrient::IZeroFirst;
    std::array<TypeCode, 3> depB{};
    std::array<TypeCode, 9> depC{};
    std::array<TypeCode, 3> depCB{};
    bool operator==(const GeneralScheme&) const = default;
};

bool general_scheme_consistent(const Signature& sig, const GeneralScheme& sch);
// Throws std::length_error when the filtered list would exceed the budget.
std::vector<GeneralScheme> enumerate_general_schemes(const Signature& sig,
                                                     std::size_t budget = (1u << 21));

struct SchemeList {
    bool graphCase = false;
    std::vector<GraphScheme> graph;
    std::vector<GeneralScheme> general;
    std::size_t count() const { return graphCase ? graph.size() : general.size(); }
};
SchemeList enumerate_schemes(const Signature& sig);

bool is_R_graph(const OrderedStructure& S, const std::vector<int>& X, const std::vector<int>& Y,
                RType r);

OrderedStructure generate_semigrid(const GraphScheme& sch, int m, int n);
OrderedStructure generate_semigrid(const GeneralScheme& sch, const Signature& sig, int m, int n);

using Cell = std::pair<int, int>;  // (row 1..m, col 1..n)

OrderedStructure generate_GS(const GraphScheme& sch, int m, int n, const std::vector<Cell>& S);

struct GSDecoding {
    int m = 0, n = 0;
    std::vector<Cell> cells;  // sorted
};
GSDecoding decode_GS(const OrderedStructure& G, const GraphScheme& sch);

struct GraphClassification {
    GraphScheme scheme;
    int m = 0, n = 0;
};
std::optional<GraphClassification> classify_graph_semigrid(const OrderedStructure& S);

struct GeneralClassification {
    GeneralScheme scheme;
    int m = 0, n = 0;
};
std::optional<GeneralClassification> classify_general_semigrid(const OrderedStructure& S);

using Classification = std::variant<GraphClassification, GeneralClassification>;
std::optional<Classification> classify_regular_semigrid(const OrderedStructure& S);

// Pair coloring of an ordered grid; color(p, q) must be total on pairs of
// grid points (row, col).
struct PairColoring {
    int rows = 0, cols = 0;
    std::function<int(Cell, Cell)> color;
};

struct GridEmbedding {
    std::vector<int> rowIdx, colIdx;
};

std::optional<GridEmbedding> homogenize_grid(const PairColoring& c, int m, int n);
bool is_homogeneous_coloring(const PairColoring& c, const std::vector<int>& rowIdx,
                             const std::vector<int>& colIdx);

OrderedStructure semigrid_to_graph(const OrderedStructure& S);

}  // namespace twwlab
