#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twwlab {

// Relational signature with symbols of arity 1 or 2. The order symbol "<="
// is implicit in every signature and is never listed here.
struct SymbolDecl {
    std::string name;
    int arity = 2;
    bool operator==(const SymbolDecl&) const = default;
};

class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<SymbolDecl> symbols);
    static Signature graph();  // single binary symbol "E"

    const std::vector<SymbolDecl>& symbols() const { return symbols_; }
    const std::vector<int>& binary() const { return binary_; }
    const std::vector<int>& unary() const { return unary_; }
    int index_of(const std::string& name) const;  // -1 if absent
    bool is_graph() const { return binary_.size() == 1 && unary_.empty(); }
    bool operator==(const Signature& o) const { return symbols_ == o.symbols_; }

private:
    std::vector<SymbolDecl> symbols_;
    std::vector<int> binary_, unary_;
};

enum class Cmp : std::uint8_t { Equal = 0, Less = 1, Greater = 2 };

// Packed atomic type of an ordered pair (a,b): two bits for the order
// relation, then (R(a,b),R(b,a)) per binary symbol, then (U(a),U(b)) per
// unary symbol.
using TypeCode = std::uint32_t;

struct AtomicTypeCode {
    Cmp order = Cmp::Equal;
    std::vector<std::pair<bool, bool>> binary;
    std::vector<std::pair<bool, bool>> unary;
    bool operator==(const AtomicTypeCode&) const = default;
};

TypeCode pack_type(const AtomicTypeCode& t);
TypeCode swap_type(const Signature& sig, TypeCode code);  // type of (b,a) from type of (a,b)
Cmp type_order(TypeCode code);
TypeCode with_order(TypeCode code, Cmp order);

// Finite binary relational structure whose domain 0..n-1 carries the natural
// index order. Directed relations and loops are representable; the graph
// constructors emit symmetric loopless matrices.
class OrderedStructure {
public:
    OrderedStructure() = default;
    OrderedStructure(Signature sig, int n);
    static OrderedStructure graph(int n, const std::vector<std::pair<int, int>>& edges);

    const Signature& sig() const { return sig_; }
    int size() const { return n_; }

    bool rel(int sym, int a, int b) const;
    void set_rel(int sym, int a, int b, bool v);
    void set_edge(int sym, int a, int b, bool v);  // symmetric, rejects loops
    bool unary(int sym, int a) const;
    void set_unary(int sym, int a, bool v);

    // graph convenience (first binary symbol)
    bool edge(int a, int b) const;
    void add_edge(int a, int b);

    AtomicTypeCode atp(int a, int b) const;
    TypeCode atp_code(int a, int b) const;

    OrderedStructure induced(std::vector<int> keep) const;      // keep sorted ascending
    OrderedStructure reordered(const std::vector<int>& order) const;  // vertex i := old order[i]

    bool operator==(const OrderedStructure& o) const;

private:
    void check_index(int a) const;
    Signature sig_;
    int n_ = 0;
    std::vector<std::vector<std::uint8_t>> rels_;  // per binary symbol, n*n row-major
    std::vector<std::vector<std::uint8_t>> sets_;  // per unary symbol, n
};

// Number of distinct joint types of elements of A over B: the number of
// non-identical rows of the A x B block of the atomic-type matrix.
int types_count(const OrderedStructure& S, const std::vector<int>& A, const std::vector<int>& B);

bool is_homogeneous(const OrderedStructure& S, const std::vector<int>& X, const std::vector<int>& Y);

struct Partition {
    std::vector<std::vector<int>> blocks;
    static Partition singletons(int n);
    void validate(int n) const;
    // block-id per element, ids in order of first occurrence
    std::vector<std::uint8_t> canonical_key(int n) const;
};

// Partition of 0..n-1 into intervals, stored as strictly increasing interior
// cut positions.
struct ConvexPartition {
    int n = 0;
    std::vector<int> cuts;
    void validate() const;
    int parts() const { return static_cast<int>(cuts.size()) + 1; }
    std::pair<int, int> block(int i) const;  // [lo, hi)
    std::vector<int> block_elems(int i) const;
};

int red_degree(const OrderedStructure& S, const Partition& P);

// Merge chain from singletons; each entry names two elements whose current
// blocks get merged.
struct ContractionSequence {
    std::vector<std::pair<int, int>> merges;
    bool operator==(const ContractionSequence&) const = default;
};

int verify_contraction_sequence(const OrderedStructure& S, const ContractionSequence& seq);
std::vector<Partition> contraction_partitions(const OrderedStructure& S, const ContractionSequence& seq);

// Order in which every partition of the chain is convex (Fact-style inductive
// construction; blocks ordered by minimum element).
std::vector<int> order_from_contraction(const OrderedStructure& S, const ContractionSequence& seq);

ContractionSequence relabel_sequence(const ContractionSequence& seq, const std::vector<int>& order);

// ".obs" text format
std::string write_obs(const OrderedStructure& S);
OrderedStructure read_obs(const std::string& text);

std::string write_sequence(const ContractionSequence& seq, int redDegree);
ContractionSequence read_sequence(const std::string& text);

}  // namespace twwlab
