#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twwlab/core.hpp"
#include "twwlab/semigrid.hpp"

namespace twwlab {

// First-order formula AST over a binary signature; atoms are R(x,y), R(x),
// x = y, x <= y, plus boolean constants.
class Formula {
public:
    enum class Kind { False, True, Rel, Eq, Le, Not, And, Or, Implies, Exists, Forall };

    static Formula boolean(bool v);
    static Formula rel(std::string symbol, std::vector<std::string> vars);
    static Formula eq(std::string x, std::string y);
    static Formula le(std::string x, std::string y);
    static Formula negation(Formula f);
    static Formula conjunction(std::vector<Formula> fs);
    static Formula disjunction(std::vector<Formula> fs);
    static Formula implies(Formula a, Formula b);
    static Formula exists(std::string var, Formula f);
    static Formula forall(std::string var, Formula f);

    Kind kind() const { return node_->kind; }
    const std::string& symbol() const { return node_->symbol; }
    const std::vector<std::string>& vars() const { return node_->vars; }
    const std::vector<Formula>& children() const { return node_->children; }

    int quantifier_depth() const;
    std::vector<std::string> free_variables() const;
    bool is_quantifier_free() const;
    std::string to_string() const;

private:
    struct Node {
        Kind kind;
        std::string symbol;              // relation name, or bound variable for quantifiers
        std::vector<std::string> vars;   // atom arguments
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Formula parse_formula(const std::string& text);

struct EvalOptions {
    int maxQuantifierDepth = 4;
};

using Assignment = std::map<std::string, int>;

bool eval(const OrderedStructure& S, const Formula& phi, const Assignment& asg,
          const EvalOptions& opts = {});

struct Interpretation {
    Signature target;
    Formula delta = Formula::boolean(true);
    std::vector<std::pair<std::string, Formula>> relFormulas;  // per target symbol
    std::optional<Formula> orderFormula;                       // must define the inherited order
};

struct ApplyResult {
    OrderedStructure out;
    std::vector<int> domainMap;  // result vertex -> source vertex
    bool emptyDomain = false;
};

ApplyResult apply_interpretation(const Interpretation& I, const OrderedStructure& S,
                                 const EvalOptions& opts = {.maxQuantifierDepth = 8});

Interpretation compose(const Interpretation& outer, const Interpretation& inner);

// Bipartite graphs are encoded as one ordered structure over {E, Prow, Pcol}
// with the column part first, matching the inherited order of the
// interpreted domain of an encoded grid structure.
Signature bipartite_signature();
OrderedStructure bipartite_structure(int m, int n, const std::vector<Cell>& edges);

// Interpretation recovering the encoded bipartite graph from G^S; defined for
// schemes with the distinguished interval independent and first.
Interpretation universal_interpretation(const GraphScheme& scheme);

struct GridDefinition {
    Formula phi = Formula::boolean(false);
    std::vector<std::string> xVars, yVars;
    std::string zVar;
    std::vector<std::vector<int>> A, B;  // tuples over the structure
    std::vector<int> C;
};

bool verify_defined_grid(const OrderedStructure& S, const GridDefinition& g,
                         const EvalOptions& opts = {.maxQuantifierDepth = 8});

struct McReduction {
    Formula phiPrime = Formula::boolean(false);
    OrderedStructure encoded;
};

McReduction mc_reduce(const Formula& phi, const OrderedStructure& H, const GraphScheme& scheme);

// Executes the semigrid-extraction argument on a defined grid: identify the
// matching lexicographic order on C, find a separating variable among the
// column tuples, and return the substructure induced by the grid cells plus
// that variable's projection. The result must classify as a regular semigrid.
OrderedStructure extract_semigrid_from_grid(const OrderedStructure& S, const GridDefinition& g,
                                            const EvalOptions& opts = {.maxQuantifierDepth = 8});

}  // namespace twwlab
