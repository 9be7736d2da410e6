#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "twwlab/logic.hpp"

using namespace twwlab;
using namespace twwlab::testing;

TEST_CASE("formula parsing and printing") {
    auto f = parse_formula("(exists x (and (E x y) (<= x y) (not (= x y))))");
    CHECK(f.quantifier_depth() == 1);
    CHECK(f.free_variables() == std::vector<std::string>{"y"});
    CHECK(parse_formula(f.to_string()).to_string() == f.to_string());
    CHECK(parse_formula("true").kind() == Formula::Kind::True);
    CHECK_THROWS(parse_formula("(and"));
    CHECK_THROWS(parse_formula("(= x y z)"));
    CHECK_THROWS(parse_formula("(E x y) junk"));
}

TEST_CASE("evaluation basics") {
    auto empty3 = edgeless(3);
    CHECK_FALSE(eval(empty3, parse_formula("(exists x (exists y (E x y)))"), {}));
    auto K3 = clique(3);
    CHECK(eval(K3, parse_formula("(exists x (exists y (E x y)))"), {}));
    CHECK(eval(K3, parse_formula("(forall x (forall y (or (<= x y) (<= y x))))"), {}));
    CHECK(eval(K3, parse_formula("(E x y)"), {{"x", 0}, {"y", 1}}));
    CHECK_THROWS_AS(eval(K3, parse_formula("(E x y)"), {{"x", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(eval(K3, parse_formula("(F x y)"), {{"x", 0}, {"y", 1}}),
                    std::invalid_argument);
}

TEST_CASE("quantifier depth budget is enforced") {
    auto K2 = clique(2);
    auto deep = parse_formula(
        "(exists a (exists b (exists c (exists d (exists e (= a e))))))");
    CHECK_THROWS_AS(eval(K2, deep, {}), std::invalid_argument);
    CHECK(eval(K2, deep, {}, {.maxQuantifierDepth = 5}));
}

TEST_CASE("the grid formula holds cellwise on the matching semigrid") {
    int n = 2;
    auto host = generate_semigrid(scheme_of(RType::Eq), n, n);
    auto phi = parse_formula("(and (<= x1 z) (<= z x2) (E y z))");
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            Assignment asg{{"x1", i * (n + 1)},
                           {"x2", i * (n + 1) + n},
                           {"y", j},
                           {"z", i * (n + 1) + j}};
            CHECK(eval(host, phi, asg));
        }
}

TEST_CASE("interpretations apply pointwise") {
    auto S = path(3);
    Interpretation identity;
    identity.target = Signature::graph();
    identity.delta = Formula::boolean(true);
    identity.relFormulas.emplace_back("E", parse_formula("(E x y)"));
    CHECK(apply_interpretation(identity, S).out == S);

    Interpretation complement;
    complement.target = Signature::graph();
    complement.delta = Formula::boolean(true);
    complement.relFormulas.emplace_back("E",
                                        parse_formula("(and (not (E x y)) (not (= x y)))"));
    auto comp = apply_interpretation(complement, S).out;
    CHECK(comp == OrderedStructure::graph(3, {{0, 2}}));

    Interpretation square;
    square.target = Signature::graph();
    square.delta = Formula::boolean(true);
    square.relFormulas.emplace_back(
        "E", parse_formula("(or (E x y) (exists z (and (E x z) (E z y))))"));
    auto sq = apply_interpretation(square, S).out;
    CHECK(sq.edge(0, 2));
    CHECK(sq.edge(0, 1));

    Interpretation emptyDomain;
    emptyDomain.target = Signature::graph();
    emptyDomain.delta = parse_formula("(not (= x x))");
    emptyDomain.relFormulas.emplace_back("E", parse_formula("(E x y)"));
    auto res = apply_interpretation(emptyDomain, S);
    CHECK(res.emptyDomain);
    CHECK(res.out.size() == 0);

    Interpretation badOrder = identity;
    badOrder.orderFormula = parse_formula("(<= y x)");
    CHECK_THROWS_AS(apply_interpretation(badOrder, S), std::invalid_argument);
}

TEST_CASE("interpretation composition is pointwise composition") {
    Interpretation complement;
    complement.target = Signature::graph();
    complement.delta = Formula::boolean(true);
    complement.relFormulas.emplace_back("E",
                                        parse_formula("(and (not (E x y)) (not (= x y)))"));
    Interpretation dropLast;
    dropLast.target = Signature::graph();
    dropLast.delta = parse_formula("(exists y (and (<= x y) (not (= x y))))");
    dropLast.relFormulas.emplace_back("E", parse_formula("(E x y)"));
    auto composed = compose(complement, dropLast);
    for (int n = 1; n <= 4; ++n) {
        std::uint64_t graphs = 1ull << pair_count(n);
        for (std::uint64_t mask = 0; mask < graphs; ++mask) {
            auto S = graph_from_mask(n, mask);
            auto viaSteps = apply_interpretation(complement, apply_interpretation(dropLast, S).out);
            auto direct = apply_interpretation(composed, S);
            CHECK(viaSteps.out == direct.out);
        }
    }
}

TEST_CASE("the universal interpretation recovers the encoded bipartite graph") {
    std::mt19937 rng(51);
    for (RType r : {RType::Le, RType::Ge, RType::Eq, RType::Neq}) {
        auto sch = scheme_of(r);
        auto I = universal_interpretation(sch);
        // empty and full relations, then random ones
        std::vector<std::vector<Cell>> rels{{}, {}};
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) rels[1].emplace_back(i, j);
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<Cell> rel;
            for (int i = 1; i <= 3; ++i)
                for (int j = 1; j <= 3; ++j)
                    if (std::bernoulli_distribution(0.5)(rng)) rel.emplace_back(i, j);
            rels.push_back(rel);
        }
        int dims = 2;
        for (const auto& rel : rels) {
            int m = dims, n = dims;
            for (auto [i, j] : rel) {
                m = std::max(m, i);
                n = std::max(n, j);
            }
            auto gs = generate_GS(sch, m, n, rel);
            auto out = apply_interpretation(I, gs);
            CHECK(out.out == bipartite_structure(m, n, rel));
            // agreement with the operational decoder
            auto dec = decode_GS(gs, sch);
            auto sorted = rel;
            std::sort(sorted.begin(), sorted.end());
            CHECK(dec.cells == sorted);
        }
    }
    CHECK_THROWS_AS(
        universal_interpretation(scheme_of(RType::Eq, SOrient::IZeroLast)),
        std::invalid_argument);
    CHECK_THROWS_AS(
        universal_interpretation(scheme_of(RType::Eq, SOrient::IZeroFirst, TFlag::Clique)),
        std::invalid_argument);
}

TEST_CASE("defined grids verify both bijection directions") {
    int n = 2;
    auto host = generate_semigrid(scheme_of(RType::Eq), n, n);
    GridDefinition g;
    g.phi = parse_formula("(and (<= x1 z) (<= z x2) (E y z))");
    g.xVars = {"x1", "x2"};
    g.yVars = {"y"};
    g.zVar = "z";
    for (int i = 1; i <= n; ++i) g.A.push_back({i * (n + 1), i * (n + 1) + n});
    for (int j = 0; j <= n; ++j) g.B.push_back({j});
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j <= n; ++j) g.C.push_back(i * (n + 1) + j);
    CHECK(verify_defined_grid(host, g));

    auto missing = g;
    missing.C.pop_back();
    CHECK_FALSE(verify_defined_grid(host, missing));

    // the half-graph variant with consecutive-pair column tuples
    auto hostLe = generate_semigrid(scheme_of(RType::Le), n, n);
    GridDefinition h;
    h.phi = parse_formula("(and (<= x1 z) (<= z x2) (E y1 z) (not (E y2 z)))");
    h.xVars = {"x1", "x2"};
    h.yVars = {"y1", "y2"};
    h.zVar = "z";
    for (int i = 1; i <= n; ++i) h.A.push_back({i * (n + 1), i * (n + 1) + n});
    for (int j = 0; j < n; ++j) h.B.push_back({j, j + 1});
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j < n; ++j) h.C.push_back(i * (n + 1) + j);
    CHECK(verify_defined_grid(hostLe, h));
}

TEST_CASE("model-checking reduction preserves truth") {
    auto phi = parse_formula("(exists x (exists y (and (Prow x) (Pcol y) (E x y))))");
    auto H1 = bipartite_structure(2, 2, {{1, 2}});
    for (RType r : {RType::Le, RType::Ge, RType::Eq, RType::Neq}) {
        auto red = mc_reduce(phi, H1, scheme_of(r));
        CHECK(eval(H1, phi, {}) ==
              eval(red.encoded, red.phiPrime, {}, {.maxQuantifierDepth = 12}));
    }
    auto falsum = Formula::boolean(false);
    auto red = mc_reduce(falsum, H1, scheme_of(RType::Eq));
    CHECK_FALSE(eval(red.encoded, red.phiPrime, {}, {.maxQuantifierDepth = 12}));

    // complete bipartite: every row-column pair is an edge
    auto complete = parse_formula(
        "(forall x (forall y (-> (and (Prow x) (Pcol y)) (E x y))))");
    auto H2 = bipartite_structure(2, 2, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
    auto red2 = mc_reduce(complete, H2, scheme_of(RType::Eq));
    CHECK(eval(H2, complete, {}));
    CHECK(eval(red2.encoded, red2.phiPrime, {}, {.maxQuantifierDepth = 12}));

    CHECK_THROWS_AS(mc_reduce(parse_formula("(E x y)"), H1, scheme_of(RType::Eq)),
                    std::invalid_argument);
}

TEST_CASE("semigrid extraction from a defined grid") {
    int n = 2;
    auto host = generate_semigrid(scheme_of(RType::Eq), n, n);
    GridDefinition g;
    g.phi = parse_formula("(and (<= x1 z) (<= z x2) (E y z))");
    g.xVars = {"x1", "x2"};
    g.yVars = {"y"};
    g.zVar = "z";
    for (int i = 1; i <= n; ++i) g.A.push_back({i * (n + 1), i * (n + 1) + n});
    for (int j = 0; j <= n; ++j) g.B.push_back({j});
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j <= n; ++j) g.C.push_back(i * (n + 1) + j);
    auto out = extract_semigrid_from_grid(host, g);
    auto cls = classify_regular_semigrid(out);
    REQUIRE(cls.has_value());
    REQUIRE(std::holds_alternative<GraphClassification>(*cls));
    CHECK(std::get<GraphClassification>(*cls).scheme.r == RType::Eq);
    // the canonical grid of the host recovers the full host
    CHECK(out == host);

    auto tiny = g;
    tiny.A.resize(1);
    tiny.C.resize(tiny.B.size());
    CHECK_THROWS_AS(extract_semigrid_from_grid(host, tiny), std::invalid_argument);
}
