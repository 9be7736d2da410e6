#include "twwlab/logic.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace twwlab {

Formula Formula::boolean(bool v) {
    auto n = std::make_shared<Node>();
    n->kind = v ? Kind::True : Kind::False;
    return Formula(n);
}

Formula Formula::rel(std::string symbol, std::vector<std::string> vars) {
    if (vars.empty() || vars.size() > 2)
        throw std::invalid_argument("relation atoms take one or two variables");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Rel;
    n->symbol = std::move(symbol);
    n->vars = std::move(vars);
    return Formula(n);
}

Formula Formula::eq(std::string x, std::string y) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Eq;
    n->vars = {std::move(x), std::move(y)};
    return Formula(n);
}

Formula Formula::le(std::string x, std::string y) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Le;
    n->vars = {std::move(x), std::move(y)};
    return Formula(n);
}

Formula Formula::negation(Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->children = {std::move(f)};
    return Formula(n);
}

Formula Formula::conjunction(std::vector<Formula> fs) {
    if (fs.empty()) return boolean(true);
    if (fs.size() == 1) return fs[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->children = std::move(fs);
    return Formula(n);
}

Formula Formula::disjunction(std::vector<Formula> fs) {
    if (fs.empty()) return boolean(false);
    if (fs.size() == 1) return fs[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->children = std::move(fs);
    return Formula(n);
}

Formula Formula::implies(Formula a, Formula b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Implies;
    n->children = {std::move(a), std::move(b)};
    return Formula(n);
}

Formula Formula::exists(std::string var, Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exists;
    n->symbol = std::move(var);
    n->children = {std::move(f)};
    return Formula(n);
}

Formula Formula::forall(std::string var, Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Forall;
    n->symbol = std::move(var);
    n->children = {std::move(f)};
    return Formula(n);
}

int Formula::quantifier_depth() const {
    int best = 0;
    for (const auto& c : children()) best = std::max(best, c.quantifier_depth());
    if (kind() == Kind::Exists || kind() == Kind::Forall) ++best;
    return best;
}

namespace {
void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f.kind()) {
        case Formula::Kind::Rel:
        case Formula::Kind::Eq:
        case Formula::Kind::Le:
            for (const auto& v : f.vars())
                if (!bound.count(v)) out.insert(v);
            return;
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            bool fresh = bound.insert(f.symbol()).second;
            collect_free(f.children()[0], bound, out);
            if (fresh) bound.erase(f.symbol());
            return;
        }
        default:
            for (const auto& c : f.children()) collect_free(c, bound, out);
    }
}
}  // namespace

std::vector<std::string> Formula::free_variables() const {
    std::set<std::string> bound, out;
    collect_free(*this, bound, out);
    return {out.begin(), out.end()};
}

bool Formula::is_quantifier_free() const { return quantifier_depth() == 0; }

std::string Formula::to_string() const {
    std::ostringstream out;
    switch (kind()) {
        case Kind::False: return "false";
        case Kind::True: return "true";
        case Kind::Rel: {
            out << '(' << symbol();
            for (const auto& v : vars()) out << ' ' << v;
            out << ')';
            return out.str();
        }
        case Kind::Eq: return "(= " + vars()[0] + " " + vars()[1] + ")";
        case Kind::Le: return "(<= " + vars()[0] + " " + vars()[1] + ")";
        case Kind::Not: return "(not " + children()[0].to_string() + ")";
        case Kind::And:
        case Kind::Or: {
            out << (kind() == Kind::And ? "(and" : "(or");
            for (const auto& c : children()) out << ' ' << c.to_string();
            out << ')';
            return out.str();
        }
        case Kind::Implies:
            return "(-> " + children()[0].to_string() + " " + children()[1].to_string() + ")";
        case Kind::Exists: return "(exists " + symbol() + " " + children()[0].to_string() + ")";
        case Kind::Forall: return "(forall " + symbol() + " " + children()[0].to_string() + ")";
    }
    return "";
}

namespace {

struct Tokens {
    std::vector<std::string> toks;
    size_t at = 0;
    const std::string& peek() {
        if (at >= toks.size()) throw std::runtime_error("formula: unexpected end of input");
        return toks[at];
    }
    std::string next() {
        auto t = peek();
        ++at;
        return t;
    }
};

Formula parse_expr(Tokens& ts) {
    std::string t = ts.next();
    if (t == "true") return Formula::boolean(true);
    if (t == "false") return Formula::boolean(false);
    if (t != "(") throw std::runtime_error("formula: expected '('");
    std::string head = ts.next();
    if (head == "true" && ts.peek() == ")") {
        ts.next();
        return Formula::boolean(true);
    }
    if (head == "false" && ts.peek() == ")") {
        ts.next();
        return Formula::boolean(false);
    }
    if (head == "not") {
        Formula f = parse_expr(ts);
        if (ts.next() != ")") throw std::runtime_error("formula: expected ')'");
        return Formula::negation(std::move(f));
    }
    if (head == "and" || head == "or") {
        std::vector<Formula> fs;
        while (ts.peek() != ")") fs.push_back(parse_expr(ts));
        ts.next();
        if (fs.empty()) throw std::runtime_error("formula: empty connective");
        return head == "and" ? Formula::conjunction(std::move(fs))
                             : Formula::disjunction(std::move(fs));
    }
    if (head == "->") {
        Formula a = parse_expr(ts);
        Formula b = parse_expr(ts);
        if (ts.next() != ")") throw std::runtime_error("formula: expected ')'");
        return Formula::implies(std::move(a), std::move(b));
    }
    if (head == "exists" || head == "forall") {
        std::string var = ts.next();
        Formula f = parse_expr(ts);
        if (ts.next() != ")") throw std::runtime_error("formula: expected ')'");
        return head == "exists" ? Formula::exists(var, std::move(f))
                                : Formula::forall(var, std::move(f));
    }
    std::vector<std::string> args;
    while (ts.peek() != ")") args.push_back(ts.next());
    ts.next();
    if (head == "=") {
        if (args.size() != 2) throw std::runtime_error("formula: '=' takes two variables");
        return Formula::eq(args[0], args[1]);
    }
    if (head == "<=") {
        if (args.size() != 2) throw std::runtime_error("formula: '<=' takes two variables");
        return Formula::le(args[0], args[1]);
    }
    return Formula::rel(head, args);
}

}  // namespace

Formula parse_formula(const std::string& text) {
    Tokens ts;
    std::string cur;
    for (char c : text) {
        if (c == '(' || c == ')') {
            if (!cur.empty()) {
                ts.toks.push_back(cur);
                cur.clear();
            }
            ts.toks.push_back(std::string(1, c));
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) {
                ts.toks.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) ts.toks.push_back(cur);
    Formula f = parse_expr(ts);
    if (ts.at != ts.toks.size()) throw std::runtime_error("formula: trailing tokens");
    return f;
}

namespace {

int lookup(const Assignment& asg, const std::string& var) {
    auto it = asg.find(var);
    if (it == asg.end()) throw std::invalid_argument("eval: unbound variable " + var);
    return it->second;
}

bool eval_rec(const OrderedStructure& S, const Formula& f, Assignment& asg) {
    switch (f.kind()) {
        case Formula::Kind::False: return false;
        case Formula::Kind::True: return true;
        case Formula::Kind::Rel: {
            int sym = S.sig().index_of(f.symbol());
            if (sym < 0) throw std::invalid_argument("eval: unknown symbol " + f.symbol());
            int arity = S.sig().symbols()[sym].arity;
            if (arity != static_cast<int>(f.vars().size()))
                throw std::invalid_argument("eval: arity mismatch for " + f.symbol());
            if (arity == 1) return S.unary(sym, lookup(asg, f.vars()[0]));
            return S.rel(sym, lookup(asg, f.vars()[0]), lookup(asg, f.vars()[1]));
        }
        case Formula::Kind::Eq:
            return lookup(asg, f.vars()[0]) == lookup(asg, f.vars()[1]);
        case Formula::Kind::Le:
            return lookup(asg, f.vars()[0]) <= lookup(asg, f.vars()[1]);
        case Formula::Kind::Not: return !eval_rec(S, f.children()[0], asg);
        case Formula::Kind::And:
            for (const auto& c : f.children())
                if (!eval_rec(S, c, asg)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& c : f.children())
                if (eval_rec(S, c, asg)) return true;
            return false;
        case Formula::Kind::Implies:
            return !eval_rec(S, f.children()[0], asg) || eval_rec(S, f.children()[1], asg);
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            bool isExists = f.kind() == Formula::Kind::Exists;
            auto it = asg.find(f.symbol());
            std::optional<int> saved;
            if (it != asg.end()) saved = it->second;
            bool result = !isExists;
            for (int v = 0; v < S.size(); ++v) {
                asg[f.symbol()] = v;
                bool val = eval_rec(S, f.children()[0], asg);
                if (val == isExists) {
                    result = isExists;
                    break;
                }
            }
            if (saved)
                asg[f.symbol()] = *saved;
            else
                asg.erase(f.symbol());
            return result;
        }
    }
    return false;
}

}  // namespace

bool eval(const OrderedStructure& S, const Formula& phi, const Assignment& asg,
          const EvalOptions& opts) {
    if (phi.quantifier_depth() > opts.maxQuantifierDepth)
        throw std::invalid_argument("eval: quantifier depth exceeds the configured budget");
    Assignment work = asg;
    return eval_rec(S, phi, work);
}

namespace {

// capture-avoiding renaming of free variables
Formula subst(const Formula& f, const std::map<std::string, std::string>& map, int& fresh) {
    switch (f.kind()) {
        case Formula::Kind::False:
        case Formula::Kind::True: return f;
        case Formula::Kind::Rel:
        case Formula::Kind::Eq:
        case Formula::Kind::Le: {
            std::vector<std::string> vars = f.vars();
            for (auto& v : vars) {
                auto it = map.find(v);
                if (it != map.end()) v = it->second;
            }
            if (f.kind() == Formula::Kind::Rel) return Formula::rel(f.symbol(), vars);
            if (f.kind() == Formula::Kind::Eq) return Formula::eq(vars[0], vars[1]);
            return Formula::le(vars[0], vars[1]);
        }
        case Formula::Kind::Not: return Formula::negation(subst(f.children()[0], map, fresh));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f.children()) cs.push_back(subst(c, map, fresh));
            return f.kind() == Formula::Kind::And ? Formula::conjunction(std::move(cs))
                                                  : Formula::disjunction(std::move(cs));
        }
        case Formula::Kind::Implies:
            return Formula::implies(subst(f.children()[0], map, fresh),
                                    subst(f.children()[1], map, fresh));
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            std::string var = f.symbol();
            auto inner = map;
            inner.erase(var);
            bool capture = false;
            for (const auto& [from, to] : inner)
                if (to == var) capture = true;
            if (capture) {
                std::string renamed = "_r" + std::to_string(fresh++);
                inner[var] = renamed;
                var = renamed;
            }
            Formula body = subst(f.children()[0], inner, fresh);
            return f.kind() == Formula::Kind::Exists ? Formula::exists(var, std::move(body))
                                                     : Formula::forall(var, std::move(body));
        }
    }
    return f;
}

Formula subst1(const Formula& f, const std::string& from, const std::string& to) {
    int fresh = 0;
    return subst(f, {{from, to}}, fresh);
}

}  // namespace

ApplyResult apply_interpretation(const Interpretation& I, const OrderedStructure& S,
                                 const EvalOptions& opts) {
    for (const auto& sym : I.target.symbols())
        if (sym.arity > 2) throw std::invalid_argument("apply_interpretation: target must be binary");
    auto deltaFree = I.delta.free_variables();
    if (deltaFree.size() > 1)
        throw std::invalid_argument("apply_interpretation: delta must have one free variable");
    std::string dv = deltaFree.empty() ? std::string("x") : deltaFree[0];
    std::vector<int> domain;
    for (int a = 0; a < S.size(); ++a) {
        Assignment asg{{dv, a}};
        if (eval(S, I.delta, asg, opts)) domain.push_back(a);
    }
    ApplyResult result{OrderedStructure(I.target, static_cast<int>(domain.size())), domain,
                       domain.empty()};
    auto formula_for = [&](const std::string& name) -> const Formula& {
        for (const auto& [sym, f] : I.relFormulas)
            if (sym == name) return f;
        throw std::invalid_argument("apply_interpretation: missing formula for symbol " + name);
    };
    for (int symIdx : I.target.binary()) {
        const auto& name = I.target.symbols()[symIdx].name;
        const Formula& f = formula_for(name);
        for (size_t i = 0; i < domain.size(); ++i)
            for (size_t j = 0; j < domain.size(); ++j) {
                Assignment asg{{"x", domain[i]}, {"y", domain[j]}};
                result.out.set_rel(symIdx, static_cast<int>(i), static_cast<int>(j),
                                   eval(S, f, asg, opts));
            }
    }
    for (int symIdx : I.target.unary()) {
        const auto& name = I.target.symbols()[symIdx].name;
        const Formula& f = formula_for(name);
        for (size_t i = 0; i < domain.size(); ++i) {
            Assignment asg{{"x", domain[i]}};
            result.out.set_unary(symIdx, static_cast<int>(i), eval(S, f, asg, opts));
        }
    }
    if (I.orderFormula) {
        for (size_t i = 0; i < domain.size(); ++i)
            for (size_t j = 0; j < domain.size(); ++j) {
                Assignment asg{{"x", domain[i]}, {"y", domain[j]}};
                if (eval(S, *I.orderFormula, asg, opts) != (domain[i] <= domain[j]))
                    throw std::invalid_argument(
                        "apply_interpretation: order formula does not define the inherited order");
            }
    }
    return result;
}

namespace {

// rewrite a formula over `inner.target` into one over inner's source:
// relation atoms are replaced by inner's defining formulas and quantifiers
// are relativized to inner's domain formula
Formula rewrite_through(const Formula& f, const Interpretation& inner, int& fresh) {
    switch (f.kind()) {
        case Formula::Kind::False:
        case Formula::Kind::True:
        case Formula::Kind::Eq: return f;
        case Formula::Kind::Le: {
            if (!inner.orderFormula) return f;
            Formula g = *inner.orderFormula;
            std::map<std::string, std::string> m{{"x", f.vars()[0]}, {"y", f.vars()[1]}};
            return subst(g, m, fresh);
        }
        case Formula::Kind::Rel: {
            for (const auto& [sym, def] : inner.relFormulas)
                if (sym == f.symbol()) {
                    std::map<std::string, std::string> m;
                    m["x"] = f.vars()[0];
                    if (f.vars().size() == 2) m["y"] = f.vars()[1];
                    return subst(def, m, fresh);
                }
            throw std::invalid_argument("compose: inner interpretation lacks symbol " + f.symbol());
        }
        case Formula::Kind::Not:
            return Formula::negation(rewrite_through(f.children()[0], inner, fresh));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f.children()) cs.push_back(rewrite_through(c, inner, fresh));
            return f.kind() == Formula::Kind::And ? Formula::conjunction(std::move(cs))
                                                  : Formula::disjunction(std::move(cs));
        }
        case Formula::Kind::Implies:
            return Formula::implies(rewrite_through(f.children()[0], inner, fresh),
                                    rewrite_through(f.children()[1], inner, fresh));
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            Formula body = rewrite_through(f.children()[0], inner, fresh);
            auto dfree = inner.delta.free_variables();
            std::string dv = dfree.empty() ? std::string("x") : dfree[0];
            Formula guard = subst1(inner.delta, dv, f.symbol());
            if (f.kind() == Formula::Kind::Exists)
                return Formula::exists(f.symbol(),
                                       Formula::conjunction({std::move(guard), std::move(body)}));
            return Formula::forall(f.symbol(),
                                   Formula::implies(std::move(guard), std::move(body)));
        }
    }
    return f;
}

}  // namespace

Interpretation compose(const Interpretation& outer, const Interpretation& inner) {
    Interpretation out;
    out.target = outer.target;
    int fresh = 0;
    auto odFree = outer.delta.free_variables();
    std::string odv = odFree.empty() ? std::string("x") : odFree[0];
    Formula outerDelta = subst1(outer.delta, odv, "x");
    auto idFree = inner.delta.free_variables();
    std::string idv = idFree.empty() ? std::string("x") : idFree[0];
    Formula innerDelta = subst1(inner.delta, idv, "x");
    out.delta = Formula::conjunction({innerDelta, rewrite_through(outerDelta, inner, fresh)});
    for (const auto& [sym, f] : outer.relFormulas)
        out.relFormulas.emplace_back(sym, rewrite_through(f, inner, fresh));
    if (outer.orderFormula)
        out.orderFormula = rewrite_through(*outer.orderFormula, inner, fresh);
    else
        out.orderFormula = inner.orderFormula;
    return out;
}

Signature bipartite_signature() { return Signature({{"E", 2}, {"Prow", 1}, {"Pcol", 1}}); }

OrderedStructure bipartite_structure(int m, int n, const std::vector<Cell>& edges) {
    if (m < 1 || n < 1) throw std::invalid_argument("bipartite_structure: empty part");
    OrderedStructure H(bipartite_signature(), m + n);
    Signature sig = H.sig();
    int prow = sig.index_of("Prow"), pcol = sig.index_of("Pcol"), e = sig.index_of("E");
    for (int j = 0; j < n; ++j) H.set_unary(pcol, j, true);
    for (int i = 0; i < m; ++i) H.set_unary(prow, n + i, true);
    for (auto [i, j] : edges) {
        if (i < 1 || i > m || j < 1 || j > n)
            throw std::invalid_argument("bipartite_structure: edge out of range");
        H.set_edge(e, j - 1, n + i - 1, true);
    }
    return H;
}

namespace {

struct UniversalFormulas {
    Formula phiC = Formula::boolean(false);
    Formula phiR = Formula::boolean(false);
    Formula rho = Formula::boolean(false);
};

Formula is_min(const std::string& w, int& fresh) {
    std::string u = "_u" + std::to_string(fresh++);
    return Formula::forall(u, Formula::le(w, u));
}

Formula strictly_less(const std::string& a, const std::string& b) {
    return Formula::conjunction({Formula::le(a, b), Formula::negation(Formula::eq(a, b))});
}

// v is the immediate successor of w
Formula is_succ(const std::string& w, const std::string& v, int& fresh) {
    std::string z = "_z" + std::to_string(fresh++);
    return Formula::conjunction(
        {strictly_less(w, v),
         Formula::forall(z, Formula::implies(strictly_less(w, z), Formula::le(v, z)))});
}

UniversalFormulas universal_formulas(const GraphScheme& sch) {
    int fresh = 0;
    auto E = [](const std::string& a, const std::string& b) {
        return Formula::rel("E", {a, b});
    };
    // phiC(x): x lies strictly between the minimum and the smallest neighbor
    // of the probe (the minimum itself, or its successor for the inequality
    // type)
    Formula phiC = Formula::boolean(false);
    {
        std::string w = "_w" + std::to_string(fresh++);
        std::string s = "_s" + std::to_string(fresh++);
        std::string z = "_z" + std::to_string(fresh++);
        if (sch.r != RType::Neq) {
            phiC = Formula::exists(
                w, Formula::conjunction(
                       {is_min(w, fresh), Formula::negation(Formula::eq("x", w)),
                        Formula::exists(
                            s, Formula::conjunction(
                                   {E(w, s),
                                    Formula::forall(z, Formula::implies(E(w, z), Formula::le(s, z))),
                                    strictly_less("x", s)}))}));
        } else {
            std::string v = "_v" + std::to_string(fresh++);
            phiC = Formula::exists(
                w, Formula::conjunction(
                       {is_min(w, fresh), Formula::negation(Formula::eq("x", w)),
                        Formula::exists(
                            v, Formula::conjunction(
                                   {is_succ(w, v, fresh),
                                    Formula::exists(
                                        s,
                                        Formula::conjunction(
                                            {E(v, s),
                                             Formula::forall(
                                                 z, Formula::implies(E(v, z), Formula::le(s, z))),
                                             strictly_less("x", s)}))}))}));
        }
    }
    // phiR(x) per type
    Formula phiR = Formula::boolean(false);
    {
        std::string w = "_w" + std::to_string(fresh++);
        Formula adjMin = Formula::exists(
            w, Formula::conjunction({is_min(w, fresh), E(w, "x")}));
        switch (sch.r) {
            case RType::Eq:
            case RType::Ge: phiR = adjMin; break;
            case RType::Le: {
                std::string w2 = "_w" + std::to_string(fresh++);
                std::string v2 = "_v" + std::to_string(fresh++);
                Formula adjSucc = Formula::exists(
                    w2, Formula::conjunction(
                            {is_min(w2, fresh),
                             Formula::exists(v2, Formula::conjunction(
                                                     {is_succ(w2, v2, fresh), E(v2, "x")}))}));
                phiR = Formula::conjunction({adjMin, Formula::negation(adjSucc)});
                break;
            }
            case RType::Neq: {
                std::string xm = "_m" + std::to_string(fresh++);
                Formula xIsMin = Formula::forall(xm, Formula::le("x", xm));
                phiR = Formula::conjunction({Formula::negation(phiC),
                                             Formula::negation(xIsMin),
                                             Formula::negation(adjMin)});
                break;
            }
        }
    }
    // rho(x,y): x a row representative, y a column, and some cell projects to
    // both
    Formula rho = Formula::boolean(false);
    {
        std::string z = "_c" + std::to_string(fresh++);
        std::string u = "_u" + std::to_string(fresh++);
        std::string m = "_m" + std::to_string(fresh++);
        Formula zIsMin = Formula::forall(m, Formula::le(z, m));
        Formula cellZ = Formula::conjunction({Formula::negation(subst1(phiR, "x", z)),
                                              Formula::negation(subst1(phiC, "x", z)),
                                              Formula::negation(zIsMin)});
        Formula sameRow = Formula::conjunction(
            {strictly_less("x", z),
             Formula::forall(u, Formula::implies(
                                    Formula::conjunction(
                                        {subst1(phiR, "x", u), strictly_less("x", u)}),
                                    strictly_less(z, u)))});
        Formula colMatch = Formula::boolean(false);
        std::string u2 = "_u" + std::to_string(fresh++);
        switch (sch.r) {
            case RType::Eq: colMatch = E(z, "y"); break;
            case RType::Neq: colMatch = Formula::negation(E(z, "y")); break;
            case RType::Le:
                colMatch = Formula::conjunction(
                    {E(z, "y"),
                     Formula::forall(u2, Formula::implies(
                                             Formula::conjunction({subst1(phiC, "x", u2),
                                                                   strictly_less("y", u2)}),
                                             Formula::negation(E(z, u2))))});
                break;
            case RType::Ge:
                colMatch = Formula::conjunction(
                    {E(z, "y"),
                     Formula::forall(u2, Formula::implies(
                                             Formula::conjunction({subst1(phiC, "x", u2),
                                                                   strictly_less(u2, "y")}),
                                             Formula::negation(E(z, u2))))});
                break;
        }
        rho = Formula::conjunction(
            {phiR, subst1(phiC, "x", "y"),
             Formula::exists(z, Formula::conjunction({cellZ, sameRow, colMatch}))});
    }
    return {phiC, phiR, rho};
}

}  // namespace

Interpretation universal_interpretation(const GraphScheme& scheme) {
    if (scheme.s != SOrient::IZeroFirst || scheme.t != TFlag::Independent)
        throw std::invalid_argument(
            "universal_interpretation: scheme must place the independent interval first");
    UniversalFormulas F = universal_formulas(scheme);
    Interpretation I;
    I.target = bipartite_signature();
    I.delta = Formula::disjunction({F.phiR, F.phiC});
    Formula rhoXY = F.rho;
    int fresh = 1000;
    Formula rhoYX = subst(F.rho, {{"x", "y"}, {"y", "x"}}, fresh);
    I.relFormulas.emplace_back("E", Formula::disjunction({rhoXY, rhoYX}));
    I.relFormulas.emplace_back("Prow", F.phiR);
    I.relFormulas.emplace_back("Pcol", F.phiC);
    return I;
}

bool verify_defined_grid(const OrderedStructure& S, const GridDefinition& g,
                         const EvalOptions& opts) {
    size_t m = g.A.size(), n = g.B.size();
    if (m == 0 || n == 0) return false;
    if (g.C.size() != m * n) return false;
    for (const auto& a : g.A)
        if (a.size() != g.xVars.size()) throw std::invalid_argument("grid: x-tuple arity mismatch");
    for (const auto& b : g.B)
        if (b.size() != g.yVars.size()) throw std::invalid_argument("grid: y-tuple arity mismatch");
    std::map<int, int> hits;  // c -> count over all (a,b)
    for (const auto& a : g.A)
        for (const auto& b : g.B) {
            int count = 0;
            for (int c : g.C) {
                Assignment asg;
                for (size_t i = 0; i < g.xVars.size(); ++i) asg[g.xVars[i]] = a[i];
                for (size_t i = 0; i < g.yVars.size(); ++i) asg[g.yVars[i]] = b[i];
                asg[g.zVar] = c;
                if (eval(S, g.phi, asg, opts)) {
                    ++count;
                    ++hits[c];
                }
            }
            if (count != 1) return false;
        }
    for (int c : g.C)
        if (hits[c] != 1) return false;
    return true;
}

McReduction mc_reduce(const Formula& phi, const OrderedStructure& H, const GraphScheme& scheme) {
    if (!phi.free_variables().empty())
        throw std::invalid_argument("mc_reduce: formula must be a sentence");
    Signature bsig = bipartite_signature();
    if (!(H.sig() == bsig)) throw std::invalid_argument("mc_reduce: H must use the bipartite signature");
    int prow = bsig.index_of("Prow"), pcol = bsig.index_of("Pcol"), e = bsig.index_of("E");
    int n = 0;
    while (n < H.size() && H.unary(pcol, n)) ++n;
    int m = H.size() - n;
    if (m < 1 || n < 1) throw std::invalid_argument("mc_reduce: empty part");
    for (int v = 0; v < H.size(); ++v) {
        bool isCol = v < n;
        if (H.unary(pcol, v) != isCol || H.unary(prow, v) == isCol)
            throw std::invalid_argument("mc_reduce: H must list the column part first");
    }
    std::vector<Cell> cells;
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= n; ++j)
            if (H.rel(e, n + i - 1, j - 1)) cells.emplace_back(i, j);
    OrderedStructure G = generate_GS(scheme, m, n, cells);
    UniversalFormulas F = universal_formulas(scheme);
    int fresh = 2000;
    Formula rhoSym = Formula::disjunction({F.rho, subst(F.rho, {{"x", "y"}, {"y", "x"}}, fresh)});
    Interpretation I;
    I.delta = Formula::disjunction({F.phiR, F.phiC});
    I.relFormulas.emplace_back("E", rhoSym);
    I.relFormulas.emplace_back("Prow", F.phiR);
    I.relFormulas.emplace_back("Pcol", F.phiC);
    Formula phiPrime = rewrite_through(phi, I, fresh);
    return {phiPrime, std::move(G)};
}

OrderedStructure extract_semigrid_from_grid(const OrderedStructure& S, const GridDefinition& g,
                                            const EvalOptions& opts) {
    if (!verify_defined_grid(S, g, opts))
        throw std::invalid_argument("extract_semigrid: not a defined grid");
    std::vector<std::vector<int>> A = g.A, B = g.B;
    std::sort(A.begin(), A.end());
    std::sort(B.begin(), B.end());
    size_t m = A.size(), n = B.size();
    if (m < 2 || n < 2) throw std::invalid_argument("extract_semigrid: grid below the size floor");
    // alpha(i,j) = the unique witness cell
    std::vector<std::vector<int>> alpha(m, std::vector<int>(n, -1));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j)
            for (int c : g.C) {
                Assignment asg;
                for (size_t v = 0; v < g.xVars.size(); ++v) asg[g.xVars[v]] = A[i][v];
                for (size_t v = 0; v < g.yVars.size(); ++v) asg[g.yVars[v]] = B[j][v];
                asg[g.zVar] = c;
                if (eval(S, g.phi, asg, opts)) {
                    alpha[i][j] = c;
                    break;
                }
            }
    // which of the eight lexicographic orders matches the inherited order
    auto matches = [&](bool aPriority, bool flipA, bool flipB) {
        auto key = [&](size_t i, size_t j) {
            long long ai = flipA ? static_cast<long long>(m) - 1 - i : static_cast<long long>(i);
            long long bj = flipB ? static_cast<long long>(n) - 1 - j : static_cast<long long>(j);
            return aPriority ? ai * static_cast<long long>(n) + bj
                             : bj * static_cast<long long>(m) + ai;
        };
        for (size_t i1 = 0; i1 < m; ++i1)
            for (size_t j1 = 0; j1 < n; ++j1)
                for (size_t i2 = 0; i2 < m; ++i2)
                    for (size_t j2 = 0; j2 < n; ++j2)
                        if ((alpha[i1][j1] < alpha[i2][j2]) != (key(i1, j1) < key(i2, j2)))
                            return false;
        return true;
    };
    bool found = false, aPriority = true, flipA = false, flipB = false;
    for (bool ap : {true, false})
        for (bool fa : {false, true})
            for (bool fb : {false, true})
                if (!found && matches(ap, fa, fb)) {
                    found = true;
                    aPriority = ap;
                    flipA = fa;
                    flipB = fb;
                }
    if (!found)
        throw std::invalid_argument(
            "extract_semigrid: order on the grid cells matches no lexicographic order");
    (void)flipA;
    (void)flipB;
    // separating variable among the y-tuples (swap roles when the column side
    // has priority)
    const std::vector<std::vector<int>>& sideB = aPriority ? B : A;
    const std::vector<std::string>& sideVars = aPriority ? g.yVars : g.xVars;
    int c00 = aPriority ? alpha[0][0] : alpha[0][0];
    int sepVar = -1;
    for (size_t v = 0; v < sideVars.size(); ++v)
        if (!(S.atp(sideB[0][v], c00) == S.atp(sideB[1][v], c00))) {
            sepVar = static_cast<int>(v);
            break;
        }
    if (sepVar < 0)
        throw std::invalid_argument("extract_semigrid: no separating variable among the tuples");
    std::set<int> keep(g.C.begin(), g.C.end());
    for (const auto& b : sideB) keep.insert(b[sepVar]);
    OrderedStructure out = S.induced(std::vector<int>(keep.begin(), keep.end()));
    if (!classify_regular_semigrid(out))
        throw std::invalid_argument("extract_semigrid: extracted substructure is not a regular semigrid");
    return out;
}

}  // namespace twwlab
