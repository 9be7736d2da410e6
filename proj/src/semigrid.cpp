#include "twwlab/semigrid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace twwlab {

namespace {

Cmp cmp_of(int a, int b) { return a == b ? Cmp::Equal : (a < b ? Cmp::Less : Cmp::Greater); }

bool rel_holds(RType r, int a, int b) {
    switch (r) {
        case RType::Le: return a <= b;
        case RType::Ge: return a >= b;
        case RType::Eq: return a == b;
        case RType::Neq: return a != b;
    }
    return false;
}

unsigned dir_of(int i, int j, int ip, int jp) {
    // (i,j) lexicographically before (ip,jp), both inner cells
    if (i == ip) return DirRight;
    if (j == jp) return DirDown;
    return j < jp ? DirDownRight : DirDownLeft;
}

}  // namespace

int GraphScheme::id() const {
    return static_cast<int>(r) * 64 + static_cast<int>(s) * 32 + static_cast<int>(t) * 16 +
           static_cast<int>(dirSet);
}

GraphScheme GraphScheme::from_id(int id) {
    if (id < 0 || id >= 256) throw std::invalid_argument("scheme id out of range");
    GraphScheme g;
    g.r = static_cast<RType>(id / 64);
    g.s = static_cast<SOrient>((id / 32) % 2);
    g.t = static_cast<TFlag>((id / 16) % 2);
    g.dirSet = static_cast<unsigned>(id % 16);
    return g;
}

std::vector<GraphScheme> enumerate_graph_schemes() {
    std::vector<GraphScheme> out;
    out.reserve(256);
    for (int id = 0; id < 256; ++id) out.push_back(GraphScheme::from_id(id));
    return out;
}

bool is_R_graph(const OrderedStructure& S, const std::vector<int>& X, const std::vector<int>& Y,
                RType r) {
    if (X.size() != Y.size()) throw std::invalid_argument("is_R_graph: sides must have equal size");
    for (size_t i = 0; i < X.size(); ++i)
        for (size_t j = 0; j < Y.size(); ++j)
            if (S.edge(X[i], Y[j]) != rel_holds(r, static_cast<int>(i), static_cast<int>(j)))
                return false;
    return true;
}

namespace {

struct GridLayout {
    int m, n, total;
    SOrient orient;
    // index of grid point (i,j); i = 0 is the distinguished interval
    int idx(int i, int j) const {
        int lex = i * (n + 1) + j;
        return orient == SOrient::IZeroFirst ? lex : total - 1 - lex;
    }
    std::pair<int, int> point(int index) const {
        int lex = orient == SOrient::IZeroFirst ? index : total - 1 - index;
        return {lex / (n + 1), lex % (n + 1)};
    }
};

}  // namespace

OrderedStructure generate_semigrid(const GraphScheme& sch, int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("generate_semigrid: m,n must be at least 1");
    GridLayout L{m, n, (m + 1) * (n + 1), sch.s};
    OrderedStructure G(Signature::graph(), L.total);
    // distinguished interval: clique or independent
    if (sch.t == TFlag::Clique)
        for (int j = 0; j <= n; ++j)
            for (int jp = j + 1; jp <= n; ++jp) G.add_edge(L.idx(0, j), L.idx(0, jp));
    // R-graph blocks against every inner interval
    for (int i = 1; i <= m; ++i)
        for (int j = 0; j <= n; ++j)
            for (int jp = 0; jp <= n; ++jp)
                if (rel_holds(sch.r, j, jp)) G.add_edge(L.idx(0, j), L.idx(i, jp));
    // adjacency among inner cells determined by direction
    for (int i = 1; i <= m; ++i)
        for (int j = 0; j <= n; ++j)
            for (int ip = i; ip <= m; ++ip)
                for (int jp = (ip == i ? j + 1 : 0); jp <= n; ++jp)
                    if (sch.dirSet & dir_of(i, j, ip, jp)) G.add_edge(L.idx(i, j), L.idx(ip, jp));
    return G;
}

OrderedStructure generate_GS(const GraphScheme& sch, int m, int n, const std::vector<Cell>& S) {
    if (m < 1 || n < 1) throw std::invalid_argument("generate_GS: m,n must be at least 1");
    std::set<Cell> cells(S.begin(), S.end());
    for (auto [i, j] : cells)
        if (i < 1 || i > m || j < 1 || j > n) throw std::invalid_argument("generate_GS: cell out of range");
    OrderedStructure G = generate_semigrid(sch, m, n);
    GridLayout L{m, n, (m + 1) * (n + 1), sch.s};
    std::vector<int> keep;
    keep.push_back(L.idx(0, 0));
    for (int j = 1; j <= n; ++j) keep.push_back(L.idx(0, j));
    for (int i = 1; i <= m; ++i) keep.push_back(L.idx(i, 0));
    for (auto [i, j] : cells) keep.push_back(L.idx(i, j));
    return G.induced(std::move(keep));
}

namespace {

// ranks of the distinguished-interval vertices adjacent to u, given the
// interval occupies positions [i0Lo, i0Lo+n] in index order
std::optional<int> read_rank(const OrderedStructure& G, RType r, int u, int i0Lo, int n) {
    std::vector<char> adj(n + 1);
    for (int j = 0; j <= n; ++j) adj[j] = G.edge(u, i0Lo + j) ? 1 : 0;
    for (int cand = 0; cand <= n; ++cand) {
        bool ok = true;
        for (int j = 0; j <= n && ok; ++j)
            if (adj[j] != (rel_holds(r, j, cand) ? 1 : 0)) ok = false;
        if (ok) return cand;
    }
    return std::nullopt;
}

std::optional<GSDecoding> parse_GS(const OrderedStructure& G, const GraphScheme& sch, int n) {
    int N = G.size();
    int i0Size = n + 1;
    if (n < 1 || i0Size + 1 > N) return std::nullopt;
    int i0Lo = sch.s == SOrient::IZeroFirst ? 0 : N - i0Size;
    int restLo = sch.s == SOrient::IZeroFirst ? i0Size : 0;
    int restHi = sch.s == SOrient::IZeroFirst ? N : N - i0Size;
    // distinguished interval must be constant internally
    for (int a = i0Lo; a < i0Lo + i0Size; ++a)
        for (int b = a + 1; b < i0Lo + i0Size; ++b)
            if (G.edge(a, b) != (sch.t == TFlag::Clique)) return std::nullopt;
    GSDecoding dec;
    dec.n = n;
    int row = 0, lastCol = 0;
    for (int u = restLo; u < restHi; ++u) {
        auto rank = read_rank(G, sch.r, u, i0Lo, n);
        if (!rank) return std::nullopt;
        if (*rank == 0) {
            ++row;
            lastCol = 0;
        } else {
            if (row == 0 || *rank <= lastCol) return std::nullopt;
            lastCol = *rank;
            dec.cells.emplace_back(row, *rank);
        }
    }
    if (row == 0) return std::nullopt;
    dec.m = row;
    std::sort(dec.cells.begin(), dec.cells.end());
    if (!(generate_GS(sch, dec.m, dec.n, dec.cells) == G)) return std::nullopt;
    return dec;
}

}  // namespace

GSDecoding decode_GS(const OrderedStructure& G, const GraphScheme& sch) {
    if (!G.sig().is_graph()) throw std::invalid_argument("decode_GS: graph signature required");
    int N = G.size();
    if (N < 4) throw std::invalid_argument("decode_GS: structure too small");
    if (sch.s == SOrient::IZeroFirst && sch.t == TFlag::Independent) {
        // boundary by the case analysis: the open interval above the
        // distinguished minimum ends at the smallest neighbor of * (of the
        // successor of * for the inequality type)
        int probe = 0;
        if (sch.r == RType::Neq) probe = 1;
        int s = -1;
        for (int v = 0; v < N; ++v)
            if (v != probe && G.edge(probe, v)) {
                s = v;
                break;
            }
        if (s < 0)
            throw std::invalid_argument(
                sch.r == RType::Neq
                    ? "decode_GS: successor of the minimum has no neighbor"
                    : "decode_GS: minimum has no smallest neighbor");
        auto dec = parse_GS(G, sch, s - 1);
        if (!dec) throw std::invalid_argument("decode_GS: structure inconsistent with scheme");
        return *dec;
    }
    for (int n = 1; n + 2 <= N; ++n)
        if (auto dec = parse_GS(G, sch, n)) return *dec;
    throw std::invalid_argument("decode_GS: structure inconsistent with scheme");
}

std::optional<GraphClassification> classify_graph_semigrid(const OrderedStructure& S) {
    if (!S.sig().is_graph()) return std::nullopt;
    int N = S.size();
    int sym = S.sig().binary()[0];
    for (int a = 0; a < N; ++a) {
        if (S.rel(sym, a, a)) return std::nullopt;
        for (int b = 0; b < N; ++b)
            if (S.rel(sym, a, b) != S.rel(sym, b, a)) return std::nullopt;
    }
    for (int m = 1; m * 2 + 2 <= N; ++m) {
        if (N % (m + 1)) continue;
        int n = N / (m + 1) - 1;
        if (n < 1) continue;
        for (SOrient orient : {SOrient::IZeroFirst, SOrient::IZeroLast}) {
            GridLayout L{m, n, N, orient};
            // distinguished interval constant?
            bool clique = S.edge(L.idx(0, 0), L.idx(0, 1));
            bool ok = true;
            for (int j = 0; j <= n && ok; ++j)
                for (int jp = j + 1; jp <= n && ok; ++jp)
                    if (S.edge(L.idx(0, j), L.idx(0, jp)) != clique) ok = false;
            if (!ok) continue;
            // common R-graph type across all inner intervals
            std::optional<RType> rType;
            for (RType r : {RType::Le, RType::Ge, RType::Eq, RType::Neq}) {
                bool all = true;
                for (int i = 1; i <= m && all; ++i)
                    for (int j = 0; j <= n && all; ++j)
                        for (int jp = 0; jp <= n && all; ++jp)
                            if (S.edge(L.idx(0, j), L.idx(i, jp)) != rel_holds(r, j, jp)) all = false;
                if (all) {
                    rType = r;
                    break;
                }
            }
            if (!rType) continue;
            // per-direction constant adjacency among inner cells
            std::array<std::optional<bool>, 4> dirAdj;
            auto slot = [](unsigned d) {
                return d == DirRight ? 0 : d == DirDown ? 1 : d == DirDownRight ? 2 : 3;
            };
            ok = true;
            for (int i = 1; i <= m && ok; ++i)
                for (int j = 0; j <= n && ok; ++j)
                    for (int ip = i; ip <= m && ok; ++ip)
                        for (int jp = (ip == i ? j + 1 : 0); jp <= n && ok; ++jp) {
                            bool e = S.edge(L.idx(i, j), L.idx(ip, jp));
                            auto& cell = dirAdj[slot(dir_of(i, j, ip, jp))];
                            if (!cell)
                                cell = e;
                            else if (*cell != e)
                                ok = false;
                        }
            if (!ok) continue;
            GraphScheme sch;
            sch.r = *rType;
            sch.s = orient;
            sch.t = clique ? TFlag::Clique : TFlag::Independent;
            sch.dirSet = 0;
            if (dirAdj[0].value_or(false)) sch.dirSet |= DirRight;
            if (dirAdj[1].value_or(false)) sch.dirSet |= DirDown;
            if (dirAdj[2].value_or(false)) sch.dirSet |= DirDownRight;
            if (dirAdj[3].value_or(false)) sch.dirSet |= DirDownLeft;
            return GraphClassification{sch, m, n};
        }
    }
    return std::nullopt;
}

namespace {

Cmp forced_order(Cmp key, SOrient orient) {
    if (key == Cmp::Equal) return Cmp::Equal;
    if (orient == SOrient::IZeroFirst) return key;
    return key == Cmp::Less ? Cmp::Greater : Cmp::Less;
}

Cmp lex_cmp(Cmp c1, Cmp c2) { return c1 == Cmp::Equal ? c2 : c1; }

bool diagonal_valid(const Signature& sig, TypeCode code) {
    if (type_order(code) != Cmp::Equal) return false;
    int shift = 2;
    for (size_t i = 0; i < sig.symbols().size(); ++i, shift += 2)
        if (((code >> shift) & 1u) != ((code >> (shift + 1)) & 1u)) return false;
    return true;
}

int key_index(Cmp c) { return static_cast<int>(c); }  // Equal=0, Less=1, Greater=2

}  // namespace

bool general_scheme_consistent(const Signature& sig, const GeneralScheme& sch) {
    auto order_ok = [&](TypeCode code, Cmp want) { return type_order(code) == want; };
    // first-row dependency
    if (!diagonal_valid(sig, sch.depB[key_index(Cmp::Equal)])) return false;
    if (!order_ok(sch.depB[key_index(Cmp::Less)], forced_order(Cmp::Less, sch.orient))) return false;
    if (sch.depB[key_index(Cmp::Greater)] != swap_type(sig, sch.depB[key_index(Cmp::Less)]))
        return false;
    // cell-cell dependency
    auto depC = [&](Cmp c1, Cmp c2) { return sch.depC[key_index(c1) * 3 + key_index(c2)]; };
    if (!diagonal_valid(sig, depC(Cmp::Equal, Cmp::Equal))) return false;
    for (Cmp c1 : {Cmp::Equal, Cmp::Less, Cmp::Greater})
        for (Cmp c2 : {Cmp::Equal, Cmp::Less, Cmp::Greater}) {
            if (c1 == Cmp::Equal && c2 == Cmp::Equal) continue;
            if (!order_ok(depC(c1, c2), forced_order(lex_cmp(c1, c2), sch.orient))) return false;
        }
    auto flip = [](Cmp c) {
        return c == Cmp::Equal ? Cmp::Equal : (c == Cmp::Less ? Cmp::Greater : Cmp::Less);
    };
    for (Cmp c1 : {Cmp::Equal, Cmp::Less, Cmp::Greater})
        for (Cmp c2 : {Cmp::Equal, Cmp::Less, Cmp::Greater})
            if (depC(flip(c1), flip(c2)) != swap_type(sig, depC(c1, c2))) return false;
    // cell-to-first-row dependency: cells always follow the first row in the
    // lexicographic order, so the order component is fixed
    Cmp cellSide = sch.orient == SOrient::IZeroFirst ? Cmp::Greater : Cmp::Less;
    for (int i = 0; i < 3; ++i)
        if (!order_ok(sch.depCB[i], cellSide)) return false;
    if (sch.depCB[0] == sch.depCB[1] && sch.depCB[1] == sch.depCB[2]) return false;
    // unary values must be uniform per side
    if (!sig.unary().empty()) {
        int base = 2 + 2 * static_cast<int>(sig.binary().size());
        auto ubits = [&](TypeCode code, int u) {
            int shift = base + 2 * u;
            return std::pair<int, int>((code >> shift) & 1, (code >> (shift + 1)) & 1);
        };
        for (size_t u = 0; u < sig.unary().size(); ++u) {
            int uB = ubits(sch.depB[key_index(Cmp::Equal)], static_cast<int>(u)).first;
            int uC = ubits(depC(Cmp::Equal, Cmp::Equal), static_cast<int>(u)).first;
            auto check = [&](TypeCode code, int ua, int ub) {
                auto [x, y] = ubits(code, static_cast<int>(u));
                return x == ua && y == ub;
            };
            if (!check(sch.depB[key_index(Cmp::Less)], uB, uB)) return false;
            for (Cmp c1 : {Cmp::Equal, Cmp::Less, Cmp::Greater})
                for (Cmp c2 : {Cmp::Equal, Cmp::Less, Cmp::Greater})
                    if (!check(depC(c1, c2), uC, uC)) return false;
            for (int i = 0; i < 3; ++i)
                if (!check(sch.depCB[i], uC, uB)) return false;
        }
    }
    return true;
}

std::vector<GeneralScheme> enumerate_general_schemes(const Signature& sig, std::size_t budget) {
    int w = static_cast<int>(sig.symbols().size());
    // free relation-bit choices: one off-diagonal code in depB, four in depC,
    // three in depCB, plus two diagonal codes
    long double loopCount = 2.0L;
    for (int i = 0; i < 8; ++i) loopCount *= std::pow(4.0L, w);
    loopCount *= std::pow(2.0L, w) * std::pow(2.0L, w);
    if (loopCount > static_cast<long double>(budget) * 16)
        throw std::length_error("enumerate_general_schemes: scheme space exceeds budget");

    int nb = static_cast<int>(sig.binary().size());
    std::uint32_t relCombos = 1u << (2 * w);   // fwd/rev (or ua/ub) bits per symbol
    std::uint32_t diagCombos = 1u << w;

    auto make_code = [&](Cmp order, std::uint32_t relBits) {
        return static_cast<TypeCode>(order) | (relBits << 2);
    };
    auto make_diag = [&](std::uint32_t bits) {
        TypeCode code = static_cast<TypeCode>(Cmp::Equal);
        for (int i = 0; i < w; ++i) {
            std::uint32_t b = (bits >> i) & 1u;
            code |= (b << (2 + 2 * i)) | (b << (3 + 2 * i));
        }
        return code;
    };
    (void)nb;

    std::vector<GeneralScheme> out;
    for (int orientI = 0; orientI < 2; ++orientI) {
        GeneralScheme sch;
        sch.orient = static_cast<SOrient>(orientI);
        Cmp lessOrd = forced_order(Cmp::Less, sch.orient);
        Cmp cellSide = sch.orient == SOrient::IZeroFirst ? Cmp::Greater : Cmp::Less;
        for (std::uint32_t bDiag = 0; bDiag < diagCombos; ++bDiag) {
            sch.depB[key_index(Cmp::Equal)] = make_diag(bDiag);
            for (std::uint32_t bLess = 0; bLess < relCombos; ++bLess) {
                sch.depB[key_index(Cmp::Less)] = make_code(lessOrd, bLess);
                sch.depB[key_index(Cmp::Greater)] =
                    swap_type(sig, sch.depB[key_index(Cmp::Less)]);
                for (std::uint32_t cDiag = 0; cDiag < diagCombos; ++cDiag) {
                    sch.depC[key_index(Cmp::Equal) * 3 + key_index(Cmp::Equal)] = make_diag(cDiag);
                    // free keys (L,L),(L,E),(L,G),(E,L); mirrors forced by swap
                    const std::pair<Cmp, Cmp> freeKeys[4] = {{Cmp::Less, Cmp::Less},
                                                             {Cmp::Less, Cmp::Equal},
                                                             {Cmp::Less, Cmp::Greater},
                                                             {Cmp::Equal, Cmp::Less}};
                    std::array<std::uint32_t, 4> bits{};
                    while (true) {
                        for (int fk = 0; fk < 4; ++fk) {
                            auto [c1, c2] = freeKeys[fk];
                            TypeCode code = make_code(forced_order(lex_cmp(c1, c2), sch.orient),
                                                      bits[fk]);
                            sch.depC[key_index(c1) * 3 + key_index(c2)] = code;
                            auto f1 = c1 == Cmp::Equal ? Cmp::Equal
                                                       : (c1 == Cmp::Less ? Cmp::Greater : Cmp::Less);
                            auto f2 = c2 == Cmp::Equal ? Cmp::Equal
                                                       : (c2 == Cmp::Less ? Cmp::Greater : Cmp::Less);
                            sch.depC[key_index(f1) * 3 + key_index(f2)] = swap_type(sig, code);
                        }
                        std::array<std::uint32_t, 3> cb{};
                        while (true) {
                            for (int i = 0; i < 3; ++i) sch.depCB[i] = make_code(cellSide, cb[i]);
                            if (general_scheme_consistent(sig, sch)) {
                                out.push_back(sch);
                                if (out.size() > budget)
                                    throw std::length_error(
                                        "enumerate_general_schemes: scheme space exceeds budget");
                            }
                            int i = 2;
                            while (i >= 0 && cb[i] + 1 == relCombos) cb[i--] = 0;
                            if (i < 0) break;
                            ++cb[i];
                        }
                        int fk = 3;
                        while (fk >= 0 && bits[fk] + 1 == relCombos) bits[fk--] = 0;
                        if (fk < 0) break;
                        ++bits[fk];
                    }
                }
            }
        }
    }
    return out;
}

SchemeList enumerate_schemes(const Signature& sig) {
    SchemeList list;
    if (sig.is_graph()) {
        list.graphCase = true;
        list.graph = enumerate_graph_schemes();
    } else {
        list.general = enumerate_general_schemes(sig);
    }
    return list;
}

OrderedStructure generate_semigrid(const GeneralScheme& sch, const Signature& sig, int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("generate_semigrid: m,n must be at least 1");
    if (!general_scheme_consistent(sig, sch))
        throw std::invalid_argument("generate_semigrid: inconsistent scheme");
    GridLayout L{m, n, (m + 1) * (n + 1), sch.orient};
    OrderedStructure S(sig, L.total);
    int base = 2 + 2 * static_cast<int>(sig.binary().size());
    auto depC = [&](Cmp c1, Cmp c2) { return sch.depC[key_index(c1) * 3 + key_index(c2)]; };
    auto pair_code = [&](int u, int v) -> TypeCode {  // atomic type of (u,v), u != v
        auto [iu, ju] = L.point(u);
        auto [iv, jv] = L.point(v);
        if (iu == 0 && iv == 0) return sch.depB[key_index(cmp_of(ju, jv))];
        if (iu != 0 && iv != 0) return depC(cmp_of(iu, iv), cmp_of(ju, jv));
        if (iu != 0) return sch.depCB[key_index(cmp_of(ju, jv))];
        return swap_type(sig, sch.depCB[key_index(cmp_of(jv, ju))]);
    };
    for (int u = 0; u < L.total; ++u) {
        auto [iu, ju] = L.point(u);
        (void)ju;
        TypeCode diag = iu == 0 ? sch.depB[key_index(Cmp::Equal)] : depC(Cmp::Equal, Cmp::Equal);
        int shift = 2;
        for (size_t bi = 0; bi < sig.binary().size(); ++bi, shift += 2)
            S.set_rel(sig.binary()[bi], u, u, (diag >> shift) & 1u);
        for (size_t ui = 0; ui < sig.unary().size(); ++ui)
            S.set_unary(sig.unary()[ui], u, (diag >> (base + 2 * ui)) & 1u);
        for (int v = u + 1; v < L.total; ++v) {
            TypeCode code = pair_code(u, v);
            int sh = 2;
            for (size_t bi = 0; bi < sig.binary().size(); ++bi, sh += 2) {
                S.set_rel(sig.binary()[bi], u, v, (code >> sh) & 1u);
                S.set_rel(sig.binary()[bi], v, u, (code >> (sh + 1)) & 1u);
            }
        }
    }
    return S;
}

std::optional<GeneralClassification> classify_general_semigrid(const OrderedStructure& S) {
    int N = S.size();
    for (int m = 1; (m + 1) * 2 <= N; ++m) {
        if (N % (m + 1)) continue;
        int n = N / (m + 1) - 1;
        if (n < 1) continue;
        for (SOrient orient : {SOrient::IZeroFirst, SOrient::IZeroLast}) {
            GridLayout L{m, n, N, orient};
            GeneralScheme sch;
            sch.orient = orient;
            std::array<std::optional<TypeCode>, 3> depB, depCB;
            std::array<std::optional<TypeCode>, 9> depC;
            bool ok = true;
            for (int u = 0; u < N && ok; ++u) {
                auto [iu, ju] = L.point(u);
                for (int v = 0; v < N && ok; ++v) {
                    auto [iv, jv] = L.point(v);
                    TypeCode code = S.atp_code(u, v);
                    std::optional<TypeCode>* slot = nullptr;
                    if (iu == 0 && iv == 0)
                        slot = &depB[key_index(cmp_of(ju, jv))];
                    else if (iu != 0 && iv != 0)
                        slot = &depC[key_index(cmp_of(iu, iv)) * 3 + key_index(cmp_of(ju, jv))];
                    else if (iu != 0)
                        slot = &depCB[key_index(cmp_of(ju, jv))];
                    else
                        continue;
                    if (!*slot)
                        *slot = code;
                    else if (**slot != code)
                        ok = false;
                }
            }
            if (!ok) continue;
            // fill keys unrealized at these dimensions (only cell-cell keys
            // with distinct rows, when m = 1) with order-only codes carrying
            // the cells' unary bits
            int base = 2 + 2 * static_cast<int>(S.sig().binary().size());
            TypeCode unaryMask = 0;
            for (size_t ui = 0; ui < S.sig().unary().size(); ++ui)
                unaryMask |= 3u << (base + 2 * ui);
            TypeCode cellUnary = depC[0] ? (*depC[0] & unaryMask) : 0;
            auto fill = [&](std::optional<TypeCode>& slot, Cmp order, TypeCode extra) {
                if (!slot) slot = static_cast<TypeCode>(order) | extra;
            };
            fill(depB[key_index(Cmp::Equal)], Cmp::Equal, 0);
            fill(depB[key_index(Cmp::Less)], forced_order(Cmp::Less, orient), 0);
            fill(depB[key_index(Cmp::Greater)], forced_order(Cmp::Greater, orient), 0);
            for (Cmp c1 : {Cmp::Equal, Cmp::Less, Cmp::Greater})
                for (Cmp c2 : {Cmp::Equal, Cmp::Less, Cmp::Greater})
                    fill(depC[key_index(c1) * 3 + key_index(c2)],
                         forced_order(lex_cmp(c1, c2), orient), cellUnary);
            Cmp cellSide = orient == SOrient::IZeroFirst ? Cmp::Greater : Cmp::Less;
            for (int i = 0; i < 3; ++i) fill(depCB[i], cellSide, 0);
            for (int i = 0; i < 3; ++i) sch.depB[i] = *depB[i];
            for (int i = 0; i < 9; ++i) sch.depC[i] = *depC[i];
            for (int i = 0; i < 3; ++i) sch.depCB[i] = *depCB[i];
            if (!general_scheme_consistent(S.sig(), sch)) continue;
            return GeneralClassification{sch, m, n};
        }
    }
    return std::nullopt;
}

std::optional<Classification> classify_regular_semigrid(const OrderedStructure& S) {
    if (S.sig().is_graph()) {
        if (auto g = classify_graph_semigrid(S)) return Classification{*g};
    }
    if (auto g = classify_general_semigrid(S)) return Classification{*g};
    return std::nullopt;
}

bool is_homogeneous_coloring(const PairColoring& c, const std::vector<int>& rowIdx,
                             const std::vector<int>& colIdx) {
    std::map<std::pair<Cmp, Cmp>, int> byType;
    for (int r1 : rowIdx)
        for (int c1 : colIdx)
            for (int r2 : rowIdx)
                for (int c2 : colIdx) {
                    auto key = std::make_pair(cmp_of(r1, r2), cmp_of(c1, c2));
                    int col = c.color({r1, c1}, {r2, c2});
                    auto [it, fresh] = byType.emplace(key, col);
                    if (!fresh && it->second != col) return false;
                }
    return true;
}

namespace {

template <typename Fn>
bool for_each_subset(int n, int k, Fn&& fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return false;
    while (true) {
        if (fn(idx)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

std::optional<GridEmbedding> homogenize_grid(const PairColoring& c, int m, int n) {
    if (m < 1 || n < 1 || m > c.rows || n > c.cols)
        throw std::invalid_argument("homogenize_grid: target exceeds host dimensions");
    std::optional<GridEmbedding> out;
    for_each_subset(c.rows, m, [&](const std::vector<int>& rows) {
        return for_each_subset(c.cols, n, [&](const std::vector<int>& cols) {
            if (!is_homogeneous_coloring(c, rows, cols)) return false;
            out = GridEmbedding{rows, cols};
            return true;
        });
    });
    return out;
}

OrderedStructure semigrid_to_graph(const OrderedStructure& S) {
    auto cls = classify_general_semigrid(S);
    if (!cls) throw std::invalid_argument("semigrid_to_graph: input is not a regular semigrid");
    const auto& dep = cls->scheme.depCB;
    // choose the value class whose key set matches one of the four block
    // patterns; among candidates prefer the type carrying relation bits, so
    // graph inputs map to themselves
    const Cmp keys[3] = {Cmp::Less, Cmp::Equal, Cmp::Greater};
    TypeCode tau1 = 0;
    int bestBits = -1;
    for (int i = 0; i < 3; ++i) {
        TypeCode v = dep[key_index(keys[i])];
        std::set<int> cls_keys;
        for (int j = 0; j < 3; ++j)
            if (dep[key_index(keys[j])] == v) cls_keys.insert(key_index(keys[j]));
        std::set<int> le = {key_index(Cmp::Less), key_index(Cmp::Equal)};
        std::set<int> ge = {key_index(Cmp::Equal), key_index(Cmp::Greater)};
        std::set<int> eq = {key_index(Cmp::Equal)};
        std::set<int> ne = {key_index(Cmp::Less), key_index(Cmp::Greater)};
        if (cls_keys != eq && cls_keys != le && cls_keys != ge && cls_keys != ne) continue;
        int bits = 0;
        for (TypeCode rest = v >> 2; rest; rest >>= 1) bits += rest & 1;
        if (bits > bestBits) {
            bestBits = bits;
            tau1 = v;
        }
    }
    if (bestBits < 0) throw std::logic_error("semigrid_to_graph: no block-compatible type class");
    TypeCode tau1s = swap_type(S.sig(), tau1);
    OrderedStructure G(Signature::graph(), S.size());
    for (int a = 0; a < S.size(); ++a)
        for (int b = a + 1; b < S.size(); ++b) {
            TypeCode t = S.atp_code(a, b);
            if (t == tau1 || t == tau1s) G.add_edge(a, b);
        }
    return G;
}

}  // namespace twwlab
