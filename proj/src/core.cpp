#include "twwlab/core.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace twwlab {

Signature::Signature(std::vector<SymbolDecl> symbols) : symbols_(std::move(symbols)) {
    std::set<std::string> seen;
    for (int i = 0; i < static_cast<int>(symbols_.size()); ++i) {
        const auto& s = symbols_[i];
        if (s.arity != 1 && s.arity != 2)
            throw std::invalid_argument("signature: arity must be 1 or 2");
        if (s.name == "<=")
            throw std::invalid_argument("signature: \"<=\" is implicit and cannot be declared");
        if (s.name.empty() || !seen.insert(s.name).second)
            throw std::invalid_argument("signature: symbol names must be unique and nonempty");
        (s.arity == 2 ? binary_ : unary_).push_back(i);
    }
    if (2 + 2 * symbols_.size() > 32)
        throw std::invalid_argument("signature: too many symbols for packed type codes");
}

Signature Signature::graph() { return Signature({{"E", 2}}); }

int Signature::index_of(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(symbols_.size()); ++i)
        if (symbols_[i].name == name) return i;
    return -1;
}

TypeCode pack_type(const AtomicTypeCode& t) {
    TypeCode c = static_cast<TypeCode>(t.order);
    int shift = 2;
    for (auto [f, r] : t.binary) {
        c |= (TypeCode(f) << shift) | (TypeCode(r) << (shift + 1));
        shift += 2;
    }
    for (auto [ua, ub] : t.unary) {
        c |= (TypeCode(ua) << shift) | (TypeCode(ub) << (shift + 1));
        shift += 2;
    }
    return c;
}

Cmp type_order(TypeCode code) { return static_cast<Cmp>(code & 3u); }

TypeCode with_order(TypeCode code, Cmp order) {
    return (code & ~TypeCode(3)) | static_cast<TypeCode>(order);
}

TypeCode swap_type(const Signature& sig, TypeCode code) {
    Cmp o = type_order(code);
    Cmp so = o == Cmp::Less ? Cmp::Greater : (o == Cmp::Greater ? Cmp::Less : Cmp::Equal);
    TypeCode out = static_cast<TypeCode>(so);
    int shift = 2;
    for (size_t i = 0; i < sig.symbols().size(); ++i) {
        TypeCode lo = (code >> shift) & 1u, hi = (code >> (shift + 1)) & 1u;
        out |= (hi << shift) | (lo << (shift + 1));
        shift += 2;
    }
    return out;
}

OrderedStructure::OrderedStructure(Signature sig, int n) : sig_(std::move(sig)), n_(n) {
    if (n < 0) throw std::invalid_argument("structure size must be nonnegative");
    rels_.assign(sig_.binary().size(), std::vector<std::uint8_t>(size_t(n) * n, 0));
    sets_.assign(sig_.unary().size(), std::vector<std::uint8_t>(n, 0));
}

OrderedStructure OrderedStructure::graph(int n, const std::vector<std::pair<int, int>>& edges) {
    OrderedStructure S(Signature::graph(), n);
    for (auto [a, b] : edges) S.add_edge(a, b);
    return S;
}

void OrderedStructure::check_index(int a) const {
    if (a < 0 || a >= n_) throw std::out_of_range("vertex index out of range");
}

namespace {
int binary_slot(const Signature& sig, int sym) {
    const auto& b = sig.binary();
    for (int i = 0; i < static_cast<int>(b.size()); ++i)
        if (b[i] == sym) return i;
    throw std::invalid_argument("symbol is not binary");
}
int unary_slot(const Signature& sig, int sym) {
    const auto& u = sig.unary();
    for (int i = 0; i < static_cast<int>(u.size()); ++i)
        if (u[i] == sym) return i;
    throw std::invalid_argument("symbol is not unary");
}
}  // namespace

bool OrderedStructure::rel(int sym, int a, int b) const {
    check_index(a);
    check_index(b);
    return rels_[binary_slot(sig_, sym)][size_t(a) * n_ + b] != 0;
}

void OrderedStructure::set_rel(int sym, int a, int b, bool v) {
    check_index(a);
    check_index(b);
    rels_[binary_slot(sig_, sym)][size_t(a) * n_ + b] = v ? 1 : 0;
}

void OrderedStructure::set_edge(int sym, int a, int b, bool v) {
    if (a == b) throw std::invalid_argument("loops are not edges");
    set_rel(sym, a, b, v);
    set_rel(sym, b, a, v);
}

bool OrderedStructure::unary(int sym, int a) const {
    check_index(a);
    return sets_[unary_slot(sig_, sym)][a] != 0;
}

void OrderedStructure::set_unary(int sym, int a, bool v) {
    check_index(a);
    sets_[unary_slot(sig_, sym)][a] = v ? 1 : 0;
}

bool OrderedStructure::edge(int a, int b) const {
    if (sig_.binary().empty()) throw std::invalid_argument("structure has no binary symbol");
    if (a == b) return false;
    check_index(a);
    check_index(b);
    return rels_[0][size_t(a) * n_ + b] != 0;
}

void OrderedStructure::add_edge(int a, int b) {
    if (sig_.binary().empty()) throw std::invalid_argument("structure has no binary symbol");
    set_edge(sig_.binary()[0], a, b, true);
}

AtomicTypeCode OrderedStructure::atp(int a, int b) const {
    check_index(a);
    check_index(b);
    AtomicTypeCode t;
    t.order = a == b ? Cmp::Equal : (a < b ? Cmp::Less : Cmp::Greater);
    for (size_t i = 0; i < rels_.size(); ++i)
        t.binary.emplace_back(rels_[i][size_t(a) * n_ + b] != 0, rels_[i][size_t(b) * n_ + a] != 0);
    for (size_t i = 0; i < sets_.size(); ++i)
        t.unary.emplace_back(sets_[i][a] != 0, sets_[i][b] != 0);
    return t;
}

TypeCode OrderedStructure::atp_code(int a, int b) const {
    check_index(a);
    check_index(b);
    TypeCode c = a == b ? 0u : (a < b ? 1u : 2u);
    int shift = 2;
    for (size_t i = 0; i < rels_.size(); ++i) {
        c |= (TypeCode(rels_[i][size_t(a) * n_ + b]) << shift) |
             (TypeCode(rels_[i][size_t(b) * n_ + a]) << (shift + 1));
        shift += 2;
    }
    for (size_t i = 0; i < sets_.size(); ++i) {
        c |= (TypeCode(sets_[i][a]) << shift) | (TypeCode(sets_[i][b]) << (shift + 1));
        shift += 2;
    }
    return c;
}

OrderedStructure OrderedStructure::induced(std::vector<int> keep) const {
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw std::invalid_argument("induced: duplicate vertices");
    for (int v : keep) check_index(v);
    OrderedStructure out(sig_, static_cast<int>(keep.size()));
    for (size_t s = 0; s < rels_.size(); ++s)
        for (size_t i = 0; i < keep.size(); ++i)
            for (size_t j = 0; j < keep.size(); ++j)
                out.rels_[s][i * keep.size() + j] = rels_[s][size_t(keep[i]) * n_ + keep[j]];
    for (size_t s = 0; s < sets_.size(); ++s)
        for (size_t i = 0; i < keep.size(); ++i)
            out.sets_[s][i] = sets_[s][keep[i]];
    return out;
}

OrderedStructure OrderedStructure::reordered(const std::vector<int>& order) const {
    if (static_cast<int>(order.size()) != n_)
        throw std::invalid_argument("reordered: permutation size mismatch");
    std::vector<char> seen(n_, 0);
    for (int v : order) {
        check_index(v);
        if (seen[v]++) throw std::invalid_argument("reordered: not a permutation");
    }
    OrderedStructure out(sig_, n_);
    for (size_t s = 0; s < rels_.size(); ++s)
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                out.rels_[s][size_t(i) * n_ + j] = rels_[s][size_t(order[i]) * n_ + order[j]];
    for (size_t s = 0; s < sets_.size(); ++s)
        for (int i = 0; i < n_; ++i) out.sets_[s][i] = sets_[s][order[i]];
    return out;
}

bool OrderedStructure::operator==(const OrderedStructure& o) const {
    return sig_ == o.sig_ && n_ == o.n_ && rels_ == o.rels_ && sets_ == o.sets_;
}

int types_count(const OrderedStructure& S, const std::vector<int>& A, const std::vector<int>& B) {
    if (A.empty() || B.empty()) throw std::invalid_argument("types_count: empty side");
    std::set<std::vector<TypeCode>> rows;
    for (int a : A) {
        std::vector<TypeCode> row;
        row.reserve(B.size());
        for (int b : B) row.push_back(S.atp_code(a, b));
        rows.insert(std::move(row));
    }
    return static_cast<int>(rows.size());
}

bool is_homogeneous(const OrderedStructure& S, const std::vector<int>& X, const std::vector<int>& Y) {
    if (X.empty() || Y.empty()) throw std::invalid_argument("is_homogeneous: empty side");
    std::set<int> xs(X.begin(), X.end());
    for (int y : Y)
        if (xs.count(y)) throw std::invalid_argument("is_homogeneous: sides overlap");
    // both type counts are 1 exactly when the X x Y type block is constant
    TypeCode first = S.atp_code(X[0], Y[0]);
    for (int x : X)
        for (int y : Y)
            if (S.atp_code(x, y) != first) return false;
    return true;
}

Partition Partition::singletons(int n) {
    Partition P;
    for (int i = 0; i < n; ++i) P.blocks.push_back({i});
    return P;
}

void Partition::validate(int n) const {
    std::vector<char> seen(n, 0);
    int total = 0;
    for (const auto& b : blocks) {
        if (b.empty()) throw std::invalid_argument("partition: empty block");
        for (int v : b) {
            if (v < 0 || v >= n) throw std::invalid_argument("partition: element out of range");
            if (seen[v]++) throw std::invalid_argument("partition: overlapping blocks");
            ++total;
        }
    }
    if (total != n) throw std::invalid_argument("partition: does not cover the domain");
}

std::vector<std::uint8_t> Partition::canonical_key(int n) const {
    std::vector<int> id(n, -1);
    for (size_t b = 0; b < blocks.size(); ++b)
        for (int v : blocks[b]) id[v] = static_cast<int>(b);
    std::vector<int> remap(blocks.size(), -1);
    std::vector<std::uint8_t> key(n);
    int next = 0;
    for (int v = 0; v < n; ++v) {
        if (remap[id[v]] < 0) remap[id[v]] = next++;
        key[v] = static_cast<std::uint8_t>(remap[id[v]]);
    }
    return key;
}

void ConvexPartition::validate() const {
    if (n <= 0) throw std::invalid_argument("convex partition: empty domain");
    int prev = 0;
    for (int c : cuts) {
        if (c <= prev || c >= n) throw std::invalid_argument("convex partition: bad cut positions");
        prev = c;
    }
}

std::pair<int, int> ConvexPartition::block(int i) const {
    int lo = i == 0 ? 0 : cuts[i - 1];
    int hi = i == parts() - 1 ? n : cuts[i];
    return {lo, hi};
}

std::vector<int> ConvexPartition::block_elems(int i) const {
    auto [lo, hi] = block(i);
    std::vector<int> out(hi - lo);
    for (int v = lo; v < hi; ++v) out[v - lo] = v;
    return out;
}

int red_degree(const OrderedStructure& S, const Partition& P) {
    P.validate(S.size());
    int p = static_cast<int>(P.blocks.size());
    std::vector<std::vector<char>> hom(p, std::vector<char>(p, 1));
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            TypeCode first = S.atp_code(P.blocks[i][0], P.blocks[j][0]);
            bool h = true;
            for (int x : P.blocks[i]) {
                for (int y : P.blocks[j])
                    if (S.atp_code(x, y) != first) {
                        h = false;
                        break;
                    }
                if (!h) break;
            }
            hom[i][j] = hom[j][i] = h ? 1 : 0;
        }
    int best = 0;
    for (int i = 0; i < p; ++i) {
        int d = 0;
        for (int j = 0; j < p; ++j)
            if (j != i && !hom[i][j]) ++d;
        best = std::max(best, d);
    }
    return best;
}

std::vector<Partition> contraction_partitions(const OrderedStructure& S, const ContractionSequence& seq) {
    int n = S.size();
    if (static_cast<int>(seq.merges.size()) != std::max(0, n - 1))
        throw std::invalid_argument("contraction sequence: expected n-1 merges");
    std::vector<int> blockOf(n);
    std::vector<std::vector<int>> blocks(n);
    for (int i = 0; i < n; ++i) {
        blockOf[i] = i;
        blocks[i] = {i};
    }
    std::vector<Partition> chain;
    auto snapshot = [&]() {
        Partition P;
        for (auto& b : blocks)
            if (!b.empty()) P.blocks.push_back(b);
        chain.push_back(std::move(P));
    };
    snapshot();
    for (auto [a, b] : seq.merges) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw std::invalid_argument("contraction sequence: representative out of range");
        int ba = blockOf[a], bb = blockOf[b];
        if (ba == bb) throw std::invalid_argument("contraction sequence: representatives in the same block");
        for (int v : blocks[bb]) {
            blocks[ba].push_back(v);
            blockOf[v] = ba;
        }
        std::sort(blocks[ba].begin(), blocks[ba].end());
        blocks[bb].clear();
        snapshot();
    }
    return chain;
}

int verify_contraction_sequence(const OrderedStructure& S, const ContractionSequence& seq) {
    int best = 0;
    for (const auto& P : contraction_partitions(S, seq)) best = std::max(best, red_degree(S, P));
    return best;
}

std::vector<int> order_from_contraction(const OrderedStructure& S, const ContractionSequence& seq) {
    int n = S.size();
    if (static_cast<int>(seq.merges.size()) != std::max(0, n - 1))
        throw std::invalid_argument("contraction sequence: expected n-1 merges");
    // binary forest; children ordered so the subtree with the smaller minimum
    // comes first, which keeps already-convex chains in place
    struct Node {
        int left = -1, right = -1, leaf = -1, min = 0;
    };
    std::vector<Node> nodes;
    std::vector<int> rootOf(n), blockOf(n);
    for (int i = 0; i < n; ++i) {
        nodes.push_back({-1, -1, i, i});
        rootOf[i] = i;
        blockOf[i] = i;
    }
    std::vector<int> blockNode(n);
    for (int i = 0; i < n; ++i) blockNode[i] = i;
    std::vector<std::vector<int>> members(n);
    for (int i = 0; i < n; ++i) members[i] = {i};
    for (auto [a, b] : seq.merges) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw std::invalid_argument("contraction sequence: representative out of range");
        int ba = blockOf[a], bb = blockOf[b];
        if (ba == bb) throw std::invalid_argument("contraction sequence: representatives in the same block");
        int na = blockNode[ba], nb = blockNode[bb];
        Node parent;
        if (nodes[na].min < nodes[nb].min) {
            parent.left = na;
            parent.right = nb;
        } else {
            parent.left = nb;
            parent.right = na;
        }
        parent.min = std::min(nodes[na].min, nodes[nb].min);
        nodes.push_back(parent);
        int pid = static_cast<int>(nodes.size()) - 1;
        for (int v : members[bb]) {
            members[ba].push_back(v);
            blockOf[v] = ba;
        }
        members[bb].clear();
        blockNode[ba] = pid;
    }
    // collect leaves left-to-right from the final root
    std::vector<int> order;
    order.reserve(n);
    if (n > 0) {
        std::vector<int> stack{blockNode[blockOf[0]]};
        while (!stack.empty()) {
            int id = stack.back();
            stack.pop_back();
            if (nodes[id].leaf >= 0) {
                order.push_back(nodes[id].leaf);
            } else {
                stack.push_back(nodes[id].right);
                stack.push_back(nodes[id].left);
            }
        }
    }
    return order;
}

ContractionSequence relabel_sequence(const ContractionSequence& seq, const std::vector<int>& order) {
    std::vector<int> pos(order.size());
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
    ContractionSequence out;
    for (auto [a, b] : seq.merges) out.merges.emplace_back(pos[a], pos[b]);
    return out;
}

std::string write_obs(const OrderedStructure& S) {
    std::ostringstream out;
    out << "obs v1\n";
    out << "sig";
    for (const auto& s : S.sig().symbols()) out << ' ' << s.name << ':' << s.arity;
    out << "\n";
    out << "n " << S.size() << "\n";
    for (int sym : S.sig().binary()) {
        out << "rel " << S.sig().symbols()[sym].name << "\n";
        for (int a = 0; a < S.size(); ++a) {
            for (int b = 0; b < S.size(); ++b) out << (S.rel(sym, a, b) ? '1' : '0');
            out << "\n";
        }
    }
    for (int sym : S.sig().unary()) {
        out << "set " << S.sig().symbols()[sym].name << "\n";
        for (int a = 0; a < S.size(); ++a) out << (S.unary(sym, a) ? '1' : '0');
        out << "\n";
    }
    return out.str();
}

namespace {
std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}
}  // namespace

OrderedStructure read_obs(const std::string& text) {
    auto lines = split_lines(text);
    size_t at = 0;
    auto next = [&]() -> const std::string& {
        if (at >= lines.size()) throw std::runtime_error("obs: unexpected end of file");
        return lines[at++];
    };
    if (next() != "obs v1") throw std::runtime_error("obs: missing header");
    std::istringstream sigLine(next());
    std::string tok;
    sigLine >> tok;
    if (tok != "sig") throw std::runtime_error("obs: missing sig line");
    std::vector<SymbolDecl> symbols;
    while (sigLine >> tok) {
        auto colon = tok.rfind(':');
        if (colon == std::string::npos) throw std::runtime_error("obs: bad symbol declaration");
        symbols.push_back({tok.substr(0, colon), std::stoi(tok.substr(colon + 1))});
    }
    std::istringstream nLine(next());
    int n = -1;
    nLine >> tok >> n;
    if (tok != "n" || n < 0) throw std::runtime_error("obs: missing n line");
    Signature sig(symbols);
    OrderedStructure S(sig, n);
    auto read_bits = [&](int count) {
        const std::string& row = next();
        if (static_cast<int>(row.size()) != count) throw std::runtime_error("obs: bad row length");
        for (char c : row)
            if (c != '0' && c != '1') throw std::runtime_error("obs: matrix entries must be 0/1");
        return row;
    };
    for (int sym : sig.binary()) {
        std::istringstream relLine(next());
        std::string kw, name;
        relLine >> kw >> name;
        if (kw != "rel" || name != sig.symbols()[sym].name)
            throw std::runtime_error("obs: rel blocks must follow signature order");
        for (int a = 0; a < n; ++a) {
            std::string row = read_bits(n);
            for (int b = 0; b < n; ++b) S.set_rel(sym, a, b, row[b] == '1');
        }
    }
    for (int sym : sig.unary()) {
        std::istringstream setLine(next());
        std::string kw, name;
        setLine >> kw >> name;
        if (kw != "set" || name != sig.symbols()[sym].name)
            throw std::runtime_error("obs: set blocks must follow signature order");
        std::string row = read_bits(n);
        for (int a = 0; a < n; ++a) S.set_unary(sym, a, row[a] == '1');
    }
    if (at != lines.size()) throw std::runtime_error("obs: trailing content");
    return S;
}

std::string write_sequence(const ContractionSequence& seq, int redDegree) {
    std::ostringstream out;
    for (auto [a, b] : seq.merges) out << "merge " << a << ' ' << b << "\n";
    out << "# red-degree " << redDegree << "\n";
    return out.str();
}

ContractionSequence read_sequence(const std::string& text) {
    ContractionSequence seq;
    for (const auto& line : split_lines(text)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream in(line);
        std::string kw;
        int a, b;
        if (!(in >> kw >> a >> b) || kw != "merge")
            throw std::runtime_error("sequence: expected 'merge a b' lines");
        seq.merges.emplace_back(a, b);
    }
    return seq;
}

}  // namespace twwlab
