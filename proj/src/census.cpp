#include "twwlab/census.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <set>
#include <thread>

#include "twwlab/semigrid.hpp"

namespace twwlab {

bool pattern_embeds(const OrderedStructure& host, const OrderedStructure& pattern) {
    if (!(host.sig() == pattern.sig()))
        throw std::invalid_argument("pattern_embeds: signatures must match");
    int hv = host.size(), pv = pattern.size();
    if (pv == 0) throw std::invalid_argument("pattern_embeds: empty pattern");
    if (pv > hv) return false;
    std::vector<int> map(pv, -1);
    std::function<bool(int, int)> go = [&](int pi, int from) -> bool {
        if (pi == pv) return true;
        for (int h = from; h <= hv - (pv - pi); ++h) {
            bool ok = pattern.atp_code(pi, pi) == host.atp_code(h, h);
            for (int pj = 0; pj < pi && ok; ++pj)
                if (pattern.atp_code(pj, pi) != host.atp_code(map[pj], h)) ok = false;
            if (!ok) continue;
            map[pi] = h;
            if (go(pi + 1, h + 1)) return true;
        }
        return false;
    };
    return go(0, 0);
}

namespace {

struct CellRef {
    int sym;       // -1 for unary slot marker
    int a, b;      // b unused for unary
    bool unarySlot;
};

// cells in row-major order per symbol block; graph kind uses the strict upper
// triangle of the single symbol
std::vector<CellRef> enumeration_cells(const Signature& sig, int n, StructureKind kind) {
    std::vector<CellRef> cells;
    if (kind == StructureKind::Graph) {
        if (!sig.is_graph())
            throw std::invalid_argument("enumerate_avoiding: graph kind requires a graph signature");
        int sym = sig.binary()[0];
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) cells.push_back({sym, a, b, false});
        return cells;
    }
    for (int sym : sig.binary())
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) cells.push_back({sym, a, b, false});
    for (int sym : sig.unary())
        for (int a = 0; a < n; ++a) cells.push_back({sym, a, 0, true});
    return cells;
}

// does some pattern embed into host using only vertices 0..maxV, with the
// embedding forced to include maxV
bool pattern_embeds_with_max(const OrderedStructure& host, const OrderedStructure& pattern,
                             int maxV) {
    int pv = pattern.size();
    if (pv > maxV + 1) return false;
    std::vector<int> map(pv, -1);
    std::function<bool(int, int)> go = [&](int pi, int from) -> bool {
        if (pi == pv) return map[pv - 1] == maxV;
        for (int h = from; h <= maxV - (pv - 1 - pi); ++h) {
            bool ok = pattern.atp_code(pi, pi) == host.atp_code(h, h);
            for (int pj = 0; pj < pi && ok; ++pj)
                if (pattern.atp_code(pj, pi) != host.atp_code(map[pj], h)) ok = false;
            if (!ok) continue;
            map[pi] = h;
            if (go(pi + 1, h + 1)) return true;
        }
        return false;
    };
    return go(0, 0);
}

struct EnumState {
    const ForbiddenSet& F;
    OrderedStructure work;
    const std::vector<CellRef>& cells;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool graphKind = true;

    void set_cell(const CellRef& c, bool v) {
        if (c.unarySlot)
            work.set_unary(c.sym, c.a, v);
        else if (graphKind)
            work.set_edge(c.sym, c.a, c.b, v);
        else
            work.set_rel(c.sym, c.a, c.b, v);
    }

    // vertex whose internal cells complete at cell index i, or -1
    int completed_vertex(size_t i) const {
        const CellRef& c = cells[i];
        if (graphKind && !c.unarySlot && c.b == c.a + 1) return c.b;
        return -1;
    }

    BigInt count(size_t i) {
        if (++nodes > budget) throw BudgetExceeded("enumerate_avoiding: node budget exceeded");
        if (i == cells.size()) {
            for (const auto& p : F.patterns)
                if (pattern_embeds(work, p)) return 0;
            return 1;
        }
        BigInt total = 0;
        for (int v = 0; v < 2; ++v) {
            set_cell(cells[i], v != 0);
            int done = completed_vertex(i);
            bool pruned = false;
            if (done >= 0)
                for (const auto& p : F.patterns)
                    if (pattern_embeds_with_max(work, p, done)) {
                        pruned = true;
                        break;
                    }
            if (!pruned) total += count(i + 1);
        }
        set_cell(cells[i], false);
        return total;
    }
};

}  // namespace

BigInt enumerate_avoiding(const ForbiddenSet& F, int n, const EnumOptions& opts) {
    if (n < 0) throw std::invalid_argument("enumerate_avoiding: negative n");
    Signature sig = F.patterns.empty() ? Signature::graph() : F.patterns[0].sig();
    for (const auto& p : F.patterns) {
        if (!(p.sig() == sig))
            throw std::invalid_argument("enumerate_avoiding: mixed pattern signatures");
        if (p.size() == 0) throw std::invalid_argument("enumerate_avoiding: empty pattern");
    }
    if (n == 0) return 1;
    auto cells = enumeration_cells(sig, n, opts.kind);
    int threads = std::max(1, opts.threads);
    if (threads == 1 || cells.size() < 2) {
        EnumState st{F, OrderedStructure(sig, n), cells, opts.nodeBudget, 0, opts.kind == StructureKind::Graph};
        return st.count(0);
    }
    // parallel over the first few cells; partial counts combine in task order
    int prefixBits = std::min<std::size_t>(10, cells.size());
    int taskCount = 1 << prefixBits;
    std::vector<BigInt> partial(taskCount, 0);
    std::vector<std::uint8_t> budgetHit(taskCount, 0);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int task = next.fetch_add(1);
            if (task >= taskCount) return;
            EnumState st{F, OrderedStructure(sig, n), cells, opts.nodeBudget / taskCount + 1, 0, opts.kind == StructureKind::Graph};
            bool viable = true;
            for (int i = 0; i < prefixBits && viable; ++i) {
                st.set_cell(cells[i], (task >> i) & 1);
                int done = st.completed_vertex(i);
                if (done >= 0)
                    for (const auto& p : F.patterns)
                        if (pattern_embeds_with_max(st.work, p, done)) viable = false;
            }
            if (!viable) continue;
            try {
                partial[task] = st.count(prefixBits);
            } catch (const BudgetExceeded&) {
                budgetHit[task] = 1;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (int t = 0; t < taskCount; ++t)
        if (budgetHit[t]) throw BudgetExceeded("enumerate_avoiding: node budget exceeded");
    BigInt total = 0;
    for (int t = 0; t < taskCount; ++t) total += partial[t];
    return total;
}

namespace {

BigInt factorial(int k) {
    BigInt f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

BigInt binomial(const BigInt& n, int k) {
    if (k < 0) return 0;
    BigInt num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= n - i;
        den *= i + 1;
    }
    return num / den;
}

}  // namespace

GrowthLb growth_lb(int n) {
    if (n < 0) throw std::invalid_argument("growth_lb: negative n");
    int k = n / 3;
    GrowthLb lb;
    lb.floorFact = factorial(k);
    lb.kPowK = 1;
    for (int i = 0; i < k; ++i) lb.kPowK *= k;
    if (k == 0) lb.kPowK = 1;
    lb.binom = binomial(BigInt(k) * k, k);
    return lb;
}

BigInt growth_conjecture_sum(int n) {
    if (n < 0) throw std::invalid_argument("growth_conjecture_sum: negative n");
    BigInt total = 0;
    for (int k = 0; 2 * k <= n; ++k) total += binomial(n, 2 * k) * factorial(k);
    return total;
}

OrderedStructure generate_Hpi(const std::vector<int>& pi) {
    int n = static_cast<int>(pi.size());
    std::vector<char> seen(n, 0);
    for (int v : pi) {
        if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("generate_Hpi: not a bijection");
        seen[v] = 1;
    }
    OrderedStructure H(Signature::graph(), 2 * n);
    for (int i = 0; i < n; ++i) H.add_edge(i, pi[i] + n);
    return H;
}

OrderedStructure build_Gpi(const std::vector<int>& pi) {
    int n = static_cast<int>(pi.size());
    if (n < 1) throw std::invalid_argument("build_Gpi: empty permutation");
    std::vector<char> seen(n, 0);
    for (int v : pi) {
        if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("build_Gpi: not a bijection");
        seen[v] = 1;
    }
    GraphScheme sch;
    sch.r = RType::Eq;
    sch.s = SOrient::IZeroFirst;
    sch.t = TFlag::Independent;
    sch.dirSet = 0;
    OrderedStructure G = generate_semigrid(sch, n, n);
    // first n column vertices plus one cell per column, in row pi(i)+1
    std::vector<int> keep;
    for (int i = 0; i < n; ++i) keep.push_back(i);  // (0, i)
    for (int i = 0; i < n; ++i) keep.push_back((pi[i] + 1) * (n + 1) + i);
    return G.induced(std::move(keep));
}

BigInt count_GS_family(int k) {
    if (k < 1 || k > 5) throw std::invalid_argument("count_GS_family: k must be in 1..5");
    GraphScheme sch;
    sch.r = RType::Eq;
    sch.s = SOrient::IZeroFirst;
    sch.t = TFlag::Independent;
    sch.dirSet = 0;
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    std::set<std::string> distinct;
    BigInt count = 0;
    do {
        std::vector<Cell> cells;
        for (int i = 0; i < k; ++i) cells.emplace_back(i + 1, perm[i] + 1);
        OrderedStructure G = generate_GS(sch, k, k, cells);
        if (!distinct.insert(write_obs(G)).second)
            throw std::logic_error("count_GS_family: collision between permutation encodings");
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

}  // namespace twwlab
