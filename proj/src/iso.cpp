#include "pforge/iso.hpp"
#include "pforge/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace pforge {

namespace {

std::vector<int> bfs_dist(const LabeledGraph& g, int src) {
    std::vector<int> d(g.vertex_count(), -1);
    d[src] = 0;
    std::deque<int> q{src};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : g.neighbors(v))
            if (d[w] < 0) {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
    }
    return d;
}

// Iterated refinement: label = (seed, sorted multiset of neighbour labels).
// Both graphs are refined together so label ids are comparable.
std::vector<std::vector<int>> refine(const LabeledGraph& a, const LabeledGraph& b,
                                     const std::vector<long long>& seed_a,
                                     const std::vector<long long>& seed_b) {
    int na = a.vertex_count(), nb = b.vertex_count();
    std::vector<int> la(na), lb(nb);
    {
        std::map<long long, int> ids;
        for (int i = 0; i < na; ++i) ids.emplace(seed_a[i], 0);
        for (int i = 0; i < nb; ++i) ids.emplace(seed_b[i], 0);
        int next = 0;
        for (auto& [k, v] : ids) v = next++;
        for (int i = 0; i < na; ++i) la[i] = ids[seed_a[i]];
        for (int i = 0; i < nb; ++i) lb[i] = ids[seed_b[i]];
    }
    for (int round = 0; round < na + 2; ++round) {
        using Sig = std::pair<int, std::vector<int>>;
        auto signature = [](const LabeledGraph& g, const std::vector<int>& l, int v) {
            std::vector<int> nl;
            nl.reserve(g.neighbors(v).size());
            for (int w : g.neighbors(v)) nl.push_back(l[w]);
            std::sort(nl.begin(), nl.end());
            return Sig{l[v], std::move(nl)};
        };
        std::map<Sig, int> ids;
        std::vector<Sig> sa(na), sb(nb);
        for (int i = 0; i < na; ++i) sa[i] = signature(a, la, i);
        for (int i = 0; i < nb; ++i) sb[i] = signature(b, lb, i);
        for (int i = 0; i < na; ++i) ids.emplace(sa[i], 0);
        for (int i = 0; i < nb; ++i) ids.emplace(sb[i], 0);
        int next = 0;
        for (auto& [k, v] : ids) v = next++;
        std::vector<int> la2(na), lb2(nb);
        for (int i = 0; i < na; ++i) la2[i] = ids[sa[i]];
        for (int i = 0; i < nb; ++i) lb2[i] = ids[sb[i]];
        bool changed = (la2 != la) || (lb2 != lb);
        la.swap(la2);
        lb.swap(lb2);
        if (!changed) break;
    }
    return {la, lb};
}

struct Search {
    const LabeledGraph& a;
    const LabeledGraph& b;
    std::vector<int> la, lb;
    std::vector<int> order;          // domain vertices in assignment order
    std::vector<int> map_ab;         // partial map a -> b (-1 unset)
    std::vector<int> map_ba;

    bool feasible(int v, int w) const {
        if (la[v] != lb[w]) return false;
        for (int u : a.neighbors(v)) {
            int m = map_ab[u];
            if (m >= 0 && !b.has_edge_idx(w, m)) return false;
        }
        for (int u : b.neighbors(w)) {
            int m = map_ba[u];
            if (m >= 0 && !a.has_edge_idx(v, m)) return false;
        }
        return true;
    }

    bool run(std::size_t depth, const std::vector<int>& cand_order_b) {
        if (depth == order.size()) return true;
        int v = order[depth];
        for (int w : cand_order_b) {
            if (map_ba[w] >= 0) continue;
            if (!feasible(v, w)) continue;
            map_ab[v] = w;
            map_ba[w] = v;
            if (run(depth + 1, cand_order_b)) return true;
            map_ab[v] = -1;
            map_ba[w] = -1;
        }
        return false;
    }
};

} // namespace

std::optional<std::map<Address, Address>>
find_isomorphism(const LabeledGraph& a, const LabeledGraph& b, const IsoOptions& opt) {
    if (a.vertex_count() > opt.vertex_budget || b.vertex_count() > opt.vertex_budget)
        fail(ErrorKind::SizeLimitExceeded, "isomorphism search above vertex budget");
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count())
        return std::nullopt;
    if (opt.respect_root && (a.root().has_value() != b.root().has_value()))
        return std::nullopt;

    int na = a.vertex_count();
    std::vector<long long> seed_a(na), seed_b(na);

    std::vector<int> dist_a, dist_b;
    if (opt.respect_root && a.root()) {
        dist_a = bfs_dist(a, a.index_of(*a.root()));
        dist_b = bfs_dist(b, b.index_of(*b.root()));
    }
    auto seed = [&](const LabeledGraph& g, const std::vector<int>& dist, int i) -> long long {
        long long s = g.degree(i);
        if (!dist.empty()) s = s * 1000003 + (dist[i] + 1);
        if (opt.respect_colours) {
            auto c = g.colour_idx(i);
            s = s * 1000003 + (c ? static_cast<long long>(*c) + 1 : 0);
        }
        return s;
    };
    for (int i = 0; i < na; ++i) seed_a[i] = seed(a, dist_a, i);
    for (int i = 0; i < na; ++i) seed_b[i] = seed(b, dist_b, i);

    auto labels = refine(a, b, seed_a, seed_b);

    // label multisets must agree
    {
        std::vector<int> ca = labels[0], cb = labels[1];
        std::sort(ca.begin(), ca.end());
        std::sort(cb.begin(), cb.end());
        if (ca != cb) return std::nullopt;
    }

    Search s{a, b, labels[0], labels[1], {}, std::vector<int>(na, -1),
             std::vector<int>(na, -1)};

    // deterministic orders by address
    std::vector<int> ord_a(na), ord_b(na);
    for (int i = 0; i < na; ++i) ord_a[i] = ord_b[i] = i;
    std::sort(ord_a.begin(), ord_a.end(),
              [&](int x, int y) { return a.vertex(x) < a.vertex(y); });
    std::sort(ord_b.begin(), ord_b.end(),
              [&](int x, int y) { return b.vertex(x) < b.vertex(y); });

    // Order domain by (rare label class first, then address) to cut branching.
    std::map<int, int> class_size;
    for (int l : labels[0]) class_size[l]++;
    std::stable_sort(ord_a.begin(), ord_a.end(), [&](int x, int y) {
        return class_size[labels[0][x]] < class_size[labels[0][y]];
    });
    s.order = ord_a;

    if (opt.respect_root && a.root()) {
        int ra = a.index_of(*a.root());
        int rb = b.index_of(*b.root());
        if (s.la[ra] != s.lb[rb]) return std::nullopt;
        s.map_ab[ra] = rb;
        s.map_ba[rb] = ra;
        s.order.erase(std::remove(s.order.begin(), s.order.end(), ra), s.order.end());
    }

    if (!s.run(0, ord_b)) return std::nullopt;

    std::map<Address, Address> out;
    for (int i = 0; i < na; ++i) out.emplace(a.vertex(i), b.vertex(s.map_ab[i]));
    return out;
}

bool is_isomorphism(const LabeledGraph& a, const LabeledGraph& b,
                    const std::map<Address, Address>& f, const IsoOptions& opt) {
    if (static_cast<int>(f.size()) != a.vertex_count() || a.vertex_count() != b.vertex_count())
        return false;
    std::map<Address, Address> inverse;
    for (const auto& [x, y] : f) {
        if (!a.has_vertex(x) || !b.has_vertex(y)) return false;
        if (!inverse.emplace(y, x).second) return false;
    }
    for (const auto& [x, y] : f) {
        int xi = a.index_of(x);
        if (a.degree(xi) != b.degree(b.index_of(y))) return false;
        for (int w : a.neighbors(xi))
            if (!b.has_edge(y, f.at(a.vertex(w)))) return false;
    }
    if (opt.respect_root) {
        if (a.root().has_value() != b.root().has_value()) return false;
        if (a.root() && f.at(*a.root()) != *b.root()) return false;
    }
    if (opt.respect_colours) {
        for (const auto& [x, y] : f)
            if (a.colour(x) != b.colour(y)) return false;
    }
    return true;
}

} // namespace pforge
