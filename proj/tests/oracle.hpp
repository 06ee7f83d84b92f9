#ifndef PFORGE_TESTS_ORACLE_HPP
#define PFORGE_TESTS_ORACLE_HPP

// Test-only brute-force oracles, independent of the library's path-walking
// implementations: enumerate every simple path and filter by the definition.

#include "pforge/graph.hpp"

#include <random>
#include <set>
#include <vector>

namespace pforge::oracle {

inline void all_paths_from(const LabeledGraph& g, std::vector<int>& path, std::vector<char>& used,
                           std::vector<std::vector<int>>& out) {
    out.push_back(path);
    int cur = path.back();
    for (int w : g.neighbors(cur)) {
        if (used[w]) continue;
        used[w] = 1;
        path.push_back(w);
        all_paths_from(g, path, used, out);
        path.pop_back();
        used[w] = 0;
    }
}

/// Every simple path of length >= 1 as a vertex index sequence (one direction
/// per path, the lexicographically smaller one).
inline std::vector<std::vector<int>> all_paths(const LabeledGraph& g) {
    std::vector<std::vector<int>> raw;
    for (int s = 0; s < g.vertex_count(); ++s) {
        std::vector<int> path{s};
        std::vector<char> used(g.vertex_count(), 0);
        used[s] = 1;
        all_paths_from(g, path, used, raw);
    }
    std::vector<std::vector<int>> out;
    for (auto& p : raw) {
        if (p.size() < 2) continue;
        std::vector<int> r(p.rbegin(), p.rend());
        if (p <= r) out.push_back(p);
    }
    return out;
}

/// Brute-force finite mii-paths: internal degrees 2, endpoint degrees != 2.
inline std::vector<std::vector<Address>> mii_paths(const LabeledGraph& g) {
    std::vector<std::vector<Address>> out;
    for (const auto& p : all_paths(g)) {
        if (g.degree(p.front()) == 2 || g.degree(p.back()) == 2) continue;
        bool ok = true;
        for (std::size_t i = 1; i + 1 < p.size(); ++i)
            if (g.degree(p[i]) != 2) ok = false;
        if (!ok) continue;
        std::vector<Address> path;
        for (int i : p) path.push_back(g.vertex(i));
        out.push_back(path);
    }
    return out;
}

inline std::set<int> mii_spectrum(const LabeledGraph& g) {
    std::set<int> out;
    for (const auto& p : oracle::mii_paths(g)) out.insert(static_cast<int>(p.size()) - 1);
    return out;
}

/// Deterministic random simple graph on n named vertices.
inline LabeledGraph random_graph(std::mt19937& rng, int n, double edge_prob,
                                 const BaseRegistry& reg_unused = {}) {
    (void)reg_unused;
    LabeledGraph g;
    std::vector<Address> vs;
    for (int i = 0; i < n; ++i) {
        Address a;
        a.steps.push_back(Step{Step::Kind::At, static_cast<std::uint32_t>(i)});
        vs.push_back(a);
        g.ensure_vertex(a);
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng) < edge_prob) g.add_edge(vs[i], vs[j]);
    return g;
}

/// Random labeled tree from a Pruefer-like attachment process.
inline LabeledGraph random_tree(std::mt19937& rng, int n) {
    LabeledGraph g;
    std::vector<Address> vs;
    for (int i = 0; i < n; ++i) {
        Address a;
        a.steps.push_back(Step{Step::Kind::At, static_cast<std::uint32_t>(i)});
        vs.push_back(a);
        g.ensure_vertex(a);
    }
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        g.add_edge(vs[i], vs[pick(rng)]);
    }
    return g;
}

/// All labeled trees on n vertices via Pruefer sequences (n <= 7 in tests).
inline std::vector<LabeledGraph> all_trees(int n) {
    std::vector<LabeledGraph> out;
    if (n == 1 || n == 2) {
        LabeledGraph g;
        Address a, b;
        a.steps.push_back(Step{Step::Kind::At, 0});
        g.ensure_vertex(a);
        if (n == 2) {
            b.steps.push_back(Step{Step::Kind::At, 1});
            g.add_edge(a, b);
        }
        out.push_back(g);
        return out;
    }
    std::vector<int> seq(n - 2, 0);
    while (true) {
        // decode the Pruefer sequence
        std::vector<int> deg(n, 1);
        for (int x : seq) deg[x]++;
        LabeledGraph g;
        std::vector<Address> vs;
        for (int i = 0; i < n; ++i) {
            Address a;
            a.steps.push_back(Step{Step::Kind::At, static_cast<std::uint32_t>(i)});
            vs.push_back(a);
            g.ensure_vertex(a);
        }
        std::vector<int> degc = deg;
        std::set<int> leaves;
        for (int i = 0; i < n; ++i)
            if (degc[i] == 1) leaves.insert(i);
        for (int x : seq) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            g.add_edge(vs[leaf], vs[x]);
            if (--degc[x] == 1) leaves.insert(x);
        }
        int u = *leaves.begin();
        int v = *std::next(leaves.begin());
        g.add_edge(vs[u], vs[v]);
        out.push_back(g);
        // next sequence
        int i = n - 3;
        while (i >= 0 && seq[i] == n - 1) seq[i--] = 0;
        if (i < 0) break;
        seq[i]++;
    }
    return out;
}

} // namespace pforge::oracle

#endif
