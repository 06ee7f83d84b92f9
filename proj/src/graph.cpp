#include "pforge/graph.hpp"
#include "pforge/errors.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace pforge {

int LabeledGraph::add_vertex(const Address& a) {
    auto [it, fresh] = index_.emplace(a, static_cast<int>(verts_.size()));
    if (!fresh) fail(ErrorKind::BadInput, "duplicate vertex");
    verts_.push_back(a);
    adj_.emplace_back();
    return it->second;
}

int LabeledGraph::ensure_vertex(const Address& a) {
    auto it = index_.find(a);
    if (it != index_.end()) return it->second;
    index_.emplace(a, static_cast<int>(verts_.size()));
    verts_.push_back(a);
    adj_.emplace_back();
    return static_cast<int>(verts_.size()) - 1;
}

void LabeledGraph::add_edge(const Address& a, const Address& b) {
    add_edge_idx(ensure_vertex(a), ensure_vertex(b));
}

void LabeledGraph::add_edge_idx(int i, int j) {
    if (i == j) fail(ErrorKind::BadInput, "loop edge");
    if (has_edge_idx(i, j)) return;
    adj_[i].push_back(j);
    adj_[j].push_back(i);
}

bool LabeledGraph::has_edge(const Address& a, const Address& b) const {
    auto i = find(a);
    auto j = find(b);
    if (!i || !j) return false;
    return has_edge_idx(*i, *j);
}

bool LabeledGraph::has_edge_idx(int i, int j) const {
    const auto& n = adj_[i];
    return std::find(n.begin(), n.end(), j) != n.end();
}

int LabeledGraph::index_of(const Address& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) fail(ErrorKind::UnknownVertex, "vertex not in graph");
    return it->second;
}

std::optional<int> LabeledGraph::find(const Address& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t LabeledGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& n : adj_) twice += n.size();
    return twice / 2;
}

void LabeledGraph::set_colour(const Address& a, ColourId c) {
    colours_[a] = c;
}

std::optional<ColourId> LabeledGraph::colour(const Address& a) const {
    auto it = colours_.find(a);
    if (it == colours_.end()) return std::nullopt;
    return it->second;
}

std::optional<ColourId> LabeledGraph::colour_idx(int i) const {
    return colour(verts_[i]);
}

std::vector<Address> LabeledGraph::vertices_sorted() const {
    std::vector<Address> out = verts_;
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<Address, Address>> LabeledGraph::edges_sorted() const {
    std::vector<std::pair<Address, Address>> out;
    for (int i = 0; i < vertex_count(); ++i)
        for (int j : adj_[i])
            if (i < j) {
                const Address& a = verts_[i];
                const Address& b = verts_[j];
                out.emplace_back(std::min(a, b), std::max(a, b));
            }
    std::sort(out.begin(), out.end());
    return out;
}

LabeledGraph LabeledGraph::induced(const std::vector<int>& keep) const {
    LabeledGraph out;
    std::vector<char> mark(verts_.size(), 0);
    for (int i : keep) mark[i] = 1;
    for (int i : keep) out.ensure_vertex(verts_[i]);
    for (int i : keep)
        for (int j : adj_[i])
            if (mark[j] && i < j) out.add_edge(verts_[i], verts_[j]);
    if (root_ && out.has_vertex(*root_)) out.set_root(*root_);
    for (const auto& [a, c] : colours_)
        if (out.has_vertex(a)) out.set_colour(a, c);
    return out;
}

LabeledGraph LabeledGraph::without_vertex(const Address& a) const {
    int drop = index_of(a);
    std::vector<int> keep;
    keep.reserve(verts_.size());
    for (int i = 0; i < vertex_count(); ++i)
        if (i != drop) keep.push_back(i);
    LabeledGraph out = induced(keep);
    if (root_ && *root_ == a) out.clear_root();
    return out;
}

std::vector<std::string> LabeledGraph::validate() const {
    std::vector<std::string> problems;
    if (root_ && !has_vertex(*root_)) problems.push_back("root is not a vertex");
    for (const auto& [a, c] : colours_) {
        auto i = find(a);
        if (!i) {
            problems.push_back("coloured vertex missing from graph");
            continue;
        }
        if (degree(*i) > 1) problems.push_back("coloured vertex is not a leaf");
    }
    return problems;
}

// ---------------------------------------------------------------------------

std::vector<LabeledGraph> components(const LabeledGraph& g) {
    int n = g.vertex_count();
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = ncomp;
        std::deque<int> q{s};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int w : g.neighbors(v))
                if (comp[w] < 0) {
                    comp[w] = ncomp;
                    q.push_back(w);
                }
        }
        ++ncomp;
    }
    std::vector<std::vector<int>> groups(ncomp);
    for (int i = 0; i < n; ++i) groups[comp[i]].push_back(i);
    std::vector<LabeledGraph> out;
    out.reserve(ncomp);
    for (auto& grp : groups) out.push_back(g.induced(grp));
    return out;
}

bool is_bridge(const LabeledGraph& g, const Address& x, const Address& y) {
    if (!g.has_edge(x, y)) fail(ErrorKind::NotAnEdge, "pair is not an edge");
    int xi = g.index_of(x), yi = g.index_of(y);
    // BFS from x avoiding the edge {x,y}.
    std::vector<char> seen(g.vertex_count(), 0);
    seen[xi] = 1;
    std::deque<int> q{xi};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : g.neighbors(v)) {
            if (v == xi && w == yi) continue;
            if (v == yi && w == xi) continue;
            if (!seen[w]) {
                seen[w] = 1;
                q.push_back(w);
            }
        }
    }
    return !seen[yi];
}

RootedGraph bridge_component(const LabeledGraph& g, const DirectedBridge& e) {
    if (!g.has_edge(e.tail, e.head)) fail(ErrorKind::NotAnEdge, "bridge pair is not an edge");
    if (!is_bridge(g, e.tail, e.head)) fail(ErrorKind::NotABridge, "edge is not a bridge");
    int head = g.index_of(e.head);
    int tail = g.index_of(e.tail);
    std::vector<char> seen(g.vertex_count(), 0);
    seen[head] = 1;
    std::deque<int> q{head};
    std::vector<int> keep{head};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : g.neighbors(v)) {
            if (v == head && w == tail) continue;
            if (!seen[w]) {
                seen[w] = 1;
                keep.push_back(w);
                q.push_back(w);
            }
        }
    }
    RootedGraph out;
    out.graph = g.induced(keep);
    out.graph.set_root(e.head);
    out.root = e.head;
    return out;
}

LabeledGraph ball(const LabeledGraph& host, const std::vector<Address>& core, int k) {
    std::vector<int> dist(host.vertex_count(), -1);
    std::deque<int> q;
    for (const Address& a : core) {
        int i = host.index_of(a);  // throws UnknownVertex
        if (dist[i] < 0) {
            dist[i] = 0;
            q.push_back(i);
        }
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (dist[v] == k) continue;
        for (int w : host.neighbors(v))
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
    }
    std::vector<int> keep;
    for (int i = 0; i < host.vertex_count(); ++i)
        if (dist[i] >= 0) keep.push_back(i);
    return host.induced(keep);
}

std::vector<Address> proper_leaves(const LabeledGraph& g) {
    std::vector<Address> out;
    for (int i = 0; i < g.vertex_count(); ++i) {
        if (g.degree(i) != 1) continue;
        int nb = g.neighbors(i)[0];
        if (g.degree(nb) >= 3) out.push_back(g.vertex(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

void BaseGraph::add_vertex(BaseId v) {
    adj_.try_emplace(v);
}

void BaseGraph::add_edge(BaseId a, BaseId b) {
    if (a == b) fail(ErrorKind::BadInput, "loop edge in base graph");
    add_vertex(a);
    add_vertex(b);
    if (has_edge(a, b)) return;
    adj_[a].push_back(b);
    adj_[b].push_back(a);
}

void BaseGraph::remove_vertex(BaseId v) {
    auto it = adj_.find(v);
    if (it == adj_.end()) return;
    for (BaseId w : it->second) {
        auto& n = adj_[w];
        n.erase(std::remove(n.begin(), n.end(), v), n.end());
    }
    adj_.erase(it);
}

bool BaseGraph::has_edge(BaseId a, BaseId b) const {
    auto it = adj_.find(a);
    if (it == adj_.end()) return false;
    return std::find(it->second.begin(), it->second.end(), b) != it->second.end();
}

const std::vector<BaseId>& BaseGraph::neighbors(BaseId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) fail(ErrorKind::UnknownVertex, "base vertex not present");
    return it->second;
}

std::vector<BaseId> BaseGraph::vertices() const {
    std::vector<BaseId> out;
    out.reserve(adj_.size());
    for (const auto& [v, _] : adj_) out.push_back(v);
    return out;
}

void BaseGraph::merge(const BaseGraph& other) {
    for (const auto& [v, nbrs] : other.adj_) {
        add_vertex(v);
        for (BaseId w : nbrs)
            if (v < w) add_edge(v, w);
    }
}

} // namespace pforge
