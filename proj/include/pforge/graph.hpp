#ifndef PFORGE_GRAPH_HPP
#define PFORGE_GRAPH_HPP

#include "pforge/address.hpp"

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

namespace pforge {

/**
 * Finite simple graph over addresses, with an optional root and a partial
 * colouring of leaves. This is the value type every finite-scale operation
 * (components, balls, isomorphism search, mii scans) works on; vertices are
 * interned so the algorithms run on dense indices.
 */
class LabeledGraph {
public:
    LabeledGraph() = default;

    int add_vertex(const Address& a);
    int ensure_vertex(const Address& a);
    void add_edge(const Address& a, const Address& b);
    void add_edge_idx(int i, int j);

    bool has_vertex(const Address& a) const { return index_.count(a) > 0; }
    bool has_edge(const Address& a, const Address& b) const;
    bool has_edge_idx(int i, int j) const;

    int index_of(const Address& a) const;
    std::optional<int> find(const Address& a) const;
    const Address& vertex(int i) const { return verts_[i]; }
    int vertex_count() const { return static_cast<int>(verts_.size()); }
    std::size_t edge_count() const;

    const std::vector<int>& neighbors(int i) const { return adj_[i]; }
    int degree(int i) const { return static_cast<int>(adj_[i].size()); }

    void set_root(const Address& a) { root_ = a; }
    void clear_root() { root_.reset(); }
    const std::optional<Address>& root() const { return root_; }

    void set_colour(const Address& a, ColourId c);
    std::optional<ColourId> colour(const Address& a) const;
    std::optional<ColourId> colour_idx(int i) const;
    const std::map<Address, ColourId>& colours() const { return colours_; }

    std::vector<Address> vertices_sorted() const;
    std::vector<std::pair<Address, Address>> edges_sorted() const;

    bool is_leaf_idx(int i) const { return degree(i) == 1; }

    /// Induced subgraph on the given vertex set; root/colours carried over
    /// where contained.
    LabeledGraph induced(const std::vector<int>& keep) const;

    /// Copy of the graph without one vertex.
    LabeledGraph without_vertex(const Address& a) const;

    /// Validation used by file import and promise structures: simplicity,
    /// colours on leaves only, root present.
    std::vector<std::string> validate() const;

private:
    std::vector<Address> verts_;
    std::unordered_map<Address, int, AddressHash> index_;
    std::vector<std::vector<int>> adj_;
    std::optional<Address> root_;
    std::map<Address, ColourId> colours_;
};

struct RootedGraph {
    LabeledGraph graph;
    Address root;
};

/// Directed bridge: an edge {tail,head} whose removal separates tail from head.
struct DirectedBridge {
    Address tail;
    Address head;
};

// ---- graph-core operations ------------------------------------------------

std::vector<LabeledGraph> components(const LabeledGraph& g);

/// Connected component of g - e containing e.head, rooted there.
/// Throws NotAnEdge / NotABridge.
RootedGraph bridge_component(const LabeledGraph& g, const DirectedBridge& e);

/// Induced subgraph on all vertices within distance <= k of `core`.
LabeledGraph ball(const LabeledGraph& host, const std::vector<Address>& core, int k);

/// Degree-1 vertices whose unique neighbour has degree >= 3.
std::vector<Address> proper_leaves(const LabeledGraph& g);

/// Edge e = {x,y} is a bridge of g.
bool is_bridge(const LabeledGraph& g, const Address& x, const Address& y);

// ---- lightweight finite graph over BaseId (construction bases) ------------

class BaseGraph {
public:
    void add_vertex(BaseId v);
    void add_edge(BaseId a, BaseId b);
    void remove_vertex(BaseId v);
    bool has_vertex(BaseId v) const { return adj_.count(v) > 0; }
    bool has_edge(BaseId a, BaseId b) const;
    const std::vector<BaseId>& neighbors(BaseId v) const;
    int degree(BaseId v) const { return static_cast<int>(neighbors(v).size()); }
    std::vector<BaseId> vertices() const;
    std::size_t size() const { return adj_.size(); }

    /// Merge another base graph into this one (disjoint vertex sets expected).
    void merge(const BaseGraph& other);

private:
    std::map<BaseId, std::vector<BaseId>> adj_;
};

} // namespace pforge

#endif
