#ifndef PFORGE_SELFSIM_HPP
#define PFORGE_SELFSIM_HPP

#include "pforge/address.hpp"
#include "pforge/graph.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace pforge {

struct ColourInfo {
    std::string name;       // "R0", "B0", "Rf0", "Bf0", "ray", ...
    int stage = 0;          // stage the colour was introduced at
    bool fside = false;     // colour of F-tree leaves
    bool structural = false;// not a promise family (ray tails); always expandable
};

/// Base-level dictionary used componentwise on addresses. Forward images are
/// unique; a value may have several preimages (the G- and H-side leaf classes
/// share F targets), so the backward direction returns candidate sets that the
/// caller filters by scope.
class BiDict {
public:
    void add(BaseId a, BaseId b);
    std::optional<BaseId> fwd(BaseId a) const;
    const std::vector<BaseId>* bwd(BaseId b) const;
    const std::map<BaseId, BaseId>& entries() const { return fwd_; }

private:
    std::map<BaseId, BaseId> fwd_;
    std::map<BaseId, std::vector<BaseId>> bwd_;
};

struct Presentation;

/**
 * A ray-product gluing applied on expansion. `f` is the (overlay-free)
 * presentation of a tree F; the overlay materializes F x N (or F itself when
 * ray_product is false) and identifies level-0 vertices with host vertices:
 * either the unique neighbours of glue-coloured leaves (via the universe's
 * componentwise psi dictionary) or an explicit pair list.
 */
struct Overlay {
    std::string tag;
    std::shared_ptr<const Presentation> f;
    bool ray_product = true;
    std::vector<ColourId> glue_colours;
    std::vector<std::pair<Address, Address>> glue_pairs;  // host vertex <-> F vertex
    /// Base ids (within the owner scope) this overlay serves: a leaf belongs
    /// to the overlay only if the first step of its scope-relative address
    /// lies in `home`. Empty means the whole scope.
    std::set<BaseId> home;

    bool serves(BaseId first_component) const {
        return home.empty() || home.count(first_component) > 0;
    }
};

/// Pattern bound to a colour: behind every leaf of that colour grows a copy of
/// this rooted graph (the pattern root is identified with the leaf).
struct Pattern {
    ColourId colour = kNoColour;
    BaseGraph graph;
    BaseId root = kNoBase;
    std::map<BaseId, ColourId> typed;
    std::vector<OverlayId> overlays;
};

/// Shared construction-wide state: the base-vertex registry, colour table,
/// bound patterns, overlay definitions, and the psi dictionary.
struct Universe {
    BaseRegistry reg;
    std::vector<ColourInfo> colours;
    std::map<ColourId, Pattern> patterns;
    std::vector<Overlay> overlay_defs;
    BiDict psi;

    ColourId add_colour(std::string name, int stage, bool fside, bool structural = false);
    OverlayId add_overlay(Overlay o);
    const ColourInfo& colour(ColourId c) const { return colours.at(c); }
    std::optional<ColourId> colour_by_name(const std::string& n) const;

    /// Colours reachable as typed leaves inside the recursive expansion of
    /// pattern(c) (including c's own pattern leaves), used when splitting
    /// presentations into components.
    std::set<ColourId> reachable_colours(ColourId c, int stage_limit) const;
};

struct Presentation {
    std::shared_ptr<Universe> uni;
    BaseGraph base;
    std::map<BaseId, ColourId> typed;
    std::vector<OverlayId> overlays;
    int stage = 0;  // expand colour c iff bound and (c.stage < stage or structural)
    std::optional<Address> root;

    bool expandable(ColourId c) const;
};

struct FrontierInfo {
    int eventual_degree = 0;
    ColourId pending = kNoColour;
};

struct Truncation {
    LabeledGraph graph;
    std::map<Address, FrontierInfo> frontier;
    std::shared_ptr<const Presentation> pres;

    bool is_frontier(const Address& a) const { return frontier.count(a) > 0; }
    bool complete(const Address& a) const { return graph.has_vertex(a) && !is_frontier(a); }
};

/**
 * Lazy neighbour oracle over a presentation. Every finite-scale question
 * (balls, spectra, end estimates, witness certificates) is answered by
 * bounded BFS through this oracle; addresses are canonical, so regions
 * materialized twice agree vertex for vertex.
 */
class Materializer {
public:
    explicit Materializer(std::shared_ptr<const Presentation> p) : pres_(std::move(p)) {}

    const std::vector<Address>& neighbors(const Address& a);
    bool contains(const Address& a);
    std::optional<ColourId> colour_of(const Address& a);
    int eventual_degree(const Address& a) { return static_cast<int>(neighbors(a).size()); }

    /// Pending expansion colour if `a` is a typed leaf that still expands.
    std::optional<ColourId> pending_colour(const Address& a);

    const Presentation& pres() const { return *pres_; }

    /// All base-level vertex addresses plus the overlays' level-0 columns
    /// (the depth-0 region; canonical addresses only).
    std::vector<Address> base_vertices();

    std::shared_ptr<const Presentation> pres_ptr() const { return pres_; }

private:
    struct WalkScope {
        const BaseGraph* graph;
        const std::map<BaseId, ColourId>* typed;
        const std::vector<OverlayId>* overlays;
        BaseId root;          // kNoBase at top
        std::size_t prefix;   // number of address steps consumed to enter
    };
    struct Walk {
        Address src;
        std::vector<WalkScope> chain;
        bool overlay = false;
        BaseId term = kNoBase;        // base terminal
        // overlay terminal:
        OverlayId ovl = 0;
        std::size_t ovl_scope = 0;    // index into chain
        Address faddr;                // F-side vertex address
        int level = 0;
    };

    std::optional<Walk> walk(const Address& a) const;
    std::optional<WalkScope> walk_prefix_scope(const Address& prefix) const;
    void emit_base_neighbors(const Walk& w, std::vector<Address>& out);
    void emit_overlay_neighbors(const Walk& w, std::vector<Address>& out);
    void emit_merge_edges_for_leaf(const Address& leaf_abs, std::vector<Address>& out);
    Address canonical_level0(const Address& owner_prefix, OverlayId oid, const Address& faddr);
    std::optional<Address> psi_bwd_in_scope(const Walk& w, std::size_t scope_idx, OverlayId oid,
                                            const Address& faddr);
    std::optional<Address> psi_bwd_search(const Address& owner_prefix, OverlayId oid,
                                          const Address& faddr);

    std::shared_ptr<const Presentation> pres_;
    std::unordered_map<Address, std::vector<Address>, AddressHash> cache_;
    std::map<OverlayId, std::shared_ptr<Materializer>> fmats_;
    Materializer* fmat(OverlayId oid);
};

// ---- operations ------------------------------------------------------------

struct ExpandOptions {
    long vertex_budget = 2'000'000;
    int depth_cap = 64;
};

/// `depth` synchronized one-step expansions of all frontier leaves, overlays
/// applied level by level.
Truncation expand(std::shared_ptr<const Presentation> p, int depth, const ExpandOptions& = {});

/// Exact ball of radius r around `center`; every vertex at distance < r is
/// complete.
Truncation truncate_ball(std::shared_ptr<const Presentation> p, const Address& center, int r,
                         const ExpandOptions& = {});

/// Ball around several seeds.
Truncation truncate_ball_multi(std::shared_ptr<const Presentation> p,
                               const std::vector<Address>& seeds, int r,
                               const ExpandOptions& = {});

/// Ball built through an existing materializer (shares its neighbour cache).
Truncation truncate_with(Materializer& mat, const std::vector<Address>& seeds, int r,
                         const ExpandOptions& = {});

/// Presentation of the vertex-deleted graph; v must be a base vertex.
Presentation delete_vertex(const Presentation& p, const Address& v);

/// Split a presentation into its connected components (overlay-aware: a grid
/// glued to several base regions keeps them in one component). Deterministic
/// order: by least base id. The root component, if any, is marked.
std::vector<Presentation> split_components(const Presentation& p);

} // namespace pforge

#endif
