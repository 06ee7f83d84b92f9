#ifndef PFORGE_PROMISE_HPP
#define PFORGE_PROMISE_HPP

#include "pforge/graph.hpp"
#include "pforge/selfsim.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pforge {

/**
 * Promise structure: a graph, directed bridges p_i, and pairwise disjoint
 * leaf families L_i over the same index set. Finite-scale value type; the
 * staged construction keeps the same data at presentation level.
 */
struct PromiseStructure {
    LabeledGraph graph;
    std::vector<DirectedBridge> promises;
    std::vector<std::vector<Address>> families;
};

/// Report of violated Def-of-promise-structure invariants; empty when valid.
std::vector<std::string> validate(const PromiseStructure& p);

/// True iff the component behind promise i is a single leaf of family i.
bool is_placeholder_promise(const PromiseStructure& p, std::size_t i);

/// Per-index placeholder bookkeeping (the L_p / L_q split).
struct PlaceholderInfo {
    std::vector<std::size_t> placeholder_indices;
    std::vector<Address> placeholder_leaves;  // c_i per placeholder index
};
PlaceholderInfo placeholder_info(const PromiseStructure& p);

/// One-step extension: glue a fresh copy of the promised component onto every
/// leaf of its family; copies of promise leaves are retained, placeholder
/// families keep their originals.
PromiseStructure one_step_extension(const PromiseStructure& p);

// ---- closures over a universe ----------------------------------------------

/**
 * Input to the closure: a presentation (its typed map must colour exactly the
 * family members with family_colours[i]) plus the promise edges at base level.
 */
struct ClosureInput {
    Presentation m;
    std::vector<DirectedBridge> promises;
    std::vector<ColourId> family_colours;
};

/**
 * Binds a pattern to every non-placeholder family colour (the component
 * behind its promise edge) and returns the presentation whose expansion is
 * cl(G): same base, stage bumped so the new patterns unfold.
 */
std::shared_ptr<Presentation> close_presentation(const ClosureInput& in);

/// Closure of the promise structure: placeholder promises survive with
/// families cl(L_i) given intensionally by colour membership.
struct ClosurePromise {
    std::shared_ptr<Presentation> pres;
    std::vector<std::size_t> placeholder_indices;
    std::vector<DirectedBridge> promises;      // the surviving placeholder promises
    std::vector<ColourId> family_colours;      // their colours
};
ClosurePromise closure_promise_structure(const ClosureInput& in);

/// Membership test for cl(L): the terminal vertex carries the family colour.
bool in_closure_family(Materializer& mat, const Address& a, ColourId family);

/// All members of cl(L) materialized within `depth` one-step extensions.
std::vector<Address> enumerate_closure_family(std::shared_ptr<const Presentation> pres,
                                              ColourId family, int depth,
                                              const ExpandOptions& opt = {});

// ---- colour-preserving alpha bijections --------------------------------------

/**
 * The alpha bijection of the parallel-closure lemma: between coloured leaves
 * of the depth-n truncations of pattern i on the two sides, assembled from a
 * colour-preserving base bijection psi applied componentwise.
 * colour_pair maps each domain family colour to its codomain partner.
 * Throws HypothesisViolated when psi does not restrict to colour-preserving
 * bijections on the pattern bases.
 */
struct AlphaBijection {
    std::vector<std::pair<Address, Address>> pairs;  // sorted by domain address
};
AlphaBijection alpha_bijection(const ClosureInput& dom, const ClosureInput& cod,
                               const BiDict& psi, const std::map<ColourId, ColourId>& colour_pair,
                               std::size_t index, int depth, const ExpandOptions& opt = {});

/// Rooted presentation of the region behind promise i in the closure of `in`
/// (the pattern copy including its root).
std::shared_ptr<Presentation> promise_region(const ClosureInput& in, std::size_t index);

/// Tail of the q-edge of a materialized leaf: its unique neighbour not lying
/// behind it (leaves glued with a pattern copy keep their original edge).
Address q_edge_tail(const Truncation& t, const Address& leaf);

/// Rooted r-ball at `head` inside the component of t.graph behind the bridge
/// tail->head; this is the finite-scale reading of the closure's copy law.
LabeledGraph rooted_ball_behind(const Truncation& t, const Address& tail, const Address& head,
                                int r);

} // namespace pforge

#endif
