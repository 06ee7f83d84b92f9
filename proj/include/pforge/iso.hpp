#ifndef PFORGE_ISO_HPP
#define PFORGE_ISO_HPP

#include "pforge/graph.hpp"

#include <map>
#include <optional>

namespace pforge {

struct IsoOptions {
    bool respect_root = false;
    bool respect_colours = false;
    int vertex_budget = 20000;
};

/// Deterministic backtracking isomorphism search with iterated degree/
/// root-distance refinement. Returns the lexicographically least bijection in
/// address order, or nullopt. Adequate for the construction's instances, which
/// are small and highly asymmetric.
std::optional<std::map<Address, Address>>
find_isomorphism(const LabeledGraph& a, const LabeledGraph& b, const IsoOptions& opt = {});

/// Exhaustive validity check of an explicit map (edges both ways, root,
/// colours as requested).
bool is_isomorphism(const LabeledGraph& a, const LabeledGraph& b,
                    const std::map<Address, Address>& f, const IsoOptions& opt = {});

} // namespace pforge

#endif
