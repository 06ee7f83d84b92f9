#ifndef PFORGE_ADDRESS_MAP_HPP
#define PFORGE_ADDRESS_MAP_HPP

#include "pforge/address.hpp"
#include "pforge/selfsim.hpp"

#include <memory>
#include <optional>
#include <set>

#include <json.hpp>

namespace pforge {

/**
 * Bijective partial map on addresses, evaluable in both directions. Witnesses
 * for the construction's isomorphisms (h_{n,x}, pi_{n,x}, psi maps) are finite
 * trees of these nodes; evaluation rewrites address prefixes, so one witness
 * covers the whole infinite graph.
 */
class AddressMap {
public:
    virtual ~AddressMap() = default;
    virtual std::optional<Address> fwd(const Address& a) const = 0;
    virtual std::optional<Address> bwd(const Address& a) const = 0;
    virtual nlohmann::ordered_json to_json() const = 0;

    static std::shared_ptr<AddressMap> from_json(const nlohmann::ordered_json& j);
};

using AddressMapPtr = std::shared_ptr<AddressMap>;

/// Identity.
AddressMapPtr identity_map();

/// Explicit finite bijection on whole addresses.
AddressMapPtr dict_map(std::vector<std::pair<Address, Address>> pairs);

/// Applies a base-id dictionary to the first Enter/At step and to a leading
/// overlay slot; all later steps are copied verbatim. Realizes copy relabels
/// (hat copies, the tilde isomorphism, the F-hat identification).
AddressMapPtr relabel_first(std::shared_ptr<const BiDict> ids,
                            std::vector<std::pair<OverlayId, OverlayId>> ovl = {});

/// Applies a base-id dictionary to every Enter/At step before any overlay
/// step. Realizes cl(psi): the componentwise leaf correspondence.
AddressMapPtr componentwise(std::shared_ptr<const BiDict> ids);

AddressMapPtr compose(AddressMapPtr first, AddressMapPtr then);
AddressMapPtr inverse_of(AddressMapPtr inner);

/**
 * Witness extension across one closure step (the leaf-extension lemma):
 * inner maps the old object; addresses descending through an ext colour leaf
 * are rewritten behind the image leaf; the base region behind root_dom maps
 * onto the pattern copy behind inner(root_dom) and vice versa.
 */
struct LeafExtensionSpec {
    AddressMapPtr inner;
    std::set<BaseId> ext_ids;           // every base id coloured with an ext colour
    std::set<BaseId> inner_region;      // base ids of the old object's presentation
    std::set<OverlayId> inner_overlays; // its top overlay slots
    // base region behind the domain root (pattern body minus its root):
    std::set<BaseId> dom_root_region;
    Address dom_root;  // vertex whose q-edge is the pattern bridge (root of G side)
    std::set<BaseId> cod_root_region;
    Address cod_root;
};
AddressMapPtr leaf_extension(LeafExtensionSpec spec);

/// h' extended over a gluing sum: overlay vertices map by pi on the F part.
AddressMapPtr overlay_lift(AddressMapPtr core, OverlayId dom_ovl, OverlayId cod_ovl,
                           AddressMapPtr pi);

// ---- witness evaluation ------------------------------------------------------

struct WitnessReport {
    bool ok = true;
    long checked_vertices = 0;
    long checked_edges = 0;
    std::optional<Address> first_violation;
    std::string detail;
};

/**
 * Evaluates a witness on truncations and certifies it is an isomorphism on the
 * common expanded region: defined on every non-frontier domain vertex, maps
 * present edges to edges, injective, degree-preserving, and colour-class
 * preserving under `colour_pair` (identity when empty).
 */
WitnessReport evaluate_witness(const AddressMap& w, const Truncation& dom, const Truncation& cod,
                               const std::map<ColourId, ColourId>& colour_pair = {});

} // namespace pforge

#endif
