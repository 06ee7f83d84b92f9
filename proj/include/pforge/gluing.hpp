#ifndef PFORGE_GLUING_HPP
#define PFORGE_GLUING_HPP

#include "pforge/address_map.hpp"
#include "pforge/selfsim.hpp"

#include <optional>
#include <vector>

namespace pforge {

/// Explicit vertex identification between a host presentation and an F
/// presentation: host vertex <-> F vertex, injective both ways.
struct GluingSpec {
    std::vector<std::pair<Address, Address>> pairs;
};

struct GluingResult {
    Presentation glued;
    OverlayId overlay;
};

/// Quotient of the disjoint union identifying v with psi(v). Throws
/// CollisionError when an identification would create a parallel edge.
/// With ray_product the F side is first multiplied with a ray and
/// identifications happen at level 0.
GluingResult gluing_sum(const Presentation& g, std::shared_ptr<const Presentation> f,
                        const GluingSpec& spec, bool ray_product = false,
                        const std::string& tag = "glue");

/// Presentation of F x N as a standalone ray-product overlay. Level 0 carries
/// F's colours; degrees stay <= 5 when Delta(F) <= 3 (checked, DegreeBound).
Presentation ray_product(std::shared_ptr<const Presentation> f, int levels_hint = 0,
                         const std::string& tag = "rayprod");

/// Isomorphism lifting across two gluing sums: h on the hosts plus an F map pi
/// compatible with the identifications yields a witness on the glued graphs.
/// Throws CompatibilityError naming the first vertex where pi(psi_g(v)) !=
/// psi_h(h(v)).
AddressMapPtr lift_isomorphism(AddressMapPtr h, AddressMapPtr pi, const GluingSpec& spec_g,
                               const GluingSpec& spec_h, OverlayId ovl_g, OverlayId ovl_h);

// ---- finite-scale end analysis ------------------------------------------------

struct EndRadiusReport {
    int radius = 0;
    int unbounded = 0;        // components of (truncation - ball(root, s)) reaching the frontier
    int free_candidates = 0;  // unbounded components that are bare degree-<=2 rays at this scale
    int limit_candidates = 0; // the rest
    bool marked_in_every_unbounded = true;   // density of the marked colour set
    bool marked_only_in_limits = true;       // primed variant: rays carry no marks
};

struct EndReport {
    std::vector<EndRadiusReport> per_radius;
};

/// Per-radius counts of unbounded-at-this-scale components outside
/// ball(root, s), with free-end and limit-end candidates.
EndReport end_estimate(std::shared_ptr<const Presentation> p, const Address& root,
                       const std::vector<int>& radii, const std::vector<ColourId>& marked = {},
                       const ExpandOptions& opt = {});

/// True per radius iff every unbounded-at-this-scale component of
/// truncation - ball(root, s) contains a vertex of a marked colour.
std::vector<bool> density_check(std::shared_ptr<const Presentation> p, const Address& root,
                                const std::vector<ColourId>& marked, const std::vector<int>& radii,
                                const ExpandOptions& opt = {});

} // namespace pforge

#endif
