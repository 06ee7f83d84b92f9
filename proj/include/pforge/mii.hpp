#ifndef PFORGE_MII_HPP
#define PFORGE_MII_HPP

#include "pforge/graph.hpp"
#include "pforge/selfsim.hpp"

#include <optional>
#include <set>
#include <vector>

namespace pforge {

struct MiiPath {
    Address a;
    Address b;
    Address a_next;  // second vertex on the path, leaving a
    int length = 0;
};

/// A degree-2 run that reaches the truncation frontier; its completed length
/// is only known once the continuation is walked lazily.
struct PendingRun {
    Address anchor;         // degree != 2 endpoint
    Address first_step;     // second vertex on the run, leaving the anchor
    Address last_complete;  // vertex before the first incomplete one
    Address frontier;       // first incomplete degree-2 vertex
    int length = 0;         // materialized edge count so far (anchor..frontier)
    ColourId pending = kNoColour;
};

struct MiiReport {
    std::set<int> spectrum;
    std::vector<MiiPath> paths;
    std::vector<PendingRun> pending;
    bool certified = false;
    bool has_infinite_mii = false;

    std::optional<int> sigma0() const {
        if (spectrum.empty()) return std::nullopt;
        return *spectrum.rbegin();
    }
    std::optional<int> sigma1() const {
        if (spectrum.size() < 2) return std::nullopt;
        return *std::next(spectrum.rbegin());
    }
    /// k-tilde convention: undefined sigma0 counts as 0.
    int sigma0_or_zero() const { return sigma0().value_or(0); }
};

/// Exact completion of a pending run by walking the lazy materializer;
/// `infinite` is set when the run outruns the cap.
struct RunResolution {
    bool infinite = false;
    int total_length = 0;
    Address far_end;
};
RunResolution resolve_run(Materializer& mat, const Address& prev, const Address& cur,
                          int length_so_far, int cap);

/// All finite mii-paths of a finite graph (every degree is final).
MiiReport mii_paths(const LabeledGraph& g);

/// Finite mii-paths lying wholly in the region of a truncation where degrees
/// are final; degree-2 runs that hit the frontier are reported as pending.
MiiReport mii_paths(const Truncation& t);

/// Spectrum of the infinite graph described by a presentation, certified by
/// expanding until pattern contributions repeat and no frontier-adjacent
/// degree-2 run can outgrow the maximum found. Patterns that are all-degree-2
/// chains yield has_infinite_mii (and certified stays true when the finite
/// part stabilized).
MiiReport certified_spectrum(std::shared_ptr<const Presentation> p, int hint,
                             const ExpandOptions& opt = {});

/// Least k >= 3 in the symmetric difference of two certified spectra.
std::optional<int> spectrally_distinguishable(const MiiReport& a, const MiiReport& b);

/// Finite mii-paths of g - e that are not subpaths of finite mii-paths of g.
/// By the edge-deletion bound there are at most two.
std::vector<std::vector<Address>> new_mii_after_deletion(const LabeledGraph& g, const Address& x,
                                                         const Address& y);

/// True iff Ball_host(comp, k) equals comp plus, at each l in b ∩ V(comp), a
/// fresh path of length k and a fresh leaf at l. `proper` additionally
/// requires each such l proper in comp; `infinite_growth` requires every
/// component of host - comp to reach the truncation frontier.
bool check_mii_extension(const Truncation& host, const LabeledGraph& comp,
                         const std::vector<Address>& b, int k, bool proper, bool infinite_growth,
                         std::string* why = nullptr);

} // namespace pforge

#endif
