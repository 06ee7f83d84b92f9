#ifndef PFORGE_CONSTRUCT_HPP
#define PFORGE_CONSTRUCT_HPP

#include "pforge/address_map.hpp"
#include "pforge/graph.hpp"
#include "pforge/mii.hpp"
#include "pforge/promise.hpp"
#include "pforge/selfsim.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pforge {

enum class Variant { tree, one_ended, countable };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& s);

/**
 * Lazy enumerations t_j / s_j. Stage-0 vertices take J_0 = {0..|initial|-1}
 * in the given order (coloured leaves last, t_0 != root). Vertices created at
 * step c take the index class { j >= L : val2(j - L + 1) == c } in canonical
 * BFS order from the stage root, per layer non-coloured first, so the index
 * set stays co-infinite and early indices avoid coloured leaves.
 */
struct Enumeration {
    std::vector<Address> initial;

    bool in_index_set(long j, int stage) const;
    /// Class and position of an index above the initial segment.
    static int val2(long m);
};

struct StageState {
    int n = 0;
    Variant variant = Variant::one_ended;
    std::shared_ptr<Universe> uni;
    std::shared_ptr<Presentation> g, h, f;
    ColourId colR = kNoColour, colB = kNoColour;    // current leaf classes R_n, B_n
    ColourId colRF = kNoColour, colBF = kNoColour;  // F-side classes R'_n, B'_n
    Address rootG, rootH;
    AddressMapPtr psiG, psiH;                 // leaf maps into F_n
    std::vector<Address> X, Y;
    std::map<Address, Address> phi;           // X -> Y
    std::map<Address, AddressMapPtr> hwit;    // x -> h_{n,x}: G_n - x -> H_n - phi(x)
    std::map<Address, AddressMapPtr> piwit;   // x -> pi_{n,x}: F_n -> F_n
    int k = 0;                                // k_n
    int ktilde = -1;                          // k-tilde of the step that built this stage
    Enumeration enumG, enumH;

    std::vector<ColourId> marked_colours() const { return {colR, colB}; }
};

/// A full run: stage 0..n states over one shared universe.
struct Run {
    std::vector<StageState> stages;
    const StageState& last() const { return stages.back(); }
};

struct BuildOptions {
    long vertex_budget = 2'000'000;
    int depth_cap = 64;
    ExpandOptions expand() const { return ExpandOptions{vertex_budget, depth_cap}; }
};

/// Stage-0 state for the chosen variant.
StageState base_case(Variant variant, const BuildOptions& opt = {});

/// Least-index enumerated vertex not yet handled, on the side the parity rule
/// selects (t_j for even n, s_j for odd n).
Address select_next_vertex(const Run& run);

/// Data of the auxiliary tilde graphs for one step. All positions follow the
/// path/leaf layout of the construction; `tilde` maps the v-side tilde graph
/// minus v onto the partner tilde graph minus v-hat.
struct TildeBundle {
    std::shared_ptr<Presentation> m;   // M_n = tilde A  u  tilde B (one base)
    Address v, vhat;
    int ktilde = 0;
    std::vector<DirectedBridge> promises;     // p1..p4
    std::vector<ColourId> family_colours;     // colA, colB', new A colour, new B colour
    ColourId col_newA = kNoColour, col_newB = kNoColour;
    Address rootAnew, rootBnew;               // the two new root leaves
    std::shared_ptr<BiDict> tilde_dict;       // the P-respecting map, base level
    std::vector<std::pair<OverlayId, OverlayId>> tilde_ovls;
    // bookkeeping for the F side and the witness assembly
    std::shared_ptr<Presentation> nbase;      // N_n
    std::vector<DirectedBridge> fpromises;
    std::vector<ColourId> ffamily_colours;
    ColourId col_newAF = kNoColour, col_newBF = kNoColour;
    std::shared_ptr<BiDict> fb_dict;          // F base -> F^B copy
    std::shared_ptr<BiDict> hatn_dict;        // N tilde side -> hat side
    Address fattachA, fattachB;               // psi(rootA) in F-tilde, r2 head on hat side
};

/// Build the tilde graphs, promise structures and the auxiliary F data for the
/// step handling vertex v.
TildeBundle build_tilde(const Run& run, const Address& v, const BuildOptions& opt = {});

/// All data of build_tilde plus the promise structures at finite-graph level
/// (for validation and tests).
PromiseStructure promise_structure_of(const TildeBundle& b, bool fside);

/// One full step: closures, F step, gluing, witnesses, bookkeeping.
StageState inductive_step(const Run& run, const BuildOptions& opt = {});

/// Convenience: build stages 0..n.
Run build_run(Variant variant, int stages, const BuildOptions& opt = {});

// ---- verification ---------------------------------------------------------------

struct ClauseResult {
    std::string name;
    bool applicable = true;
    bool pass = true;
    std::string detail;
};

struct VerificationReport {
    std::vector<ClauseResult> clauses;
    bool all_pass() const {
        for (const auto& c : clauses)
            if (c.applicable && !c.pass) return false;
        return true;
    }
};

/// Check every applicable invariant clause of the stage at the given radius.
VerificationReport verify_stage(const Run& run, int n, int radius, const BuildOptions& opt = {});

/// Default verification radius for a stage: 2 k_n + 2.
int default_radius(const StageState& s);

struct CertificateReport {
    std::optional<int> separating_k;
    std::set<int> spectrum_c, spectrum_d;
    std::string detail;
};

/// Finite-scale non-isomorphism certificate: delete all mii-paths longer than
/// k_{n-1}, extract the components of t_0 and s_0, compare spectra.
CertificateReport nonisomorphism_certificate(const Run& run, int n, int radius,
                                             const BuildOptions& opt = {});

} // namespace pforge

#endif
