#include "pforge/gluing.hpp"
#include "pforge/errors.hpp"

#include <algorithm>
#include <deque>

namespace pforge {

GluingResult gluing_sum(const Presentation& g, std::shared_ptr<const Presentation> f,
                        const GluingSpec& spec, bool ray_product, const std::string& tag) {
    // bijectivity of the identification
    {
        std::set<Address> dom, ran;
        for (const auto& [v, w] : spec.pairs) {
            if (!dom.insert(v).second || !ran.insert(w).second)
                fail(ErrorKind::BadInput, "gluing spec is not a bijection");
        }
    }
    Materializer mg(std::make_shared<Presentation>(g));
    Materializer mf(f);
    for (const auto& [v, w] : spec.pairs) {
        if (!mg.contains(v)) fail(ErrorKind::UnknownVertex, "gluing domain vertex missing");
        if (!mf.contains(w)) fail(ErrorKind::UnknownVertex, "gluing range vertex missing");
    }
    // parallel edges: identified pairs adjacent on both sides
    for (const auto& [v1, w1] : spec.pairs)
        for (const auto& [v2, w2] : spec.pairs) {
            if (v1 < v2) continue;
            if (v1 == v2) continue;
            const auto& nb = mg.neighbors(v1);
            if (std::find(nb.begin(), nb.end(), v2) == nb.end()) continue;
            const auto& fb = mf.neighbors(w1);
            if (std::find(fb.begin(), fb.end(), w2) != fb.end())
                fail(ErrorKind::CollisionError, "identification would create a parallel edge");
        }

    Overlay o;
    o.tag = tag;
    o.f = std::move(f);
    o.ray_product = ray_product;
    o.glue_pairs = spec.pairs;
    GluingResult out{g, g.uni->add_overlay(std::move(o))};
    out.glued.overlays.push_back(out.overlay);
    return out;
}

Presentation ray_product(std::shared_ptr<const Presentation> f, int levels_hint,
                         const std::string& tag) {
    (void)levels_hint;  // levels adapt to the requested truncation radius
    // degree bound: the product adds 2 to interior levels
    Truncation probe = expand(f, 2);
    for (const Address& a : probe.graph.vertices_sorted()) {
        int deg = probe.frontier.count(a) ? probe.frontier.at(a).eventual_degree
                                          : probe.graph.degree(probe.graph.index_of(a));
        if (deg > 3) fail(ErrorKind::DegreeBound, "ray product needs max degree 3");
    }
    Presentation out;
    out.uni = f->uni;
    out.stage = f->stage;
    Overlay o;
    o.tag = tag;
    o.f = f;
    o.ray_product = true;
    out.overlays.push_back(out.uni->add_overlay(std::move(o)));
    return out;
}

AddressMapPtr lift_isomorphism(AddressMapPtr h, AddressMapPtr pi, const GluingSpec& spec_g,
                               const GluingSpec& spec_h, OverlayId ovl_g, OverlayId ovl_h) {
    // Compatibility: h maps dom(psi_g) onto dom(psi_h) and pi carries the
    // identifications along: pi(psi_g(v)) == psi_h(h(v)).
    std::map<Address, Address> psi_h_map;
    for (const auto& [v, w] : spec_h.pairs) psi_h_map.emplace(v, w);
    for (const auto& [v, w] : spec_g.pairs) {
        auto hv = h->fwd(v);
        if (!hv)
            fail(ErrorKind::CompatibilityError, "host map undefined on an identified vertex");
        auto it = psi_h_map.find(*hv);
        if (it == psi_h_map.end())
            fail(ErrorKind::CompatibilityError,
                 "host map does not carry the identified set onto the codomain's");
        auto pw = pi->fwd(w);
        if (!pw || *pw != it->second)
            fail(ErrorKind::CompatibilityError, "pi(psi_g(v)) != psi_h(h(v))");
    }
    return overlay_lift(std::move(h), ovl_g, ovl_h, std::move(pi));
}

// ---- ends ---------------------------------------------------------------------

namespace {
struct EndScanData {
    Truncation t;
    std::vector<int> dist_from_root;  // -1 if unreachable
};

EndScanData scan_base(std::shared_ptr<const Presentation> p, const Address& root, int max_radius,
                      const ExpandOptions& opt) {
    EndScanData d;
    int trunc_radius = std::max(2 * max_radius + 2, max_radius + 4);
    d.t = truncate_ball(p, root, trunc_radius, opt);
    const LabeledGraph& g = d.t.graph;
    d.dist_from_root.assign(g.vertex_count(), -1);
    std::deque<int> q;
    int r = g.index_of(root);
    d.dist_from_root[r] = 0;
    q.push_back(r);
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : g.neighbors(v))
            if (d.dist_from_root[w] < 0) {
                d.dist_from_root[w] = d.dist_from_root[v] + 1;
                q.push_back(w);
            }
    }
    return d;
}
} // namespace

EndReport end_estimate(std::shared_ptr<const Presentation> p, const Address& root,
                       const std::vector<int>& radii, const std::vector<ColourId>& marked,
                       const ExpandOptions& opt) {
    if (radii.empty()) return {};
    int max_radius = *std::max_element(radii.begin(), radii.end());
    EndScanData d = scan_base(p, root, max_radius, opt);
    const LabeledGraph& g = d.t.graph;
    std::set<ColourId> marks(marked.begin(), marked.end());

    EndReport rep;
    for (int s : radii) {
        EndRadiusReport rr;
        rr.radius = s;
        // components of truncation - ball(root, s)
        std::vector<int> comp(g.vertex_count(), -1);
        int ncomp = 0;
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (comp[v] >= 0 || (d.dist_from_root[v] >= 0 && d.dist_from_root[v] <= s)) continue;
            std::deque<int> q{v};
            comp[v] = ncomp;
            while (!q.empty()) {
                int x = q.front();
                q.pop_front();
                for (int w : g.neighbors(x)) {
                    if (comp[w] >= 0) continue;
                    if (d.dist_from_root[w] >= 0 && d.dist_from_root[w] <= s) continue;
                    comp[w] = ncomp;
                    q.push_back(w);
                }
            }
            ++ncomp;
        }
        std::vector<bool> unbounded(ncomp, false), ray_like(ncomp, true), has_mark(ncomp, false);
        for (int v = 0; v < g.vertex_count(); ++v) {
            int c = comp[v];
            if (c < 0) continue;
            const Address& a = g.vertex(v);
            if (d.t.is_frontier(a)) unbounded[c] = true;
            int deg = d.t.is_frontier(a) ? d.t.frontier.at(a).eventual_degree : g.degree(v);
            if (deg > 2) ray_like[c] = false;
            auto col = g.colour(a);
            if (col && marks.count(*col)) has_mark[c] = true;
        }
        for (int c = 0; c < ncomp; ++c) {
            if (!unbounded[c]) continue;
            ++rr.unbounded;
            if (ray_like[c]) {
                ++rr.free_candidates;
                if (has_mark[c]) rr.marked_only_in_limits = false;
            } else {
                ++rr.limit_candidates;
                if (!has_mark[c]) rr.marked_only_in_limits = false;
            }
            if (!has_mark[c]) rr.marked_in_every_unbounded = false;
        }
        rep.per_radius.push_back(rr);
    }
    return rep;
}

std::vector<bool> density_check(std::shared_ptr<const Presentation> p, const Address& root,
                                const std::vector<ColourId>& marked, const std::vector<int>& radii,
                                const ExpandOptions& opt) {
    EndReport rep = end_estimate(p, root, radii, marked, opt);
    std::vector<bool> out;
    for (const auto& rr : rep.per_radius) out.push_back(rr.marked_in_every_unbounded);
    return out;
}

} // namespace pforge
