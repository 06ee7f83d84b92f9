#include "pforge/promise.hpp"
#include "pforge/errors.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace pforge {

std::vector<std::string> validate(const PromiseStructure& p) {
    std::vector<std::string> problems;
    if (p.promises.size() != p.families.size())
        problems.push_back("promise and family index sets differ");

    std::set<Address> seen;
    for (std::size_t i = 0; i < p.families.size(); ++i)
        for (const Address& l : p.families[i]) {
            if (!seen.insert(l).second) problems.push_back("families not disjoint");
            auto idx = p.graph.find(l);
            if (!idx) {
                problems.push_back("family member missing from graph");
                continue;
            }
            if (p.graph.degree(*idx) != 1) problems.push_back("family member is not a leaf");
        }

    for (std::size_t i = 0; i < p.promises.size(); ++i) {
        const DirectedBridge& e = p.promises[i];
        try {
            RootedGraph comp = bridge_component(p.graph, e);
            if (comp.graph.vertex_count() == 1) {
                // single leaf c: must belong to family i
                const Address& c = comp.root;
                bool in_own = false;
                for (std::size_t j = 0; j < p.families.size(); ++j)
                    for (const Address& l : p.families[j])
                        if (l == c && j != i)
                            problems.push_back("placeholder leaf lies in the wrong family");
                        else if (l == c && j == i)
                            in_own = true;
                (void)in_own;
            }
        } catch (const Error& err) {
            problems.push_back(std::string("promise ") + std::to_string(i + 1) + ": " +
                               err.what());
        }
    }
    return problems;
}

bool is_placeholder_promise(const PromiseStructure& p, std::size_t i) {
    RootedGraph comp = bridge_component(p.graph, p.promises.at(i));
    if (comp.graph.vertex_count() != 1) return false;
    for (const Address& l : p.families.at(i))
        if (l == comp.root) return true;
    return false;
}

PlaceholderInfo placeholder_info(const PromiseStructure& p) {
    PlaceholderInfo out;
    for (std::size_t i = 0; i < p.promises.size(); ++i)
        if (is_placeholder_promise(p, i)) {
            out.placeholder_indices.push_back(i);
            out.placeholder_leaves.push_back(bridge_component(p.graph, p.promises[i]).root);
        }
    return out;
}

PromiseStructure one_step_extension(const PromiseStructure& p) {
    auto problems = validate(p);
    if (!problems.empty()) fail(ErrorKind::InvalidStructure, problems.front());

    std::vector<RootedGraph> comps;
    std::vector<bool> placeholder;
    for (std::size_t i = 0; i < p.promises.size(); ++i) {
        comps.push_back(bridge_component(p.graph, p.promises[i]));
        placeholder.push_back(comps.back().graph.vertex_count() == 1);
    }

    PromiseStructure out;
    out.graph = p.graph;
    out.promises = p.promises;
    out.families.resize(p.families.size());

    // membership lookup for copying family colours into the fresh copies
    std::map<Address, std::size_t> family_of;
    for (std::size_t j = 0; j < p.families.size(); ++j)
        for (const Address& l : p.families[j]) family_of[l] = j;

    for (std::size_t i = 0; i < p.families.size(); ++i) {
        for (const Address& l : p.families[i]) {
            if (placeholder[i]) {
                out.families[i].push_back(l);  // gluing a single vertex is a no-op
                continue;
            }
            const RootedGraph& comp = comps[i];
            Address prefix = l.as_prefix();
            auto copy_addr = [&](const Address& w) { return prefix.concat(w); };
            for (const Address& w : comp.graph.vertices_sorted()) {
                if (w == comp.root) continue;
                out.graph.ensure_vertex(copy_addr(w));
                auto fit = family_of.find(w);
                if (fit != family_of.end()) out.families[fit->second].push_back(copy_addr(w));
            }
            for (const auto& [x, y] : comp.graph.edges_sorted()) {
                Address xa = (x == comp.root) ? l : copy_addr(x);
                Address ya = (y == comp.root) ? l : copy_addr(y);
                out.graph.add_edge(xa, ya);
            }
        }
    }
    for (auto& fam : out.families) std::sort(fam.begin(), fam.end());
    return out;
}

// ---- closures ----------------------------------------------------------------

namespace {
BaseId base_of(const Address& a) {
    auto b = a.terminal_base();
    if (!b || a.steps.size() != 1)
        fail(ErrorKind::BadInput, "promise data must live at base level");
    return *b;
}
} // namespace

std::shared_ptr<Presentation> close_presentation(const ClosureInput& in) {
    if (in.promises.size() != in.family_colours.size())
        fail(ErrorKind::InvalidStructure, "promise and colour lists differ in length");
    Universe& uni = *in.m.uni;

    int max_bound_stage = 0;
    for (std::size_t i = 0; i < in.promises.size(); ++i) {
        const DirectedBridge& e = in.promises[i];
        BaseId tail = base_of(e.tail), head = base_of(e.head);
        if (!in.m.base.has_edge(tail, head))
            fail(ErrorKind::NotAnEdge, "promise edge not in base graph");

        // base-level component behind the bridge
        std::set<BaseId> region;
        std::deque<BaseId> q{head};
        region.insert(head);
        while (!q.empty()) {
            BaseId v = q.front();
            q.pop_front();
            for (BaseId w : in.m.base.neighbors(v)) {
                if (v == head && w == tail) continue;
                if (region.insert(w).second) q.push_back(w);
            }
        }
        if (region.count(tail))
            fail(ErrorKind::NotABridge, "promise edge is not a bridge at base level");

        ColourId col = in.family_colours[i];
        if (region.size() == 1) {
            // placeholder: the single leaf must carry the family colour
            auto tc = in.m.typed.find(head);
            if (tc == in.m.typed.end() || tc->second != col)
                fail(ErrorKind::InvalidStructure,
                     "placeholder component is not a leaf of its own family");
            continue;
        }
        if (uni.patterns.count(col))
            fail(ErrorKind::InvalidStructure, "family colour already has a pattern");

        Pattern pat;
        pat.colour = col;
        pat.root = head;
        for (BaseId v : region) {
            pat.graph.add_vertex(v);
            for (BaseId w : in.m.base.neighbors(v))
                if (region.count(w)) pat.graph.add_edge(v, w);
            auto tc = in.m.typed.find(v);
            if (tc != in.m.typed.end()) pat.typed[v] = tc->second;
        }
        // overlays homed inside the region travel with the pattern scope
        for (OverlayId oid : in.m.overlays) {
            const Overlay& o = uni.overlay_defs.at(oid);
            if (o.home.empty()) continue;
            bool inside = false, outside = false;
            for (BaseId h : o.home)
                (region.count(h) ? inside : outside) = true;
            if (inside && outside)
                fail(ErrorKind::ConstructionInvariantBroken,
                     "overlay home straddles a pattern boundary");
            if (inside) pat.overlays.push_back(oid);
        }
        uni.patterns.emplace(col, std::move(pat));
        max_bound_stage = std::max(max_bound_stage, uni.colour(col).stage);
    }

    auto out = std::make_shared<Presentation>(in.m);
    out->stage = std::max(in.m.stage, max_bound_stage + 1);
    return out;
}

ClosurePromise closure_promise_structure(const ClosureInput& in) {
    ClosurePromise out;
    for (std::size_t i = 0; i < in.promises.size(); ++i) {
        const DirectedBridge& e = in.promises[i];
        BaseId head = base_of(e.head);
        // placeholder iff the component is the single head vertex
        bool single = true;
        for (BaseId w : in.m.base.neighbors(head))
            if (w != base_of(e.tail)) single = false;
        if (in.m.base.degree(head) != 1) single = false;
        if (!single) continue;
        auto tc = in.m.typed.find(head);
        if (tc == in.m.typed.end() || tc->second != in.family_colours[i]) continue;
        out.placeholder_indices.push_back(i);
        out.promises.push_back(e);
        out.family_colours.push_back(in.family_colours[i]);
    }
    ClosureInput copy = in;
    out.pres = close_presentation(copy);
    return out;
}

bool in_closure_family(Materializer& mat, const Address& a, ColourId family) {
    auto c = mat.colour_of(a);
    return c && *c == family;
}

std::vector<Address> enumerate_closure_family(std::shared_ptr<const Presentation> pres,
                                              ColourId family, int depth,
                                              const ExpandOptions& opt) {
    Truncation t = expand(pres, depth, opt);
    std::vector<Address> out;
    for (const auto& [a, c] : t.graph.colours())
        if (c == family) out.push_back(a);
    std::sort(out.begin(), out.end());
    return out;
}

std::shared_ptr<Presentation> promise_region(const ClosureInput& in, std::size_t index) {
    const DirectedBridge& e = in.promises.at(index);
    BaseId tail = base_of(e.tail), head = base_of(e.head);
    std::set<BaseId> region;
    std::deque<BaseId> q{head};
    region.insert(head);
    while (!q.empty()) {
        BaseId v = q.front();
        q.pop_front();
        for (BaseId w : in.m.base.neighbors(v)) {
            if (v == head && w == tail) continue;
            if (region.insert(w).second) q.push_back(w);
        }
    }
    auto out = std::make_shared<Presentation>();
    out->uni = in.m.uni;
    out->stage = in.m.stage + 1;
    for (BaseId v : region) {
        out->base.add_vertex(v);
        for (BaseId w : in.m.base.neighbors(v))
            if (region.count(w) && v < w) out->base.add_edge(v, w);
        auto tc = in.m.typed.find(v);
        if (tc != in.m.typed.end()) out->typed[v] = tc->second;
    }
    for (OverlayId oid : in.m.overlays) {
        const Overlay& o = in.m.uni->overlay_defs.at(oid);
        bool inside = o.home.empty();
        for (BaseId h : o.home)
            if (region.count(h)) inside = true;
        if (inside) out->overlays.push_back(oid);
    }
    out->root = Address::at(head);
    return out;
}

Address q_edge_tail(const Truncation& t, const Address& leaf) {
    int li = t.graph.index_of(leaf);
    Address prefix = leaf.as_prefix();
    std::optional<Address> tail;
    for (int w : t.graph.neighbors(li)) {
        const Address& wa = t.graph.vertex(w);
        bool behind = wa.steps.size() > prefix.steps.size() &&
                      std::equal(prefix.steps.begin(), prefix.steps.end(), wa.steps.begin());
        if (!behind) {
            if (tail) fail(ErrorKind::InvalidStructure, "leaf has two host-side edges");
            tail = wa;
        }
    }
    if (!tail) fail(ErrorKind::InvalidStructure, "leaf has no host-side edge");
    return *tail;
}

LabeledGraph rooted_ball_behind(const Truncation& t, const Address& tail, const Address& head,
                                int r) {
    RootedGraph comp = bridge_component(t.graph, DirectedBridge{tail, head});
    LabeledGraph out = ball(comp.graph, {head}, r);
    out.set_root(head);
    return out;
}

AlphaBijection alpha_bijection(const ClosureInput& dom, const ClosureInput& cod,
                               const BiDict& psi, const std::map<ColourId, ColourId>& colour_pair,
                               std::size_t index, int depth, const ExpandOptions& opt) {
    // hypothesis: psi restricted to each pattern base is a colour-preserving
    // bijection between the coloured leaves of the two pattern regions
    for (std::size_t i = 0; i < dom.promises.size(); ++i) {
        auto dreg = promise_region(dom, i);
        auto creg = promise_region(cod, i);
        std::map<BaseId, ColourId> expected;  // image id -> required colour
        for (const auto& [v, c] : dreg->typed) {
            auto m = psi.fwd(v);
            if (!m) fail(ErrorKind::HypothesisViolated, "psi undefined on a pattern leaf");
            auto cp = colour_pair.find(c);
            if (cp == colour_pair.end())
                fail(ErrorKind::HypothesisViolated, "no colour pairing for a family colour");
            expected[*m] = cp->second;
        }
        if (expected.size() != dreg->typed.size())
            fail(ErrorKind::HypothesisViolated, "psi not injective on a pattern");
        if (expected.size() != creg->typed.size())
            fail(ErrorKind::HypothesisViolated, "psi not onto the codomain pattern leaves");
        for (const auto& [v, c] : expected) {
            auto it = creg->typed.find(v);
            if (it == creg->typed.end() || it->second != c)
                fail(ErrorKind::HypothesisViolated, "psi breaks a pattern leaf colour");
        }
    }

    auto dreg = promise_region(dom, index);
    auto creg = promise_region(cod, index);
    Truncation dt = expand(dreg, depth, opt);
    Truncation ct = expand(creg, depth, opt);

    AlphaBijection out;
    std::set<Address> cod_leaves;
    for (const auto& [a, c] : ct.graph.colours()) cod_leaves.insert(a);
    std::set<Address> hit;
    for (const auto& [a, c] : dt.graph.colours()) {
        Address img;
        img.steps.reserve(a.steps.size());
        for (const Step& s : a.steps) {
            auto m = psi.fwd(s.id);
            if (!m) fail(ErrorKind::HypothesisViolated, "psi missing an entry");
            img.steps.push_back(Step{s.kind, *m});
        }
        if (!cod_leaves.count(img))
            fail(ErrorKind::HypothesisViolated, "alpha image not a codomain leaf");
        if (!hit.insert(img).second)
            fail(ErrorKind::HypothesisViolated, "alpha not injective");
        out.pairs.emplace_back(a, img);
    }
    if (hit.size() != cod_leaves.size())
        fail(ErrorKind::HypothesisViolated, "alpha not onto the codomain leaves");
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

} // namespace pforge
