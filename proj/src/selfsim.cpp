#include "pforge/selfsim.hpp"
#include "pforge/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace pforge {

// ---- BiDict -----------------------------------------------------------------

void BiDict::add(BaseId a, BaseId b) {
    auto [it, fresh] = fwd_.emplace(a, b);
    if (!fresh) {
        if (it->second != b) fail(ErrorKind::ConstructionInvariantBroken, "psi entry conflict");
        return;
    }
    bwd_[b].push_back(a);
}

std::optional<BaseId> BiDict::fwd(BaseId a) const {
    auto it = fwd_.find(a);
    if (it == fwd_.end()) return std::nullopt;
    return it->second;
}

const std::vector<BaseId>* BiDict::bwd(BaseId b) const {
    auto it = bwd_.find(b);
    if (it == bwd_.end()) return nullptr;
    return &it->second;
}

// ---- Universe -----------------------------------------------------------------

ColourId Universe::add_colour(std::string name, int stage, bool fside, bool structural) {
    colours.push_back(ColourInfo{std::move(name), stage, fside, structural});
    return static_cast<ColourId>(colours.size() - 1);
}

OverlayId Universe::add_overlay(Overlay o) {
    overlay_defs.push_back(std::move(o));
    return static_cast<OverlayId>(overlay_defs.size() - 1);
}

std::optional<ColourId> Universe::colour_by_name(const std::string& n) const {
    for (ColourId i = 0; i < colours.size(); ++i)
        if (colours[i].name == n) return i;
    return std::nullopt;
}

std::set<ColourId> Universe::reachable_colours(ColourId c, int stage_limit) const {
    std::set<ColourId> out;
    std::deque<ColourId> q{c};
    std::set<ColourId> seen{c};
    while (!q.empty()) {
        ColourId x = q.front();
        q.pop_front();
        auto it = patterns.find(x);
        bool expand = it != patterns.end() &&
                      (colours.at(x).structural || colours.at(x).stage < stage_limit);
        if (!expand) continue;
        for (const auto& [v, col] : it->second.typed) {
            out.insert(col);
            if (seen.insert(col).second) q.push_back(col);
        }
    }
    return out;
}

bool Presentation::expandable(ColourId c) const {
    if (!uni->patterns.count(c)) return false;
    const ColourInfo& ci = uni->colour(c);
    return ci.structural || ci.stage < stage;
}

// ---- Materializer: address walking ------------------------------------------

namespace {
Address take_steps(const Address& a, std::size_t n) {
    return Address(std::vector<Step>(a.steps.begin(), a.steps.begin() + n));
}

Address parent_leaf_address(const Address& a, std::size_t prefix_len) {
    // prefix ends with Enter(l); the parent leaf vertex is that chain with At(l).
    Address out = take_steps(a, prefix_len);
    out.steps.back().kind = Step::Kind::At;
    return out;
}

Address psi_fwd_componentwise(const BiDict& psi, const Address& rel) {
    Address out;
    out.steps.reserve(rel.steps.size());
    for (const Step& s : rel.steps) {
        if (s.kind != Step::Kind::Enter && s.kind != Step::Kind::At)
            fail(ErrorKind::ConstructionInvariantBroken, "psi applied to non-leaf address");
        auto m = psi.fwd(s.id);
        if (!m) fail(ErrorKind::ConstructionInvariantBroken, "missing psi entry");
        out.steps.push_back(Step{s.kind, *m});
    }
    return out;
}
} // namespace

Materializer* Materializer::fmat(OverlayId oid) {
    auto it = fmats_.find(oid);
    if (it != fmats_.end()) return it->second.get();
    const Overlay& o = pres_->uni->overlay_defs.at(oid);
    auto m = std::make_shared<Materializer>(o.f);
    return fmats_.emplace(oid, std::move(m)).first->second.get();
}

std::optional<Materializer::Walk> Materializer::walk(const Address& a) const {
    if (a.steps.empty()) return std::nullopt;
    Walk w;
    w.src = a;
    w.chain.push_back(WalkScope{&pres_->base, &pres_->typed, &pres_->overlays, kNoBase, 0});
    const auto& steps = a.steps;
    std::size_t i = 0;
    while (i < steps.size() && steps[i].kind == Step::Kind::Enter) {
        BaseId b = steps[i].id;
        const WalkScope& cur = w.chain.back();
        if (!cur.graph->has_vertex(b)) return std::nullopt;
        if (cur.root != kNoBase && b == cur.root) return std::nullopt;
        auto it = cur.typed->find(b);
        if (it == cur.typed->end()) return std::nullopt;
        if (!pres_->expandable(it->second)) return std::nullopt;
        const Pattern& pat = pres_->uni->patterns.at(it->second);
        w.chain.push_back(WalkScope{&pat.graph, &pat.typed, &pat.overlays, pat.root, i + 1});
        ++i;
    }
    if (i >= steps.size()) return std::nullopt;
    if (steps[i].kind == Step::Kind::At) {
        if (i + 1 != steps.size()) return std::nullopt;
        BaseId v = steps[i].id;
        const WalkScope& cur = w.chain.back();
        if (!cur.graph->has_vertex(v)) return std::nullopt;
        if (cur.root != kNoBase && v == cur.root) return std::nullopt;
        w.term = v;
        return w;
    }
    if (steps[i].kind != Step::Kind::Ovl) return std::nullopt;
    OverlayId oid = steps[i].id;
    const WalkScope& cur = w.chain.back();
    if (std::find(cur.overlays->begin(), cur.overlays->end(), oid) == cur.overlays->end())
        return std::nullopt;
    if (steps.back().kind != Step::Kind::Level) return std::nullopt;
    const Overlay& o = pres_->uni->overlay_defs.at(oid);
    Address faddr(std::vector<Step>(steps.begin() + i + 1, steps.end() - 1));
    if (faddr.empty()) return std::nullopt;
    int level = static_cast<int>(steps.back().id);
    if (!o.ray_product && level != 0) return std::nullopt;
    w.overlay = true;
    w.ovl = oid;
    w.ovl_scope = w.chain.size() - 1;
    w.faddr = faddr;
    w.level = level;
    return w;
}

bool Materializer::contains(const Address& a) {
    auto w = walk(a);
    if (!w) return false;
    if (!w->overlay) return true;
    Materializer* fm = fmat(w->ovl);
    if (!fm->contains(w->faddr)) return false;
    if (w->level == 0) {
        const Overlay& o = pres_->uni->overlay_defs.at(w->ovl);
        for (const auto& [gv, fv] : o.glue_pairs)
            if (fv == w->faddr) return false;  // canonical form is the host vertex
        if (!o.glue_colours.empty() && psi_bwd_in_scope(*w, w->ovl_scope, w->ovl, w->faddr))
            return false;
    }
    return true;
}

std::optional<ColourId> Materializer::colour_of(const Address& a) {
    auto w = walk(a);
    if (!w) return std::nullopt;
    if (w->overlay) {
        if (w->level == 0) return fmat(w->ovl)->colour_of(w->faddr);
        return std::nullopt;
    }
    auto it = w->chain.back().typed->find(w->term);
    if (it == w->chain.back().typed->end()) return std::nullopt;
    return it->second;
}

std::optional<ColourId> Materializer::pending_colour(const Address& a) {
    auto c = colour_of(a);
    if (c && pres_->expandable(*c)) return c;
    return std::nullopt;
}

std::vector<Address> Materializer::base_vertices() {
    std::vector<Address> out;
    for (BaseId v : pres_->base.vertices()) out.push_back(Address::at(v));
    // level-0 columns of top overlays seed the grid region (canonical only)
    for (OverlayId oid : pres_->overlays) {
        const Overlay& o = pres_->uni->overlay_defs.at(oid);
        for (BaseId fv : o.f->base.vertices()) {
            Address a;
            a.steps.push_back(Step{Step::Kind::Ovl, oid});
            a.steps.push_back(Step{Step::Kind::At, fv});
            a.steps.push_back(Step{Step::Kind::Level, 0});
            if (contains(a)) out.push_back(a);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- Materializer: neighbours ------------------------------------------------

const std::vector<Address>& Materializer::neighbors(const Address& a) {
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    auto w = walk(a);
    if (!w) fail(ErrorKind::UnknownVertex, "address not in presentation");
    std::vector<Address> out;
    if (w->overlay)
        emit_overlay_neighbors(*w, out);
    else
        emit_base_neighbors(*w, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return cache_.emplace(a, std::move(out)).first->second;
}

// Merge edges incident to the host partner of a glue-coloured leaf. `leaf_abs`
// is the absolute address of the leaf; emits the grid edges its partner gains.
void Materializer::emit_merge_edges_for_leaf(const Address& leaf_abs, std::vector<Address>& out) {
    auto lw = walk(leaf_abs);
    if (!lw || lw->overlay) return;
    const WalkScope& ls = lw->chain.back();
    auto tc = ls.typed->find(lw->term);
    if (tc == ls.typed->end()) return;
    ColourId c = tc->second;
    if (ls.graph->degree(lw->term) != 1) return;
    for (int s = static_cast<int>(lw->chain.size()) - 1; s >= 0; --s) {
        for (OverlayId oid : *lw->chain[s].overlays) {
            const Overlay& o = pres_->uni->overlay_defs.at(oid);
            if (std::find(o.glue_colours.begin(), o.glue_colours.end(), c) ==
                o.glue_colours.end())
                continue;
            if (!o.serves(leaf_abs.steps[lw->chain[s].prefix].id)) continue;
            Address rel(std::vector<Step>(leaf_abs.steps.begin() + lw->chain[s].prefix,
                                          leaf_abs.steps.end()));
            Address fa = psi_fwd_componentwise(pres_->uni->psi, rel);
            Address q = take_steps(leaf_abs, lw->chain[s].prefix);
            if (o.ray_product) {
                Address up = q;
                up.steps.push_back(Step{Step::Kind::Ovl, oid});
                up.steps.insert(up.steps.end(), fa.steps.begin(), fa.steps.end());
                up.steps.push_back(Step{Step::Kind::Level, 1});
                out.push_back(up);
            }
            Materializer* fm = fmat(oid);
            for (const Address& fw2 : fm->neighbors(fa))
                out.push_back(canonical_level0(q, oid, fw2));
            return;  // nearest enclosing overlay claims the leaf
        }
    }
}

void Materializer::emit_base_neighbors(const Walk& w, std::vector<Address>& out) {
    const Address& a = w.src;
    const WalkScope& cur = w.chain.back();
    BaseId v = w.term;
    Address prefix = take_steps(a, a.steps.size() - 1);

    for (BaseId u : cur.graph->neighbors(v)) {
        if (cur.root != kNoBase && u == cur.root) {
            out.push_back(parent_leaf_address(a, cur.prefix));
        } else {
            Address n = prefix;
            n.steps.push_back(Step{Step::Kind::At, u});
            out.push_back(n);
            // u may be a glue-coloured leaf whose unique neighbour is v
            emit_merge_edges_for_leaf(n, out);
        }
    }

    auto tv = cur.typed->find(v);
    if (tv != cur.typed->end() && pres_->expandable(tv->second)) {
        const Pattern& pat = pres_->uni->patterns.at(tv->second);
        for (BaseId u : pat.graph.neighbors(pat.root)) {
            Address n = prefix;
            n.steps.push_back(Step{Step::Kind::Enter, v});
            n.steps.push_back(Step{Step::Kind::At, u});
            out.push_back(n);
            // root-adjacent leaves of the copy merge onto v itself
            emit_merge_edges_for_leaf(n, out);
        }
    }

    // explicit-pair overlays act on top-level vertices
    if (w.chain.size() == 1) {
        for (OverlayId oid : *w.chain[0].overlays) {
            const Overlay& o = pres_->uni->overlay_defs.at(oid);
            for (const auto& [gv, fv] : o.glue_pairs) {
                if (gv != a) continue;
                if (o.ray_product) {
                    Address up;
                    up.steps.push_back(Step{Step::Kind::Ovl, oid});
                    up.steps.insert(up.steps.end(), fv.steps.begin(), fv.steps.end());
                    up.steps.push_back(Step{Step::Kind::Level, 1});
                    out.push_back(up);
                }
                Materializer* fm = fmat(oid);
                for (const Address& fw2 : fm->neighbors(fv))
                    out.push_back(canonical_level0(Address{}, oid, fw2));
            }
        }
    }
}

void Materializer::emit_overlay_neighbors(const Walk& w, std::vector<Address>& out) {
    const Address& a = w.src;
    const Overlay& o = pres_->uni->overlay_defs.at(w.ovl);
    Address q = take_steps(a, w.chain[w.ovl_scope].prefix);
    auto col_addr = [&](const Address& fv, int level) {
        Address n = q;
        n.steps.push_back(Step{Step::Kind::Ovl, w.ovl});
        n.steps.insert(n.steps.end(), fv.steps.begin(), fv.steps.end());
        n.steps.push_back(Step{Step::Kind::Level, static_cast<std::uint32_t>(level)});
        return n;
    };

    Materializer* fm = fmat(w.ovl);
    for (const Address& fw2 : fm->neighbors(w.faddr)) {
        if (w.level == 0)
            out.push_back(canonical_level0(q, w.ovl, fw2));
        else
            out.push_back(col_addr(fw2, w.level));
    }
    if (o.ray_product) {
        out.push_back(col_addr(w.faddr, w.level + 1));
        if (w.level >= 2) out.push_back(col_addr(w.faddr, w.level - 1));
        if (w.level == 1) out.push_back(canonical_level0(q, w.ovl, w.faddr));
    }
}

Address Materializer::canonical_level0(const Address& owner_prefix, OverlayId oid,
                                       const Address& faddr) {
    const Overlay& o = pres_->uni->overlay_defs.at(oid);
    for (const auto& [gv, fv] : o.glue_pairs)
        if (fv == faddr) return gv;
    if (!o.glue_colours.empty()) {
        auto leaf_abs = psi_bwd_search(owner_prefix, oid, faddr);
        if (leaf_abs) {
            auto lw = walk(*leaf_abs);
            if (!lw) fail(ErrorKind::ConstructionInvariantBroken, "psi preimage invalid");
            const WalkScope& ls = lw->chain.back();
            const auto& nb = ls.graph->neighbors(lw->term);
            if (nb.size() != 1)
                fail(ErrorKind::ConstructionInvariantBroken, "merged vertex is not a leaf");
            if (ls.root != kNoBase && nb[0] == ls.root)
                return parent_leaf_address(*leaf_abs, ls.prefix);
            Address partner(std::vector<Step>(leaf_abs->steps.begin(), leaf_abs->steps.end() - 1));
            partner.steps.push_back(Step{Step::Kind::At, nb[0]});
            return partner;
        }
    }
    Address n = owner_prefix;
    n.steps.push_back(Step{Step::Kind::Ovl, oid});
    n.steps.insert(n.steps.end(), faddr.steps.begin(), faddr.steps.end());
    n.steps.push_back(Step{Step::Kind::Level, 0});
    return n;
}

std::optional<Address> Materializer::psi_bwd_in_scope(const Walk& w, std::size_t scope_idx,
                                                      OverlayId oid, const Address& faddr) {
    return psi_bwd_search(take_steps(w.src, w.chain[scope_idx].prefix), oid, faddr);
}

// Search for the glue-coloured leaf (under the overlay's owner scope, reached
// by owner_prefix) whose componentwise psi image is faddr. Returns its
// absolute address.
std::optional<Address> Materializer::psi_bwd_search(const Address& owner_prefix, OverlayId oid,
                                                    const Address& faddr) {
    const Overlay& o = pres_->uni->overlay_defs.at(oid);
    const BiDict& psi = pres_->uni->psi;
    const Universe& uni = *pres_->uni;

    // owner scope view
    const BaseGraph* g0;
    const std::map<BaseId, ColourId>* typed0;
    BaseId root0;
    if (owner_prefix.empty()) {
        g0 = &pres_->base;
        typed0 = &pres_->typed;
        root0 = kNoBase;
    } else {
        auto ow = walk_prefix_scope(owner_prefix);
        if (!ow) return std::nullopt;
        g0 = ow->graph;
        typed0 = ow->typed;
        root0 = ow->root;
    }

    std::optional<Address> found;
    std::vector<Step> rel;
    // scopes entered during the search, used for the nearest-claim check
    std::vector<const std::vector<OverlayId>*> entered;

    std::function<void(std::size_t, const BaseGraph*, const std::map<BaseId, ColourId>*, BaseId)>
        go = [&](std::size_t i, const BaseGraph* g, const std::map<BaseId, ColourId>* typed,
                 BaseId root) {
            const Step& st = faddr.steps[i];
            const std::vector<BaseId>* pre = psi.bwd(st.id);
            if (!pre) return;
            bool last = (i + 1 == faddr.steps.size());
            for (BaseId d : *pre) {
                if (!g->has_vertex(d)) continue;
                if (root != kNoBase && d == root) continue;
                if (i == 0 && !o.serves(d)) continue;  // first component must be in home
                auto tc = typed->find(d);
                if (tc == typed->end()) continue;
                if (last) {
                    if (st.kind != Step::Kind::At) continue;
                    ColourId c = tc->second;
                    if (std::find(o.glue_colours.begin(), o.glue_colours.end(), c) ==
                        o.glue_colours.end())
                        continue;
                    if (g->degree(d) != 1) continue;
                    // nearest-claim: no scope entered below the owner may glue c
                    bool claimed_inner = false;
                    for (const auto* ovls : entered)
                        for (OverlayId oid2 : *ovls) {
                            const Overlay& o2 = uni.overlay_defs.at(oid2);
                            if (std::find(o2.glue_colours.begin(), o2.glue_colours.end(), c) !=
                                o2.glue_colours.end())
                                claimed_inner = true;
                        }
                    if (claimed_inner) continue;
                    Address cand = owner_prefix;
                    cand.steps.insert(cand.steps.end(), rel.begin(), rel.end());
                    cand.steps.push_back(Step{Step::Kind::At, d});
                    if (found && *found != cand)
                        fail(ErrorKind::ConstructionInvariantBroken,
                             "psi preimage not unique in scope");
                    found = cand;
                } else {
                    if (st.kind != Step::Kind::Enter) continue;
                    if (!pres_->expandable(tc->second)) continue;
                    const Pattern& pat = uni.patterns.at(tc->second);
                    rel.push_back(Step{Step::Kind::Enter, d});
                    entered.push_back(&pat.overlays);
                    go(i + 1, &pat.graph, &pat.typed, pat.root);
                    entered.pop_back();
                    rel.pop_back();
                }
            }
        };
    go(0, g0, typed0, root0);
    return found;
}

// Walk just a prefix (all Enter steps) and return the scope it lands in.
std::optional<Materializer::WalkScope> Materializer::walk_prefix_scope(const Address& prefix) const {
    WalkScope cur{&pres_->base, &pres_->typed, &pres_->overlays, kNoBase, 0};
    for (std::size_t i = 0; i < prefix.steps.size(); ++i) {
        const Step& s = prefix.steps[i];
        if (s.kind != Step::Kind::Enter) return std::nullopt;
        if (!cur.graph->has_vertex(s.id)) return std::nullopt;
        auto it = cur.typed->find(s.id);
        if (it == cur.typed->end() || !pres_->expandable(it->second)) return std::nullopt;
        const Pattern& pat = pres_->uni->patterns.at(it->second);
        cur = WalkScope{&pat.graph, &pat.typed, &pat.overlays, pat.root, i + 1};
    }
    return cur;
}

// ---- expansion ---------------------------------------------------------------

namespace {
struct Budget {
    long cap;
    long used = 0;
    void tick() {
        if (++used > cap) fail(ErrorKind::BudgetExceeded, "vertex budget exceeded");
    }
};

Truncation finish_truncation(std::shared_ptr<const Presentation> p, Materializer& mat,
                             const std::vector<Address>& verts) {
    Truncation t;
    t.pres = p;
    for (const Address& a : verts) t.graph.ensure_vertex(a);
    for (const Address& a : verts) {
        bool incomplete = false;
        for (const Address& b : mat.neighbors(a)) {
            if (t.graph.has_vertex(b)) {
                if (a < b) t.graph.add_edge(a, b);
            } else {
                incomplete = true;
            }
        }
        auto col = mat.colour_of(a);
        if (col) t.graph.set_colour(a, *col);
        if (incomplete) {
            FrontierInfo fi;
            fi.eventual_degree = mat.eventual_degree(a);
            auto pend = mat.pending_colour(a);
            fi.pending = pend ? *pend : kNoColour;
            t.frontier.emplace(a, fi);
        }
    }
    if (p->root && t.graph.has_vertex(*p->root)) t.graph.set_root(*p->root);
    return t;
}
} // namespace

Truncation expand(std::shared_ptr<const Presentation> p, int depth, const ExpandOptions& opt) {
    if (depth > opt.depth_cap) fail(ErrorKind::BudgetExceeded, "depth cap exceeded");
    Materializer mat(p);
    Budget budget{opt.vertex_budget};

    // Structural enumeration: pattern copies to Enter-depth <= depth, overlay
    // grids to F-depth <= depth and level <= depth.
    std::vector<Address> verts;
    std::function<void(const Address&, const BaseGraph&, const std::map<BaseId, ColourId>&,
                       const std::vector<OverlayId>&, BaseId, int)>
        enumerate = [&](const Address& prefix, const BaseGraph& g,
                        const std::map<BaseId, ColourId>& typed,
                        const std::vector<OverlayId>& ovls, BaseId root, int remaining) {
            std::vector<BaseId> vs = g.vertices();
            std::sort(vs.begin(), vs.end());
            for (BaseId v : vs) {
                if (root != kNoBase && v == root) continue;
                Address a = prefix;
                a.steps.push_back(Step{Step::Kind::At, v});
                budget.tick();
                verts.push_back(a);
                auto tc = typed.find(v);
                if (tc != typed.end() && p->expandable(tc->second) && remaining > 0) {
                    const Pattern& pat = p->uni->patterns.at(tc->second);
                    Address sub = prefix;
                    sub.steps.push_back(Step{Step::Kind::Enter, v});
                    enumerate(sub, pat.graph, pat.typed, pat.overlays, pat.root, remaining - 1);
                }
            }
            for (OverlayId oid : ovls) {
                const Overlay& o = p->uni->overlay_defs.at(oid);
                Truncation ft = expand(o.f, remaining, opt);
                int maxlevel = o.ray_product ? remaining : 0;
                for (const Address& fv : ft.graph.vertices_sorted()) {
                    for (int lvl = 0; lvl <= maxlevel; ++lvl) {
                        Address a = prefix;
                        a.steps.push_back(Step{Step::Kind::Ovl, oid});
                        a.steps.insert(a.steps.end(), fv.steps.begin(), fv.steps.end());
                        a.steps.push_back(Step{Step::Kind::Level, static_cast<std::uint32_t>(lvl)});
                        if (!mat.contains(a)) continue;  // merged columns fold into the host
                        budget.tick();
                        verts.push_back(a);
                    }
                }
            }
        };
    enumerate(Address{}, p->base, p->typed, p->overlays, kNoBase, depth);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return finish_truncation(p, mat, verts);
}

Truncation truncate_with(Materializer& mat, const std::vector<Address>& seeds, int r,
                         const ExpandOptions& opt) {
    Budget budget{opt.vertex_budget};
    std::map<Address, int> dist;
    std::deque<Address> q;
    for (const Address& s : seeds) {
        if (!mat.contains(s)) fail(ErrorKind::UnknownVertex, "seed not in presentation");
        if (dist.emplace(s, 0).second) {
            budget.tick();
            q.push_back(s);
        }
    }
    while (!q.empty()) {
        Address v = q.front();
        q.pop_front();
        int d = dist.at(v);
        if (d == r) continue;
        for (const Address& u : mat.neighbors(v)) {
            if (dist.emplace(u, d + 1).second) {
                budget.tick();
                q.push_back(u);
            }
        }
    }
    std::vector<Address> verts;
    verts.reserve(dist.size());
    for (const auto& [a, d] : dist) verts.push_back(a);
    return finish_truncation(mat.pres_ptr(), mat, verts);
}

Truncation truncate_ball_multi(std::shared_ptr<const Presentation> p,
                               const std::vector<Address>& seeds, int r,
                               const ExpandOptions& opt) {
    Materializer mat(p);
    return truncate_with(mat, seeds, r, opt);
}

Truncation truncate_ball(std::shared_ptr<const Presentation> p, const Address& center, int r,
                         const ExpandOptions& opt) {
    return truncate_ball_multi(p, {center}, r, opt);
}

// ---- delete / split ------------------------------------------------------------

Presentation delete_vertex(const Presentation& p, const Address& v) {
    auto b = v.terminal_base();
    if (!b || v.steps.size() != 1 || !p.base.has_vertex(*b))
        fail(ErrorKind::NotInBase, "delete_vertex: not a base vertex");
    Presentation out = p;
    out.base.remove_vertex(*b);
    out.typed.erase(*b);
    if (out.root && *out.root == v) out.root.reset();
    return out;
}

std::vector<Presentation> split_components(const Presentation& p) {
    // union-find over base vertices and overlay slots
    std::map<BaseId, BaseId> parent;
    std::function<BaseId(BaseId)> find = [&](BaseId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](BaseId a, BaseId b) { parent[find(a)] = find(b); };

    std::vector<BaseId> vs = p.base.vertices();
    for (BaseId v : vs) parent[v] = v;
    // overlay slots get synthetic keys above the base id range
    BaseId ovl_key_base = 0;
    for (BaseId v : vs) ovl_key_base = std::max(ovl_key_base, v + 1);
    ovl_key_base += 1000000;
    std::map<OverlayId, BaseId> ovl_key;
    for (OverlayId oid : p.overlays) {
        BaseId k = ovl_key_base + oid;
        parent[k] = k;
        ovl_key[oid] = k;
    }

    for (BaseId v : vs)
        for (BaseId u : p.base.neighbors(v))
            if (v < u) unite(v, u);

    for (BaseId v : vs) {
        auto tc = p.typed.find(v);
        if (tc == p.typed.end()) continue;
        ColourId c = tc->second;
        std::set<ColourId> reach{c};
        if (p.expandable(c))
            for (ColourId rc : p.uni->reachable_colours(c, p.stage)) reach.insert(rc);
        for (OverlayId oid : p.overlays) {
            const Overlay& o = p.uni->overlay_defs.at(oid);
            if (!o.serves(v)) continue;
            for (ColourId gc : o.glue_colours)
                if (reach.count(gc)) unite(v, ovl_key[oid]);
        }
    }
    for (OverlayId oid : p.overlays) {
        const Overlay& o = p.uni->overlay_defs.at(oid);
        for (const auto& [gv, fv] : o.glue_pairs) {
            auto b = gv.terminal_base();
            if (b && gv.steps.size() == 1 && p.base.has_vertex(*b)) unite(*b, ovl_key[oid]);
        }
    }

    std::map<BaseId, std::vector<BaseId>> groups;
    for (BaseId v : vs) groups[find(v)].push_back(v);

    std::vector<Presentation> out;
    for (auto& [rep, members] : groups) {
        Presentation c;
        c.uni = p.uni;
        c.stage = p.stage;
        std::set<BaseId> mset(members.begin(), members.end());
        for (BaseId v : members) {
            c.base.add_vertex(v);
            for (BaseId u : p.base.neighbors(v))
                if (mset.count(u) && v < u) c.base.add_edge(v, u);
            auto tc = p.typed.find(v);
            if (tc != p.typed.end()) c.typed[v] = tc->second;
        }
        for (OverlayId oid : p.overlays)
            if (find(ovl_key[oid]) == find(members[0])) c.overlays.push_back(oid);
        if (p.root) {
            auto rb = p.root->terminal_base();
            if (rb && mset.count(*rb)) c.root = p.root;
        }
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Presentation& a, const Presentation& b) {
        auto va = a.base.vertices(), vb = b.base.vertices();
        return *std::min_element(va.begin(), va.end()) < *std::min_element(vb.begin(), vb.end());
    });
    return out;
}

} // namespace pforge
