#include "pforge/construct.hpp"
#include "pforge/errors.hpp"
#include "pforge/gluing.hpp"
#include "pforge/iso.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace pforge {

const char* variant_name(Variant v) {
    switch (v) {
    case Variant::tree: return "tree";
    case Variant::one_ended: return "one_ended";
    case Variant::countable: return "countable";
    }
    return "?";
}

Variant variant_from_name(const std::string& s) {
    if (s == "tree") return Variant::tree;
    if (s == "one_ended") return Variant::one_ended;
    if (s == "countable") return Variant::countable;
    fail(ErrorKind::BadInput, "unknown variant '" + s + "'");
}

int Enumeration::val2(long m) {
    int v = 0;
    while (m % 2 == 0) {
        m /= 2;
        ++v;
    }
    return v;
}

bool Enumeration::in_index_set(long j, int stage) const {
    long L = static_cast<long>(initial.size());
    if (j < L) return true;
    return val2(j - L + 1) <= stage;
}

namespace {

std::string nstr(int n) { return std::to_string(n); }

Address at(BaseId b) { return Address::at(b); }

// ---- base case ------------------------------------------------------------------

struct BaseIds {
    std::map<std::string, BaseId> ids;
    BaseId operator()(const std::string& name) const { return ids.at(name); }
};

BaseIds intern_scope(Universe& uni, const std::string& scope,
                     const std::vector<std::string>& names, int stage) {
    BaseIds out;
    for (const auto& n : names) out.ids[n] = uni.reg.intern(scope, n, stage);
    return out;
}

} // namespace

StageState base_case(Variant variant, const BuildOptions& opt) {
    StageState s;
    s.variant = variant;
    s.n = 0;
    s.uni = std::make_shared<Universe>();
    Universe& uni = *s.uni;

    s.colR = uni.add_colour("R0", 0, false);
    s.colB = uni.add_colour("B0", 0, false);
    s.colRF = uni.add_colour("Rf0", 0, true);
    s.colBF = uni.add_colour("Bf0", 0, true);

    ColourId ray = kNoColour;
    if (variant == Variant::countable) {
        ray = uni.add_colour("ray", 0, false, true);
        BaseId r0 = uni.reg.intern("ray", "p0", 0);
        BaseId r1 = uni.reg.intern("ray", "p1", 0);
        Pattern pat;
        pat.colour = ray;
        pat.graph.add_edge(r0, r1);
        pat.root = r0;
        pat.typed[r1] = ray;
        uni.patterns.emplace(ray, std::move(pat));
    }

    // G0: hubs a (paths of length 5 and 3 to b), root leaf and spare leaf at a,
    // leaf lb at b. Spectrum {1,3,5}.
    std::vector<std::string> gnames{"a", "b", "x1", "x2", "x3", "x4", "y1", "y2",
                                    "rt", "ex", "lb"};
    if (variant == Variant::countable) gnames.push_back("w0");
    BaseIds G = intern_scope(uni, "G0", gnames, 0);
    s.g = std::make_shared<Presentation>();
    s.g->uni = s.uni;
    s.g->stage = 0;
    auto& gb = s.g->base;
    gb.add_edge(G("a"), G("x1"));
    gb.add_edge(G("x1"), G("x2"));
    gb.add_edge(G("x2"), G("x3"));
    gb.add_edge(G("x3"), G("x4"));
    gb.add_edge(G("x4"), G("b"));
    gb.add_edge(G("a"), G("y1"));
    gb.add_edge(G("y1"), G("y2"));
    gb.add_edge(G("y2"), G("b"));
    gb.add_edge(G("a"), G("rt"));
    gb.add_edge(G("a"), G("ex"));
    gb.add_edge(G("b"), G("lb"));
    if (variant == Variant::countable) {
        gb.add_edge(G("b"), G("w0"));
        s.g->typed[G("w0")] = ray;
    }
    s.g->typed[G("rt")] = s.colR;
    s.g->typed[G("lb")] = s.colB;
    s.rootG = at(G("rt"));
    s.g->root = s.rootG;

    // H0: paths of length 5 and 4, root leaf at a', leaf lr at b'. Spectrum {1,4,5}.
    std::vector<std::string> hnames{"a", "b", "p1", "p2", "p3", "p4", "q1", "q2", "q3",
                                    "rt", "lr"};
    if (variant == Variant::countable) hnames.push_back("w0");
    BaseIds H = intern_scope(uni, "H0", hnames, 0);
    s.h = std::make_shared<Presentation>();
    s.h->uni = s.uni;
    s.h->stage = 0;
    auto& hb = s.h->base;
    hb.add_edge(H("a"), H("p1"));
    hb.add_edge(H("p1"), H("p2"));
    hb.add_edge(H("p2"), H("p3"));
    hb.add_edge(H("p3"), H("p4"));
    hb.add_edge(H("p4"), H("b"));
    hb.add_edge(H("a"), H("q1"));
    hb.add_edge(H("q1"), H("q2"));
    hb.add_edge(H("q2"), H("q3"));
    hb.add_edge(H("q3"), H("b"));
    hb.add_edge(H("a"), H("rt"));
    hb.add_edge(H("b"), H("lr"));
    if (variant == Variant::countable) {
        hb.add_edge(H("b"), H("w0"));
        s.h->typed[H("w0")] = ray;
    }
    s.h->typed[H("rt")] = s.colB;
    s.h->typed[H("lr")] = s.colR;
    s.rootH = at(H("rt"));
    s.h->root = s.rootH;

    // F0: single edge x - y
    BaseIds F = intern_scope(uni, "F0", {"x", "y"}, 0);
    s.f = std::make_shared<Presentation>();
    s.f->uni = s.uni;
    s.f->stage = 0;
    s.f->base.add_edge(F("x"), F("y"));
    s.f->typed[F("x")] = s.colRF;
    s.f->typed[F("y")] = s.colBF;

    uni.psi.add(G("rt"), F("x"));
    uni.psi.add(G("lb"), F("y"));
    uni.psi.add(H("rt"), F("y"));
    uni.psi.add(H("lr"), F("x"));
    auto psidict = std::shared_ptr<const BiDict>(s.uni, &s.uni->psi);
    s.psiG = componentwise(psidict);
    s.psiH = componentwise(psidict);

    // enumerations: t0 != root, coloured leaves last
    for (const auto& n : std::vector<std::string>{"b", "a", "x1", "x2", "x3", "x4", "y1",
                                                  "y2", "ex"})
        s.enumG.initial.push_back(at(G(n)));
    if (variant == Variant::countable) s.enumG.initial.push_back(at(G("w0")));
    s.enumG.initial.push_back(at(G("lb")));
    s.enumG.initial.push_back(at(G("rt")));
    for (const auto& n : std::vector<std::string>{"b", "a", "p1", "p2", "p3", "p4", "q1",
                                                  "q2", "q3"})
        s.enumH.initial.push_back(at(H(n)));
    if (variant == Variant::countable) s.enumH.initial.push_back(at(H("w0")));
    s.enumH.initial.push_back(at(H("lr")));
    s.enumH.initial.push_back(at(H("rt")));

    MiiReport mg = certified_spectrum(s.g, 5, opt.expand());
    MiiReport mh = certified_spectrum(s.h, 5, opt.expand());
    if (!mg.certified || !mh.certified)
        fail(ErrorKind::ConstructionInvariantBroken, "base spectra not certifiable");
    if (!mg.sigma0() || mg.sigma0() != mh.sigma0())
        fail(ErrorKind::ConstructionInvariantBroken, "base graphs disagree on sigma0");
    if (!spectrally_distinguishable(mg, mh))
        fail(ErrorKind::ConstructionInvariantBroken, "base graphs not spectrally distinguishable");
    s.k = *mg.sigma0();
    return s;
}

// ---- enumeration ------------------------------------------------------------------

namespace {

// q-th vertex (0-based) created at step `stage` on one side, in BFS order from
// the stage root, per layer non-coloured before coloured.
Address stage_new_vertex(const Run& run, bool gside, int stage, long q,
                         const BuildOptions& opt) {
    const StageState& cur = run.stages.at(stage);
    std::shared_ptr<Presentation> pres = gside ? cur.g : cur.h;
    std::optional<Materializer> prev_mat;
    if (stage > 0) {
        const StageState& prev = run.stages.at(stage - 1);
        prev_mat.emplace(gside ? prev.g : prev.h);
    }
    const Enumeration& en = gside ? cur.enumG : cur.enumH;
    std::set<Address> initial(en.initial.begin(), en.initial.end());

    Address root = *pres->root;
    Materializer mat(pres);
    int radius = 8;
    for (int tries = 0; tries < 12; ++tries) {
        Truncation t = truncate_ball(pres, root, radius, opt.expand());
        // layered BFS order
        std::map<Address, int> dist;
        std::deque<Address> bfs{root};
        dist[root] = 0;
        std::vector<std::vector<Address>> layers{{root}};
        while (!bfs.empty()) {
            Address v = bfs.front();
            bfs.pop_front();
            if (!t.complete(v)) continue;
            int d = dist[v];
            for (int wi : t.graph.neighbors(t.graph.index_of(v))) {
                const Address& w = t.graph.vertex(wi);
                if (dist.count(w)) continue;
                dist[w] = d + 1;
                if (static_cast<int>(layers.size()) <= d + 1) layers.resize(d + 2);
                layers[d + 1].push_back(w);
                bfs.push_back(w);
            }
        }
        long seen = 0;
        for (auto& layer : layers) {
            std::sort(layer.begin(), layer.end());
            std::vector<Address> pass2;
            for (const Address& a : layer) {
                bool is_new = stage == 0 ? !initial.count(a) : !prev_mat->contains(a);
                if (!is_new) continue;
                auto col = mat.colour_of(a);
                bool coloured = col && !pres->uni->colour(*col).structural;
                if (coloured) {
                    pass2.push_back(a);
                    continue;
                }
                if (seen == q) return a;
                ++seen;
            }
            for (const Address& a : pass2) {
                if (seen == q) return a;
                ++seen;
            }
        }
        radius *= 2;
    }
    fail(ErrorKind::BudgetExceeded, "enumeration radius exhausted");
}

Address enumerated_vertex(const Run& run, bool gside, long j, const BuildOptions& opt) {
    const StageState& cur = run.last();
    const Enumeration& en = gside ? cur.enumG : cur.enumH;
    long L = static_cast<long>(en.initial.size());
    if (j < L) return en.initial[j];
    long m = j - L + 1;
    int c = Enumeration::val2(m);
    long q = ((m >> c) - 1) / 2;
    if (c > cur.n) fail(ErrorKind::BadInput, "index outside J_n");
    return stage_new_vertex(run, gside, c, q, opt);
}

} // namespace

Address select_next_vertex(const Run& run) {
    const StageState& s = run.last();
    bool even = (s.n % 2 == 0);
    const std::vector<Address>& handled = even ? s.X : s.Y;
    std::set<Address> done(handled.begin(), handled.end());
    BuildOptions opt;
    for (long j = 0;; ++j) {
        if (!(even ? s.enumG : s.enumH).in_index_set(j, s.n)) continue;
        Address v = enumerated_vertex(run, even, j, opt);
        if (done.count(v)) continue;
        return v;
    }
}

// ---- copies -----------------------------------------------------------------------

namespace {

struct CopyResult {
    std::shared_ptr<BiDict> dict;  // src id -> copy id
    BaseGraph graph;
    std::map<BaseId, ColourId> typed;
    std::vector<OverlayId> overlays;                       // fresh defs
    std::vector<std::pair<OverlayId, OverlayId>> ovl_map;  // src def -> fresh def
};

// Copy a presentation's base into a fresh scope; hat copies of its overlay
// defs are registered and psi entries for copied typed leaves are added.
CopyResult copy_base(Universe& uni, const Presentation& src, const std::string& scope,
                     int stage, bool extend_psi = true) {
    CopyResult out;
    out.dict = std::make_shared<BiDict>();
    for (BaseId v : src.base.vertices()) {
        const BaseInfo& info = uni.reg.info(v);
        BaseId nv = uni.reg.intern(scope, info.scope + "." + info.name, stage);
        out.dict->add(v, nv);
    }
    auto cp = [&](BaseId v) { return *out.dict->fwd(v); };
    for (BaseId v : src.base.vertices()) {
        out.graph.add_vertex(cp(v));
        for (BaseId w : src.base.neighbors(v))
            if (v < w) out.graph.add_edge(cp(v), cp(w));
    }
    for (const auto& [v, c] : src.typed) {
        out.typed[cp(v)] = c;
        if (!extend_psi) continue;
        auto entry = uni.psi.fwd(v);
        if (entry) {
            uni.psi.add(cp(v), *entry);
        } else if (!uni.colour(c).structural) {
            fail(ErrorKind::ConstructionInvariantBroken,
                 "typed leaf without a psi entry was copied");
        }
    }
    for (OverlayId oid : src.overlays) {
        const Overlay& o = uni.overlay_defs.at(oid);
        Overlay fresh;
        fresh.tag = scope + ":" + o.tag;
        fresh.f = o.f;
        fresh.ray_product = o.ray_product;
        fresh.glue_colours = o.glue_colours;
        for (BaseId hid : o.home) fresh.home.insert(cp(hid));
        if (!o.glue_pairs.empty())
            fail(ErrorKind::ConstructionInvariantBroken,
                 "explicit-pair overlays cannot be copied");
        OverlayId nid = uni.add_overlay(std::move(fresh));
        out.overlays.push_back(nid);
        out.ovl_map.emplace_back(oid, nid);
    }
    return out;
}

BaseId unique_neighbor(const BaseGraph& g, BaseId v) {
    const auto& nb = g.neighbors(v);
    if (nb.size() != 1)
        fail(ErrorKind::ConstructionInvariantBroken, "expected a degree-1 vertex");
    return nb[0];
}

int sigma0_of(std::shared_ptr<const Presentation> p, int hint, const BuildOptions& opt) {
    MiiReport rep = certified_spectrum(p, hint, opt.expand());
    if (!rep.certified)
        fail(ErrorKind::ConstructionInvariantBroken, "spectrum not certifiable during step");
    return rep.sigma0_or_zero();
}

} // namespace

TildeBundle build_tilde(const Run& run, const Address& v, const BuildOptions& opt) {
    const StageState& s = run.last();
    Universe& uni = *s.uni;
    int n = s.n;
    bool even = (n % 2 == 0);
    std::shared_ptr<Presentation> A = even ? s.g : s.h;
    std::shared_ptr<Presentation> B = even ? s.h : s.g;
    Address rootA = even ? s.rootG : s.rootH;
    Address rootB = even ? s.rootH : s.rootG;
    ColourId colA = even ? s.colR : s.colB;
    ColourId colB_ = even ? s.colB : s.colR;
    ColourId colAF = even ? s.colRF : s.colBF;
    ColourId colBF_ = even ? s.colBF : s.colRF;

    auto vb = v.terminal_base();
    if (!vb || !A->base.has_vertex(*vb))
        fail(ErrorKind::ConstructionInvariantBroken, "selected vertex is not a base vertex");
    if (v == rootA)
        fail(ErrorKind::ConstructionInvariantBroken, "selected vertex equals the root");
    {
        auto tc = A->typed.find(*vb);
        if (tc != A->typed.end() && !uni.colour(tc->second).structural)
            fail(ErrorKind::ConstructionInvariantBroken, "selected vertex is coloured");
    }

    // A - v and its root / v sides
    Presentation del = delete_vertex(*A, v);
    std::vector<Presentation> comps = split_components(del);
    const Presentation* ar = nullptr;
    for (const auto& c : comps)
        if (c.base.has_vertex(*rootA.terminal_base())) ar = &c;
    if (!ar) fail(ErrorKind::ConstructionInvariantBroken, "root component missing");
    auto Ar = std::make_shared<Presentation>(*ar);
    Ar->uni = s.uni;
    Ar->stage = A->stage;
    Ar->root = rootA;

    auto Av = std::make_shared<Presentation>();
    Av->uni = s.uni;
    Av->stage = A->stage;
    Av->root = v;
    for (BaseId w : A->base.vertices()) {
        if (Ar->base.has_vertex(w)) continue;
        Av->base.add_vertex(w);
        for (BaseId u : A->base.neighbors(w))
            if (!Ar->base.has_vertex(u)) Av->base.add_edge(w, u);
        auto tc = A->typed.find(w);
        if (tc != A->typed.end()) Av->typed[w] = tc->second;
    }
    for (OverlayId oid : A->overlays) {
        bool in_r = std::find(Ar->overlays.begin(), Ar->overlays.end(), oid) != Ar->overlays.end();
        if (!in_r) Av->overlays.push_back(oid);
    }

    // k-tilde from the four certified spectra
    int kt = std::max(std::max(sigma0_of(A, s.k, opt), sigma0_of(B, s.k, opt)),
                      std::max(sigma0_of(Ar, s.k, opt), sigma0_of(Av, s.k, opt))) +
             1;
    int p = 4 * (kt + 1) + 1;

    TildeBundle b;
    b.v = v;
    b.ktilde = kt;

    // copies
    CopyResult hatB = copy_base(uni, *B, "hB" + nstr(n), n);
    CopyResult hatAr = copy_base(uni, *Ar, "hAr" + nstr(n), n);
    CopyResult hatAv = copy_base(uni, *Av, "hAv" + nstr(n), n);
    b.vhat = at(*hatAv.dict->fwd(*vb));

    // M base
    auto m = std::make_shared<Presentation>();
    m->uni = s.uni;
    m->stage = n;
    m->base.merge(A->base);
    m->base.merge(B->base);
    m->base.merge(hatB.graph);
    m->base.merge(hatAr.graph);
    m->base.merge(hatAv.graph);
    for (const auto& mp : {A->typed, B->typed, hatB.typed, hatAr.typed, hatAv.typed})
        for (const auto& [w, c] : mp) m->typed[w] = c;
    for (const auto& list :
         {A->overlays, B->overlays, hatB.overlays, hatAr.overlays, hatAv.overlays})
        for (OverlayId oid : list) m->overlays.push_back(oid);

    BaseId rootA_id = *rootA.terminal_base();
    BaseId rootB_id = *rootB.terminal_base();
    BaseId nbrA = unique_neighbor(A->base, rootA_id);
    BaseId nbrB = unique_neighbor(B->base, rootB_id);

    // A-side path u0..up with decorations
    std::vector<BaseId> u(p + 1);
    u[0] = rootA_id;
    for (int i = 1; i < p; ++i) u[i] = uni.reg.intern("pA" + nstr(n), "u" + nstr(i), n);
    u[p] = *hatB.dict->fwd(rootB_id);
    for (int i = 0; i < p; ++i) m->base.add_edge(u[i], u[i + 1]);
    BaseId eA0 = uni.reg.intern("pA" + nstr(n), "e0", n);
    BaseId eAp = uni.reg.intern("pA" + nstr(n), "ep", n);
    m->base.add_edge(u[0], eA0);
    m->base.add_edge(u[p], eAp);
    BaseId rAnew = uni.reg.intern("sA" + nstr(n + 1), "root", n + 1);
    BaseId gA = uni.reg.intern("sA" + nstr(n + 1), "g", n + 1);
    m->base.add_edge(u[2 * kt + 2], rAnew);
    m->base.add_edge(u[2 * kt + 3], gA);

    // B-side path v0..vp with decorations
    std::vector<BaseId> w(p + 1);
    w[0] = *hatAr.dict->fwd(rootA_id);
    for (int i = 1; i < p; ++i) w[i] = uni.reg.intern("pB" + nstr(n), "v" + nstr(i), n);
    w[p] = rootB_id;
    for (int i = 0; i < p; ++i) m->base.add_edge(w[i], w[i + 1]);
    BaseId eB0 = uni.reg.intern("pB" + nstr(n), "e0", n);
    BaseId eBp = uni.reg.intern("pB" + nstr(n), "ep", n);
    m->base.add_edge(w[0], eB0);
    m->base.add_edge(w[p], eBp);
    BaseId rBnew = uni.reg.intern("sB" + nstr(n + 1), "root", n + 1);
    BaseId yB = uni.reg.intern("sB" + nstr(n + 1), "y", n + 1);
    m->base.add_edge(w[2 * kt + 3], rBnew);
    m->base.add_edge(w[2 * kt + 2], yB);
    m->base.add_edge(*hatAv.dict->fwd(*vb), w[kt + 1]);

    // colour transfer exclusions: the four vertices that stop being leaves
    m->typed.erase(rootA_id);
    m->typed.erase(*hatAr.dict->fwd(rootA_id));
    m->typed.erase(rootB_id);
    m->typed.erase(*hatB.dict->fwd(rootB_id));

    // new colours and the four new promise leaves
    std::string kindA = even ? "R" : "B";
    std::string kindB = even ? "B" : "R";
    b.col_newA = uni.add_colour(kindA + nstr(n + 1), n + 1, false);
    b.col_newB = uni.add_colour(kindB + nstr(n + 1), n + 1, false);
    m->typed[rAnew] = b.col_newA;
    m->typed[yB] = b.col_newA;
    m->typed[rBnew] = b.col_newB;
    m->typed[gA] = b.col_newB;

    b.m = m;
    b.rootAnew = at(rAnew);
    b.rootBnew = at(rBnew);
    b.promises = {DirectedBridge{at(nbrA), at(rootA_id)}, DirectedBridge{at(nbrB), at(rootB_id)},
                  DirectedBridge{at(u[2 * kt + 2]), at(rAnew)},
                  DirectedBridge{at(w[2 * kt + 3]), at(rBnew)}};
    b.family_colours = {colA, colB_, b.col_newA, b.col_newB};

    // the tilde isomorphism at base level
    b.tilde_dict = std::make_shared<BiDict>();
    for (const auto& [src, dst] : hatAr.dict->entries()) b.tilde_dict->add(src, dst);
    for (const auto& [src, dst] : hatAv.dict->entries())
        if (src != *vb) b.tilde_dict->add(src, dst);
    for (const auto& [src, dst] : hatB.dict->entries()) b.tilde_dict->add(dst, src);
    for (int i = 1; i < p; ++i) b.tilde_dict->add(u[i], w[i]);
    b.tilde_dict->add(eA0, eB0);
    b.tilde_dict->add(eAp, eBp);
    b.tilde_dict->add(rAnew, yB);
    b.tilde_dict->add(gA, rBnew);
    for (const auto& [src, dst] : hatAr.ovl_map) b.tilde_ovls.emplace_back(src, dst);
    for (const auto& [src, dst] : hatAv.ovl_map) b.tilde_ovls.emplace_back(src, dst);
    for (const auto& [src, dst] : hatB.ovl_map) b.tilde_ovls.emplace_back(dst, src);

    // ---- F side -------------------------------------------------------------
    BaseId aF = *uni.psi.fwd(rootA_id);
    BaseId bF = *uni.psi.fwd(rootB_id);
    CopyResult fb = copy_base(uni, *s.f, "FB" + nstr(n), n, false);
    b.fb_dict = fb.dict;

    auto ftilde = std::make_shared<Presentation>();
    ftilde->uni = s.uni;
    ftilde->stage = n;
    ftilde->base.merge(s.f->base);
    ftilde->base.merge(fb.graph);
    for (const auto& mp : {s.f->typed, fb.typed})
        for (const auto& [wv, c] : mp) ftilde->typed[wv] = c;
    BaseId fu1 = uni.reg.intern("pF" + nstr(n), "u1", n);
    BaseId fu2 = uni.reg.intern("pF" + nstr(n), "u2", n);
    BaseId xF = uni.reg.intern("sF" + nstr(n + 1), "x", n + 1);
    BaseId yF = uni.reg.intern("sF" + nstr(n + 1), "y", n + 1);
    ftilde->base.add_edge(aF, fu1);
    ftilde->base.add_edge(fu1, fu2);
    ftilde->base.add_edge(fu2, *fb.dict->fwd(bF));
    ftilde->base.add_edge(fu1, xF);
    ftilde->base.add_edge(fu2, yF);
    ftilde->typed.erase(aF);
    ftilde->typed.erase(*fb.dict->fwd(bF));
    b.col_newAF = uni.add_colour(kindA + "f" + nstr(n + 1), n + 1, true);
    b.col_newBF = uni.add_colour(kindB + "f" + nstr(n + 1), n + 1, true);
    ftilde->typed[xF] = b.col_newAF;
    ftilde->typed[yF] = b.col_newBF;

    CopyResult hatN = copy_base(uni, *ftilde, "hN" + nstr(n), n, false);
    b.hatn_dict = hatN.dict;
    auto nb = std::make_shared<Presentation>();
    nb->uni = s.uni;
    nb->stage = n;
    nb->base.merge(ftilde->base);
    nb->base.merge(hatN.graph);
    for (const auto& mp : {ftilde->typed, hatN.typed})
        for (const auto& [wv, c] : mp) nb->typed[wv] = c;
    b.nbase = nb;

    uni.psi.add(rAnew, xF);
    uni.psi.add(gA, yF);
    uni.psi.add(yB, xF);
    uni.psi.add(rBnew, yF);

    BaseId fnbrA = unique_neighbor(s.f->base, aF);
    BaseId fnbrB = unique_neighbor(s.f->base, bF);
    BaseId r2head = *hatN.dict->fwd(*fb.dict->fwd(bF));
    BaseId r2tail = *hatN.dict->fwd(*fb.dict->fwd(fnbrB));
    b.fattachA = at(aF);
    b.fattachB = at(r2head);
    b.fpromises = {DirectedBridge{at(fnbrA), at(aF)}, DirectedBridge{at(r2tail), at(r2head)},
                   DirectedBridge{at(fu1), at(xF)},
                   DirectedBridge{at(*hatN.dict->fwd(fu2)), at(*hatN.dict->fwd(yF))}};
    b.ffamily_colours = {colAF, colBF_, b.col_newAF, b.col_newBF};
    return b;
}

PromiseStructure promise_structure_of(const TildeBundle& b, bool fside) {
    const Presentation& src = fside ? *b.nbase : *b.m;
    const auto& promises = fside ? b.fpromises : b.promises;
    const auto& colours = fside ? b.ffamily_colours : b.family_colours;
    PromiseStructure out;
    for (BaseId v : src.base.vertices()) out.graph.ensure_vertex(at(v));
    for (BaseId v : src.base.vertices())
        for (BaseId w : src.base.neighbors(v))
            if (v < w) out.graph.add_edge(at(v), at(w));
    out.promises = promises;
    out.families.resize(colours.size());
    for (const auto& [v, c] : src.typed) {
        for (std::size_t i = 0; i < colours.size(); ++i)
            if (colours[i] == c) out.families[i].push_back(at(v));
        out.graph.set_colour(at(v), c);
    }
    for (auto& fam : out.families) std::sort(fam.begin(), fam.end());
    return out;
}

StageState inductive_step(const Run& run, const BuildOptions& opt) {
    const StageState& s = run.last();
    Universe& uni = *s.uni;
    int n = s.n;
    bool even = (n % 2 == 0);

    Address v = select_next_vertex(run);
    TildeBundle b = build_tilde(run, v, opt);

    {
        PromiseStructure pm = promise_structure_of(b, false);
        auto problems = validate(pm);
        if (!problems.empty())
            fail(ErrorKind::ConstructionInvariantBroken, "M promises: " + problems.front());
        PromiseStructure pn = promise_structure_of(b, true);
        problems = validate(pn);
        if (!problems.empty())
            fail(ErrorKind::ConstructionInvariantBroken, "N promises: " + problems.front());
        // the tilde map must respect the promise colouring
        for (const auto& [src, dst] : b.tilde_dict->entries()) {
            auto cs = b.m->typed.find(src);
            auto cd = b.m->typed.find(dst);
            bool s_col = cs != b.m->typed.end();
            bool d_col = cd != b.m->typed.end();
            if (s_col != d_col || (s_col && cs->second != cd->second))
                fail(ErrorKind::ConstructionInvariantBroken,
                     "tilde map does not respect promise colours");
        }
    }

    // closures
    auto mclosed = close_presentation(ClosureInput{*b.m, b.promises, b.family_colours});
    std::vector<Presentation> mcomps = split_components(*mclosed);
    if (mcomps.size() != 2)
        fail(ErrorKind::ConstructionInvariantBroken, "closure of M must have two components");
    const Presentation* compA = nullptr;
    const Presentation* compB = nullptr;
    BaseId rootA_id = even ? *s.rootG.terminal_base() : *s.rootH.terminal_base();
    for (const auto& c : mcomps)
        (c.base.has_vertex(rootA_id) ? compA : compB) = &c;
    if (!compA || !compB)
        fail(ErrorKind::ConstructionInvariantBroken, "closure components mislabeled");

    auto nclosed = close_presentation(ClosureInput{*b.nbase, b.fpromises, b.ffamily_colours});
    std::vector<Presentation> ncomps = split_components(*nclosed);
    if (ncomps.size() != 2)
        fail(ErrorKind::ConstructionInvariantBroken, "closure of N must have two components");
    const Presentation* compF = nullptr;
    for (const auto& c : ncomps)
        if (c.base.has_vertex(*b.fattachA.terminal_base())) compF = &c;
    if (!compF) fail(ErrorKind::ConstructionInvariantBroken, "F component missing");

    StageState next;
    next.n = n + 1;
    next.variant = s.variant;
    next.uni = s.uni;
    next.enumG = s.enumG;
    next.enumH = s.enumH;
    next.k = 2 * (b.ktilde + 1);
    next.ktilde = b.ktilde;
    next.colR = even ? b.col_newA : b.col_newB;
    next.colB = even ? b.col_newB : b.col_newA;
    next.colRF = even ? b.col_newAF : b.col_newBF;
    next.colBF = even ? b.col_newBF : b.col_newAF;
    next.psiG = s.psiG;
    next.psiH = s.psiH;

    next.f = std::make_shared<Presentation>(*compF);
    next.f->uni = s.uni;
    next.f->stage = n + 1;

    auto gside = std::make_shared<Presentation>(even ? *compA : *compB);
    auto hside = std::make_shared<Presentation>(even ? *compB : *compA);
    gside->uni = s.uni;
    hside->uni = s.uni;
    gside->stage = n + 1;
    hside->stage = n + 1;
    next.rootG = even ? b.rootAnew : b.rootBnew;
    next.rootH = even ? b.rootBnew : b.rootAnew;
    gside->root = next.rootG;
    hside->root = next.rootH;

    OverlayId ovlG = 0, ovlH = 0;
    if (s.variant != Variant::tree) {
        Overlay og;
        og.tag = "glueG" + nstr(n + 1);
        og.f = next.f;
        og.ray_product = true;
        og.glue_colours = {next.colR, next.colB};
        for (BaseId w : gside->base.vertices()) og.home.insert(w);
        ovlG = uni.add_overlay(std::move(og));
        gside->overlays.push_back(ovlG);

        Overlay oh;
        oh.tag = "glueH" + nstr(n + 1);
        oh.f = next.f;
        oh.ray_product = true;
        oh.glue_colours = {next.colR, next.colB};
        for (BaseId w : hside->base.vertices()) oh.home.insert(w);
        ovlH = uni.add_overlay(std::move(oh));
        hside->overlays.push_back(ovlH);
    }
    next.g = gside;
    next.h = hside;

    // ---- witnesses ----------------------------------------------------------
    // ext ids: every base id coloured with a current-stage class
    std::set<BaseId> ext_ids;
    for (const auto& [w, c] : b.m->typed)
        if (c == b.family_colours[0] || c == b.family_colours[1]) ext_ids.insert(w);
    std::set<BaseId> fext_ids;
    for (const auto& [w, c] : b.nbase->typed)
        if (c == b.ffamily_colours[0] || c == b.ffamily_colours[1]) fext_ids.insert(w);

    auto pattern_body = [&](ColourId c) {
        std::set<BaseId> out;
        const Pattern& pat = uni.patterns.at(c);
        for (BaseId w : pat.graph.vertices())
            if (w != pat.root) out.insert(w);
        return out;
    };
    ColourId colA = b.family_colours[0];
    ColourId colB_ = b.family_colours[1];
    ColourId colAF = b.ffamily_colours[0];
    ColourId colBF_ = b.ffamily_colours[1];
    Address rootA = even ? s.rootG : s.rootH;
    Address rootB = even ? s.rootH : s.rootG;

    auto iota = inverse_of(relabel_first(b.hatn_dict));

    auto make_pi_AB = [&](AddressMapPtr pi_inner_AB) {
        // pihat: F_{n+1} -> hat component, then identify back
        LeafExtensionSpec fs;
        fs.inner = std::move(pi_inner_AB);
        fs.ext_ids = fext_ids;
        for (BaseId w : s.f->base.vertices()) fs.inner_region.insert(w);
        fs.dom_root_region = pattern_body(colAF);
        fs.dom_root = b.fattachA;
        fs.cod_root_region = pattern_body(colBF_);
        fs.cod_root = b.fattachB;
        return compose(leaf_extension(std::move(fs)), iota);
    };

    auto lift_AB = [&](AddressMapPtr coreAB, AddressMapPtr piAB) {
        if (s.variant == Variant::tree) return coreAB;
        OverlayId oa = even ? ovlG : ovlH;
        OverlayId ob = even ? ovlH : ovlG;
        return overlay_lift(std::move(coreAB), oa, ob, std::move(piAB));
    };

    // new vertex's witness (A -> B direction)
    {
        AddressMapPtr coreAB = relabel_first(b.tilde_dict, b.tilde_ovls);
        AddressMapPtr pihatAB = relabel_first(b.hatn_dict);
        AddressMapPtr piAB = compose(pihatAB, iota);
        AddressMapPtr hAB = lift_AB(coreAB, piAB);
        Address xkey = even ? b.v : b.vhat;
        Address ykey = even ? b.vhat : b.v;
        next.X = s.X;
        next.Y = s.Y;
        next.phi = s.phi;
        next.X.push_back(xkey);
        next.Y.push_back(ykey);
        next.phi[xkey] = ykey;
        next.hwit[xkey] = even ? hAB : inverse_of(hAB);
        next.piwit[xkey] = even ? piAB : inverse_of(piAB);
    }

    // extended witnesses for the old vertices
    std::shared_ptr<Presentation> Aold = even ? s.g : s.h;
    for (const Address& x : s.X) {
        AddressMapPtr innerAB = even ? s.hwit.at(x) : inverse_of(s.hwit.at(x));
        LeafExtensionSpec spec;
        spec.inner = innerAB;
        spec.ext_ids = ext_ids;
        for (BaseId w : Aold->base.vertices()) spec.inner_region.insert(w);
        for (OverlayId o : Aold->overlays) spec.inner_overlays.insert(o);
        spec.dom_root_region = pattern_body(colA);
        spec.dom_root = rootA;
        spec.cod_root_region = pattern_body(colB_);
        spec.cod_root = rootB;
        AddressMapPtr hprimeAB = leaf_extension(std::move(spec));

        AddressMapPtr piOldAB = even ? s.piwit.at(x) : inverse_of(s.piwit.at(x));
        AddressMapPtr pi_inner =
            compose(compose(piOldAB, relabel_first(b.fb_dict)), relabel_first(b.hatn_dict));
        AddressMapPtr piAB = make_pi_AB(pi_inner);
        AddressMapPtr hAB = lift_AB(hprimeAB, piAB);
        next.hwit[x] = even ? hAB : inverse_of(hAB);
        next.piwit[x] = even ? piAB : inverse_of(piAB);
    }

    return next;
}

Run build_run(Variant variant, int stages, const BuildOptions& opt) {
    Run run;
    run.stages.push_back(base_case(variant, opt));
    for (int i = 0; i < stages; ++i) run.stages.push_back(inductive_step(run, opt));
    return run;
}

int default_radius(const StageState& s) { return 2 * s.k + 2; }

// ---- verification ------------------------------------------------------------------

namespace {

LabeledGraph region_subgraph(const Truncation& host, Materializer& region) {
    std::vector<int> keep;
    for (int i = 0; i < host.graph.vertex_count(); ++i)
        if (region.contains(host.graph.vertex(i))) keep.push_back(i);
    return host.graph.induced(keep);
}

std::vector<Address> colour_class(const Truncation& t, std::initializer_list<ColourId> cols) {
    std::vector<Address> out;
    for (const auto& [a, c] : t.graph.colours())
        for (ColourId want : cols)
            if (c == want) out.push_back(a);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

VerificationReport verify_stage(const Run& run, int n, int radius, const BuildOptions& opt) {
    const StageState& s = run.stages.at(n);
    VerificationReport rep;
    auto clause = [&](const std::string& name, bool applicable, bool pass,
                      const std::string& detail = "") {
        rep.clauses.push_back(ClauseResult{name, applicable, pass, detail});
    };
    ExpandOptions eo = opt.expand();

    Materializer mg(s.g), mh(s.h), mf(s.f);
    Truncation tg = truncate_with(mg, mg.base_vertices(), radius, eo);
    Truncation th = truncate_with(mh, mh.base_vertices(), radius, eo);
    Truncation tf = truncate_with(mf, mf.base_vertices(), radius, eo);

    // (+1) nesting
    if (n == 0) {
        clause("d1_nested", false, true, "no previous stage");
    } else {
        const StageState& prev = run.stages.at(n - 1);
        Materializer mgp(prev.g), mhp(prev.h);
        int prev_radius = std::min(radius, default_radius(prev));
        bool ok = true;
        std::string why;
        std::pair<Materializer*, Materializer*> sides[2] = {{&mgp, &mg}, {&mhp, &mh}};
        for (auto& [mp, mc] : sides) {
            Truncation tp = truncate_with(*mp, mp->base_vertices(), prev_radius, eo);
            for (const Address& a : tp.graph.vertices_sorted()) {
                if (!tp.complete(a)) continue;
                if (!mc->contains(a)) {
                    ok = false;
                    why = "previous-stage vertex missing";
                    break;
                }
                // induced: previous edges persist, and no new edges appear
                // between previous complete vertices
                const auto& now = mc->neighbors(a);
                for (int wi : tp.graph.neighbors(tp.graph.index_of(a)))
                    if (std::find(now.begin(), now.end(), tp.graph.vertex(wi)) == now.end()) {
                        ok = false;
                        why = "previous-stage edge lost";
                    }
                for (const Address& w2 : now)
                    if (tp.graph.has_vertex(w2) && tp.complete(w2) && !tp.graph.has_edge(a, w2)) {
                        ok = false;
                        why = "new edge between previous-stage vertices";
                    }
                if (!ok) break;
            }
            if (!ok) break;
        }
        clause("d1_nested", true, ok, why);
    }

    // (+2)/(+3) degrees
    {
        int maxg = 0, maxh = 0, maxf = 0;
        auto scan = [](const Truncation& t, int& mx) {
            for (const Address& a : t.graph.vertices_sorted()) {
                int d = t.is_frontier(a) ? t.frontier.at(a).eventual_degree
                                         : t.graph.degree(t.graph.index_of(a));
                mx = std::max(mx, d);
            }
        };
        scan(tg, maxg);
        scan(th, maxh);
        scan(tf, maxf);
        clause("d2_degree5", true, maxg <= 5 && maxh <= 5,
               "max deg G=" + nstr(maxg) + " H=" + nstr(maxh));
        clause("d3_degreeF3", true, maxf <= 3, "max deg F=" + nstr(maxf));
    }

    // (+4) roots coloured
    {
        auto cg = mg.colour_of(s.rootG);
        auto ch = mh.colour_of(s.rootH);
        clause("d4_root_colours", true,
               cg && *cg == s.colR && ch && *ch == s.colB &&
                   mg.eventual_degree(s.rootG) == 1 && mh.eventual_degree(s.rootH) == 1);
    }

    // (+5) sigma0 = k_n, certified
    MiiReport specG = certified_spectrum(s.g, s.k, eo);
    MiiReport specH = certified_spectrum(s.h, s.k, eo);
    clause("d5_sigma0", true,
           specG.certified && specH.certified && specG.sigma0_or_zero() == s.k &&
               specH.sigma0_or_zero() == s.k,
           "sigma0 G=" + nstr(specG.sigma0_or_zero()) + " H=" + nstr(specH.sigma0_or_zero()) +
               " k=" + nstr(s.k));

    // (+6) spectral distinguishability
    {
        auto kk = spectrally_distinguishable(specG, specH);
        clause("d6_spectrally_distinguishable", true, kk.has_value(),
               kk ? "k=" + nstr(*kk) : "no separating k");
    }

    // (+7)/(+8) ends and density
    {
        std::vector<int> radii;
        for (int r2 = 1; r2 <= std::min(s.k, radius / 2); ++r2) radii.push_back(r2);
        bool applicable = s.variant != Variant::tree && !radii.empty();
        if (!applicable) {
            clause("d7_ends", false, true, "tree variant");
            clause("d8_density", false, true, "tree variant");
        } else {
            EndReport eg = end_estimate(s.g, s.rootG, radii, s.marked_colours(), eo);
            EndReport eh = end_estimate(s.h, s.rootH, radii, s.marked_colours(), eo);
            bool ends_ok = true, dens_ok = true;
            std::string detail;
            int last_free = 0;
            for (const EndReport* er : {&eg, &eh}) {
                last_free = 0;
                for (const auto& rr : er->per_radius) {
                    if (s.variant == Variant::one_ended) {
                        int want = (n == 0) ? 0 : 1;
                        if (rr.unbounded != want) {
                            ends_ok = false;
                            detail = "radius " + nstr(rr.radius) + ": unbounded=" +
                                     nstr(rr.unbounded);
                        }
                        if (!rr.marked_in_every_unbounded) dens_ok = false;
                    } else {  // countable: primed clauses
                        int want_limit = (n == 0) ? 0 : 1;
                        if (rr.limit_candidates != want_limit) {
                            ends_ok = false;
                            detail = "radius " + nstr(rr.radius) + ": limit=" +
                                     nstr(rr.limit_candidates);
                        }
                        if (n >= 1 && rr.free_candidates < 1) ends_ok = false;
                        if (rr.free_candidates < last_free) ends_ok = false;
                        last_free = rr.free_candidates;
                        if (!rr.marked_only_in_limits) dens_ok = false;
                    }
                }
            }
            clause(s.variant == Variant::countable ? "d7'_ends" : "d7_ends", true, ends_ok,
                   detail);
            clause(s.variant == Variant::countable ? "d8'_density" : "d8_density", true,
                   dens_ok);
        }
    }

    // (+9)/(+10) mii-extension of the previous stage
    if (n == 0) {
        clause("d9_mii_extension_G", false, true, "no previous stage");
        clause("d10_mii_extension_H", false, true, "no previous stage");
    } else {
        const StageState& prev = run.stages.at(n - 1);
        int kprev = prev.k;
        auto check_side = [&](std::shared_ptr<Presentation> prev_p, const Truncation& host,
                              Materializer& host_mat, const std::string& name) {
            Materializer mprev(prev_p);
            LabeledGraph comp = region_subgraph(host, mprev);
            std::vector<Address> bset = colour_class(host, {prev.colR, prev.colB});
            std::string why;
            bool ok = check_mii_extension(host, comp, bset, kprev + 1, true, true, &why);
            // (b): the ball must avoid the new colour classes
            LabeledGraph bl = ball(host.graph, comp.vertices_sorted(), kprev + 1);
            for (const Address& a : bl.vertices_sorted()) {
                auto c = host_mat.colour_of(a);
                if (c && (*c == s.colR || *c == s.colB)) {
                    ok = false;
                    why = "ball meets a new colour class";
                }
            }
            clause(name, true, ok, why);
        };
        check_side(prev.g, tg, mg, "d9_mii_extension_G");
        check_side(prev.h, th, mh, "d10_mii_extension_H");
    }

    // (+11) enumeration bookkeeping
    {
        bool ok = n <= 10;  // {0..n} subset J_n via the initial segment
        std::string why = ok ? "" : "initial segment shorter than n";
        std::set<Address> seen;
        for (long j = 0; j <= std::min<long>(n + 2, 6) && ok; ++j) {
            if (!s.enumG.in_index_set(j, n)) continue;
            Address tj = enumerated_vertex(run, true, j, opt);
            Address sj = enumerated_vertex(run, false, j, opt);
            if (!seen.insert(tj).second) ok = false;
            Materializer m2(s.g);
            if (!m2.contains(tj)) ok = false;
            Materializer m3(s.h);
            if (!m3.contains(sj)) ok = false;
        }
        clause("d11_enumerations", true, ok, why);
    }

    // (+12) X/Y bookkeeping
    {
        bool ok = static_cast<int>(s.X.size()) == n && static_cast<int>(s.Y.size()) == n;
        std::string why = ok ? "" : "|X_n| != n";
        if (n >= 1) {
            const StageState& prev = run.stages.at(n - 1);
            for (std::size_t i = 0; i < prev.X.size() && ok; ++i)
                if (s.X[i] != prev.X[i] || s.Y[i] != prev.Y[i]) {
                    ok = false;
                    why = "X/Y not nested";
                }
            for (const auto& [x, y] : prev.phi)
                if (!s.phi.count(x) || s.phi.at(x) != y) {
                    ok = false;
                    why = "phi restriction broken";
                }
        }
        for (long j = 0; j <= (n - 1) / 2 && n >= 1; ++j) {
            Address tj = enumerated_vertex(run, true, j, opt);
            if (std::find(s.X.begin(), s.X.end(), tj) == s.X.end()) {
                ok = false;
                why = "t_j missing from X_n";
            }
        }
        for (long j = 0; j <= n / 2 - 1 && n >= 1; ++j) {
            Address sj = enumerated_vertex(run, false, j, opt);
            if (std::find(s.Y.begin(), s.Y.end(), sj) == s.Y.end()) {
                ok = false;
                why = "s_j missing from Y_n";
            }
        }
        for (const Address& x : s.X) {
            auto c = mg.colour_of(x);
            if (c && (*c == s.colR || *c == s.colB)) {
                ok = false;
                why = "X meets a colour class";
            }
        }
        clause("d12_XY", true, ok, why);
    }

    // (+13) hypomorphism witnesses
    {
        bool ok = true;
        std::string why;
        std::map<ColourId, ColourId> pair{{s.colR, s.colR}, {s.colB, s.colB}};
        for (const Address& x : s.X) {
            auto gBase = std::make_shared<Presentation>(delete_vertex(*s.g, x));
            auto hBase = std::make_shared<Presentation>(delete_vertex(*s.h, s.phi.at(x)));
            Materializer mgx(gBase), mhy(hBase);
            Truncation tgx = truncate_with(mgx, mgx.base_vertices(), radius, eo);
            Truncation thy = truncate_with(mhy, mhy.base_vertices(), radius, eo);
            WitnessReport wr = evaluate_witness(*s.hwit.at(x), tgx, thy, pair);
            if (!wr.ok) {
                ok = false;
                why = "h_{n,x} at x=" + to_string(x, s.uni->reg) + ": " + wr.detail;
                break;
            }
            // colour classes must map onto each other
            std::set<Address> rg, rh;
            for (const Address& a : colour_class(tgx, {s.colR}))
                if (auto m2 = s.hwit.at(x)->fwd(a); m2 && thy.graph.has_vertex(*m2))
                    rg.insert(*m2);
            for (const Address& a : colour_class(thy, {s.colR})) rh.insert(a);
            for (const Address& a : rg)
                if (!rh.count(a)) {
                    ok = false;
                    why = "red image escapes the red class";
                }
            // coherence with the previous stage
            if (n >= 1) {
                const StageState& prev = run.stages.at(n - 1);
                if (prev.hwit.count(x)) {
                    auto gPrev = std::make_shared<Presentation>(delete_vertex(*prev.g, x));
                    Materializer mgp(gPrev);
                    Truncation tprev =
                        truncate_with(mgp, mgp.base_vertices(),
                                      std::min(radius, default_radius(prev)), eo);
                    for (const Address& a : tprev.graph.vertices_sorted()) {
                        if (!tprev.complete(a)) continue;
                        auto m1 = prev.hwit.at(x)->fwd(a);
                        auto m2 = s.hwit.at(x)->fwd(a);
                        if (!m1 || !m2 || *m1 != *m2) {
                            ok = false;
                            why = "witness does not extend the previous stage";
                            break;
                        }
                    }
                }
            }
            if (!ok) break;
        }
        clause("d13_witnesses", n >= 1, ok, why);
    }

    // (+14) commuting diagram
    {
        bool ok = true;
        std::string why;
        for (const Address& x : s.X) {
            const AddressMapPtr& pi = s.piwit.at(x);
            // pi permutes the F colour classes
            for (const Address& wv : colour_class(tf, {s.colRF, s.colBF})) {
                auto img = pi->fwd(wv);
                if (!img) {
                    ok = false;
                    why = "pi undefined on a coloured F leaf";
                    break;
                }
                auto cw = mf.colour_of(wv);
                auto ci = mf.colour_of(*img);
                if (!ci || *ci != *cw) {
                    ok = false;
                    why = "pi breaks an F colour class";
                    break;
                }
            }
            if (!ok) break;
            // diagram on every materialized coloured leaf of G_n
            for (const Address& l : colour_class(tg, {s.colR, s.colB})) {
                auto pg = s.psiG->fwd(l);
                auto hl = s.hwit.at(x)->fwd(l);
                if (!pg || !hl) {
                    ok = false;
                    why = "psi or h undefined on a leaf";
                    break;
                }
                auto ph = s.psiH->fwd(*hl);
                auto pipg = pi->fwd(*pg);
                if (!ph || !pipg || *ph != *pipg) {
                    ok = false;
                    why = "diagram fails at " + to_string(l, s.uni->reg);
                    break;
                }
            }
            if (!ok) break;
        }
        clause("d14_diagram", n >= 1, ok, why);
    }

    return rep;
}

// ---- non-isomorphism certificate ------------------------------------------------------

CertificateReport nonisomorphism_certificate(const Run& run, int n, int radius,
                                             const BuildOptions& opt) {
    if (n < 1) fail(ErrorKind::BadInput, "certificate needs stage >= 1");
    const StageState& s = run.stages.at(n);
    const StageState& prev = run.stages.at(n - 1);
    int kcut = prev.k;
    ExpandOptions eo = opt.expand();

    CertificateReport rep;
    auto side_spectrum = [&](std::shared_ptr<Presentation> p, const Address& seed) {
        Materializer mat(p);
        Truncation t = truncate_with(mat, mat.base_vertices(), radius, eo);
        // delete interior vertices of every mii-path longer than kcut
        MiiReport paths = mii_paths(t);
        std::set<Address> removed;
        auto delete_interior = [&](const Address& from, const Address& first, int interior_count) {
            Address prev_a = from, cur = first;
            for (int i = 0; i < interior_count; ++i) {
                removed.insert(cur);
                Address nxt;
                bool got = false;
                for (const Address& w2 : mat.neighbors(cur))
                    if (w2 != prev_a) {
                        nxt = w2;
                        got = true;
                    }
                if (!got) break;
                prev_a = cur;
                cur = nxt;
            }
        };
        for (const MiiPath& mp : paths.paths)
            if (mp.length > kcut) delete_interior(mp.a, mp.a_next, mp.length - 1);
        for (const PendingRun& pr : paths.pending) {
            // runs cut by the radius: resolve lazily; delete the materialized
            // interiors of those provably longer than kcut
            RunResolution rr =
                resolve_run(mat, pr.last_complete, pr.frontier, pr.length, 4 * radius + 64);
            int total = rr.infinite ? kcut + 1 : rr.total_length;
            if (total > kcut) delete_interior(pr.anchor, pr.first_step, pr.length);
        }

        // component of the seed in the pruned graph
        std::vector<int> keep;
        for (int i = 0; i < t.graph.vertex_count(); ++i)
            if (!removed.count(t.graph.vertex(i))) keep.push_back(i);
        LabeledGraph pruned = t.graph.induced(keep);
        if (!pruned.has_vertex(seed))
            fail(ErrorKind::ConstructionInvariantBroken, "seed vanished from pruned graph");
        std::vector<LabeledGraph> comps = components(pruned);
        const LabeledGraph* mine = nullptr;
        for (const auto& c : comps)
            if (c.has_vertex(seed)) mine = &c;
        MiiReport rep2 = mii_paths(*mine);
        std::set<int> out;
        for (int x : rep2.spectrum)
            if (x <= kcut) out.insert(x);
        return out;
    };

    BuildOptions bo;
    Address t0 = enumerated_vertex(run, true, 0, bo);
    Address s0 = enumerated_vertex(run, false, 0, bo);
    rep.spectrum_c = side_spectrum(s.g, t0);
    rep.spectrum_d = side_spectrum(s.h, s0);
    for (int x : rep.spectrum_c)
        if (x >= 3 && !rep.spectrum_d.count(x) && !rep.separating_k) rep.separating_k = x;
    for (int x : rep.spectrum_d)
        if (x >= 3 && !rep.spectrum_c.count(x) && (!rep.separating_k || x < *rep.separating_k))
            rep.separating_k = x;
    return rep;
}

} // namespace pforge
