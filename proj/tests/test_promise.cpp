#include <doctest.h>

#include "pforge/errors.hpp"
#include "pforge/iso.hpp"
#include "pforge/promise.hpp"

using namespace pforge;

namespace {

// Two components, mirroring the shape of the construction's promise
// structures at miniature scale:
//   T:  t0 - t1 - l1(c1),  t0 - lp(c2)       (promise 1 behind t0->t1 edge? see below)
//   S:  s0 - s1 - m1(c1),  s0 - mp(c2)
// promise 1: t0 -> t1 (component {t1, l1}), family c1 = {l1, m1}
// promise 2: s0 -> sp placeholder, family c2 = {lp, mp}  (single leaves)
struct TinyPromise {
    std::shared_ptr<Universe> uni = std::make_shared<Universe>();
    ColourId c1, c2;
    std::map<std::string, BaseId> id;
    PromiseStructure ps;
    Presentation m;

    BaseId add(const std::string& n) { return id[n] = uni->reg.intern("T", n, 0); }

    TinyPromise() {
        c1 = uni->add_colour("c1", 0, false);
        c2 = uni->add_colour("c2", 0, false);
        for (const char* n : {"t0", "t1", "l1", "lp", "s0", "s1", "m1", "mp"}) add(n);
        m.uni = uni;
        m.stage = 0;
        m.base.add_edge(id["t0"], id["t1"]);
        m.base.add_edge(id["t1"], id["l1"]);
        m.base.add_edge(id["t0"], id["lp"]);
        m.base.add_edge(id["s0"], id["s1"]);
        m.base.add_edge(id["s1"], id["m1"]);
        m.base.add_edge(id["s0"], id["mp"]);
        m.typed[id["l1"]] = c1;
        m.typed[id["m1"]] = c1;
        m.typed[id["lp"]] = c2;
        m.typed[id["mp"]] = c2;
        ps = as_structure();
    }

    PromiseStructure as_structure() const {
        PromiseStructure out;
        for (BaseId v : m.base.vertices()) out.graph.ensure_vertex(Address::at(v));
        for (BaseId v : m.base.vertices())
            for (BaseId w : m.base.neighbors(v))
                if (v < w) out.graph.add_edge(Address::at(v), Address::at(w));
        out.promises = {DirectedBridge{Address::at(id.at("t0")), Address::at(id.at("t1"))},
                        DirectedBridge{Address::at(id.at("s0")), Address::at(id.at("mp"))}};
        out.families = {{Address::at(id.at("l1")), Address::at(id.at("m1"))},
                        {Address::at(id.at("lp")), Address::at(id.at("mp"))}};
        return out;
    }
};

} // namespace

TEST_CASE("validate accepts the tiny structure and reports planted violations") {
    TinyPromise w;
    CHECK(validate(w.ps).empty());

    PromiseStructure overlapping = w.ps;
    overlapping.families[1].push_back(overlapping.families[0][0]);
    auto problems = validate(overlapping);
    bool found = false;
    for (const auto& p : problems)
        if (p.find("disjoint") != std::string::npos) found = true;
    CHECK(found);

    // placeholder component in the wrong family
    PromiseStructure wrong = w.ps;
    std::swap(wrong.families[0], wrong.families[1]);
    problems = validate(wrong);
    found = false;
    for (const auto& p : problems)
        if (p.find("wrong family") != std::string::npos) found = true;
    CHECK(found);

    // not a bridge
    PromiseStructure tri;
    tri.graph.add_edge(Address::at(0), Address::at(1));
    tri.graph.add_edge(Address::at(1), Address::at(2));
    tri.graph.add_edge(Address::at(2), Address::at(0));
    tri.promises = {DirectedBridge{Address::at(0), Address::at(1)}};
    tri.families = {{}};
    problems = validate(tri);
    CHECK(!problems.empty());
}

TEST_CASE("placeholder bookkeeping") {
    TinyPromise w;
    CHECK(!is_placeholder_promise(w.ps, 0));
    CHECK(is_placeholder_promise(w.ps, 1));
    PlaceholderInfo info = placeholder_info(w.ps);
    REQUIRE(info.placeholder_indices.size() == 1);
    CHECK(info.placeholder_indices[0] == 1);
    CHECK(info.placeholder_leaves[0] == Address::at(w.id["mp"]));
}

TEST_CASE("one-step extension of a placeholder-only structure is a no-op") {
    TinyPromise w;
    PromiseStructure ph = w.ps;
    ph.promises = {w.ps.promises[1]};
    ph.families = {w.ps.families[1]};
    PromiseStructure ext = one_step_extension(ph);
    CHECK(ext.graph.vertex_count() == ph.graph.vertex_count());
    CHECK(ext.families == ph.families);
}

TEST_CASE("one-step extension glues copies and grows families as counted") {
    TinyPromise w;
    PromiseStructure ext = one_step_extension(w.ps);
    // pattern 1 = {t1(root), l1}: one new vertex per family-1 leaf
    CHECK(ext.graph.vertex_count() == w.ps.graph.vertex_count() + 2);
    // |L1^1| = copies of l1 inside the glued copies: one per attachment
    REQUIRE(ext.families.size() == 2);
    CHECK(ext.families[0].size() == 2);  // fresh copies replace the originals
    CHECK(ext.families[1].size() == 2);  // placeholders persist
    // applying twice keeps the old graph as an induced subgraph
    PromiseStructure ext2 = one_step_extension(ext);
    for (const Address& v : ext.graph.vertices_sorted()) CHECK(ext2.graph.has_vertex(v));
    for (const auto& [x, y] : ext.graph.edges_sorted()) CHECK(ext2.graph.has_edge(x, y));
}

TEST_CASE("closure presentation satisfies the leaf-extension and copy laws") {
    TinyPromise w;
    auto closed = close_presentation(ClosureInput{w.m, w.ps.promises, {w.c1, w.c2}});
    CHECK(closed->stage == 1);
    // (cl.1): two components at every depth
    for (int d : {0, 1, 3}) {
        Truncation t = expand(closed, d);
        CHECK(components(t.graph).size() == 2);
    }
    // maximum degree is preserved
    Truncation t = expand(closed, 4);
    int maxdeg = 0;
    for (const Address& a : t.graph.vertices_sorted()) {
        int deg = t.is_frontier(a) ? t.frontier.at(a).eventual_degree
                                   : t.graph.degree(t.graph.index_of(a));
        maxdeg = std::max(maxdeg, deg);
    }
    CHECK(maxdeg == 2);  // the tiny structure is a union of paths throughout

    // (cl.2): rooted balls behind every family-1 leaf match the ball behind
    // the promise edge
    ClosureInput in{w.m, w.ps.promises, {w.c1, w.c2}};
    for (int r : {1, 2, 4}) {
        Truncation whole = expand(closed, r + 2);
        LabeledGraph ball_p =
            rooted_ball_behind(whole, in.promises[0].tail, in.promises[0].head, r);
        for (const Address& l : enumerate_closure_family(closed, w.c1, 2)) {
            LabeledGraph ball_l = rooted_ball_behind(whole, q_edge_tail(whole, l), l, r);
            IsoOptions opt;
            opt.respect_root = true;
            CHECK(find_isomorphism(ball_l, ball_p, opt).has_value());
        }
    }
}

TEST_CASE("closure promise structure keeps exactly the placeholder promises") {
    TinyPromise w;
    ClosurePromise cp = closure_promise_structure(
        ClosureInput{w.m, w.ps.promises, {w.c1, w.c2}});
    REQUIRE(cp.placeholder_indices.size() == 1);
    CHECK(cp.placeholder_indices[0] == 1);
    CHECK(cp.family_colours[0] == w.c2);
    // enumerating the closure family is monotone in depth
    auto d2 = enumerate_closure_family(cp.pres, w.c2, 2);
    auto d3 = enumerate_closure_family(cp.pres, w.c2, 3);
    for (const Address& a : d2) CHECK(std::find(d3.begin(), d3.end(), a) != d3.end());
    Materializer mat(cp.pres);
    for (const Address& a : d2) CHECK(in_closure_family(mat, a, w.c2));
}

TEST_CASE("no placeholder promises leaves an empty closure structure") {
    TinyPromise w;
    ClosurePromise cp = closure_promise_structure(
        ClosureInput{w.m, {w.ps.promises[0]}, {w.c1}});
    CHECK(cp.placeholder_indices.empty());
    CHECK(cp.promises.empty());
}

TEST_CASE("alpha bijections: base case, identity, extension") {
    // two copies of the same structure with psi = identity-up-to-naming
    TinyPromise w1, w2;
    BiDict psi;
    for (const char* n : {"l1", "m1", "lp", "mp"}) psi.add(w1.id[n], w2.id[n]);
    std::map<ColourId, ColourId> pair{{w1.c1, w2.c1}, {w1.c2, w2.c2}};
    ClosureInput dom{w1.m, w1.ps.promises, {w1.c1, w1.c2}};
    ClosureInput cod{w2.m, w2.ps.promises, {w2.c1, w2.c2}};
    (void)close_presentation(dom);  // bind the patterns so regions expand
    (void)close_presentation(cod);

    AlphaBijection a0 = alpha_bijection(dom, cod, psi, pair, 0, 0);
    // depth 0 is psi restricted to the pattern's own coloured leaves
    REQUIRE(a0.pairs.size() == 1);
    CHECK(a0.pairs[0].first == Address::at(w1.id["l1"]));
    CHECK(a0.pairs[0].second == Address::at(w2.id["l1"]));

    AlphaBijection a2 = alpha_bijection(dom, cod, psi, pair, 0, 2);
    AlphaBijection a3 = alpha_bijection(dom, cod, psi, pair, 0, 3);
    // extension: every depth-2 pair persists at depth 3
    for (const auto& pr : a2.pairs)
        CHECK(std::find(a3.pairs.begin(), a3.pairs.end(), pr) != a3.pairs.end());
    CHECK(a3.pairs.size() > a2.pairs.size());

    // violated hypothesis: psi maps a leaf to the wrong colour
    BiDict bad;
    bad.add(w1.id["l1"], w2.id["mp"]);
    bad.add(w1.id["m1"], w2.id["m1"]);
    bad.add(w1.id["lp"], w2.id["lp"]);
    bad.add(w1.id["mp"], w2.id["l1"]);
    CHECK_THROWS_AS((void)alpha_bijection(dom, cod, bad, pair, 0, 1), Error);
}
