#include <doctest.h>

#include "pforge/errors.hpp"
#include "pforge/graph.hpp"
#include "pforge/graph_io.hpp"
#include "pforge/iso.hpp"
#include "oracle.hpp"

#include <random>

using namespace pforge;

namespace {
Address va(std::uint32_t i) { return Address::at(i); }

LabeledGraph path_graph(int n) {
    LabeledGraph g;
    for (int i = 0; i + 1 < n; ++i) g.add_edge(va(i), va(i + 1));
    return g;
}
} // namespace

TEST_CASE("components: two disjoint edges, a triangle, identity case") {
    LabeledGraph g;
    g.add_edge(va(0), va(1));
    g.add_edge(va(2), va(3));
    auto comps = components(g);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].vertex_count() == 2);
    CHECK(comps[1].vertex_count() == 2);

    LabeledGraph tri;
    tri.add_edge(va(0), va(1));
    tri.add_edge(va(1), va(2));
    tri.add_edge(va(2), va(0));
    auto c2 = components(tri);
    REQUIRE(c2.size() == 1);
    CHECK(c2[0].vertex_count() == 3);
    CHECK(c2[0].edge_count() == 3);
}

TEST_CASE("bridge_component on paths, leaves and triangles") {
    LabeledGraph p = path_graph(3);  // a-b-c
    RootedGraph comp = bridge_component(p, DirectedBridge{va(0), va(1)});
    CHECK(comp.graph.vertex_count() == 2);
    CHECK(comp.root == va(1));
    CHECK(comp.graph.has_vertex(va(2)));

    // leaf edge gives a single-vertex rooted graph
    LabeledGraph star;
    star.add_edge(va(0), va(1));
    star.add_edge(va(0), va(2));
    star.add_edge(va(0), va(3));
    RootedGraph leaf = bridge_component(star, DirectedBridge{va(0), va(2)});
    CHECK(leaf.graph.vertex_count() == 1);

    LabeledGraph tri;
    tri.add_edge(va(0), va(1));
    tri.add_edge(va(1), va(2));
    tri.add_edge(va(2), va(0));
    CHECK_THROWS_AS((void)bridge_component(tri, DirectedBridge{va(0), va(1)}), Error);
    CHECK_THROWS_AS((void)bridge_component(tri, DirectedBridge{va(0), va(5)}), Error);
}

TEST_CASE("bridge components partition the vertex set") {
    std::mt19937 rng(7);
    for (int t = 0; t < 50; ++t) {
        LabeledGraph g = oracle::random_tree(rng, 8);
        auto edges = g.edges_sorted();
        for (const auto& [x, y] : edges) {
            auto a = bridge_component(g, DirectedBridge{x, y});
            auto b = bridge_component(g, DirectedBridge{y, x});
            CHECK(a.graph.vertex_count() + b.graph.vertex_count() == g.vertex_count());
            for (const Address& v : a.graph.vertices_sorted()) CHECK(!b.graph.has_vertex(v));
        }
    }
}

TEST_CASE("ball: k = 0, short paths, monotone and stabilizing") {
    LabeledGraph p = path_graph(6);
    LabeledGraph b0 = ball(p, {va(0)}, 0);
    CHECK(b0.vertex_count() == 1);
    LabeledGraph b2 = ball(p, {va(0)}, 2);
    CHECK(b2.vertex_count() == 3);
    CHECK(b2.has_edge(va(0), va(1)));
    CHECK(b2.has_edge(va(1), va(2)));
    int prev = 0;
    for (int k = 0; k < 9; ++k) {
        int now = ball(p, {va(0)}, k).vertex_count();
        CHECK(now >= prev);
        prev = now;
    }
    CHECK(prev == 6);
    CHECK_THROWS_AS((void)ball(p, {va(99)}, 1), Error);
}

TEST_CASE("proper_leaves: star and path") {
    LabeledGraph star;
    star.add_edge(va(0), va(1));
    star.add_edge(va(0), va(2));
    star.add_edge(va(0), va(3));
    CHECK(proper_leaves(star).size() == 3);

    LabeledGraph p = path_graph(3);
    CHECK(proper_leaves(p).empty());
}

TEST_CASE("find_isomorphism: identity, negative case, symmetry") {
    LabeledGraph p = path_graph(4);
    auto f = find_isomorphism(p, p);
    REQUIRE(f.has_value());
    CHECK(is_isomorphism(p, p, *f));

    LabeledGraph star;
    star.add_edge(va(0), va(1));
    star.add_edge(va(0), va(2));
    star.add_edge(va(0), va(3));
    CHECK(!find_isomorphism(p, star).has_value());
    CHECK(!find_isomorphism(star, p).has_value());
}

TEST_CASE("find_isomorphism respects roots and colours") {
    LabeledGraph a = path_graph(3);
    LabeledGraph b = path_graph(3);
    a.set_root(va(0));
    b.set_root(va(1));  // interior vs leaf root
    IsoOptions opt;
    opt.respect_root = true;
    CHECK(!find_isomorphism(a, b, opt).has_value());
    b.set_root(va(2));
    auto f = find_isomorphism(a, b, opt);
    REQUIRE(f.has_value());
    CHECK(f->at(va(0)) == va(2));

    LabeledGraph c = path_graph(3);
    LabeledGraph d = path_graph(3);
    c.set_colour(va(0), 1);
    d.set_colour(va(2), 2);
    IsoOptions oc;
    oc.respect_colours = true;
    CHECK(!find_isomorphism(c, d, oc).has_value());
    d = path_graph(3);
    d.set_colour(va(2), 1);
    auto fc = find_isomorphism(c, d, oc);
    REQUIRE(fc.has_value());
    CHECK(is_isomorphism(c, d, *fc, oc));
}

TEST_CASE("find_isomorphism agrees with exhaustive checking on random pairs") {
    std::mt19937 rng(11);
    for (int t = 0; t < 60; ++t) {
        LabeledGraph g = oracle::random_graph(rng, 7, 0.35);
        // relabeled copy
        std::vector<int> perm(7);
        for (int i = 0; i < 7; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        LabeledGraph h;
        for (int i = 0; i < 7; ++i) h.ensure_vertex(va(100 + perm[i]));
        for (const auto& [x, y] : g.edges_sorted())
            h.add_edge(va(100 + perm[x.terminal_base().value()]),
                       va(100 + perm[y.terminal_base().value()]));
        auto f = find_isomorphism(g, h);
        REQUIRE(f.has_value());
        CHECK(is_isomorphism(g, h, *f));
        // determinism
        auto f2 = find_isomorphism(g, h);
        CHECK(*f == *f2);
    }
}

TEST_CASE("graph6 encoding of small graphs") {
    // K2: n=2, one edge -> 'A_'
    LabeledGraph k2;
    k2.add_edge(va(0), va(1));
    CHECK(graph_to_graph6(k2) == "A_");
    // path of 3: edges 01, 12 -> n=3, bits x(0,1)=1, x(0,2)=0, x(1,2)=1 -> 101000 -> 40+63='g'... encode: B + char(0b101000+63)
    LabeledGraph p3 = path_graph(3);
    std::string g6 = graph_to_graph6(p3);
    REQUIRE(g6.size() == 2);
    CHECK(g6[0] == 'B');
    CHECK(g6[1] == static_cast<char>(0b101000 + 63));
}

TEST_CASE("graph json round trip") {
    Universe uni;
    BaseId a = uni.reg.intern("T", "a", 0);
    BaseId b = uni.reg.intern("T", "b", 0);
    BaseId c = uni.reg.intern("T", "c", 0);
    ColourId col = uni.add_colour("R0", 0, false);
    LabeledGraph g;
    g.add_edge(Address::at(a), Address::at(b));
    g.add_edge(Address::at(b), Address::at(c));
    g.set_root(Address::at(a));
    g.set_colour(Address::at(c), col);
    auto j = graph_to_json(g, uni);
    LabeledGraph g2 = graph_from_json(j, uni);
    CHECK(graph_to_json(g2, uni) == j);
}
