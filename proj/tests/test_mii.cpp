#include <doctest.h>

#include "pforge/construct.hpp"
#include "pforge/errors.hpp"
#include "pforge/mii.hpp"
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

LabeledGraph cycle_graph(int n) {
    LabeledGraph g;
    for (int i = 0; i < n; ++i) g.add_edge(va(i), va((i + 1) % n));
    return g;
}
} // namespace

TEST_CASE("mii spectrum of a path and a cycle") {
    MiiReport p = mii_paths(path_graph(4));  // a-b-c-d: one mii-path of length 3
    CHECK(p.spectrum == std::set<int>{3});
    CHECK(p.sigma0() == 3);
    CHECK(!p.sigma1().has_value());

    MiiReport c = mii_paths(cycle_graph(5));
    CHECK(c.spectrum.empty());
    CHECK(!c.sigma0().has_value());
}

TEST_CASE("base recipe graphs have the frozen spectra {1,3,5} and {1,4,5}") {
    StageState s = base_case(Variant::one_ended);
    Truncation tg = expand(s.g, 0);
    Truncation th = expand(s.h, 0);
    // stage-0 graphs are finite: the truncation at depth 0 is everything
    CHECK(tg.frontier.empty());
    CHECK(th.frontier.empty());
    CHECK(mii_paths(tg.graph).spectrum == std::set<int>{1, 3, 5});
    CHECK(mii_paths(th.graph).spectrum == std::set<int>{1, 4, 5});
    // against the brute-force oracle
    CHECK(oracle::mii_spectrum(tg.graph) == std::set<int>{1, 3, 5});
    CHECK(oracle::mii_spectrum(th.graph) == std::set<int>{1, 4, 5});
    CHECK(tg.graph.vertex_count() == 11);
    CHECK(th.graph.vertex_count() == 11);
    // all designated leaves proper, extra hub leaf included
    CHECK(proper_leaves(tg.graph).size() == 3);
}

TEST_CASE("mii_paths agrees with the oracle on random graphs and trees") {
    std::mt19937 rng(3);
    for (int t = 0; t < 120; ++t) {
        int n = 4 + static_cast<int>(rng() % 11);  // up to 14
        LabeledGraph g = oracle::random_graph(rng, n, 0.25);
        CHECK(mii_paths(g).spectrum == oracle::mii_spectrum(g));
    }
    for (int n = 2; n <= 6; ++n)
        for (const LabeledGraph& t : oracle::all_trees(n))
            CHECK(mii_paths(t).spectrum == oracle::mii_spectrum(t));
    for (int t = 0; t < 100; ++t) {
        LabeledGraph g = oracle::random_tree(rng, 9);
        CHECK(mii_paths(g).spectrum == oracle::mii_spectrum(g));
    }
}

TEST_CASE("edge deletion adds at most two new finite mii-paths") {
    // frozen examples, computed by the oracle: splitting a path leaves two
    // halves that are subpaths of the old path, so nothing counts as new
    {
        LabeledGraph p = path_graph(5);  // length-4 path
        auto fresh = new_mii_after_deletion(p, va(2), va(3));
        CHECK(fresh.empty());
    }
    {
        // degree-3 vertex: deleting one of its edges merges two old paths
        // through it into one genuinely new path
        LabeledGraph y;
        y.add_edge(va(0), va(1));
        y.add_edge(va(1), va(3));
        y.add_edge(va(3), va(4));
        y.add_edge(va(1), va(5));
        auto fresh = new_mii_after_deletion(y, va(1), va(5));
        REQUIRE(fresh.size() == 1);
        CHECK(fresh[0].size() == 4);  // 0-1-3-4 through the old branch vertex
    }
    {
        LabeledGraph star;
        star.add_edge(va(0), va(1));
        star.add_edge(va(0), va(2));
        star.add_edge(va(0), va(3));
        auto fresh = new_mii_after_deletion(star, va(0), va(1));
        CHECK(fresh.size() <= 2);
    }
    // randomized property
    std::mt19937 rng(17);
    int tried = 0;
    while (tried < 1000) {
        int n = 4 + static_cast<int>(rng() % 9);
        LabeledGraph g = oracle::random_graph(rng, n, 0.3);
        auto edges = g.edges_sorted();
        if (edges.empty()) continue;
        const auto& [x, y] = edges[rng() % edges.size()];
        auto fresh = new_mii_after_deletion(g, x, y);
        CHECK(fresh.size() <= 2);
        ++tried;
    }
}

TEST_CASE("a vertex of degree <= 2 lies on at most one mii-path") {
    std::mt19937 rng(23);
    for (int t = 0; t < 80; ++t) {
        int n = 4 + static_cast<int>(rng() % 8);
        LabeledGraph g = oracle::random_graph(rng, n, 0.3);
        auto paths = oracle::mii_paths(g);
        std::map<Address, int> on_path;
        for (const auto& p : paths)
            for (const Address& v : p) {
                int d = g.degree(g.index_of(v));
                if (d <= 2) on_path[v]++;
            }
        for (const auto& [v, cnt] : on_path) CHECK(cnt <= 1);
    }
}

TEST_CASE("spectrally_distinguishable finds the least k >= 3") {
    MiiReport a, b;
    a.certified = b.certified = true;
    a.spectrum = {1, 3, 5};
    b.spectrum = {1, 4, 5};
    CHECK(spectrally_distinguishable(a, b) == 3);
    CHECK(spectrally_distinguishable(a, a) == std::nullopt);
    MiiReport c, d;
    c.certified = d.certified = true;
    c.spectrum = {1, 2};
    d.spectrum = {2};
    CHECK(spectrally_distinguishable(c, d) == std::nullopt);
    MiiReport e;
    CHECK_THROWS_AS((void)spectrally_distinguishable(a, e), Error);
}

TEST_CASE("certified spectrum of a single edge presentation") {
    auto uni = std::make_shared<Universe>();
    BaseId a = uni->reg.intern("T", "a", 0);
    BaseId b = uni->reg.intern("T", "b", 0);
    auto p = std::make_shared<Presentation>();
    p->uni = uni;
    p->stage = 1;
    p->base.add_edge(a, b);
    MiiReport rep = certified_spectrum(p, 2);
    CHECK(rep.certified);
    CHECK(rep.spectrum == std::set<int>{1});
    CHECK(!rep.has_infinite_mii);
}

TEST_CASE("certified spectrum flags an infinite mii-path on a ray") {
    auto uni = std::make_shared<Universe>();
    ColourId ray = uni->add_colour("ray", 0, false, true);
    BaseId r0 = uni->reg.intern("ray", "p0", 0);
    BaseId r1 = uni->reg.intern("ray", "p1", 0);
    Pattern pat;
    pat.colour = ray;
    pat.graph.add_edge(r0, r1);
    pat.root = r0;
    pat.typed[r1] = ray;
    uni->patterns.emplace(ray, std::move(pat));

    // hub with three leaves plus a ray: spectrum {1}, one infinite path
    BaseId hub = uni->reg.intern("T", "hub", 0);
    BaseId l1 = uni->reg.intern("T", "l1", 0);
    BaseId l2 = uni->reg.intern("T", "l2", 0);
    BaseId w0 = uni->reg.intern("T", "w0", 0);
    auto p = std::make_shared<Presentation>();
    p->uni = uni;
    p->stage = 1;
    p->base.add_edge(hub, l1);
    p->base.add_edge(hub, l2);
    p->base.add_edge(hub, w0);
    p->typed[w0] = ray;
    MiiReport rep = certified_spectrum(p, 2);
    CHECK(rep.certified);
    CHECK(rep.spectrum == std::set<int>{1});
    CHECK(rep.has_infinite_mii);
}
