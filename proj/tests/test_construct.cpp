#include <doctest.h>

#include "pforge/construct.hpp"
#include "pforge/errors.hpp"
#include "pforge/gluing.hpp"
#include "pforge/iso.hpp"
#include "pforge/mii.hpp"

using namespace pforge;

namespace {
int final_degree(const Truncation& t, const Address& a) {
    return t.is_frontier(a) ? t.frontier.at(a).eventual_degree
                            : t.graph.degree(t.graph.index_of(a));
}
} // namespace

TEST_CASE("base case: recipe values across variants") {
    for (Variant v : {Variant::tree, Variant::one_ended}) {
        StageState s = base_case(v);
        CHECK(s.k == 5);
        CHECK(s.X.empty());
        CHECK(s.Y.empty());
        // F0 is a single coloured edge
        Truncation tf = expand(s.f, 0);
        CHECK(tf.graph.vertex_count() == 2);
        CHECK(tf.graph.edge_count() == 1);
        CHECK(tf.graph.colours().size() == 2);
        // enumerations start away from the roots
        CHECK(s.enumG.initial[0] != s.rootG);
        CHECK(s.enumH.initial[0] != s.rootH);
    }
    StageState c = base_case(Variant::countable);
    CHECK(c.k == 5);
    MiiReport mg = certified_spectrum(c.g, 5);
    CHECK(mg.certified);
    CHECK(mg.has_infinite_mii);
    CHECK(mg.spectrum == std::set<int>{1, 3, 5});
    // one free end at finite scale
    EndReport er = end_estimate(c.g, c.rootG, {2, 4});
    for (const auto& rr : er.per_radius) {
        CHECK(rr.unbounded == 1);
        CHECK(rr.free_candidates == 1);
    }
}

TEST_CASE("select_next_vertex at stage 0 is t_0") {
    Run run;
    run.stages.push_back(base_case(Variant::one_ended));
    Address v = select_next_vertex(run);
    CHECK(v == run.stages[0].enumG.initial[0]);
}

TEST_CASE("build_tilde: degrees, k-tilde, special leaves, sigma values") {
    Run run;
    run.stages.push_back(base_case(Variant::one_ended));
    Address v = select_next_vertex(run);
    TildeBundle b = build_tilde(run, v);

    // k-tilde from the oracle-backed spectra: max{5,4,1,5}+1
    CHECK(b.ktilde == 6);

    // stage-0 M is finite: expand at depth 0 materializes everything
    auto mp = std::make_shared<Presentation>(*b.m);
    Truncation tm = expand(mp, 0);
    CHECK(tm.frontier.empty());

    // the roots gained degree 3
    const StageState& s = run.stages[0];
    CHECK(tm.graph.degree(tm.graph.index_of(s.rootG)) == 3);
    CHECK(tm.graph.degree(tm.graph.index_of(s.rootH)) == 3);

    // two components, with sigma_1 split: k-tilde + 1 on the B side only
    auto comps = components(tm.graph);
    REQUIRE(comps.size() == 2);
    const LabeledGraph* ga = comps[0].has_vertex(s.rootG) ? &comps[0] : &comps[1];
    const LabeledGraph* hb = comps[0].has_vertex(s.rootG) ? &comps[1] : &comps[0];
    MiiReport ma = mii_paths(*ga);
    MiiReport mb = mii_paths(*hb);
    CHECK(ma.sigma0() == 2 * (b.ktilde + 1));
    CHECK(mb.sigma0() == 2 * (b.ktilde + 1));
    CHECK(ma.sigma1() == 5);            // = k_0
    CHECK(mb.sigma1() == b.ktilde + 1); // the injected gap

    // promise structures validate; p3/p4 are placeholder promises
    PromiseStructure pm = promise_structure_of(b, false);
    CHECK(validate(pm).empty());
    CHECK(!is_placeholder_promise(pm, 0));
    CHECK(!is_placeholder_promise(pm, 1));
    CHECK(is_placeholder_promise(pm, 2));
    CHECK(is_placeholder_promise(pm, 3));
    PromiseStructure pn = promise_structure_of(b, true);
    CHECK(validate(pn).empty());
    CHECK(is_placeholder_promise(pn, 2));
    CHECK(is_placeholder_promise(pn, 3));

    // family L1 excludes both copies of the G root
    for (const Address& l : pm.families[0]) {
        CHECK(l != s.rootG);
        CHECK(b.m->typed.count(*l.terminal_base()));
    }
    // |L1| = |L2| = 2 at stage 0
    CHECK(pm.families[0].size() == 2);
    CHECK(pm.families[1].size() == 2);
    CHECK(pm.families[2].size() == 2);
    CHECK(pm.families[3].size() == 2);

    // the tilde map sends the new root leaf to y, g to the other new root
    CHECK(Address::at(*b.tilde_dict->fwd(*b.rootAnew.terminal_base())) != b.rootBnew);
    auto img = b.tilde_dict->fwd(*b.rootAnew.terminal_base());
    REQUIRE(img.has_value());
    CHECK(b.m->typed.at(*img) == b.col_newA);

    // psi restricted to pattern 1's leaves is a colour-preserving bijection
    // (checked by the alpha hypothesis machinery)
    std::map<ColourId, ColourId> cp;
    for (std::size_t i = 0; i < b.family_colours.size(); ++i)
        cp[b.family_colours[i]] = b.ffamily_colours[i];
    ClosureInput dom{*b.m, b.promises, b.family_colours};
    ClosureInput cod{*b.nbase, b.fpromises, b.ffamily_colours};
    CHECK_NOTHROW((void)alpha_bijection(dom, cod, s.uni->psi, cp, 0, 0));
}

TEST_CASE("stage 1: step bookkeeping, spectra, gluing degrees, witnesses") {
    Run run;
    run.stages.push_back(base_case(Variant::one_ended));
    run.stages.push_back(inductive_step(run));
    const StageState& s0 = run.stages[0];
    const StageState& s1 = run.stages[1];

    CHECK(s1.n == 1);
    CHECK(s1.k == 14);  // 2 (k~ + 1) with k~ = 6
    CHECK(s1.X.size() == 1);
    CHECK(s1.X[0] == s0.enumG.initial[0]);
    CHECK(s1.phi.at(s1.X[0]) == s1.Y[0]);

    // roots are the new leaves, coloured with the new classes
    Materializer mg(s1.g);
    CHECK(mg.colour_of(s1.rootG) == s1.colR);
    CHECK(mg.eventual_degree(s1.rootG) == 1);

    // alpha bijections for the step extend across depths (Cor of the
    // parallel-closure lemma), colour-preserving per class
    Address v = s1.X[0];
    TildeBundle b = [&] {
        Run base;
        base.stages.push_back(base_case(Variant::one_ended));
        return build_tilde(base, base.stages[0].enumG.initial[0]);
    }();

    // sigma0(G1) = sigma0(H1) = 14, certified
    MiiReport mg1 = certified_spectrum(s1.g, s1.k);
    MiiReport mh1 = certified_spectrum(s1.h, s1.k);
    CHECK(mg1.certified);
    CHECK(mh1.certified);
    CHECK(mg1.sigma0() == 14);
    CHECK(mh1.sigma0() == 14);
    CHECK(spectrally_distinguishable(mg1, mh1) == 3);

    // merged vertices have degree 5: scan the chi domain = neighbours of the
    // new coloured leaves
    Truncation tg = truncate_ball_multi(s1.g, {s1.rootG}, 6);
    Address merged = q_edge_tail(tg, s1.rootG);
    CHECK(final_degree(tg, merged) == 5);

    // the new witness certifies on radius-2k truncations
    {
        auto gdel = std::make_shared<Presentation>(delete_vertex(*s1.g, v));
        auto hdel = std::make_shared<Presentation>(delete_vertex(*s1.h, s1.phi.at(v)));
        Materializer mgd(gdel), mhd(hdel);
        Truncation tgd = truncate_with(mgd, mgd.base_vertices(), 2 * s1.k, {});
        Truncation thd = truncate_with(mhd, mhd.base_vertices(), 2 * s1.k, {});
        std::map<ColourId, ColourId> pair{{s1.colR, s1.colR}, {s1.colB, s1.colB}};
        WitnessReport wr = evaluate_witness(*s1.hwit.at(v), tgd, thd, pair);
        CHECK(wr.ok);
        CHECK(wr.checked_vertices > 1000);
    }
}

TEST_CASE("stage 1 verification: all applicable clauses pass") {
    Run run;
    run.stages.push_back(base_case(Variant::one_ended));
    run.stages.push_back(inductive_step(run));

    VerificationReport r0 = verify_stage(run, 0, default_radius(run.stages[0]));
    for (const auto& c : r0.clauses) {
        INFO(c.name, ": ", c.detail);
        CHECK((!c.applicable || c.pass));
    }
    VerificationReport r1 = verify_stage(run, 1, default_radius(run.stages[1]));
    for (const auto& c : r1.clauses) {
        INFO(c.name, ": ", c.detail);
        CHECK((!c.applicable || c.pass));
    }
}

TEST_CASE("stage 1 certificate separates at k in {3,4}") {
    Run run;
    run.stages.push_back(base_case(Variant::one_ended));
    run.stages.push_back(inductive_step(run));
    CertificateReport cert = nonisomorphism_certificate(run, 1, default_radius(run.stages[1]));
    REQUIRE(cert.separating_k.has_value());
    CHECK(*cert.separating_k >= 3);
    CHECK(*cert.separating_k <= 4);
    // the post-deletion component of t0 carries the base spectrum plus pendants
    CHECK(cert.spectrum_c.count(3) == 1);
    CHECK(cert.spectrum_d.count(3) == 0);
}

TEST_CASE("a corrupted stage fails verification with a named clause") {
    Run run;
    run.stages.push_back(base_case(Variant::one_ended));
    run.stages.push_back(inductive_step(run));
    // recolour one leaf: swap the root's colour class
    StageState& s1 = run.stages[1];
    auto broken = std::make_shared<Presentation>(*s1.g);
    broken->typed[*s1.rootG.terminal_base()] = s1.colB;
    s1.g = broken;
    VerificationReport rep = verify_stage(run, 1, 20);
    bool failed = false;
    for (const auto& c : rep.clauses)
        if (c.applicable && !c.pass) failed = true;
    CHECK(failed);
}
