#include "pforge/bundle.hpp"
#include "pforge/construct.hpp"
#include "pforge/errors.hpp"
#include "pforge/gluing.hpp"
#include "pforge/graph_io.hpp"
#include "pforge/mii.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace pforge;

namespace {

long env_budget(long fallback) {
    const char* e = std::getenv("PROMISE_FORGE_BUDGET");
    if (!e) return fallback;
    return std::atol(e);
}

int resolve_radius(const std::string& radius, const StageState& s) {
    if (radius == "auto") return default_radius(s);
    return std::stoi(radius);
}

std::shared_ptr<Presentation> pick(const StageState& s, const std::string& what) {
    if (what == "g") return s.g;
    if (what == "h") return s.h;
    if (what == "f") return s.f;
    fail(ErrorKind::BadInput, "expected g, h or f");
}

int cmd_build(const std::string& variant, int stages, const std::string& out, long budget) {
    BuildOptions opt;
    opt.vertex_budget = budget;
    Run run = build_run(variant_from_name(variant), stages, opt);
    save_run(run, out);
    std::cout << "wrote " << run.stages.size() << " stage bundle(s) to " << out << "\n";
    return 0;
}

int cmd_verify(const std::string& bundle, const std::string& radius, long budget,
               const std::string& report_format) {
    Run run = load_run(bundle);
    BuildOptions opt;
    opt.vertex_budget = budget;
    bool all_ok = true;
    nlohmann::ordered_json jr = nlohmann::ordered_json::array();
    for (std::size_t n = 0; n < run.stages.size(); ++n) {
        int r = resolve_radius(radius, run.stages[n]);
        VerificationReport rep = verify_stage(run, static_cast<int>(n), r, opt);
        for (const ClauseResult& c : rep.clauses) {
            if (report_format == "text") {
                std::cout << "stage " << n << " " << c.name << ": "
                          << (!c.applicable ? "vacuous" : (c.pass ? "pass" : "FAIL"));
                if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
                std::cout << "\n";
            } else {
                jr.push_back({{"stage", n},
                              {"clause", c.name},
                              {"applicable", c.applicable},
                              {"pass", c.pass},
                              {"detail", c.detail}});
            }
            if (c.applicable && !c.pass) all_ok = false;
        }
        if (n >= 1) {
            CertificateReport cert =
                nonisomorphism_certificate(run, static_cast<int>(n), r, opt);
            bool pass = cert.separating_k && *cert.separating_k >= 3;
            if (report_format == "text") {
                std::cout << "stage " << n << " certificate: " << (pass ? "pass" : "FAIL");
                if (cert.separating_k) std::cout << "  (k=" << *cert.separating_k << ")";
                std::cout << "\n";
            } else {
                jr.push_back({{"stage", n},
                              {"clause", "certificate"},
                              {"applicable", true},
                              {"pass", pass},
                              {"detail", cert.separating_k
                                             ? "k=" + std::to_string(*cert.separating_k)
                                             : ""}});
            }
            if (!pass) all_ok = false;
        }
    }
    if (report_format != "text") std::cout << jr.dump(1) << "\n";
    return all_ok ? 0 : 2;
}

int cmd_export(const std::string& bundle, const std::string& what, const std::string& radius,
               const std::string& format, const std::string& out, long budget) {
    Run run = load_run(bundle);
    const StageState& s = run.last();
    auto p = pick(s, what);
    int r = resolve_radius(radius, s);
    ExpandOptions eo;
    eo.vertex_budget = budget;
    Materializer mat(p);
    Truncation t = truncate_with(mat, mat.base_vertices(), r, eo);
    std::ofstream os(out, std::ios::binary);
    if (!os) fail(ErrorKind::BadInput, "cannot open output file");
    if (format == "dot")
        os << graph_to_dot(t.graph, *s.uni);
    else if (format == "graph6")
        os << graph_to_graph6(t.graph) << "\n";
    else if (format == "json")
        os << truncation_to_json(t, *s.uni).dump(1) << "\n";
    else
        fail(ErrorKind::BadInput, "format must be dot, graph6 or json");
    std::cout << "exported " << t.graph.vertex_count() << " vertices to " << out << "\n";
    return 0;
}

int cmd_spectrum(const std::string& bundle, const std::string& what, int hint, long budget) {
    Run run = load_run(bundle);
    const StageState& s = run.last();
    ExpandOptions eo;
    eo.vertex_budget = budget;
    MiiReport rep = certified_spectrum(pick(s, what), hint > 0 ? hint : s.k, eo);
    std::cout << "spectrum:";
    for (int x : rep.spectrum) std::cout << " " << x;
    std::cout << "\n";
    std::cout << "sigma0: " << (rep.sigma0() ? std::to_string(*rep.sigma0()) : "undefined")
              << "\n";
    std::cout << "sigma1: " << (rep.sigma1() ? std::to_string(*rep.sigma1()) : "undefined")
              << "\n";
    std::cout << "certified: " << (rep.certified ? "yes" : "no") << "\n";
    std::cout << "infinite mii-path: " << (rep.has_infinite_mii ? "yes" : "no") << "\n";
    return rep.certified ? 0 : 2;
}

int cmd_ends(const std::string& bundle, const std::string& what, int max_radius, long budget) {
    Run run = load_run(bundle);
    const StageState& s = run.last();
    auto p = pick(s, what);
    if (!p->root) fail(ErrorKind::BadInput, "presentation has no root");
    ExpandOptions eo;
    eo.vertex_budget = budget;
    std::vector<int> radii;
    for (int r = 1; r <= max_radius; ++r) radii.push_back(r);
    EndReport rep = end_estimate(p, *p->root, radii, s.marked_colours(), eo);
    std::cout << "radius unbounded free limit marked_dense\n";
    for (const auto& rr : rep.per_radius)
        std::cout << rr.radius << " " << rr.unbounded << " " << rr.free_candidates << " "
                  << rr.limit_candidates << " " << (rr.marked_in_every_unbounded ? "yes" : "no")
                  << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"promise-forge: exact staged construction of non-reconstructible "
                 "locally finite graphs"};
    app.require_subcommand(1);
    long budget = env_budget(2'000'000);

    std::string variant = "one_ended", out = "bundle", bundle = "bundle";
    std::string radius = "auto", format = "json", what = "g", report = "text", file = "out.json";
    int stages = 1, hint = 0, max_radius = 8;

    auto* b = app.add_subcommand("build", "build stages and write bundles");
    b->add_option("--variant", variant, "tree | one_ended | countable");
    b->add_option("--stages", stages, "number of inductive steps");
    b->add_option("--out", out, "output directory");
    b->add_option("--budget", budget, "vertex budget");

    auto* v = app.add_subcommand("verify", "verify the invariant clauses of a bundle");
    v->add_option("--bundle", bundle, "bundle directory");
    v->add_option("--radius", radius, "verification radius or 'auto'");
    v->add_option("--budget", budget, "vertex budget");
    v->add_option("--report", report, "text | json");

    auto* e = app.add_subcommand("export", "export a truncation");
    e->add_option("--bundle", bundle);
    e->add_option("--what", what, "g | h | f");
    e->add_option("--radius", radius);
    e->add_option("--format", format, "dot | graph6 | json");
    e->add_option("--out", file);
    e->add_option("--budget", budget);

    auto* sp = app.add_subcommand("spectrum", "certified mii-spectrum");
    sp->add_option("--bundle", bundle);
    sp->add_option("--what", what);
    sp->add_option("--hint", hint);
    sp->add_option("--budget", budget);

    auto* en = app.add_subcommand("ends", "finite-scale end estimate");
    en->add_option("--bundle", bundle);
    en->add_option("--what", what);
    en->add_option("--radius", max_radius);
    en->add_option("--budget", budget);

    CLI11_PARSE(app, argc, argv);

    try {
        if (b->parsed()) return cmd_build(variant, stages, out, budget);
        if (v->parsed()) return cmd_verify(bundle, radius, budget, report);
        if (e->parsed()) return cmd_export(bundle, what, radius, format, file, budget);
        if (sp->parsed()) return cmd_spectrum(bundle, what, hint, budget);
        if (en->parsed()) return cmd_ends(bundle, what, max_radius, budget);
    } catch (const Error& err) {
        std::cerr << Error::kind_name(err.kind()) << ": " << err.what() << "\n";
        return err.exit_code();
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
