#include "pforge/bundle.hpp"
#include "pforge/errors.hpp"

#include <filesystem>
#include <fstream>
#include <map>

namespace pforge {

using nlohmann::ordered_json;

namespace {

ordered_json addr_json(const Address& a) {
    ordered_json out = ordered_json::array();
    for (const Step& s : a.steps)
        out.push_back(ordered_json::array({static_cast<int>(s.kind), s.id}));
    return out;
}

Address addr_from(const ordered_json& j) {
    Address a;
    for (const auto& e : j)
        a.steps.push_back(
            Step{static_cast<Step::Kind>(e.at(0).get<int>()), e.at(1).get<std::uint32_t>()});
    return a;
}

ordered_json base_graph_json(const BaseGraph& g) {
    ordered_json out;
    ordered_json vs = ordered_json::array();
    for (BaseId v : g.vertices()) vs.push_back(v);
    out["vertices"] = vs;
    ordered_json es = ordered_json::array();
    for (BaseId v : g.vertices())
        for (BaseId w : g.neighbors(v))
            if (v < w) es.push_back(ordered_json::array({v, w}));
    out["edges"] = es;
    return out;
}

BaseGraph base_graph_from(const ordered_json& j) {
    BaseGraph g;
    for (const auto& v : j.at("vertices")) g.add_vertex(v.get<BaseId>());
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<BaseId>(), e.at(1).get<BaseId>());
    return g;
}

ordered_json typed_json(const std::map<BaseId, ColourId>& typed) {
    ordered_json out = ordered_json::array();
    for (const auto& [v, c] : typed) out.push_back(ordered_json::array({v, c}));
    return out;
}

std::map<BaseId, ColourId> typed_from(const ordered_json& j) {
    std::map<BaseId, ColourId> out;
    for (const auto& e : j) out[e.at(0).get<BaseId>()] = e.at(1).get<ColourId>();
    return out;
}

struct PresTable {
    std::vector<std::shared_ptr<const Presentation>> items;
    std::map<const Presentation*, int> index;

    int intern(std::shared_ptr<const Presentation> p) {
        auto it = index.find(p.get());
        if (it != index.end()) return it->second;
        int idx = static_cast<int>(items.size());
        items.push_back(p);
        index.emplace(p.get(), idx);
        return idx;
    }
};

ordered_json pres_json(const Presentation& p) {
    ordered_json out;
    out["base"] = base_graph_json(p.base);
    out["typed"] = typed_json(p.typed);
    out["overlays"] = p.overlays;
    out["stage"] = p.stage;
    if (p.root) out["root"] = addr_json(*p.root);
    return out;
}

} // namespace

ordered_json run_to_json(const Run& run) {
    if (run.stages.empty()) fail(ErrorKind::BadInput, "empty run");
    const Universe& uni = *run.stages.front().uni;

    // presentation table: stages' g/h/f plus overlay f's (pointer dedup)
    PresTable table;
    for (const auto& s : run.stages) {
        table.intern(s.g);
        table.intern(s.h);
        table.intern(s.f);
    }
    for (const Overlay& o : uni.overlay_defs) table.intern(o.f);

    ordered_json j;
    j["format"] = "promise-forge-bundle-v1";
    j["variant"] = variant_name(run.stages.front().variant);

    ordered_json reg = ordered_json::array();
    for (BaseId i = 0; i < uni.reg.size(); ++i) {
        const BaseInfo& info = uni.reg.info(i);
        reg.push_back(ordered_json::array({info.scope, info.name, info.stage}));
    }
    j["registry"] = reg;

    ordered_json cols = ordered_json::array();
    for (const ColourInfo& c : uni.colours)
        cols.push_back(ordered_json::array({c.name, c.stage, c.fside, c.structural}));
    j["colours"] = cols;

    ordered_json pats = ordered_json::array();
    for (const auto& [c, pat] : uni.patterns) {
        ordered_json pj;
        pj["colour"] = c;
        pj["graph"] = base_graph_json(pat.graph);
        pj["root"] = pat.root;
        pj["typed"] = typed_json(pat.typed);
        pj["overlays"] = pat.overlays;
        pats.push_back(pj);
    }
    j["patterns"] = pats;

    ordered_json ovls = ordered_json::array();
    for (const Overlay& o : uni.overlay_defs) {
        ordered_json oj;
        oj["tag"] = o.tag;
        oj["f"] = table.index.at(o.f.get());
        oj["ray_product"] = o.ray_product;
        oj["glue_colours"] = o.glue_colours;
        ordered_json pairs = ordered_json::array();
        for (const auto& [a, b] : o.glue_pairs)
            pairs.push_back(ordered_json::array({addr_json(a), addr_json(b)}));
        oj["glue_pairs"] = pairs;
        oj["home"] = o.home;
        ovls.push_back(oj);
    }
    j["overlay_defs"] = ovls;

    ordered_json psi = ordered_json::array();
    for (const auto& [a, b] : uni.psi.entries()) psi.push_back(ordered_json::array({a, b}));
    j["psi"] = psi;

    ordered_json pres = ordered_json::array();
    for (const auto& p : table.items) pres.push_back(pres_json(*p));
    j["presentations"] = pres;

    ordered_json stages = ordered_json::array();
    for (const StageState& s : run.stages) {
        ordered_json sj;
        sj["n"] = s.n;
        sj["k"] = s.k;
        sj["ktilde"] = s.ktilde;
        sj["colR"] = s.colR;
        sj["colB"] = s.colB;
        sj["colRF"] = s.colRF;
        sj["colBF"] = s.colBF;
        sj["rootG"] = addr_json(s.rootG);
        sj["rootH"] = addr_json(s.rootH);
        sj["g"] = table.index.at(s.g.get());
        sj["h"] = table.index.at(s.h.get());
        sj["f"] = table.index.at(s.f.get());
        ordered_json xs = ordered_json::array(), ys = ordered_json::array();
        for (const Address& x : s.X) xs.push_back(addr_json(x));
        for (const Address& y : s.Y) ys.push_back(addr_json(y));
        sj["X"] = xs;
        sj["Y"] = ys;
        ordered_json phis = ordered_json::array();
        for (const auto& [x, y] : s.phi)
            phis.push_back(ordered_json::array({addr_json(x), addr_json(y)}));
        sj["phi"] = phis;
        ordered_json hw = ordered_json::array(), pw = ordered_json::array();
        for (const auto& [x, m] : s.hwit)
            hw.push_back(ordered_json::array({addr_json(x), m->to_json()}));
        for (const auto& [x, m] : s.piwit)
            pw.push_back(ordered_json::array({addr_json(x), m->to_json()}));
        sj["hwit"] = hw;
        sj["piwit"] = pw;
        ordered_json eg = ordered_json::array(), eh = ordered_json::array();
        for (const Address& a : s.enumG.initial) eg.push_back(addr_json(a));
        for (const Address& a : s.enumH.initial) eh.push_back(addr_json(a));
        sj["enumG"] = eg;
        sj["enumH"] = eh;
        stages.push_back(sj);
    }
    j["stages"] = stages;
    return j;
}

Run run_from_json(const ordered_json& j) {
    if (j.at("format").get<std::string>() != "promise-forge-bundle-v1")
        fail(ErrorKind::BadInput, "unknown bundle format");
    auto uni = std::make_shared<Universe>();
    for (const auto& e : j.at("registry"))
        uni->reg.intern(e.at(0).get<std::string>(), e.at(1).get<std::string>(),
                        e.at(2).get<int>());
    for (const auto& e : j.at("colours"))
        uni->add_colour(e.at(0).get<std::string>(), e.at(1).get<int>(), e.at(2).get<bool>(),
                        e.at(3).get<bool>());
    for (const auto& e : j.at("patterns")) {
        Pattern pat;
        pat.colour = e.at("colour").get<ColourId>();
        pat.graph = base_graph_from(e.at("graph"));
        pat.root = e.at("root").get<BaseId>();
        pat.typed = typed_from(e.at("typed"));
        for (const auto& o : e.at("overlays")) pat.overlays.push_back(o.get<OverlayId>());
        uni->patterns.emplace(pat.colour, std::move(pat));
    }
    for (const auto& e : j.at("psi")) uni->psi.add(e.at(0).get<BaseId>(), e.at(1).get<BaseId>());

    // presentations: shells first so overlays can point at them
    std::vector<std::shared_ptr<Presentation>> table;
    for (const auto& e : j.at("presentations")) {
        auto p = std::make_shared<Presentation>();
        p->uni = uni;
        p->base = base_graph_from(e.at("base"));
        p->typed = typed_from(e.at("typed"));
        for (const auto& o : e.at("overlays")) p->overlays.push_back(o.get<OverlayId>());
        p->stage = e.at("stage").get<int>();
        if (e.contains("root")) p->root = addr_from(e.at("root"));
        table.push_back(p);
    }
    for (const auto& e : j.at("overlay_defs")) {
        Overlay o;
        o.tag = e.at("tag").get<std::string>();
        o.f = table.at(e.at("f").get<int>());
        o.ray_product = e.at("ray_product").get<bool>();
        for (const auto& c : e.at("glue_colours")) o.glue_colours.push_back(c.get<ColourId>());
        for (const auto& pr : e.at("glue_pairs"))
            o.glue_pairs.emplace_back(addr_from(pr.at(0)), addr_from(pr.at(1)));
        for (const auto& h : e.at("home")) o.home.insert(h.get<BaseId>());
        uni->add_overlay(std::move(o));
    }

    Run run;
    Variant variant = variant_from_name(j.at("variant").get<std::string>());
    for (const auto& sj : j.at("stages")) {
        StageState s;
        s.uni = uni;
        s.variant = variant;
        s.n = sj.at("n").get<int>();
        s.k = sj.at("k").get<int>();
        s.ktilde = sj.at("ktilde").get<int>();
        s.colR = sj.at("colR").get<ColourId>();
        s.colB = sj.at("colB").get<ColourId>();
        s.colRF = sj.at("colRF").get<ColourId>();
        s.colBF = sj.at("colBF").get<ColourId>();
        s.rootG = addr_from(sj.at("rootG"));
        s.rootH = addr_from(sj.at("rootH"));
        s.g = table.at(sj.at("g").get<int>());
        s.h = table.at(sj.at("h").get<int>());
        s.f = table.at(sj.at("f").get<int>());
        for (const auto& x : sj.at("X")) s.X.push_back(addr_from(x));
        for (const auto& y : sj.at("Y")) s.Y.push_back(addr_from(y));
        for (const auto& p : sj.at("phi")) s.phi[addr_from(p.at(0))] = addr_from(p.at(1));
        for (const auto& w : sj.at("hwit"))
            s.hwit[addr_from(w.at(0))] = AddressMap::from_json(w.at(1));
        for (const auto& w : sj.at("piwit"))
            s.piwit[addr_from(w.at(0))] = AddressMap::from_json(w.at(1));
        for (const auto& a : sj.at("enumG")) s.enumG.initial.push_back(addr_from(a));
        for (const auto& a : sj.at("enumH")) s.enumH.initial.push_back(addr_from(a));
        auto psidict = std::shared_ptr<const BiDict>(uni, &uni->psi);
        s.psiG = componentwise(psidict);
        s.psiH = componentwise(psidict);
        run.stages.push_back(std::move(s));
    }
    return run;
}

void save_run(const Run& run, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    ordered_json whole = run_to_json(run);
    ordered_json uni = whole;
    uni.erase("stages");
    {
        std::ofstream out(fs::path(dir) / "universe.json", std::ios::binary);
        out << uni.dump(1) << "\n";
    }
    const auto& stages = whole.at("stages");
    for (std::size_t i = 0; i < stages.size(); ++i) {
        std::ofstream out(fs::path(dir) / ("stage" + std::to_string(i) + ".json"),
                          std::ios::binary);
        out << stages[i].dump(1) << "\n";
    }
}

Run load_run(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream in(fs::path(dir) / "universe.json", std::ios::binary);
    if (!in) fail(ErrorKind::BadInput, "cannot read bundle universe");
    ordered_json j = ordered_json::parse(in);
    ordered_json stages = ordered_json::array();
    for (int i = 0;; ++i) {
        std::ifstream sin(fs::path(dir) / ("stage" + std::to_string(i) + ".json"),
                          std::ios::binary);
        if (!sin) break;
        stages.push_back(ordered_json::parse(sin));
    }
    if (stages.empty()) fail(ErrorKind::BadInput, "bundle has no stages");
    j["stages"] = stages;
    return run_from_json(j);
}

} // namespace pforge
