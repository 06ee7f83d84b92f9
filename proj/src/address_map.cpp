#include "pforge/address_map.hpp"
#include "pforge/errors.hpp"

#include <algorithm>

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
        a.steps.push_back(Step{static_cast<Step::Kind>(e.at(0).get<int>()),
                               e.at(1).get<std::uint32_t>()});
    return a;
}

ordered_json dict_json(const BiDict& d) {
    ordered_json out = ordered_json::array();
    for (const auto& [a, b] : d.entries()) out.push_back(ordered_json::array({a, b}));
    return out;
}

std::shared_ptr<BiDict> dict_from(const ordered_json& j) {
    auto d = std::make_shared<BiDict>();
    for (const auto& e : j) d->add(e.at(0).get<BaseId>(), e.at(1).get<BaseId>());
    return d;
}

struct IdentityMap final : AddressMap {
    std::optional<Address> fwd(const Address& a) const override { return a; }
    std::optional<Address> bwd(const Address& a) const override { return a; }
    ordered_json to_json() const override { return {{"type", "id"}}; }
};

struct DictMap final : AddressMap {
    std::map<Address, Address> f, b;
    std::optional<Address> fwd(const Address& a) const override {
        auto it = f.find(a);
        if (it == f.end()) return std::nullopt;
        return it->second;
    }
    std::optional<Address> bwd(const Address& a) const override {
        auto it = b.find(a);
        if (it == b.end()) return std::nullopt;
        return it->second;
    }
    ordered_json to_json() const override {
        ordered_json pairs = ordered_json::array();
        for (const auto& [x, y] : f) pairs.push_back(ordered_json::array({addr_json(x), addr_json(y)}));
        return {{"type", "dict"}, {"pairs", pairs}};
    }
};

struct RelabelFirst final : AddressMap {
    std::shared_ptr<const BiDict> ids;
    std::map<OverlayId, OverlayId> ovl_f, ovl_b;

    std::optional<Address> map_dir(const Address& a, bool forward) const {
        if (a.steps.empty()) return std::nullopt;
        Address out = a;
        Step& s = out.steps.front();
        if (s.kind == Step::Kind::Enter || s.kind == Step::Kind::At) {
            if (forward) {
                auto m = ids->fwd(s.id);
                if (!m) return std::nullopt;
                s.id = *m;
            } else {
                const auto* pre = ids->bwd(s.id);
                if (!pre || pre->size() != 1) return std::nullopt;
                s.id = pre->front();
            }
            return out;
        }
        if (s.kind == Step::Kind::Ovl) {
            const auto& tbl = forward ? ovl_f : ovl_b;
            auto it = tbl.find(s.id);
            if (it == tbl.end()) return std::nullopt;
            s.id = it->second;
            return out;
        }
        return std::nullopt;
    }
    std::optional<Address> fwd(const Address& a) const override { return map_dir(a, true); }
    std::optional<Address> bwd(const Address& a) const override { return map_dir(a, false); }
    ordered_json to_json() const override {
        ordered_json ov = ordered_json::array();
        for (const auto& [x, y] : ovl_f) ov.push_back(ordered_json::array({x, y}));
        return {{"type", "relabel1"}, {"ids", dict_json(*ids)}, {"ovl", ov}};
    }
};

struct Componentwise final : AddressMap {
    std::shared_ptr<const BiDict> ids;
    std::optional<Address> fwd(const Address& a) const override {
        Address out;
        out.steps.reserve(a.steps.size());
        bool in_overlay = false;
        for (const Step& s : a.steps) {
            if (s.kind == Step::Kind::Ovl) in_overlay = true;
            if (!in_overlay && (s.kind == Step::Kind::Enter || s.kind == Step::Kind::At)) {
                auto m = ids->fwd(s.id);
                if (!m) return std::nullopt;
                out.steps.push_back(Step{s.kind, *m});
            } else {
                out.steps.push_back(s);
            }
        }
        return out;
    }
    std::optional<Address> bwd(const Address& a) const override {
        Address out;
        out.steps.reserve(a.steps.size());
        bool in_overlay = false;
        for (const Step& s : a.steps) {
            if (s.kind == Step::Kind::Ovl) in_overlay = true;
            if (!in_overlay && (s.kind == Step::Kind::Enter || s.kind == Step::Kind::At)) {
                const auto* pre = ids->bwd(s.id);
                if (!pre || pre->size() != 1) return std::nullopt;
                out.steps.push_back(Step{s.kind, pre->front()});
            } else {
                out.steps.push_back(s);
            }
        }
        return out;
    }
    ordered_json to_json() const override {
        return {{"type", "compwise"}, {"ids", dict_json(*ids)}};
    }
};

struct ComposeMap final : AddressMap {
    AddressMapPtr first, then;
    std::optional<Address> fwd(const Address& a) const override {
        auto m = first->fwd(a);
        if (!m) return std::nullopt;
        return then->fwd(*m);
    }
    std::optional<Address> bwd(const Address& a) const override {
        auto m = then->bwd(a);
        if (!m) return std::nullopt;
        return first->bwd(*m);
    }
    ordered_json to_json() const override {
        return {{"type", "compose"}, {"first", first->to_json()}, {"then", then->to_json()}};
    }
};

struct InverseMap final : AddressMap {
    AddressMapPtr inner;
    std::optional<Address> fwd(const Address& a) const override { return inner->bwd(a); }
    std::optional<Address> bwd(const Address& a) const override { return inner->fwd(a); }
    ordered_json to_json() const override {
        return {{"type", "inverse"}, {"inner", inner->to_json()}};
    }
};

struct LeafExtension final : AddressMap {
    LeafExtensionSpec s;

    std::optional<Address> map_dir(const Address& a, bool forward) const {
        const auto& root_region = forward ? s.dom_root_region : s.cod_root_region;
        const auto& far_root_region = forward ? s.cod_root_region : s.dom_root_region;
        const Address& near_root = forward ? s.dom_root : s.cod_root;
        const Address& far_root = forward ? s.cod_root : s.dom_root;
        auto inner_map = [&](const Address& x) {
            return forward ? s.inner->fwd(x) : s.inner->bwd(x);
        };
        if (a.steps.empty()) return std::nullopt;
        const Step& first = a.steps.front();

        // behind the near-side root: prepend the image leaf of the root
        if ((first.kind == Step::Kind::Enter || first.kind == Step::Kind::At) &&
            root_region.count(first.id)) {
            auto img = inner_map(near_root);
            if (!img) return std::nullopt;
            return img->as_prefix().concat(a);
        }
        // first descent through an extension-coloured leaf
        for (std::size_t i = 0; i < a.steps.size(); ++i) {
            const Step& st = a.steps[i];
            if (st.kind == Step::Kind::Ovl) break;
            if (st.kind != Step::Kind::Enter || !s.ext_ids.count(st.id)) continue;
            Address leaf(std::vector<Step>(a.steps.begin(), a.steps.begin() + i + 1));
            leaf.steps.back().kind = Step::Kind::At;
            auto limg = inner_map(leaf);
            if (!limg) return std::nullopt;
            Address rest(std::vector<Step>(a.steps.begin() + i + 1, a.steps.end()));
            if (*limg == far_root) {
                // continues in the far side's base root region
                if (!rest.steps.empty() &&
                    (rest.steps.front().kind == Step::Kind::Enter ||
                     rest.steps.front().kind == Step::Kind::At) &&
                    !far_root_region.count(rest.steps.front().id))
                    return std::nullopt;
                return rest;
            }
            return limg->as_prefix().concat(rest);
        }
        return inner_map(a);
    }
    std::optional<Address> fwd(const Address& a) const override { return map_dir(a, true); }
    std::optional<Address> bwd(const Address& a) const override { return map_dir(a, false); }

    ordered_json to_json() const override {
        ordered_json j;
        j["type"] = "leafext";
        j["inner"] = s.inner->to_json();
        j["ext_ids"] = s.ext_ids;
        j["inner_region"] = s.inner_region;
        j["inner_overlays"] = s.inner_overlays;
        j["dom_root_region"] = s.dom_root_region;
        j["cod_root_region"] = s.cod_root_region;
        j["dom_root"] = addr_json(s.dom_root);
        j["cod_root"] = addr_json(s.cod_root);
        return j;
    }
};

struct OverlayLift final : AddressMap {
    AddressMapPtr core;
    OverlayId dom_ovl = 0, cod_ovl = 0;
    AddressMapPtr pi;

    std::optional<Address> map_dir(const Address& a, bool forward) const {
        OverlayId from = forward ? dom_ovl : cod_ovl;
        OverlayId to = forward ? cod_ovl : dom_ovl;
        if (!a.steps.empty() && a.steps.front().kind == Step::Kind::Ovl &&
            a.steps.front().id == from) {
            if (a.steps.back().kind != Step::Kind::Level) return std::nullopt;
            Address fpart(std::vector<Step>(a.steps.begin() + 1, a.steps.end() - 1));
            auto m = forward ? pi->fwd(fpart) : pi->bwd(fpart);
            if (!m) return std::nullopt;
            Address out;
            out.steps.push_back(Step{Step::Kind::Ovl, to});
            out.steps.insert(out.steps.end(), m->steps.begin(), m->steps.end());
            out.steps.push_back(a.steps.back());
            return out;
        }
        return forward ? core->fwd(a) : core->bwd(a);
    }
    std::optional<Address> fwd(const Address& a) const override { return map_dir(a, true); }
    std::optional<Address> bwd(const Address& a) const override { return map_dir(a, false); }

    ordered_json to_json() const override {
        return {{"type", "ovllift"},
                {"core", core->to_json()},
                {"dom_ovl", dom_ovl},
                {"cod_ovl", cod_ovl},
                {"pi", pi->to_json()}};
    }
};

} // namespace

AddressMapPtr identity_map() { return std::make_shared<IdentityMap>(); }

AddressMapPtr dict_map(std::vector<std::pair<Address, Address>> pairs) {
    auto m = std::make_shared<DictMap>();
    for (auto& [a, b] : pairs) {
        if (!m->f.emplace(a, b).second || !m->b.emplace(b, a).second)
            fail(ErrorKind::BadInput, "dict_map: not a bijection");
    }
    return m;
}

AddressMapPtr relabel_first(std::shared_ptr<const BiDict> ids,
                            std::vector<std::pair<OverlayId, OverlayId>> ovl) {
    auto m = std::make_shared<RelabelFirst>();
    m->ids = std::move(ids);
    for (auto& [a, b] : ovl) {
        m->ovl_f[a] = b;
        m->ovl_b[b] = a;
    }
    return m;
}

AddressMapPtr componentwise(std::shared_ptr<const BiDict> ids) {
    auto m = std::make_shared<Componentwise>();
    m->ids = std::move(ids);
    return m;
}

AddressMapPtr compose(AddressMapPtr first, AddressMapPtr then) {
    auto m = std::make_shared<ComposeMap>();
    m->first = std::move(first);
    m->then = std::move(then);
    return m;
}

AddressMapPtr inverse_of(AddressMapPtr inner) {
    auto m = std::make_shared<InverseMap>();
    m->inner = std::move(inner);
    return m;
}

AddressMapPtr leaf_extension(LeafExtensionSpec spec) {
    auto m = std::make_shared<LeafExtension>();
    m->s = std::move(spec);
    return m;
}

AddressMapPtr overlay_lift(AddressMapPtr core, OverlayId dom_ovl, OverlayId cod_ovl,
                           AddressMapPtr pi) {
    auto m = std::make_shared<OverlayLift>();
    m->core = std::move(core);
    m->dom_ovl = dom_ovl;
    m->cod_ovl = cod_ovl;
    m->pi = std::move(pi);
    return m;
}

std::shared_ptr<AddressMap> AddressMap::from_json(const ordered_json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "id") return identity_map();
    if (type == "dict") {
        std::vector<std::pair<Address, Address>> pairs;
        for (const auto& e : j.at("pairs"))
            pairs.emplace_back(addr_from(e.at(0)), addr_from(e.at(1)));
        return dict_map(std::move(pairs));
    }
    if (type == "relabel1") {
        std::vector<std::pair<OverlayId, OverlayId>> ovl;
        for (const auto& e : j.at("ovl"))
            ovl.emplace_back(e.at(0).get<OverlayId>(), e.at(1).get<OverlayId>());
        return relabel_first(dict_from(j.at("ids")), std::move(ovl));
    }
    if (type == "compwise") return componentwise(dict_from(j.at("ids")));
    if (type == "compose")
        return compose(from_json(j.at("first")), from_json(j.at("then")));
    if (type == "inverse") return inverse_of(from_json(j.at("inner")));
    if (type == "leafext") {
        LeafExtensionSpec s;
        s.inner = from_json(j.at("inner"));
        auto get_set = [&](const char* key) {
            std::set<BaseId> out;
            for (const auto& e : j.at(key)) out.insert(e.get<BaseId>());
            return out;
        };
        s.inner_region = get_set("inner_region");
        std::set<OverlayId> io;
        for (const auto& e : j.at("inner_overlays")) io.insert(e.get<OverlayId>());
        s.inner_overlays = io;
        s.dom_root_region = get_set("dom_root_region");
        s.cod_root_region = get_set("cod_root_region");
        s.dom_root = addr_from(j.at("dom_root"));
        s.cod_root = addr_from(j.at("cod_root"));
        s.ext_ids = get_set("ext_ids");
        return leaf_extension(std::move(s));
    }
    if (type == "ovllift")
        return overlay_lift(from_json(j.at("core")), j.at("dom_ovl").get<OverlayId>(),
                            j.at("cod_ovl").get<OverlayId>(), from_json(j.at("pi")));
    fail(ErrorKind::BadInput, "unknown address map type '" + type + "'");
}

// ---- evaluation ---------------------------------------------------------------

WitnessReport evaluate_witness(const AddressMap& w, const Truncation& dom, const Truncation& cod,
                               const std::map<ColourId, ColourId>& colour_pair) {
    WitnessReport rep;
    auto violate = [&](const Address& a, const std::string& msg) {
        if (rep.ok) {
            rep.ok = false;
            rep.first_violation = a;
            rep.detail = msg;
        }
    };

    std::map<Address, Address> image;
    std::map<Address, Address> preimage;
    for (const Address& a : dom.graph.vertices_sorted()) {
        auto m = w.fwd(a);
        if (!m) {
            if (!dom.is_frontier(a)) violate(a, "witness undefined on a complete vertex");
            continue;
        }
        if (!preimage.emplace(*m, a).second) {
            violate(a, "witness not injective");
            continue;
        }
        image.emplace(a, *m);
        if (!cod.graph.has_vertex(*m)) continue;  // outside the codomain truncation
        ++rep.checked_vertices;

        // colour classes
        auto cd = dom.graph.colour(a);
        auto cc = cod.graph.colour(*m);
        if (cd) {
            ColourId expect = *cd;
            auto it = colour_pair.find(*cd);
            if (it != colour_pair.end()) expect = it->second;
            if (!colour_pair.empty() && it == colour_pair.end()) {
                // colour not tracked; skip
            } else if (!cc || *cc != expect) {
                violate(a, "witness breaks a colour class");
            }
        }

        if (!dom.is_frontier(a) && !cod.is_frontier(*m)) {
            if (dom.graph.degree(dom.graph.index_of(a)) !=
                cod.graph.degree(cod.graph.index_of(*m)))
                violate(a, "witness breaks a degree");
        }
    }

    for (const auto& [a, b] : dom.graph.edges_sorted()) {
        auto ia = image.find(a);
        auto ib = image.find(b);
        if (ia == image.end() || ib == image.end()) continue;
        if (!cod.graph.has_vertex(ia->second) || !cod.graph.has_vertex(ib->second)) continue;
        ++rep.checked_edges;
        if (!cod.graph.has_edge(ia->second, ib->second))
            violate(a, "witness breaks an adjacency");
    }
    return rep;
}

} // namespace pforge
