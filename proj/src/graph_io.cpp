#include "pforge/graph_io.hpp"
#include "pforge/errors.hpp"

#include <algorithm>
#include <sstream>

namespace pforge {

using nlohmann::ordered_json;

ordered_json graph_to_json(const LabeledGraph& g, const Universe& uni) {
    ordered_json j;
    ordered_json vs = ordered_json::array();
    for (const Address& a : g.vertices_sorted()) vs.push_back(to_string(a, uni.reg));
    j["vertices"] = vs;
    ordered_json es = ordered_json::array();
    for (const auto& [a, b] : g.edges_sorted())
        es.push_back(ordered_json::array({to_string(a, uni.reg), to_string(b, uni.reg)}));
    j["edges"] = es;
    if (g.root()) j["root"] = to_string(*g.root(), uni.reg);
    ordered_json cols = ordered_json::object();
    for (const auto& [a, c] : g.colours()) cols[to_string(a, uni.reg)] = uni.colour(c).name;
    j["colours"] = cols;
    return j;
}

LabeledGraph graph_from_json(const ordered_json& j, Universe& uni) {
    LabeledGraph g;
    for (const auto& v : j.at("vertices"))
        g.ensure_vertex(parse_address(v.get<std::string>(), uni.reg));
    for (const auto& e : j.at("edges"))
        g.add_edge(parse_address(e.at(0).get<std::string>(), uni.reg),
                   parse_address(e.at(1).get<std::string>(), uni.reg));
    if (j.contains("root") && !j.at("root").is_null())
        g.set_root(parse_address(j.at("root").get<std::string>(), uni.reg));
    if (j.contains("colours"))
        for (const auto& [addr, name] : j.at("colours").items()) {
            auto c = uni.colour_by_name(name.get<std::string>());
            if (!c) fail(ErrorKind::BadInput, "unknown colour '" + name.get<std::string>() + "'");
            g.set_colour(parse_address(addr, uni.reg), *c);
        }
    return g;
}

std::string graph_to_dot(const LabeledGraph& g, const Universe& uni) {
    std::ostringstream out;
    out << "graph pforge {\n";
    out << "  node [shape=circle, width=0.2, label=\"\"];\n";
    for (const Address& a : g.vertices_sorted()) {
        out << "  \"" << to_string(a, uni.reg) << "\"";
        std::vector<std::string> attrs;
        auto c = g.colour(a);
        if (c) attrs.push_back("fillcolor=\"" + uni.colour(*c).name + "\", style=filled");
        if (g.root() && *g.root() == a) attrs.push_back("shape=doublecircle");
        if (!attrs.empty()) {
            out << " [";
            for (std::size_t i = 0; i < attrs.size(); ++i)
                out << (i ? ", " : "") << attrs[i];
            out << "]";
        }
        out << ";\n";
    }
    for (const auto& [a, b] : g.edges_sorted())
        out << "  \"" << to_string(a, uni.reg) << "\" -- \"" << to_string(b, uni.reg) << "\";\n";
    out << "}\n";
    return out.str();
}

namespace {
void g6_append_number(std::string& out, std::size_t n) {
    if (n <= 62) {
        out.push_back(static_cast<char>(n + 63));
    } else if (n <= 258047) {
        out.push_back(126);
        for (int shift = 12; shift >= 0; shift -= 6)
            out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
    } else if (n <= 68719476735ull) {
        out.push_back(126);
        out.push_back(126);
        for (int shift = 30; shift >= 0; shift -= 6)
            out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
    } else {
        fail(ErrorKind::FormatUnsupported, "graph6 supports at most 2^36 vertices");
    }
}
} // namespace

std::string graph_to_graph6(const LabeledGraph& g) {
    std::vector<Address> vs = g.vertices_sorted();
    std::size_t n = vs.size();
    std::map<Address, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) idx[vs[i]] = i;

    std::string out;
    g6_append_number(out, n);
    // upper-triangle bits, column by column
    std::vector<bool> bits;
    bits.reserve(n * (n - 1) / 2);
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 0; i < j; ++i) bits.push_back(g.has_edge(vs[i], vs[j]));
    for (std::size_t i = 0; i < bits.size(); i += 6) {
        int v = 0;
        for (std::size_t k = 0; k < 6; ++k) {
            v <<= 1;
            if (i + k < bits.size() && bits[i + k]) v |= 1;
        }
        out.push_back(static_cast<char>(v + 63));
    }
    return out;
}

ordered_json truncation_to_json(const Truncation& t, const Universe& uni) {
    ordered_json j = graph_to_json(t.graph, uni);
    ordered_json fr = ordered_json::object();
    for (const auto& [a, fi] : t.frontier) {
        ordered_json e;
        e["eventual_degree"] = fi.eventual_degree;
        if (fi.pending != kNoColour) e["pending"] = uni.colour(fi.pending).name;
        fr[to_string(a, uni.reg)] = e;
    }
    j["frontier"] = fr;
    return j;
}

} // namespace pforge
