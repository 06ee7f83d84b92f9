#ifndef PFORGE_GRAPH_IO_HPP
#define PFORGE_GRAPH_IO_HPP

#include "pforge/graph.hpp"
#include "pforge/selfsim.hpp"

#include <string>

#include <json.hpp>

namespace pforge {

/// {vertices:[...], edges:[[a,b],...], root, colours:{addr: name}}
nlohmann::ordered_json graph_to_json(const LabeledGraph& g, const Universe& uni);
LabeledGraph graph_from_json(const nlohmann::ordered_json& j, Universe& uni);

/// DOT with root/colour styling. graph6 drops root and colours (documented).
std::string graph_to_dot(const LabeledGraph& g, const Universe& uni);
std::string graph_to_graph6(const LabeledGraph& g);

nlohmann::ordered_json truncation_to_json(const Truncation& t, const Universe& uni);

} // namespace pforge

#endif
