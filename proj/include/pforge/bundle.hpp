#ifndef PFORGE_BUNDLE_HPP
#define PFORGE_BUNDLE_HPP

#include "pforge/construct.hpp"

#include <string>

#include <json.hpp>

namespace pforge {

/// Versioned JSON bundle of a whole run: universe, presentations, colour
/// tables, witnesses and enumeration state. Deterministic byte-for-byte.
nlohmann::ordered_json run_to_json(const Run& run);
Run run_from_json(const nlohmann::ordered_json& j);

/// Writes universe.json plus one stage<i>.json per stage into `dir`.
void save_run(const Run& run, const std::string& dir);
Run load_run(const std::string& dir);

} // namespace pforge

#endif
