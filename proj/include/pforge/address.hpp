#ifndef PFORGE_ADDRESS_HPP
#define PFORGE_ADDRESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pforge {

/// Index into the global BaseRegistry. Base vertices are the vertices of the
/// finite graphs a construction run manipulates directly (stage bases, pattern
/// bodies, F-tree bases). Everything else is addressed relative to them.
using BaseId = std::uint32_t;
inline constexpr BaseId kNoBase = 0xffffffffu;

/// Colour identifiers double as leaf types: a coloured leaf of colour c is an
/// expansion site once a pattern has been bound to c.
using ColourId = std::uint32_t;
inline constexpr ColourId kNoColour = 0xffffffffu;

/// Stable identifier of an overlay definition (a ray-product gluing).
using OverlayId = std::uint32_t;

/// One step of a hierarchical vertex address.
///
///   Enter(b)  descend through the typed leaf b into its pattern copy
///   At(b)     terminal base vertex of the current scope
///   Ovl(k)    enter overlay k of the current scope; the steps that follow
///             address a vertex of the overlay's F presentation
///   Level(j)  terminal grid level of an overlay column
///
/// Grammar: Enter* ( At | Ovl Enter* At Level ).
struct Step {
    enum class Kind : std::uint8_t { Enter, At, Ovl, Level };
    Kind kind;
    std::uint32_t id;

    bool operator==(const Step& o) const { return kind == o.kind && id == o.id; }
    bool operator<(const Step& o) const {
        if (kind != o.kind) return kind < o.kind;
        return id < o.id;
    }
};

struct Address {
    std::vector<Step> steps;

    Address() = default;
    explicit Address(std::vector<Step> s) : steps(std::move(s)) {}

    static Address at(BaseId b) { return Address({Step{Step::Kind::At, b}}); }

    bool empty() const { return steps.empty(); }
    std::size_t size() const { return steps.size(); }

    bool operator==(const Address& o) const { return steps == o.steps; }
    bool operator!=(const Address& o) const { return !(*this == o); }
    bool operator<(const Address& o) const;

    /// Terminal base vertex, if the address ends in an At step.
    std::optional<BaseId> terminal_base() const {
        if (steps.empty()) return std::nullopt;
        const Step& last = steps.back();
        if (last.kind == Step::Kind::At) return last.id;
        return std::nullopt;
    }

    bool is_overlay() const {
        for (const Step& s : steps)
            if (s.kind == Step::Kind::Ovl) return true;
        return false;
    }

    /// [.., At(x)] -> [.., Enter(x)], turning a leaf vertex into a descent prefix.
    Address as_prefix() const;

    Address concat(const Address& tail) const;

    std::size_t hash() const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (const Step& s : steps) {
            h ^= (static_cast<std::size_t>(s.kind) << 32) ^ s.id;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

struct AddressHash {
    std::size_t operator()(const Address& a) const { return a.hash(); }
};

/// Provenance record for a base vertex: which construction scope created it
/// (stage tag plus copy tag) and its human-readable local name.
struct BaseInfo {
    std::string scope;  // e.g. "G0", "pg0", "hH0", "FG1"
    std::string name;   // e.g. "a", "u3", "x"
    int stage = 0;

    std::string full_name() const { return scope + "." + name; }
};

class BaseRegistry {
public:
    BaseId intern(const std::string& scope, const std::string& name, int stage);
    const BaseInfo& info(BaseId id) const { return entries_.at(id); }
    std::size_t size() const { return entries_.size(); }
    std::optional<BaseId> lookup(const std::string& full) const;

private:
    std::vector<BaseInfo> entries_;
    std::vector<std::string> names_;  // full names, parallel to entries_
};

std::string to_string(const Address& a, const BaseRegistry& reg);
Address parse_address(const std::string& text, const BaseRegistry& reg);

} // namespace pforge

#endif
