#include "pforge/address.hpp"
#include "pforge/errors.hpp"

#include <algorithm>

namespace pforge {

bool Address::operator<(const Address& o) const {
    return std::lexicographical_compare(steps.begin(), steps.end(),
                                        o.steps.begin(), o.steps.end());
}

Address Address::as_prefix() const {
    if (steps.empty() || steps.back().kind != Step::Kind::At)
        fail(ErrorKind::BadInput, "as_prefix: address does not end at a base vertex");
    Address out = *this;
    out.steps.back().kind = Step::Kind::Enter;
    return out;
}

Address Address::concat(const Address& tail) const {
    Address out = *this;
    out.steps.insert(out.steps.end(), tail.steps.begin(), tail.steps.end());
    return out;
}

BaseId BaseRegistry::intern(const std::string& scope, const std::string& name, int stage) {
    BaseInfo info{scope, name, stage};
    names_.push_back(info.full_name());
    entries_.push_back(std::move(info));
    return static_cast<BaseId>(entries_.size() - 1);
}

std::optional<BaseId> BaseRegistry::lookup(const std::string& full) const {
    // Linear scan kept simple; only used by parsers and tests.
    for (BaseId i = 0; i < names_.size(); ++i)
        if (names_[i] == full) return i;
    return std::nullopt;
}

std::string to_string(const Address& a, const BaseRegistry& reg) {
    std::string out;
    for (const Step& s : a.steps) {
        switch (s.kind) {
        case Step::Kind::Enter:
            out += reg.info(s.id).full_name();
            out += '>';
            break;
        case Step::Kind::At:
            out += reg.info(s.id).full_name();
            break;
        case Step::Kind::Ovl:
            out += "ovl";
            out += std::to_string(s.id);
            out += '>';
            break;
        case Step::Kind::Level:
            out += '@';
            out += std::to_string(s.id);
            break;
        }
    }
    return out;
}

Address parse_address(const std::string& text, const BaseRegistry& reg) {
    Address out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t gt = text.find('>', pos);
        std::size_t at = text.find('@', pos);
        if (gt != std::string::npos && (at == std::string::npos || gt < at)) {
            std::string piece = text.substr(pos, gt - pos);
            if (piece.rfind("ovl", 0) == 0 && piece.size() > 3 &&
                piece.find_first_not_of("0123456789", 3) == std::string::npos) {
                out.steps.push_back(Step{Step::Kind::Ovl,
                                         static_cast<std::uint32_t>(std::stoul(piece.substr(3)))});
            } else {
                auto id = reg.lookup(piece);
                if (!id) fail(ErrorKind::BadInput, "unknown base vertex '" + piece + "'");
                out.steps.push_back(Step{Step::Kind::Enter, *id});
            }
            pos = gt + 1;
        } else if (at != std::string::npos) {
            std::string piece = text.substr(pos, at - pos);
            if (!piece.empty()) {
                auto id = reg.lookup(piece);
                if (!id) fail(ErrorKind::BadInput, "unknown base vertex '" + piece + "'");
                out.steps.push_back(Step{Step::Kind::At, *id});
            }
            out.steps.push_back(Step{Step::Kind::Level,
                                     static_cast<std::uint32_t>(std::stoul(text.substr(at + 1)))});
            pos = text.size();
        } else {
            std::string piece = text.substr(pos);
            auto id = reg.lookup(piece);
            if (!id) fail(ErrorKind::BadInput, "unknown base vertex '" + piece + "'");
            out.steps.push_back(Step{Step::Kind::At, *id});
            pos = text.size();
        }
    }
    return out;
}

} // namespace pforge
