#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "sockdiv/core.hpp"
#include "sockdiv/reductions.hpp"

namespace sockdiv {

using ordered_json = nlohmann::ordered_json;

enum class InstanceKind { Shoe, Sock, PairFamily, Bundle };

inline const char* to_string(InstanceKind kind)
{
    switch (kind) {
    case InstanceKind::Shoe: return "shoe";
    case InstanceKind::Sock: return "sock";
    case InstanceKind::PairFamily: return "pair-family";
    case InstanceKind::Bundle: return "bundle";
    }
    return "?";
}

/// A parsed instance file: the kind tag plus the validated payload.
struct InstanceFile {
    InstanceKind kind;
    std::variant<ShoeInstance, SockInstance, PairFamily, SockBundle> payload;

    const ShoeInstance& shoe() const { return std::get<ShoeInstance>(payload); }
    const SockInstance& sock() const { return std::get<SockInstance>(payload); }
    const PairFamily& pair_family() const { return std::get<PairFamily>(payload); }
    const SockBundle& bundle() const { return std::get<SockBundle>(payload); }
};

namespace io_detail {

inline std::string locate(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline ordered_json parse_json(const std::string& text)
{
    // The callback rejects duplicate object keys, which nlohmann would
    // otherwise silently collapse.
    std::vector<std::set<std::string>> stack;
    auto callback = [&](int, ordered_json::parse_event_t event, ordered_json& parsed) {
        if (event == ordered_json::parse_event_t::object_start) {
            stack.emplace_back();
        } else if (event == ordered_json::parse_event_t::object_end) {
            stack.pop_back();
        } else if (event == ordered_json::parse_event_t::key) {
            const std::string key = parsed.get<std::string>();
            if (!stack.back().insert(key).second)
                throw ParseError("duplicate key \"" + key + "\"");
        }
        return true;
    };
    try {
        return ordered_json::parse(text, callback);
    } catch (const ordered_json::parse_error& e) {
        throw ParseError("invalid JSON at " + locate(text, e.byte) + ": " + e.what());
    }
}

inline Element element_from_json(const ordered_json& j, const std::string& where)
{
    if (j.is_string())
        return Element::atom(j.get<std::string>());
    if (j.is_array() && j.size() == 2 && j[1].is_number_integer())
        return Element::tuple(element_from_json(j[0], where), j[1].get<int>());
    throw ParseError(where + ": expected an element (a string or [element, slot])");
}

inline ordered_json element_to_json(const Element& e)
{
    if (e.is_atom())
        return ordered_json(e.label());
    return ordered_json::array({element_to_json(e.base()), e.slot()});
}

inline IndexedPair indexed_pair_from_json(const ordered_json& j, const std::string& where)
{
    Element e = element_from_json(j, where);
    if (!e.is_tuple())
        throw ParseError(where + ": expected a slot pair [element, slot]");
    return IndexedPair{e.base(), e.slot()};
}

inline ElementSet element_set_from_json(const ordered_json& j, const std::string& where)
{
    if (!j.is_array())
        throw ParseError(where + ": expected an array of elements");
    ElementSet out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        Element e = element_from_json(j[k], where + "[" + std::to_string(k) + "]");
        if (!out.insert(e).second)
            throw ParseError(where + "[" + std::to_string(k) + "]: duplicate element "
                             + e.str());
    }
    return out;
}

inline const ordered_json& field(const ordered_json& j, const char* name,
                                 const std::string& where)
{
    auto it = j.find(name);
    if (it == j.end())
        throw ParseError(where + ": missing field \"" + std::string(name) + "\"");
    return *it;
}

inline int int_field(const ordered_json& j, const char* name, const std::string& where)
{
    const ordered_json& v = field(j, name, where);
    if (!v.is_number_integer())
        throw ParseError(where + ": field \"" + std::string(name) + "\" must be an integer");
    return v.get<int>();
}

inline std::map<Element, ElementSet> fibers_from_json(const ordered_json& j,
                                                      const std::string& where)
{
    if (!j.is_object())
        throw ParseError(where + ": expected an object mapping base labels to fibers");
    std::map<Element, ElementSet> fibers;
    for (const auto& [key, value] : j.items())
        fibers.emplace(Element::atom(key),
                       element_set_from_json(value, where + "/" + key));
    return fibers;
}

inline std::vector<std::pair<Element, Element>> mapping_from_json(const ordered_json& j,
                                                                  const std::string& where)
{
    if (!j.is_array())
        throw ParseError(where + ": expected an array of [from, to] pairs");
    std::vector<std::pair<Element, Element>> pairs;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const ordered_json& entry = j[k];
        const std::string at = where + "[" + std::to_string(k) + "]";
        if (!entry.is_array() || entry.size() != 2)
            throw ParseError(at + ": expected a [from, to] pair");
        pairs.emplace_back(element_from_json(entry[0], at + "[0]"),
                           element_from_json(entry[1], at + "[1]"));
    }
    return pairs;
}

} // namespace io_detail

inline InstanceFile parse_instance(const std::string& text)
{
    using namespace io_detail;
    ordered_json j = parse_json(text);
    if (!j.is_object())
        throw ParseError("top level: expected an object");
    const ordered_json& kind_field = field(j, "kind", "top level");
    if (!kind_field.is_string())
        throw ParseError("top level: field \"kind\" must be a string");
    const std::string kind = kind_field.get<std::string>();

    if (kind == "shoe") {
        int n = int_field(j, "n", "shoe");
        ElementSet a = element_set_from_json(field(j, "A", "shoe"), "A");
        ElementSet b = element_set_from_json(field(j, "B", "shoe"), "B");
        const ordered_json& h = field(j, "h", "shoe");
        if (!h.is_array())
            throw ParseError("h: expected an array of dart pairs");
        std::vector<std::pair<IndexedPair, IndexedPair>> pairs;
        for (std::size_t k = 0; k < h.size(); ++k) {
            const ordered_json& entry = h[k];
            const std::string at = "h[" + std::to_string(k) + "]";
            if (!entry.is_array() || entry.size() != 2)
                throw ParseError(at + ": expected a [dart, dart] pair");
            pairs.emplace_back(indexed_pair_from_json(entry[0], at + "[0]"),
                               indexed_pair_from_json(entry[1], at + "[1]"));
        }
        return {InstanceKind::Shoe, ShoeInstance::validate(a, b, n, pairs)};
    }
    if (kind == "sock") {
        int n = int_field(j, "n", "sock");
        SockBundle left = SockBundle::validate(
            n, fibers_from_json(field(j, "left", "sock"), "left"));
        SockBundle right = SockBundle::validate(
            n, fibers_from_json(field(j, "right", "sock"), "right"));
        Bijection u = Bijection::from_pairs(mapping_from_json(field(j, "u", "sock"), "u"));
        return {InstanceKind::Sock,
                SockInstance::validate(std::move(left), std::move(right), std::move(u))};
    }
    if (kind == "pair-family") {
        int n = int_field(j, "n", "pair-family");
        const ordered_json& order_json = field(j, "order", "pair-family");
        if (!order_json.is_array())
            throw ParseError("order: expected an array of indices");
        std::vector<Element> order;
        for (std::size_t k = 0; k < order_json.size(); ++k)
            order.push_back(io_detail::element_from_json(order_json[k],
                                                         "order[" + std::to_string(k) + "]"));
        PairFamily family = PairFamily::validate(
            std::move(order), fibers_from_json(field(j, "pairs", "pair-family"), "pairs"));
        require_family_arity(family, n);
        return {InstanceKind::PairFamily, std::move(family)};
    }
    if (kind == "bundle") {
        int n = int_field(j, "n", "bundle");
        SockBundle bundle = SockBundle::validate(
            n, fibers_from_json(field(j, "fibers", "bundle"), "fibers"));
        return {InstanceKind::Bundle, std::move(bundle)};
    }
    throw ParseError("top level: unknown kind \"" + kind + "\"");
}

namespace io_detail {

inline ordered_json set_to_json(const ElementSet& set)
{
    ordered_json out = ordered_json::array();
    for (const Element& e : set)
        out.push_back(element_to_json(e));
    return out;
}

inline ordered_json fibers_to_json(const std::map<Element, ElementSet>& fibers)
{
    ordered_json out = ordered_json::object();
    for (const auto& [index, fiber] : fibers) {
        if (!index.is_atom())
            throw ContractViolation("bundle with tuple base " + index.str()
                                    + " cannot be written in the file schema");
        out[index.label()] = set_to_json(fiber);
    }
    return out;
}

inline ordered_json mapping_to_json(const Bijection& b)
{
    ordered_json out = ordered_json::array();
    for (const auto& [x, y] : b.forward())
        out.push_back(ordered_json::array({element_to_json(x), element_to_json(y)}));
    return out;
}

} // namespace io_detail

/// Canonical emission: fixed field order, sorted keys, sorted element lists,
/// mappings sorted by source, compact JSON plus a trailing newline.
/// parse . emit is the identity, and emit . parse is the identity on
/// canonically formatted text.
inline std::string emit_instance(const InstanceFile& file)
{
    using namespace io_detail;
    ordered_json j = ordered_json::object();
    j["kind"] = to_string(file.kind);
    switch (file.kind) {
    case InstanceKind::Shoe: {
        const ShoeInstance& inst = file.shoe();
        j["n"] = inst.n();
        j["A"] = set_to_json(inst.a());
        j["B"] = set_to_json(inst.b());
        j["h"] = mapping_to_json(inst.h());
        break;
    }
    case InstanceKind::Sock: {
        const SockInstance& inst = file.sock();
        j["n"] = inst.arity();
        j["left"] = fibers_to_json(inst.left().fibers());
        j["right"] = fibers_to_json(inst.right().fibers());
        j["u"] = mapping_to_json(inst.u());
        break;
    }
    case InstanceKind::PairFamily: {
        const PairFamily& family = file.pair_family();
        j["n"] = family.fiber_size();
        ordered_json order = ordered_json::array();
        for (const Element& index : family.indices())
            order.push_back(element_to_json(index));
        j["order"] = order;
        ordered_json pairs = ordered_json::object();
        for (const auto& [index, fiber] : family.fibers()) {
            if (!index.is_atom())
                throw ContractViolation("family with tuple index " + index.str()
                                        + " cannot be written in the file schema");
            pairs[index.label()] = set_to_json(fiber);
        }
        j["pairs"] = pairs;
        break;
    }
    case InstanceKind::Bundle: {
        const SockBundle& bundle = file.bundle();
        j["n"] = bundle.arity();
        j["fibers"] = fibers_to_json(bundle.fibers());
        break;
    }
    }
    return j.dump() + "\n";
}

inline InstanceFile load_instance(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot read file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str());
}

/// FNV-1a 64 over the canonical emission; the instance digest used in reports.
inline std::string digest(const std::string& canonical_text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[k] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

inline std::string instance_digest(const InstanceFile& file)
{
    return digest(emit_instance(file));
}

} // namespace sockdiv
