#pragma once

#include <compare>
#include <memory>
#include <set>
#include <string>
#include <utility>

#include "sockdiv/errors.hpp"

namespace sockdiv {

/// An element of a finite set: either an atom (an opaque string label) or a
/// tuple (base element, slot). Tuples are what Cartesian products with
/// {1..n} produce; they nest, so doubled spaces like (X_a x n) x m stay
/// collision-free. Equality is structural. The ordering is a storage detail
/// (used for canonical files and deterministic iteration) and carries no
/// mathematical meaning.
class Element {
public:
    static Element atom(std::string label)
    {
        auto node = std::make_shared<Node>();
        node->label = std::move(label);
        return Element(std::move(node));
    }

    static Element tuple(Element base, int slot)
    {
        auto node = std::make_shared<Node>();
        node->base = base.node_;
        node->slot = slot;
        return Element(std::move(node));
    }

    bool is_atom() const { return node_->base == nullptr; }
    bool is_tuple() const { return node_->base != nullptr; }

    const std::string& label() const
    {
        if (!is_atom())
            throw ContractViolation("label() called on a tuple element");
        return node_->label;
    }

    Element base() const
    {
        if (!is_tuple())
            throw ContractViolation("base() called on an atom element");
        return Element(node_->base);
    }

    int slot() const
    {
        if (!is_tuple())
            throw ContractViolation("slot() called on an atom element");
        return node_->slot;
    }

    std::string str() const
    {
        if (is_atom())
            return node_->label;
        return "(" + base().str() + "," + std::to_string(node_->slot) + ")";
    }

    friend bool operator==(const Element& lhs, const Element& rhs)
    {
        return compare(lhs, rhs) == std::strong_ordering::equal;
    }

    friend std::strong_ordering operator<=>(const Element& lhs, const Element& rhs)
    {
        return compare(lhs, rhs);
    }

private:
    struct Node {
        std::string label;                  // atoms only
        std::shared_ptr<const Node> base;   // tuples only
        int slot = 0;
    };

    explicit Element(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static std::strong_ordering compare(const Element& lhs, const Element& rhs)
    {
        const bool lt = lhs.is_tuple();
        const bool rt = rhs.is_tuple();
        if (lt != rt)
            return lt <=> rt; // atoms sort before tuples
        if (!lt)
            return lhs.node_->label <=> rhs.node_->label;
        if (auto c = compare(lhs.base(), rhs.base()); c != std::strong_ordering::equal)
            return c;
        return lhs.node_->slot <=> rhs.node_->slot;
    }

    std::shared_ptr<const Node> node_;
};

using ElementSet = std::set<Element>;

/// (a, i) viewed as one slot occurrence of a; the building block of A x {1..n}.
inline Element dart(const Element& base, int slot) { return Element::tuple(base, slot); }

/// A x {1..n} as a set of tuple elements.
inline ElementSet product_darts(const ElementSet& base, int n)
{
    ElementSet out;
    for (const Element& a : base)
        for (int i = 1; i <= n; ++i)
            out.insert(dart(a, i));
    return out;
}

} // namespace sockdiv
