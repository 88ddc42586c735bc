#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sockdiv/element.hpp"
#include "sockdiv/errors.hpp"

namespace sockdiv {

/// A finite invertible mapping between two equal-size element sets. The
/// universal currency of the library: matchings, relabelings, oracle
/// outputs and trivializations are all Bijections. Immutable once built;
/// construction validates totality, injectivity and surjectivity.
class Bijection {
public:
    Bijection() = default;

    /// Builds from (source, target) pairs; domain and codomain are inferred.
    static Bijection from_pairs(const std::vector<std::pair<Element, Element>>& pairs)
    {
        Bijection b;
        for (const auto& [x, y] : pairs) {
            if (!b.fwd_.emplace(x, y).second)
                throw NotABijection("element " + x.str() + " is mapped more than once");
            if (!b.inv_.emplace(y, x).second)
                throw NotABijection("element " + y.str() + " is hit more than once");
        }
        for (const auto& [x, y] : b.fwd_) {
            b.dom_.insert(x);
            b.cod_.insert(y);
        }
        return b;
    }

    /// Builds from pairs and checks the domain/codomain are exactly as given.
    static Bijection from_pairs(const ElementSet& domain, const ElementSet& codomain,
                                const std::vector<std::pair<Element, Element>>& pairs)
    {
        Bijection b = from_pairs(pairs);
        if (b.dom_ != domain)
            throw NotABijection("mapping is not total on the declared domain");
        if (b.cod_ != codomain)
            throw NotABijection("mapping is not onto the declared codomain");
        return b;
    }

    static Bijection identity(const ElementSet& set)
    {
        Bijection b;
        for (const Element& x : set) {
            b.fwd_.emplace(x, x);
            b.inv_.emplace(x, x);
        }
        b.dom_ = set;
        b.cod_ = set;
        return b;
    }

    const ElementSet& domain() const { return dom_; }
    const ElementSet& codomain() const { return cod_; }
    std::size_t size() const { return fwd_.size(); }
    bool is_permutation() const { return dom_ == cod_; }

    const Element& apply(const Element& x) const
    {
        auto it = fwd_.find(x);
        if (it == fwd_.end())
            throw DomainMismatch("element " + x.str() + " is not in the domain");
        return it->second;
    }

    const Element& preimage(const Element& y) const
    {
        auto it = inv_.find(y);
        if (it == inv_.end())
            throw DomainMismatch("element " + y.str() + " is not in the codomain");
        return it->second;
    }

    bool maps(const Element& x) const { return fwd_.count(x) != 0; }

    Bijection inverse() const
    {
        Bijection b;
        b.fwd_ = inv_;
        b.inv_ = fwd_;
        b.dom_ = cod_;
        b.cod_ = dom_;
        return b;
    }

    /// Composition in application order: (this.then(g))(x) = g(this(x)).
    Bijection then(const Bijection& g) const
    {
        if (cod_ != g.dom_)
            throw DomainMismatch("composition mismatch: codomain differs from next domain");
        std::vector<std::pair<Element, Element>> pairs;
        pairs.reserve(fwd_.size());
        for (const auto& [x, y] : fwd_)
            pairs.emplace_back(x, g.apply(y));
        return from_pairs(pairs);
    }

    /// Pairs sorted by source element (the canonical listing).
    std::vector<std::pair<Element, Element>> pairs() const
    {
        return {fwd_.begin(), fwd_.end()};
    }

    const std::map<Element, Element>& forward() const { return fwd_; }

    friend bool operator==(const Bijection& lhs, const Bijection& rhs)
    {
        return lhs.fwd_ == rhs.fwd_;
    }

    std::string str() const
    {
        std::string out = "{";
        bool first = true;
        for (const auto& [x, y] : fwd_) {
            if (!first)
                out += ", ";
            first = false;
            out += x.str() + "->" + y.str();
        }
        return out + "}";
    }

private:
    std::map<Element, Element> fwd_;
    std::map<Element, Element> inv_;
    ElementSet dom_;
    ElementSet cod_;
};

/// g o f as a free function, for call sites that read better algebraically.
inline Bijection compose(const Bijection& g, const Bijection& f) { return f.then(g); }

} // namespace sockdiv
