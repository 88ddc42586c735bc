#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sockdiv/core.hpp"
#include "sockdiv/shoe_division.hpp"

namespace sockdiv {

/// A finite ordered family of disjoint same-size fibers; the index order
/// stands in for the naturals when a selection rule needs "the smaller one".
class PairFamily {
public:
    static PairFamily validate(std::vector<Element> order, std::map<Element, ElementSet> fibers)
    {
        PairFamily family;
        family.order_ = std::move(order);
        family.fibers_ = std::move(fibers);
        ElementSet seen_indices;
        for (std::size_t k = 0; k < family.order_.size(); ++k) {
            const Element& index = family.order_[k];
            if (!seen_indices.insert(index).second)
                throw DomainMismatch("index " + index.str() + " appears twice in the order");
            if (family.fibers_.find(index) == family.fibers_.end())
                throw DomainMismatch("index " + index.str() + " has no fiber");
            family.rank_.emplace(index, static_cast<int>(k));
        }
        if (family.fibers_.size() != family.order_.size())
            throw DomainMismatch("fiber map mentions an index missing from the order");
        for (const auto& [index, fiber] : family.fibers_) {
            if (family.fiber_size_ == 0)
                family.fiber_size_ = static_cast<int>(fiber.size());
            if (static_cast<int>(fiber.size()) != family.fiber_size_ || fiber.empty())
                throw FiberSizeError("fiber of " + index.str() + " has size "
                                     + std::to_string(fiber.size()) + ", expected "
                                     + std::to_string(family.fiber_size_));
            for (const Element& x : fiber)
                if (!family.total_.insert(x).second)
                    throw FibersOverlap("element " + x.str() + " lies in two fibers");
        }
        return family;
    }

    const std::vector<Element>& indices() const { return order_; }
    const std::map<Element, ElementSet>& fibers() const { return fibers_; }
    int fiber_size() const { return fiber_size_; } // 0 for the empty family
    const ElementSet& total_space() const { return total_; }
    bool empty() const { return order_.empty(); }

    const ElementSet& fiber(const Element& index) const
    {
        auto it = fibers_.find(index);
        if (it == fibers_.end())
            throw DomainMismatch("no fiber at " + index.str());
        return it->second;
    }

    int rank(const Element& index) const
    {
        auto it = rank_.find(index);
        if (it == rank_.end())
            throw DomainMismatch(index.str() + " is not an index of the family");
        return it->second;
    }

private:
    PairFamily() = default;

    std::vector<Element> order_;
    std::map<Element, ElementSet> fibers_;
    std::map<Element, int> rank_;
    ElementSet total_;
    int fiber_size_ = 0;
};

/// The hypothesis "sock division holds", injected as a procedure. Oracles
/// must be pure; call sites check determinism by invoking twice.
using SockDividerOracle = std::function<Bijection(const SockInstance&)>;

inline Bijection invoke_oracle(const SockDividerOracle& oracle, const SockInstance& inst)
{
    Bijection first = oracle(inst);
    Bijection second = oracle(inst);
    if (!(first == second))
        throw OracleViolation("oracle returned different answers for the same instance");
    if (first.domain() != inst.left().base() || first.codomain() != inst.right().base())
        throw OracleViolation("oracle output is not a bijection between the base sets");
    return first;
}

inline void require_family_arity(const PairFamily& family, int n)
{
    if (n < 1)
        throw ArityMismatch("arity must be at least 1, got " + std::to_string(n));
    if (!family.empty() && family.fiber_size() != n)
        throw FiberSizeError("family has fibers of size " + std::to_string(family.fiber_size())
                             + ", expected " + std::to_string(n));
}

/// The rows of the grids: one fiber {(x,1)..(x,n)} per individual sock x.
inline SockBundle rows_bundle(const PairFamily& family, int n)
{
    require_family_arity(family, n);
    return trivial_bundle(family.total_space(), n);
}

/// The columns of the grids: one fiber A_i x {s} per (index, slot).
inline SockBundle columns_bundle(const PairFamily& family, int n)
{
    require_family_arity(family, n);
    std::map<Element, ElementSet> fibers;
    for (const auto& [index, fiber] : family.fibers()) {
        for (int s = 1; s <= n; ++s) {
            ElementSet column;
            for (const Element& x : fiber)
                column.insert(dart(x, s));
            fibers.emplace(dart(index, s), std::move(column));
        }
    }
    return SockBundle::validate(n, fibers);
}

/// Runs the rows/columns construction, hands the two presentations of the
/// doubled space to the oracle, and converts the resulting bijection
/// socks -> indices x slots into a choice: each fiber keeps the sock whose
/// image is smallest in the (index rank, slot) lexicographic order.
inline ChoiceAssignment choice_from_sock_divider(const PairFamily& family,
                                                 const SockDividerOracle& oracle)
{
    ChoiceAssignment choice;
    if (family.empty())
        return choice;
    const int n = family.fiber_size();
    SockBundle rows = rows_bundle(family, n);
    SockBundle columns = columns_bundle(family, n);
    SockInstance doubled = SockInstance::validate(
        rows, columns, Bijection::identity(rows.total_space()));
    Bijection g = invoke_oracle(oracle, doubled);

    for (const auto& [index, fiber] : family.fibers()) {
        const Element* selected = nullptr;
        std::pair<int, int> best{0, 0};
        for (const Element& sock : fiber) {
            const Element& image = g.apply(sock);
            std::pair<int, int> key{family.rank(image.base()), image.slot()};
            if (selected == nullptr || key < best) {
                selected = &sock;
                best = key;
            }
        }
        choice.selection.emplace(index, *selected);
    }
    return choice;
}

/// Presents the doubled space (X_a x {1..n} over all a) as two bundles --
/// fibers {(x,i) : x in X_a} indexed by A x n, and fibers {(x,i) : i <= n}
/// indexed by the socks -- and asks the oracle for a bijection of the bases.
/// The result maps the total space onto A x n but need not respect fibers.
inline Bijection mra_from_sock_divider(const SockBundle& bundle, const SockDividerOracle& oracle)
{
    const int n = bundle.arity();
    SockBundle by_sock = trivial_bundle(bundle.total_space(), n);
    std::map<Element, ElementSet> slice_fibers;
    for (const auto& [index, fiber] : bundle.fibers()) {
        for (int i = 1; i <= n; ++i) {
            ElementSet slice;
            for (const Element& x : fiber)
                slice.insert(dart(x, i));
            slice_fibers.emplace(dart(index, i), std::move(slice));
        }
    }
    SockBundle by_index_slot = SockBundle::validate(n, slice_fibers);
    SockInstance doubled = SockInstance::validate(
        by_sock, by_index_slot, Bijection::identity(by_sock.total_space()));
    return invoke_oracle(oracle, doubled);
}

namespace detail {

/// Orders every fiber of a sock instance by iterated structural refinement:
/// a sock's color is refined by the colors of its fiber mates and of its
/// u-image (u-preimage on the right side) until stable. Colors are
/// label-free; remaining ties fall back to label order, the one place this
/// construction can break symmetry.
inline std::map<Element, int> fiber_positions(const SockInstance& inst)
{
    struct Entry {
        Element element;
        bool left;
    };
    std::vector<Entry> socks;
    for (const Element& x : inst.left().total_space())
        socks.push_back({x, true});
    for (const Element& y : inst.right().total_space())
        socks.push_back({y, false});

    std::map<Element, int> color; // keyed on side-tagged elements
    auto tag = [](const Element& e, bool left) { return dart(e, left ? 1 : 2); };
    for (const Entry& s : socks)
        color[tag(s.element, s.left)] = s.left ? 0 : 1;

    for (std::size_t round = 0; round < socks.size() + 1; ++round) {
        std::map<std::vector<int>, int> compress;
        std::map<Element, int> next;
        std::vector<std::pair<Element, std::vector<int>>> signatures;
        for (const Entry& s : socks) {
            const SockBundle& side = s.left ? inst.left() : inst.right();
            std::vector<int> sig;
            sig.push_back(color.at(tag(s.element, s.left)));
            std::vector<int> mates;
            for (const Element& m : side.fiber(side.project(s.element)))
                if (!(m == s.element))
                    mates.push_back(color.at(tag(m, s.left)));
            std::sort(mates.begin(), mates.end());
            sig.insert(sig.end(), mates.begin(), mates.end());
            sig.push_back(s.left ? color.at(tag(inst.u().apply(s.element), false))
                                 : color.at(tag(inst.u().preimage(s.element), true)));
            signatures.emplace_back(tag(s.element, s.left), std::move(sig));
        }
        std::vector<std::vector<int>> distinct;
        for (const auto& [key, sig] : signatures)
            distinct.push_back(sig);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (std::size_t k = 0; k < distinct.size(); ++k)
            compress.emplace(distinct[k], static_cast<int>(k));
        bool changed = false;
        for (const auto& [key, sig] : signatures) {
            int c = compress.at(sig);
            if (color.at(key) != c)
                changed = true;
            next[key] = c;
        }
        color = std::move(next);
        if (!changed)
            break;
    }

    // Position of each sock inside its fiber: by color, labels breaking ties.
    std::map<Element, int> position;
    auto assign_side = [&](const SockBundle& side, bool left) {
        for (const auto& [index, fiber] : side.fibers()) {
            std::vector<std::pair<std::pair<int, Element>, Element>> ordered;
            for (const Element& x : fiber)
                ordered.push_back({{color.at(tag(x, left)), x}, x});
            std::sort(ordered.begin(), ordered.end());
            int k = 1;
            for (const auto& [key, x] : ordered)
                position[tag(x, left)] = k++;
        }
    };
    assign_side(inst.left(), true);
    assign_side(inst.right(), false);
    return position;
}

} // namespace detail

/// The backward direction of the division/repeated-addition equivalence:
/// builds total-space trivializations of both sides from the refinement
/// order, composes them with u into a shoe instance on the bases, and
/// divides. A fiber-respecting u collapses the composite to n parallel
/// edges per base pair, so the induced base bijection is returned exactly.
inline Bijection sock_divide_from_mra(const SockInstance& inst)
{
    const int n = inst.arity();
    std::map<Element, int> position = detail::fiber_positions(inst);
    auto side_map = [&](const SockBundle& side, bool left) {
        std::vector<std::pair<Element, Element>> pairs;
        for (const auto& [index, fiber] : side.fibers())
            for (const Element& x : fiber)
                pairs.emplace_back(x, dart(index, position.at(dart(x, left ? 1 : 2))));
        return Bijection::from_pairs(pairs);
    };
    Bijection left_mra = side_map(inst.left(), true);   // union X_a -> A x n
    Bijection right_mra = side_map(inst.right(), false); // union Y_b -> B x n
    Bijection h = left_mra.inverse().then(inst.u()).then(right_mra);
    ShoeInstance shoe = ShoeInstance::from_bijection(inst.left().base(), inst.right().base(), n,
                                                     std::move(h));
    return shoe_divide(shoe).matching;
}

/// A designated total order on a carrier set, as a rank bijection onto
/// 0..|carrier|-1.
class LinearOrder {
public:
    static LinearOrder over(const std::vector<Element>& ordered)
    {
        LinearOrder order;
        for (std::size_t k = 0; k < ordered.size(); ++k) {
            if (!order.carrier_.insert(ordered[k]).second)
                throw DomainMismatch(ordered[k].str() + " appears twice in the order");
            order.rank_.emplace(ordered[k], static_cast<int>(k));
        }
        return order;
    }

    int rank(const Element& e) const
    {
        auto it = rank_.find(e);
        if (it == rank_.end())
            throw DomainMismatch(e.str() + " is not in the ordered carrier");
        return it->second;
    }

    const ElementSet& carrier() const { return carrier_; }

private:
    LinearOrder() = default;

    ElementSet carrier_;
    std::map<Element, int> rank_;
};

/// Turns any total-space bijection f onto A x n into a fiber-respecting one:
/// A x n is ranked lexicographically by (order, slot), each fiber is sorted
/// by the rank of its f-image, and the k-th sock goes to (a, k). The output
/// always passes is_bundle_isomorphism against the trivial bundle.
inline Bijection trivialize_with_order(const SockBundle& bundle, const LinearOrder& order,
                                       const Bijection& f)
{
    if (order.carrier() != bundle.base())
        throw DomainMismatch("order does not cover the base of the bundle");
    const int n = bundle.arity();
    SockBundle trivial = trivial_bundle(bundle.base(), n);
    if (f.domain() != bundle.total_space())
        throw DomainMismatch("f is not defined on the total space of the bundle");
    if (f.codomain() != trivial.total_space())
        throw DomainMismatch("f does not map onto the trivial total space");

    auto image_rank = [&](const Element& x) {
        const Element& image = f.apply(x);
        return std::pair<int, int>{order.rank(image.base()), image.slot()};
    };
    std::vector<std::pair<Element, Element>> pairs;
    for (const auto& [index, fiber] : bundle.fibers()) {
        std::vector<std::pair<std::pair<int, int>, Element>> sorted;
        for (const Element& x : fiber)
            sorted.push_back({image_rank(x), x});
        std::sort(sorted.begin(), sorted.end());
        int k = 1;
        for (const auto& [key, x] : sorted)
            pairs.emplace_back(x, dart(index, k++));
    }
    return Bijection::from_pairs(bundle.total_space(), trivial.total_space(), pairs);
}

struct StrongDivisibilityWitness {
    ElementSet quotient_base;
    Bijection pairing; // A <-> quotient_base x n
};

namespace detail {

inline std::string fresh_label_prefix(const ElementSet& avoid)
{
    std::string prefix = "q";
    auto collides = [&] {
        for (const Element& e : avoid)
            if (e.is_atom() && e.label().rfind(prefix, 0) == 0)
                return true;
        return false;
    };
    while (collides())
        prefix += "q";
    return prefix;
}

} // namespace detail

/// If n divides |A|, a fresh base B with |A| = |B x n|, exhibited by an
/// explicit pairing; otherwise absence.
inline std::optional<StrongDivisibilityWitness> strong_divisibility_witness(const ElementSet& a,
                                                                            int n)
{
    if (n < 1)
        throw ArityMismatch("divisor must be at least 1, got " + std::to_string(n));
    if (a.size() % static_cast<std::size_t>(n) != 0)
        return std::nullopt;
    const std::size_t quotient = a.size() / static_cast<std::size_t>(n);
    const std::string prefix = detail::fresh_label_prefix(a);
    StrongDivisibilityWitness witness;
    std::vector<Element> base;
    for (std::size_t k = 0; k < quotient; ++k) {
        base.push_back(Element::atom(prefix + std::to_string(k)));
        witness.quotient_base.insert(base.back());
    }
    std::vector<std::pair<Element, Element>> pairs;
    std::size_t pos = 0;
    for (const Element& x : a) {
        pairs.emplace_back(x, dart(base[pos / n], static_cast<int>(pos % n) + 1));
        ++pos;
    }
    witness.pairing = Bijection::from_pairs(pairs);
    return witness;
}

/// If n divides |A|, a sock bundle whose total space is exactly A;
/// otherwise absence. At finite scale this presence coincides with the
/// strong witness's, which the suite checks as a property.
inline std::optional<SockBundle> weak_divisibility_witness(const ElementSet& a, int n)
{
    if (n < 1)
        throw ArityMismatch("divisor must be at least 1, got " + std::to_string(n));
    if (a.size() % static_cast<std::size_t>(n) != 0)
        return std::nullopt;
    const std::size_t quotient = a.size() / static_cast<std::size_t>(n);
    const std::string prefix = detail::fresh_label_prefix(a);
    std::map<Element, ElementSet> fibers;
    auto it = a.begin();
    for (std::size_t k = 0; k < quotient; ++k) {
        ElementSet fiber;
        for (int i = 0; i < n; ++i)
            fiber.insert(*it++);
        fibers.emplace(Element::atom(prefix + std::to_string(k)), std::move(fiber));
    }
    return SockBundle::validate(n, fibers);
}

} // namespace sockdiv
