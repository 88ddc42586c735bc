#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sockdiv/bijection.hpp"
#include "sockdiv/element.hpp"
#include "sockdiv/errors.hpp"

namespace sockdiv {

/// One slot occurrence (a, i) in raw, pre-validation form.
struct IndexedPair {
    Element base;
    int slot;

    Element as_element() const { return dart(base, slot); }
};

/// Sets A, B of equal size together with a bijection h between A x {1..n}
/// and B x {1..n}. Validation is eager: a constructed instance always
/// satisfies the invariants, so every downstream operation may assume them.
class ShoeInstance {
public:
    static ShoeInstance validate(ElementSet a, ElementSet b, int n,
                                 const std::vector<std::pair<IndexedPair, IndexedPair>>& h_pairs)
    {
        if (n < 1)
            throw ArityMismatch("arity must be at least 1, got " + std::to_string(n));
        for (const auto& [src, dst] : h_pairs) {
            if (src.slot < 1 || src.slot > n)
                throw ArityMismatch("slot " + std::to_string(src.slot) + " of " + src.base.str()
                                    + " is outside 1.." + std::to_string(n));
            if (dst.slot < 1 || dst.slot > n)
                throw ArityMismatch("slot " + std::to_string(dst.slot) + " of " + dst.base.str()
                                    + " is outside 1.." + std::to_string(n));
        }
        if (a.size() != b.size())
            throw SizeMismatch("|A| = " + std::to_string(a.size()) + " but |B| = "
                               + std::to_string(b.size()));
        std::vector<std::pair<Element, Element>> pairs;
        pairs.reserve(h_pairs.size());
        for (const auto& [src, dst] : h_pairs)
            pairs.emplace_back(src.as_element(), dst.as_element());
        Bijection h = Bijection::from_pairs(product_darts(a, n), product_darts(b, n), pairs);
        return ShoeInstance(std::move(a), std::move(b), n, std::move(h));
    }

    /// Same checks, starting from an already-built bijection.
    static ShoeInstance from_bijection(ElementSet a, ElementSet b, int n, Bijection h)
    {
        if (n < 1)
            throw ArityMismatch("arity must be at least 1, got " + std::to_string(n));
        if (a.size() != b.size())
            throw SizeMismatch("|A| = " + std::to_string(a.size()) + " but |B| = "
                               + std::to_string(b.size()));
        if (h.domain() != product_darts(a, n))
            throw NotABijection("domain of h is not exactly A x {1..n}");
        if (h.codomain() != product_darts(b, n))
            throw NotABijection("codomain of h is not exactly B x {1..n}");
        return ShoeInstance(std::move(a), std::move(b), n, std::move(h));
    }

    const ElementSet& a() const { return a_; }
    const ElementSet& b() const { return b_; }
    int n() const { return n_; }
    const Bijection& h() const { return h_; }

    friend bool operator==(const ShoeInstance& lhs, const ShoeInstance& rhs)
    {
        return lhs.n_ == rhs.n_ && lhs.a_ == rhs.a_ && lhs.b_ == rhs.b_ && lhs.h_ == rhs.h_;
    }

private:
    ShoeInstance(ElementSet a, ElementSet b, int n, Bijection h)
        : a_(std::move(a)), b_(std::move(b)), n_(n), h_(std::move(h))
    {
    }

    ElementSet a_;
    ElementSet b_;
    int n_;
    Bijection h_;
};

/// An indexed family {X_a} of pairwise disjoint fibers of uniform size n:
/// base space = the index set, total space = the union of the fibers,
/// projection = the map sending each sock to its fiber's index.
class SockBundle {
public:
    static SockBundle validate(int arity, const std::map<Element, ElementSet>& fibers)
    {
        if (arity < 1)
            throw ArityMismatch("arity must be at least 1, got " + std::to_string(arity));
        SockBundle bundle;
        bundle.arity_ = arity;
        bundle.fibers_ = fibers;
        for (const auto& [index, fiber] : fibers) {
            bundle.base_.insert(index);
            if (static_cast<int>(fiber.size()) != arity)
                throw FiberSizeError("fiber of " + index.str() + " has size "
                                     + std::to_string(fiber.size()) + ", expected "
                                     + std::to_string(arity));
            for (const Element& x : fiber) {
                if (!bundle.total_.insert(x).second)
                    throw FibersOverlap("element " + x.str() + " lies in two fibers");
                bundle.projection_.emplace(x, index);
            }
        }
        return bundle;
    }

    const ElementSet& base() const { return base_; }
    int arity() const { return arity_; }
    const std::map<Element, ElementSet>& fibers() const { return fibers_; }
    const ElementSet& total_space() const { return total_; }

    const ElementSet& fiber(const Element& index) const
    {
        auto it = fibers_.find(index);
        if (it == fibers_.end())
            throw DomainMismatch("no fiber at " + index.str());
        return it->second;
    }

    /// The projection pi: total space -> base.
    const Element& project(const Element& x) const
    {
        auto it = projection_.find(x);
        if (it == projection_.end())
            throw DomainMismatch(x.str() + " is not in the total space");
        return it->second;
    }

    friend bool operator==(const SockBundle& lhs, const SockBundle& rhs)
    {
        return lhs.arity_ == rhs.arity_ && lhs.fibers_ == rhs.fibers_;
    }

private:
    SockBundle() = default;

    int arity_ = 0;
    std::map<Element, ElementSet> fibers_;
    ElementSet base_;
    ElementSet total_;
    std::map<Element, Element> projection_;
};

/// The bundle A x n: fiber {(a,1)..(a,n)} at every a.
inline SockBundle trivial_bundle(const ElementSet& a, int n)
{
    std::map<Element, ElementSet> fibers;
    for (const Element& x : a) {
        ElementSet fiber;
        for (int i = 1; i <= n; ++i)
            fiber.insert(dart(x, i));
        fibers.emplace(x, std::move(fiber));
    }
    return SockBundle::validate(n, fibers);
}

/// Two sock bundles of equal arity plus a bijection u between their total
/// spaces. No fiber-respecting condition is imposed on u; that freedom is
/// exactly what separates sock instances from shoe instances.
class SockInstance {
public:
    static SockInstance validate(SockBundle left, SockBundle right, Bijection u)
    {
        if (left.arity() != right.arity())
            throw FiberSizeError("left fibers have size " + std::to_string(left.arity())
                                 + " but right fibers have size "
                                 + std::to_string(right.arity()));
        if (u.domain() != left.total_space())
            throw NotABijection("u is not total on the left total space");
        if (u.codomain() != right.total_space())
            throw NotABijection("u is not onto the right total space");
        return SockInstance(std::move(left), std::move(right), std::move(u));
    }

    const SockBundle& left() const { return left_; }
    const SockBundle& right() const { return right_; }
    const Bijection& u() const { return u_; }
    int arity() const { return left_.arity(); }

    friend bool operator==(const SockInstance& lhs, const SockInstance& rhs)
    {
        return lhs.left_ == rhs.left_ && lhs.right_ == rhs.right_ && lhs.u_ == rhs.u_;
    }

private:
    SockInstance(SockBundle left, SockBundle right, Bijection u)
        : left_(std::move(left)), right_(std::move(right)), u_(std::move(u))
    {
    }

    SockBundle left_;
    SockBundle right_;
    Bijection u_;
};

/// A pair of permutations acting on the two sides of an instance. For shoe
/// instances the components permute A and B (slots are untouched); for sock
/// instances they permute the two total spaces.
struct Relabeling {
    Bijection on_a;
    Bijection on_b;

    static Relabeling identity_for(const ElementSet& a, const ElementSet& b)
    {
        return {Bijection::identity(a), Bijection::identity(b)};
    }
};

/// Componentwise composition, in application order: r first, then s.
inline Relabeling compose(const Relabeling& s, const Relabeling& r)
{
    return {r.on_a.then(s.on_a), r.on_b.then(s.on_b)};
}

/// sigma x id on the darts: (a, i) |-> (sigma(a), i).
inline Bijection lift_to_darts(const Bijection& sigma, int n)
{
    std::vector<std::pair<Element, Element>> pairs;
    for (const auto& [x, y] : sigma.forward())
        for (int i = 1; i <= n; ++i)
            pairs.emplace_back(dart(x, i), dart(y, i));
    return Bijection::from_pairs(pairs);
}

/// Conjugates h by the relabeling: h |-> (sigma_B x id) o h o (sigma_A x id)^-1.
inline ShoeInstance apply_relabeling_shoe(const ShoeInstance& inst, const Relabeling& r)
{
    if (!r.on_a.is_permutation() || r.on_a.domain() != inst.a())
        throw DomainMismatch("relabeling onA does not permute A");
    if (!r.on_b.is_permutation() || r.on_b.domain() != inst.b())
        throw DomainMismatch("relabeling onB does not permute B");
    Bijection lift_a = lift_to_darts(r.on_a, inst.n());
    Bijection lift_b = lift_to_darts(r.on_b, inst.n());
    Bijection conjugated = lift_a.inverse().then(inst.h()).then(lift_b);
    return ShoeInstance::from_bijection(inst.a(), inst.b(), inst.n(), std::move(conjugated));
}

/// True iff f carries each fiber of X onto the same-indexed fiber of Y,
/// i.e. the projection square with the identity on the base commutes.
inline bool is_bundle_isomorphism(const Bijection& f, const SockBundle& x, const SockBundle& y)
{
    if (x.base() != y.base())
        throw DomainMismatch("bundles have different bases");
    if (f.domain() != x.total_space() || f.codomain() != y.total_space())
        throw DomainMismatch("f does not map the total space of X to the total space of Y");
    for (const auto& [index, fiber] : x.fibers()) {
        ElementSet image;
        for (const Element& e : fiber)
            image.insert(f.apply(e));
        if (image != y.fiber(index))
            return false;
    }
    return true;
}

/// If f maps every fiber of `from` onto some fiber of `to`, returns the
/// induced base map; otherwise nullopt.
inline std::optional<Bijection> induced_base_map(const Bijection& f, const SockBundle& from,
                                                 const SockBundle& to)
{
    if (f.domain() != from.total_space() || f.codomain() != to.total_space())
        return std::nullopt;
    std::vector<std::pair<Element, Element>> base_pairs;
    for (const auto& [index, fiber] : from.fibers()) {
        ElementSet image;
        for (const Element& e : fiber)
            image.insert(f.apply(e));
        const Element& target = to.project(*image.begin());
        if (image != to.fiber(target))
            return std::nullopt;
        base_pairs.emplace_back(index, target);
    }
    try {
        return Bijection::from_pairs(from.base(), to.base(), base_pairs);
    } catch (const NotABijection&) {
        return std::nullopt;
    }
}

/// A fiber-compatible pair of total-space permutations; the sock-instance
/// counterpart of Relabeling.
struct SockRelabeling {
    Bijection on_left_total;
    Bijection on_right_total;
};

/// Transports a sock instance along a relabeling: fibers move with the
/// induced base maps, and u is conjugated.
inline SockInstance apply_relabeling_sock(const SockInstance& inst, const SockRelabeling& r)
{
    if (!r.on_left_total.is_permutation() || r.on_left_total.domain() != inst.left().total_space())
        throw DomainMismatch("relabeling does not permute the left total space");
    if (!r.on_right_total.is_permutation()
        || r.on_right_total.domain() != inst.right().total_space())
        throw DomainMismatch("relabeling does not permute the right total space");
    auto sigma_a = induced_base_map(r.on_left_total, inst.left(), inst.left());
    auto sigma_b = induced_base_map(r.on_right_total, inst.right(), inst.right());
    if (!sigma_a || !sigma_b)
        throw DomainMismatch("relabeling is not fiber-compatible");

    std::map<Element, ElementSet> left_fibers;
    for (const auto& [index, fiber] : inst.left().fibers()) {
        ElementSet moved;
        for (const Element& e : fiber)
            moved.insert(r.on_left_total.apply(e));
        left_fibers.emplace(sigma_a->apply(index), std::move(moved));
    }
    std::map<Element, ElementSet> right_fibers;
    for (const auto& [index, fiber] : inst.right().fibers()) {
        ElementSet moved;
        for (const Element& e : fiber)
            moved.insert(r.on_right_total.apply(e));
        right_fibers.emplace(sigma_b->apply(index), std::move(moved));
    }
    Bijection new_u = r.on_left_total.inverse().then(inst.u()).then(r.on_right_total);
    return SockInstance::validate(SockBundle::validate(inst.arity(), left_fibers),
                                  SockBundle::validate(inst.arity(), right_fibers),
                                  std::move(new_u));
}

/// One selected sock per index; valid against a family when every selection
/// lies in its fiber.
struct ChoiceAssignment {
    std::map<Element, Element> selection;
};

} // namespace sockdiv
