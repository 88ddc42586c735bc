#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sockdiv/core.hpp"
#include "sockdiv/reductions.hpp"
#include "sockdiv/shoe_division.hpp"

namespace sockdiv {

inline std::uint64_t factorial(std::size_t k)
{
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= k; ++i)
        f *= i;
    return f;
}

/// All permutations of a set, in row-major order over the sorted elements.
inline std::vector<Bijection> all_permutations(const ElementSet& set)
{
    std::vector<Element> sorted(set.begin(), set.end());
    std::vector<int> targets(sorted.size());
    std::iota(targets.begin(), targets.end(), 0);
    std::vector<Bijection> out;
    do {
        std::vector<std::pair<Element, Element>> pairs;
        pairs.reserve(sorted.size());
        for (std::size_t k = 0; k < sorted.size(); ++k)
            pairs.emplace_back(sorted[k], sorted[targets[k]]);
        out.push_back(Bijection::from_pairs(pairs));
    } while (std::next_permutation(targets.begin(), targets.end()));
    return out;
}

/// All bijections from one set onto another of the same size, row-major over
/// the sorted sources against sorted targets. This is the documented
/// candidate order of the equivariant search.
inline std::vector<Bijection> all_bijections(const ElementSet& from, const ElementSet& to)
{
    if (from.size() != to.size())
        throw SizeMismatch("sets of size " + std::to_string(from.size()) + " and "
                           + std::to_string(to.size()) + " admit no bijection");
    std::vector<Element> sources(from.begin(), from.end());
    std::vector<Element> targets(to.begin(), to.end());
    std::vector<int> order(targets.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<Bijection> out;
    do {
        std::vector<std::pair<Element, Element>> pairs;
        pairs.reserve(sources.size());
        for (std::size_t k = 0; k < sources.size(); ++k)
            pairs.emplace_back(sources[k], targets[order[k]]);
        out.push_back(Bijection::from_pairs(pairs));
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

/// All total-space permutations of a bundle that map fibers onto fibers.
inline std::vector<Bijection> fiber_compatible_permutations(const SockBundle& bundle)
{
    std::vector<Element> base(bundle.base().begin(), bundle.base().end());
    std::vector<Bijection> out;
    if (base.empty()) {
        out.push_back(Bijection::identity(bundle.total_space()));
        return out;
    }
    for (const Bijection& sigma : all_permutations(bundle.base())) {
        // Per-fiber bijections onto the image fiber, combined breadth-first.
        std::vector<std::vector<std::pair<Element, Element>>> partial{{}};
        for (const Element& a : base) {
            const ElementSet& from = bundle.fiber(a);
            const ElementSet& to = bundle.fiber(sigma.apply(a));
            std::vector<Bijection> fiber_maps = all_bijections(from, to);
            std::vector<std::vector<std::pair<Element, Element>>> extended;
            for (const auto& prefix : partial) {
                for (const Bijection& fm : fiber_maps) {
                    auto copy = prefix;
                    for (const auto& p : fm.pairs())
                        copy.push_back(p);
                    extended.push_back(std::move(copy));
                }
            }
            partial = std::move(extended);
        }
        for (const auto& pairs : partial)
            out.push_back(Bijection::from_pairs(pairs));
    }
    return out;
}

/// A symmetry of an instance: compatible permutations of the two sides
/// together with the base permutations they induce. Conjugating the
/// instance by the pair reproduces the instance exactly.
struct AutomorphismPair {
    Bijection on_left;      // left total space (A x n darts for shoe instances)
    Bijection on_right;     // right total space
    Bijection induced_on_a; // left base
    Bijection induced_on_b; // right base
};

/// Brute-force enumeration of the full automorphism group of a sock
/// instance: fiber-compatible left permutations whose u-conjugate is
/// fiber-compatible on the right. The right component is determined by the
/// left one, so the search space is the left side only.
inline std::vector<AutomorphismPair> automorphisms_of_sock_instance(const SockInstance& inst,
                                                                    std::size_t side_bound = 10)
{
    if (inst.left().total_space().size() > side_bound
        || inst.right().total_space().size() > side_bound)
        throw SizeBoundExceeded("total space exceeds the bound of "
                                + std::to_string(side_bound) + " elements per side");
    std::vector<AutomorphismPair> group;
    for (const Bijection& on_left : fiber_compatible_permutations(inst.left())) {
        Bijection on_right = inst.u().inverse().then(on_left).then(inst.u());
        auto induced_b = induced_base_map(on_right, inst.right(), inst.right());
        if (!induced_b)
            continue;
        auto induced_a = induced_base_map(on_left, inst.left(), inst.left());
        group.push_back({on_left, std::move(on_right), std::move(*induced_a),
                         std::move(*induced_b)});
    }
    return group;
}

/// Shoe-instance counterpart: base relabelings (sigma_A, sigma_B) whose dart
/// lifts fix h under conjugation. sigma_B is determined by sigma_A when it
/// exists, namely when h . (sigma_A x id) . h^-1 preserves slots.
inline std::vector<AutomorphismPair> automorphisms_of_shoe_instance(const ShoeInstance& inst,
                                                                    std::size_t base_bound = 8)
{
    if (inst.a().size() > base_bound)
        throw SizeBoundExceeded("base exceeds the bound of " + std::to_string(base_bound)
                                + " elements");
    std::vector<AutomorphismPair> group;
    for (const Bijection& sigma_a : all_permutations(inst.a())) {
        Bijection lifted = lift_to_darts(sigma_a, inst.n());
        Bijection rho = inst.h().inverse().then(lifted).then(inst.h());
        std::map<Element, Element> base_map;
        bool consistent = true;
        for (const auto& [from, to] : rho.forward()) {
            if (from.slot() != to.slot()) {
                consistent = false;
                break;
            }
            auto [it, inserted] = base_map.emplace(from.base(), to.base());
            if (!inserted && !(it->second == to.base())) {
                consistent = false;
                break;
            }
        }
        if (!consistent)
            continue;
        std::vector<std::pair<Element, Element>> pairs(base_map.begin(), base_map.end());
        Bijection sigma_b = Bijection::from_pairs(inst.b(), inst.b(), pairs);
        group.push_back({std::move(lifted), std::move(rho), sigma_a, std::move(sigma_b)});
    }
    return group;
}

/// An instance automorphism whose induced base pair is incompatible with
/// every bijection of the bases: replaying it shows no symmetric divider
/// output can exist for the instance.
struct NonexistenceCertificate {
    AutomorphismPair witness;
};

/// Cycle type of a permutation, sorted; two permutations are conjugate by
/// some bijection iff their cycle types agree.
inline std::vector<int> cycle_type(const Bijection& perm)
{
    std::vector<int> lengths;
    ElementSet seen;
    for (const Element& start : perm.domain()) {
        if (seen.count(start))
            continue;
        int length = 0;
        Element current = start;
        do {
            seen.insert(current);
            current = perm.apply(current);
            ++length;
        } while (!(current == start));
        lengths.push_back(length);
    }
    std::sort(lengths.begin(), lengths.end());
    return lengths;
}

using SearchOutcome = std::variant<Bijection, NonexistenceCertificate>;

/// Exhaustive search for a base bijection invariant under every automorphism
/// of the instance. A positive answer is the first hit in the documented
/// candidate order (it is a witness for inspection, not itself claimed
/// canonical). A negative answer carries a single automorphism whose induced
/// pair has mismatched cycle types and therefore excludes every candidate.
inline SearchOutcome search_equivariant_sock_divider(const SockInstance& inst,
                                                     std::size_t max_base = 6)
{
    if (inst.left().base().size() > max_base || inst.right().base().size() > max_base)
        throw SizeBoundExceeded("base exceeds the search bound of " + std::to_string(max_base)
                                + " elements");
    const std::size_t total = inst.left().total_space().size();
    std::vector<AutomorphismPair> group =
        automorphisms_of_sock_instance(inst, std::max<std::size_t>(total, 10));

    std::vector<std::pair<Bijection, Bijection>> induced;
    for (const AutomorphismPair& pair : group) {
        std::pair<Bijection, Bijection> candidate{pair.induced_on_a, pair.induced_on_b};
        if (std::find(induced.begin(), induced.end(), candidate) == induced.end())
            induced.push_back(std::move(candidate));
    }

    for (const Bijection& g : all_bijections(inst.left().base(), inst.right().base())) {
        bool invariant = true;
        for (const auto& [sigma_a, sigma_b] : induced) {
            for (const Element& a : inst.left().base()) {
                if (!(g.apply(sigma_a.apply(a)) == sigma_b.apply(g.apply(a)))) {
                    invariant = false;
                    break;
                }
            }
            if (!invariant)
                break;
        }
        if (invariant)
            return g;
    }

    // Among automorphisms that single-handedly exclude every candidate,
    // prefer the one acting most trivially on B: those read as plain
    // collapses on the A side.
    const AutomorphismPair* witness = nullptr;
    std::pair<std::vector<int>, std::vector<int>> witness_key;
    for (const AutomorphismPair& pair : group) {
        if (cycle_type(pair.induced_on_a) == cycle_type(pair.induced_on_b))
            continue;
        std::pair<std::vector<int>, std::vector<int>> key{cycle_type(pair.induced_on_b),
                                                          cycle_type(pair.induced_on_a)};
        if (witness == nullptr || key < witness_key) {
            witness = &pair;
            witness_key = std::move(key);
        }
    }
    if (witness != nullptr)
        return NonexistenceCertificate{*witness};
    throw ContractViolation(
        "no invariant bijection exists, but no single automorphism certifies this");
}

/// Replays an automorphism pair against its instance: the conjugated
/// instance must be the instance itself.
inline bool replay_sock_automorphism(const SockInstance& inst, const AutomorphismPair& pair)
{
    try {
        SockRelabeling relabeling{pair.on_left, pair.on_right};
        return apply_relabeling_sock(inst, relabeling) == inst;
    } catch (const Error&) {
        return false;
    }
}

/// Replays a nonexistence certificate: the witness must be a genuine
/// automorphism and its induced pair must exclude every base bijection.
inline bool replay_certificate(const SockInstance& inst, const NonexistenceCertificate& cert)
{
    if (!replay_sock_automorphism(inst, cert.witness))
        return false;
    for (const Bijection& g : all_bijections(inst.left().base(), inst.right().base())) {
        bool fixed = true;
        for (const Element& a : inst.left().base()) {
            if (!(g.apply(cert.witness.induced_on_a.apply(a))
                  == cert.witness.induced_on_b.apply(g.apply(a)))) {
                fixed = false;
                break;
            }
        }
        if (fixed)
            return false;
    }
    return true;
}

/// The divider that peeks at the labels: sorts both base sets and pairs
/// them positionally. Always succeeds, deliberately label-dependent, and
/// therefore not equivariant.
inline SockDividerOracle cheating_sock_divider()
{
    return [](const SockInstance& inst) {
        std::vector<Element> left(inst.left().base().begin(), inst.left().base().end());
        std::vector<Element> right(inst.right().base().begin(), inst.right().base().end());
        if (left.size() != right.size())
            throw OracleViolation("base sets differ in size");
        std::vector<std::pair<Element, Element>> pairs;
        pairs.reserve(left.size());
        for (std::size_t k = 0; k < left.size(); ++k)
            pairs.emplace_back(left[k], right[k]);
        return Bijection::from_pairs(pairs);
    };
}

/// Thrown when an oracle backed by the equivariant search certifies
/// nonexistence: a negative but successful outcome, not an error.
class CertificateFound : public std::exception {
public:
    CertificateFound(SockInstance instance, NonexistenceCertificate certificate)
        : instance_(std::move(instance)), certificate_(std::move(certificate))
    {
    }

    const SockInstance& instance() const { return instance_; }
    const NonexistenceCertificate& certificate() const { return certificate_; }
    const char* what() const noexcept override
    {
        return "equivariant search certified that no symmetric divider exists";
    }

private:
    SockInstance instance_;
    NonexistenceCertificate certificate_;
};

/// The equivariant searcher packaged as an oracle; certificates surface as
/// CertificateFound rather than a return value.
inline SockDividerOracle equivariant_search_oracle(std::size_t max_base = 6)
{
    return [max_base](const SockInstance& inst) {
        SearchOutcome outcome = search_equivariant_sock_divider(inst, max_base);
        if (std::holds_alternative<NonexistenceCertificate>(outcome))
            throw CertificateFound(inst, std::get<NonexistenceCertificate>(outcome));
        return std::get<Bijection>(outcome);
    };
}

struct EquivarianceViolation {
    std::size_t instance_index;
    std::string relabeling;
    Bijection expected;
    Bijection got;
};

struct EquivarianceReport {
    std::size_t instances = 0;
    std::size_t checks = 0;
    std::vector<EquivarianceViolation> violations;

    bool clean() const { return violations.empty(); }
};

using ShoeDivider = std::function<Bijection(const ShoeInstance&)>;

/// Compares divider(conjugated instance) with the conjugated divider output
/// for every relabeling of every instance. Violations are report content.
inline EquivarianceReport check_shoe_divider_equivariance(const ShoeDivider& divider,
                                                          const std::vector<ShoeInstance>& family)
{
    EquivarianceReport report;
    for (const ShoeInstance& inst : family) {
        Bijection base = divider(inst);
        for (const Bijection& sigma_a : all_permutations(inst.a())) {
            for (const Bijection& sigma_b : all_permutations(inst.b())) {
                Relabeling r{sigma_a, sigma_b};
                ShoeInstance conjugated = apply_relabeling_shoe(inst, r);
                Bijection got = divider(conjugated);
                Bijection expected = sigma_a.inverse().then(base).then(sigma_b);
                ++report.checks;
                if (!(got == expected))
                    report.violations.push_back({report.instances,
                                                 sigma_a.str() + " / " + sigma_b.str(), expected,
                                                 got});
            }
        }
        ++report.instances;
    }
    return report;
}

/// Variant with an explicit relabeling list, applied to every instance.
inline EquivarianceReport check_shoe_divider_equivariance(
    const ShoeDivider& divider, const std::vector<ShoeInstance>& family,
    const std::vector<Relabeling>& relabelings)
{
    EquivarianceReport report;
    for (const ShoeInstance& inst : family) {
        Bijection base = divider(inst);
        for (const Relabeling& r : relabelings) {
            ShoeInstance conjugated = apply_relabeling_shoe(inst, r);
            Bijection got = divider(conjugated);
            Bijection expected = r.on_a.inverse().then(base).then(r.on_b);
            ++report.checks;
            if (!(got == expected))
                report.violations.push_back(
                    {report.instances, r.on_a.str() + " / " + r.on_b.str(), expected, got});
        }
        ++report.instances;
    }
    return report;
}

/// Sock-divider counterpart over all fiber-compatible relabeling pairs.
inline EquivarianceReport check_sock_divider_equivariance(const SockDividerOracle& divider,
                                                          const std::vector<SockInstance>& family)
{
    EquivarianceReport report;
    for (const SockInstance& inst : family) {
        Bijection base = divider(inst);
        for (const Bijection& tau_left : fiber_compatible_permutations(inst.left())) {
            for (const Bijection& tau_right : fiber_compatible_permutations(inst.right())) {
                SockRelabeling r{tau_left, tau_right};
                SockInstance conjugated = apply_relabeling_sock(inst, r);
                Bijection got = divider(conjugated);
                Bijection sigma_a = *induced_base_map(tau_left, inst.left(), inst.left());
                Bijection sigma_b = *induced_base_map(tau_right, inst.right(), inst.right());
                Bijection expected = sigma_a.inverse().then(base).then(sigma_b);
                ++report.checks;
                if (!(got == expected))
                    report.violations.push_back({report.instances,
                                                 tau_left.str() + " / " + tau_right.str(),
                                                 expected, got});
            }
        }
        ++report.instances;
    }
    return report;
}

constexpr std::uint64_t kDefaultEnumerationBudget = 1000000;

namespace detail {

inline std::vector<Element> canonical_atoms(const std::string& prefix, int count)
{
    std::vector<Element> out;
    out.reserve(count);
    for (int k = 1; k <= count; ++k)
        out.push_back(Element::atom(prefix + std::to_string(k)));
    return out;
}

} // namespace detail

/// Streams every shoe instance over canonical label sets A = {a1..ak},
/// B = {b1..bk}: one instance per bijection of the dart sets, (k*n)! in all.
class ShoeEnumerator {
public:
    ShoeEnumerator(int size_a, int n, std::uint64_t budget = kDefaultEnumerationBudget) : n_(n)
    {
        if (size_a < 0 || n < 1)
            throw ArityMismatch("enumeration needs size >= 0 and arity >= 1");
        total_ = factorial(static_cast<std::size_t>(size_a) * n);
        if (total_ > budget)
            throw BudgetExceeded("family of " + std::to_string(total_)
                                 + " instances exceeds the budget of " + std::to_string(budget));
        for (const Element& a : detail::canonical_atoms("a", size_a)) {
            a_set_.insert(a);
            for (int i = 1; i <= n; ++i)
                a_darts_.push_back(IndexedPair{a, i});
        }
        for (const Element& b : detail::canonical_atoms("b", size_a)) {
            b_set_.insert(b);
            for (int j = 1; j <= n; ++j)
                b_darts_.push_back(IndexedPair{b, j});
        }
        perm_.resize(a_darts_.size());
        std::iota(perm_.begin(), perm_.end(), 0);
    }

    std::optional<ShoeInstance> next()
    {
        if (exhausted_)
            return std::nullopt;
        std::vector<std::pair<IndexedPair, IndexedPair>> pairs;
        pairs.reserve(a_darts_.size());
        for (std::size_t k = 0; k < a_darts_.size(); ++k)
            pairs.emplace_back(a_darts_[k], b_darts_[perm_[k]]);
        exhausted_ = !std::next_permutation(perm_.begin(), perm_.end());
        return ShoeInstance::validate(a_set_, b_set_, n_, pairs);
    }

    std::uint64_t total() const { return total_; }

private:
    int n_;
    std::uint64_t total_;
    std::vector<IndexedPair> a_darts_;
    std::vector<IndexedPair> b_darts_;
    ElementSet a_set_;
    ElementSet b_set_;
    std::vector<int> perm_;
    bool exhausted_ = false;
};

/// Streams every sock instance over canonical disjoint fibers: left socks
/// p1..p(k*n) chunked under a1..ak, right socks q1..q(k*n) under b1..bk, one
/// instance per total-space bijection u.
class SockEnumerator {
public:
    SockEnumerator(int size_a, int n, std::uint64_t budget = kDefaultEnumerationBudget)
    {
        if (size_a < 0 || n < 1)
            throw ArityMismatch("enumeration needs size >= 0 and arity >= 1");
        total_ = factorial(static_cast<std::size_t>(size_a) * n);
        if (total_ > budget)
            throw BudgetExceeded("family of " + std::to_string(total_)
                                 + " instances exceeds the budget of " + std::to_string(budget));
        left_socks_ = detail::canonical_atoms("p", size_a * n);
        right_socks_ = detail::canonical_atoms("q", size_a * n);
        std::vector<Element> left_base = detail::canonical_atoms("a", size_a);
        std::vector<Element> right_base = detail::canonical_atoms("b", size_a);
        std::map<Element, ElementSet> left_fibers, right_fibers;
        for (int k = 0; k < size_a; ++k) {
            ElementSet lf(left_socks_.begin() + k * n, left_socks_.begin() + (k + 1) * n);
            ElementSet rf(right_socks_.begin() + k * n, right_socks_.begin() + (k + 1) * n);
            left_fibers.emplace(left_base[k], std::move(lf));
            right_fibers.emplace(right_base[k], std::move(rf));
        }
        left_ = SockBundle::validate(n, left_fibers);
        right_ = SockBundle::validate(n, right_fibers);
        perm_.resize(left_socks_.size());
        std::iota(perm_.begin(), perm_.end(), 0);
    }

    std::optional<SockInstance> next()
    {
        if (exhausted_)
            return std::nullopt;
        std::vector<std::pair<Element, Element>> pairs;
        pairs.reserve(left_socks_.size());
        for (std::size_t k = 0; k < left_socks_.size(); ++k)
            pairs.emplace_back(left_socks_[k], right_socks_[perm_[k]]);
        exhausted_ = !std::next_permutation(perm_.begin(), perm_.end());
        return SockInstance::validate(left_, right_, Bijection::from_pairs(pairs));
    }

    std::uint64_t total() const { return total_; }

private:
    std::uint64_t total_;
    std::vector<Element> left_socks_;
    std::vector<Element> right_socks_;
    SockBundle left_ = trivial_bundle({}, 1);
    SockBundle right_ = trivial_bundle({}, 1);
    std::vector<int> perm_;
    bool exhausted_ = false;
};

/// The shipped eight-sock witness instance: two left pairs, two right pairs,
/// and a u that splits each left pair across the two right pairs. Its
/// automorphism (p r)(q s) / (t u)(v w) induces a transposition on A and the
/// identity on B, so no symmetric divider output exists.
inline SockInstance sym8_instance()
{
    auto atom = [](const char* s) { return Element::atom(s); };
    std::map<Element, ElementSet> left{
        {atom("a1"), {atom("p"), atom("q")}},
        {atom("a2"), {atom("r"), atom("s")}},
    };
    std::map<Element, ElementSet> right{
        {atom("b1"), {atom("t"), atom("u")}},
        {atom("b2"), {atom("v"), atom("w")}},
    };
    Bijection u = Bijection::from_pairs({{atom("p"), atom("t")},
                                         {atom("q"), atom("v")},
                                         {atom("r"), atom("u")},
                                         {atom("s"), atom("w")}});
    return SockInstance::validate(SockBundle::validate(2, left), SockBundle::validate(2, right),
                                  std::move(u));
}

} // namespace sockdiv
