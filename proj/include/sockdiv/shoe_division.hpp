#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sockdiv/core.hpp"

namespace sockdiv {

struct TraceEvent {
    std::string kind;
    std::string detail;
};

struct DivisionResult {
    Bijection matching;
    int rounds = 0; // components resolved; always <= |A| <= |A|*n
    std::optional<std::vector<TraceEvent>> trace;
};

/// One edge of the bipartite multigraph induced by h: slot i of a is paired
/// with slot j of b.
struct DartEdge {
    Element a;
    int i;
    Element b;
    int j;

    friend bool operator==(const DartEdge&, const DartEdge&) = default;
};

namespace detail {

struct Component {
    std::vector<Element> a_vertices; // sorted
    std::vector<Element> b_vertices; // sorted
    struct Edge {
        int a, b, i, j;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<int>> adjacency; // a index -> distinct b indices
};

inline std::vector<Component> split_components(const ShoeInstance& inst)
{
    std::vector<DartEdge> all_edges;
    for (const auto& [src, dst] : inst.h().forward())
        all_edges.push_back({src.base(), src.slot(), dst.base(), dst.slot()});

    // Union-find over A + B vertices (B keys are tagged to keep sides apart).
    std::map<std::pair<int, Element>, int> ids;
    auto id_of = [&](int side, const Element& e) {
        auto [it, inserted] = ids.emplace(std::make_pair(side, e), static_cast<int>(ids.size()));
        return it->second;
    };
    std::vector<int> parent;
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Element& a : inst.a())
        id_of(0, a);
    for (const Element& b : inst.b())
        id_of(1, b);
    parent.resize(ids.size());
    for (std::size_t k = 0; k < parent.size(); ++k)
        parent[k] = static_cast<int>(k);
    for (const DartEdge& e : all_edges) {
        int ra = find(id_of(0, e.a));
        int rb = find(id_of(1, e.b));
        if (ra != rb)
            parent[ra] = rb;
    }

    std::map<int, Component> by_root;
    for (const Element& a : inst.a())
        by_root[find(id_of(0, a))].a_vertices.push_back(a);
    for (const Element& b : inst.b())
        by_root[find(id_of(1, b))].b_vertices.push_back(b);

    std::vector<Component> components;
    for (auto& [root, comp] : by_root)
        components.push_back(std::move(comp));
    for (Component& comp : components) {
        std::map<Element, int> a_index, b_index;
        for (std::size_t k = 0; k < comp.a_vertices.size(); ++k)
            a_index.emplace(comp.a_vertices[k], static_cast<int>(k));
        for (std::size_t k = 0; k < comp.b_vertices.size(); ++k)
            b_index.emplace(comp.b_vertices[k], static_cast<int>(k));
        comp.adjacency.assign(comp.a_vertices.size(), {});
        for (const DartEdge& e : all_edges) {
            auto ia = a_index.find(e.a);
            if (ia == a_index.end())
                continue;
            comp.edges.push_back({ia->second, b_index.at(e.b), e.i, e.j});
            auto& nbrs = comp.adjacency[ia->second];
            if (std::find(nbrs.begin(), nbrs.end(), b_index.at(e.b)) == nbrs.end())
                nbrs.push_back(b_index.at(e.b));
        }
        for (auto& nbrs : comp.adjacency)
            std::sort(nbrs.begin(), nbrs.end());
    }
    return components;
}

/// All base-level perfect matchings of one component, as a->b index maps.
inline std::vector<std::vector<int>> enumerate_component_matchings(const Component& comp,
                                                                   std::size_t cap)
{
    std::vector<std::vector<int>> out;
    std::vector<int> current(comp.a_vertices.size(), -1);
    std::vector<bool> used(comp.b_vertices.size(), false);
    auto recurse = [&](auto&& self, std::size_t a) -> void {
        if (a == comp.a_vertices.size()) {
            out.push_back(current);
            if (out.size() > cap)
                throw BudgetExceeded("too many candidate matchings in one component");
            return;
        }
        for (int b : comp.adjacency[a]) {
            if (used[b])
                continue;
            used[b] = true;
            current[a] = b;
            self(self, a + 1);
            used[b] = false;
        }
    };
    recurse(recurse, 0);
    return out;
}

/// Label-free description of (component, matching) under one ranking of the
/// A side; the B side is ranked by sorting edge profiles, which depends only
/// on structure. Minimizing over all A rankings yields a string constant on
/// isomorphism classes: two matchings score equal iff some slot-preserving
/// automorphism of the component carries one to the other.
inline std::vector<int> score_matching(const Component& comp, const std::vector<int>& matching,
                                       int arity)
{
    const int na = static_cast<int>(comp.a_vertices.size());
    const int nb = static_cast<int>(comp.b_vertices.size());
    std::vector<int> b_partner(nb, -1);
    for (int a = 0; a < na; ++a)
        b_partner[matching[a]] = a;

    std::vector<int> rank_of_a(na);
    for (int k = 0; k < na; ++k)
        rank_of_a[k] = k;

    std::vector<int> best;
    do {
        std::vector<std::pair<std::vector<int>, int>> profiles(nb);
        for (int b = 0; b < nb; ++b) {
            profiles[b].second = b;
            profiles[b].first.push_back(rank_of_a[b_partner[b]]);
        }
        {
            std::vector<std::vector<std::array<int, 3>>> incident(nb);
            for (const Component::Edge& e : comp.edges)
                incident[e.b].push_back({rank_of_a[e.a], e.i, e.j});
            for (int b = 0; b < nb; ++b) {
                std::sort(incident[b].begin(), incident[b].end());
                for (const auto& t : incident[b]) {
                    profiles[b].first.push_back(t[0]);
                    profiles[b].first.push_back(t[1]);
                    profiles[b].first.push_back(t[2]);
                }
            }
        }
        std::sort(profiles.begin(), profiles.end());
        std::vector<int> rank_of_b(nb);
        for (int r = 0; r < nb; ++r)
            rank_of_b[profiles[r].second] = r;

        std::vector<std::array<int, 4>> records;
        records.reserve(comp.edges.size());
        for (const Component::Edge& e : comp.edges)
            records.push_back({rank_of_a[e.a], rank_of_b[e.b], e.i, e.j});
        std::sort(records.begin(), records.end());

        std::vector<std::array<int, 2>> matched;
        matched.reserve(na);
        for (int a = 0; a < na; ++a)
            matched.push_back({rank_of_a[a], rank_of_b[matching[a]]});
        std::sort(matched.begin(), matched.end());

        std::vector<int> serialized;
        serialized.reserve(3 + records.size() * 4 + 1 + matched.size() * 2);
        serialized.push_back(na);
        serialized.push_back(nb);
        serialized.push_back(arity);
        for (const auto& r : records)
            serialized.insert(serialized.end(), r.begin(), r.end());
        serialized.push_back(-1);
        for (const auto& m : matched)
            serialized.insert(serialized.end(), m.begin(), m.end());

        if (best.empty() || serialized < best)
            best = std::move(serialized);
    } while (std::next_permutation(rank_of_a.begin(), rank_of_a.end()));

    return best;
}

} // namespace detail

/// Constructs the bijection A -> B determined by h alone. Within each
/// connected component of the induced multigraph, all base-level perfect
/// matchings are enumerated and ranked by a label-free canonical score. Two
/// matchings score equal exactly when an automorphism of the component
/// exchanges them, so the matchings fixed by every automorphism are the ones
/// whose score is unshared; the smallest-scored such matching is selected.
/// Because scores are constant on isomorphism classes, the output commutes
/// with every relabeling of the instance. If every matching lies in a
/// nontrivial automorphism orbit, no symmetric choice exists and
/// IncompleteMatching is raised rather than repaired.
inline DivisionResult shoe_divide(const ShoeInstance& inst, bool record_trace = false)
{
    constexpr std::size_t kMaxComponentBase = 8;
    constexpr std::size_t kMaxCandidates = 100000;

    DivisionResult result;
    if (record_trace)
        result.trace.emplace();

    std::vector<std::pair<Element, Element>> matched_pairs;
    for (const detail::Component& comp : detail::split_components(inst)) {
        if (comp.a_vertices.size() > kMaxComponentBase)
            throw BudgetExceeded("component with " + std::to_string(comp.a_vertices.size())
                                 + " base elements exceeds the canonical-selection bound");
        auto candidates = detail::enumerate_component_matchings(comp, kMaxCandidates);
        if (candidates.empty())
            throw IncompleteMatching("component admits no perfect matching");

        std::vector<std::vector<int>> scores(candidates.size());
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            scores[k] = detail::score_matching(comp, candidates[k], inst.n());
            if (record_trace)
                result.trace->push_back({"candidate", "component " + std::to_string(result.rounds)
                                                          + " candidate " + std::to_string(k)});
        }
        std::size_t best = candidates.size();
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            bool shared = false;
            for (std::size_t m = 0; m < candidates.size() && !shared; ++m)
                shared = m != k && scores[m] == scores[k];
            if (shared) {
                if (record_trace)
                    result.trace->push_back(
                        {"rejected", "component " + std::to_string(result.rounds) + " candidate "
                                         + std::to_string(k) + " lies in a symmetry orbit"});
                continue;
            }
            if (best == candidates.size() || scores[k] < scores[best])
                best = k;
        }
        if (best == candidates.size())
            throw IncompleteMatching(
                "no canonical choice: every matching of a component is exchanged with another "
                "by an automorphism");
        if (record_trace)
            result.trace->push_back({"selected", "component " + std::to_string(result.rounds)
                                                     + " candidate " + std::to_string(best)});

        for (std::size_t a = 0; a < comp.a_vertices.size(); ++a)
            matched_pairs.emplace_back(comp.a_vertices[a], comp.b_vertices[candidates[best][a]]);
        ++result.rounds;
    }

    result.matching = Bijection::from_pairs(inst.a(), inst.b(), matched_pairs);
    return result;
}

/// True iff m is a bijection A -> B and every matched pair is an edge of the
/// multigraph induced by h.
inline bool verify_division(const ShoeInstance& inst, const Bijection& m)
{
    if (m.domain() != inst.a() || m.codomain() != inst.b())
        throw DomainMismatch("matching does not map A onto B");
    for (const auto& [a, b] : m.forward()) {
        bool edge = false;
        for (int i = 1; i <= inst.n() && !edge; ++i)
            edge = inst.h().apply(dart(a, i)).base() == b;
        if (!edge)
            return false;
    }
    return true;
}

using Cycle = std::vector<DartEdge>;

/// Diagnostic for n = 2: partitions the darts of h into the alternating
/// cycles the induced 2-regular multigraph decomposes into. Each edge owns
/// one A dart and one B dart, so cycles are returned as edge lists; lengths
/// are even and at least 2.
inline std::vector<Cycle> divide_by_two_cycle_decomposition(const ShoeInstance& inst)
{
    if (inst.n() != 2)
        throw ArityMismatch("cycle decomposition requires arity 2, got "
                            + std::to_string(inst.n()));
    std::set<Element> visited; // A darts
    std::vector<Cycle> cycles;
    for (const auto& [src, dst] : inst.h().forward()) {
        if (visited.count(src))
            continue;
        Cycle cycle;
        Element current = src;
        do {
            visited.insert(current);
            Element image = inst.h().apply(current);
            cycle.push_back({current.base(), current.slot(), image.base(), image.slot()});
            Element other_b_dart = dart(image.base(), 3 - image.slot());
            Element pre = inst.h().preimage(other_b_dart);
            visited.insert(pre);
            cycle.push_back({pre.base(), pre.slot(), other_b_dart.base(), other_b_dart.slot()});
            current = dart(pre.base(), 3 - pre.slot());
        } while (!(current == src));
        cycles.push_back(std::move(cycle));
    }
    return cycles;
}

} // namespace sockdiv
