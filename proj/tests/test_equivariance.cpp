#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "sockdiv/sockdiv.hpp"

using namespace sockdiv;

namespace {

Element atom(const char* s) { return Element::atom(s); }
Element atom(const std::string& s) { return Element::atom(s); }

bool group_contains(const std::vector<AutomorphismPair>& group, const Bijection& on_left,
                    const Bijection& on_right)
{
    for (const AutomorphismPair& pair : group)
        if (pair.on_left == on_left && pair.on_right == on_right)
            return true;
    return false;
}

SockInstance fiber_respecting_pairs(int pairs)
{
    std::map<Element, ElementSet> left, right;
    std::vector<std::pair<Element, Element>> u;
    for (int k = 0; k < pairs; ++k) {
        Element p1 = atom("p" + std::to_string(2 * k + 1));
        Element p2 = atom("p" + std::to_string(2 * k + 2));
        Element q1 = atom("q" + std::to_string(2 * k + 1));
        Element q2 = atom("q" + std::to_string(2 * k + 2));
        left.emplace(atom("a" + std::to_string(k + 1)), ElementSet{p1, p2});
        right.emplace(atom("b" + std::to_string(k + 1)), ElementSet{q1, q2});
        u.emplace_back(p1, q1);
        u.emplace_back(p2, q2);
    }
    return SockInstance::validate(SockBundle::validate(2, left), SockBundle::validate(2, right),
                                  Bijection::from_pairs(u));
}

} // namespace

TEST_CASE("SYM-8 group: order 4, contains the swap pair, replays, is a group")
{
    SockInstance inst = sym8_instance();
    auto group = automorphisms_of_sock_instance(inst);
    CHECK(group.size() == 4); // Klein four-group, brute-force verified

    Bijection swap_left = Bijection::from_pairs({{atom("p"), atom("r")},
                                                 {atom("q"), atom("s")},
                                                 {atom("r"), atom("p")},
                                                 {atom("s"), atom("q")}});
    Bijection swap_right = Bijection::from_pairs({{atom("t"), atom("u")},
                                                  {atom("u"), atom("t")},
                                                  {atom("v"), atom("w")},
                                                  {atom("w"), atom("v")}});
    CHECK(group_contains(group, swap_left, swap_right));
    CHECK(group_contains(group, Bijection::identity(inst.left().total_space()),
                         Bijection::identity(inst.right().total_space())));

    for (const AutomorphismPair& pair : group) {
        CHECK(replay_sock_automorphism(inst, pair));
        // closure and inverses, by replaying the multiplication table
        CHECK(group_contains(group, pair.on_left.inverse(), pair.on_right.inverse()));
        for (const AutomorphismPair& other : group)
            CHECK(group_contains(group, pair.on_left.then(other.on_left),
                                 pair.on_right.then(other.on_right)));
    }
}

TEST_CASE("no instance breaks all symmetry at desk scale; the minimum is forced")
{
    // Rigid sock instances cannot exist here: the fiber-compatible groups of
    // the two sides have (k! (n!)^k)^2 > (kn)! elements between them, so they
    // intersect beyond the identity. Brute force over the full families puts
    // the minimum group order at 4 for (2,2) and 6 for (3,2).
    SockEnumerator stream(2, 2);
    std::size_t min_order = SIZE_MAX;
    while (auto inst = stream.next())
        min_order = std::min(min_order, automorphisms_of_sock_instance(*inst).size());
    CHECK(min_order == 4);

    // the chained crossing pattern attains the (3,2) minimum
    SockInstance chained = SockInstance::validate(
        SockBundle::validate(2, {{atom("a1"), {atom("p1"), atom("p2")}},
                                 {atom("a2"), {atom("p3"), atom("p4")}},
                                 {atom("a3"), {atom("p5"), atom("p6")}}}),
        SockBundle::validate(2, {{atom("b1"), {atom("q1"), atom("q2")}},
                                 {atom("b2"), {atom("q3"), atom("q4")}},
                                 {atom("b3"), {atom("q5"), atom("q6")}}}),
        Bijection::from_pairs({{atom("p1"), atom("q1")},
                               {atom("p2"), atom("q3")},
                               {atom("p3"), atom("q2")},
                               {atom("p4"), atom("q5")},
                               {atom("p5"), atom("q4")},
                               {atom("p6"), atom("q6")}}));
    auto group = automorphisms_of_sock_instance(chained);
    CHECK(group.size() == 6);
    for (const AutomorphismPair& pair : group)
        CHECK(replay_sock_automorphism(chained, pair));
}

TEST_CASE("doubling the family grows the group accordingly")
{
    CHECK(automorphisms_of_sock_instance(fiber_respecting_pairs(1)).size() == 2);
    CHECK(automorphisms_of_sock_instance(fiber_respecting_pairs(2)).size() == 8);
}

TEST_CASE("automorphism enumeration respects the size bound")
{
    CHECK_THROWS_AS(automorphisms_of_sock_instance(fiber_respecting_pairs(6)),
                    SizeBoundExceeded);
    CHECK(automorphisms_of_sock_instance(fiber_respecting_pairs(6), 12).size() > 0);
}

TEST_CASE("shoe automorphisms: parallel instance has the swap, worked example is rigid")
{
    ShoeInstance parallel = ShoeInstance::validate(
        {atom("a1"), atom("a2")}, {atom("b1"), atom("b2")}, 2,
        {{{atom("a1"), 1}, {atom("b1"), 1}},
         {{atom("a1"), 2}, {atom("b1"), 2}},
         {{atom("a2"), 1}, {atom("b2"), 1}},
         {{atom("a2"), 2}, {atom("b2"), 2}}});
    CHECK(automorphisms_of_shoe_instance(parallel).size() == 2);

    ShoeInstance worked = ShoeInstance::validate(
        {atom("a1"), atom("a2")}, {atom("b1"), atom("b2")}, 2,
        {{{atom("a1"), 1}, {atom("b1"), 1}},
         {{atom("a1"), 2}, {atom("b2"), 1}},
         {{atom("a2"), 1}, {atom("b1"), 2}},
         {{atom("a2"), 2}, {atom("b2"), 2}}});
    CHECK(automorphisms_of_shoe_instance(worked).size() == 1);
}

TEST_CASE("SYM-8 search yields the canonical certificate")
{
    SockInstance inst = sym8_instance();
    SearchOutcome outcome = search_equivariant_sock_divider(inst);
    REQUIRE(std::holds_alternative<NonexistenceCertificate>(outcome));
    const NonexistenceCertificate& cert = std::get<NonexistenceCertificate>(outcome);

    // the witness collapses A while fixing B
    CHECK(cert.witness.induced_on_a
          == Bijection::from_pairs({{atom("a1"), atom("a2")}, {atom("a2"), atom("a1")}}));
    CHECK(cert.witness.induced_on_b == Bijection::identity(inst.right().base()));
    CHECK(replay_sock_automorphism(inst, cert.witness));

    // both candidate bijections are excluded, by direct enumeration
    CHECK(replay_certificate(inst, cert));
    CHECK(all_bijections(inst.left().base(), inst.right().base()).size() == 2);
}

TEST_CASE("fiber-respecting u on the SYM-8 bases returns the induced base bijection")
{
    SockInstance inst = SockInstance::validate(
        sym8_instance().left(), sym8_instance().right(),
        Bijection::from_pairs({{atom("p"), atom("t")},
                               {atom("q"), atom("u")},
                               {atom("r"), atom("v")},
                               {atom("s"), atom("w")}}));
    SearchOutcome outcome = search_equivariant_sock_divider(inst);
    REQUIRE(std::holds_alternative<Bijection>(outcome));
    const Bijection& g = std::get<Bijection>(outcome);
    CHECK(g == Bijection::from_pairs({{atom("a1"), atom("b1")}, {atom("a2"), atom("b2")}}));
    for (const AutomorphismPair& pair : automorphisms_of_sock_instance(inst))
        CHECK(pair.induced_on_a.inverse().then(g).then(pair.induced_on_b) == g);
}

TEST_CASE("every fiber-respecting u admits an invariant divider, full search at size 2")
{
    SockBundle left = fiber_respecting_pairs(2).left();
    SockBundle right = fiber_respecting_pairs(2).right();
    for (const Bijection& beta : all_bijections(left.base(), right.base())) {
        std::vector<std::pair<Element, Element>> u;
        for (const Element& a : left.base()) {
            auto from = left.fiber(a);
            auto to = right.fiber(beta.apply(a));
            auto it = to.begin();
            for (const Element& x : from)
                u.emplace_back(x, *it++);
        }
        SockInstance inst = SockInstance::validate(left, right, Bijection::from_pairs(u));
        CHECK(std::holds_alternative<Bijection>(search_equivariant_sock_divider(inst)));
    }
}

TEST_CASE("singleton bases return the unique bijection")
{
    SockInstance inst = SockInstance::validate(
        SockBundle::validate(2, {{atom("a"), {atom("p"), atom("q")}}}),
        SockBundle::validate(2, {{atom("b"), {atom("t"), atom("v")}}}),
        Bijection::from_pairs({{atom("p"), atom("t")}, {atom("q"), atom("v")}}));
    SearchOutcome outcome = search_equivariant_sock_divider(inst);
    REQUIRE(std::holds_alternative<Bijection>(outcome));
    CHECK(std::get<Bijection>(outcome).apply(atom("a")) == atom("b"));
}

TEST_CASE("search respects the base-size bound")
{
    CHECK_THROWS_AS(search_equivariant_sock_divider(fiber_respecting_pairs(2), 1),
                    SizeBoundExceeded);
}

TEST_CASE("cheating divider pairs sorted bases positionally")
{
    SockInstance inst = fiber_respecting_pairs(2);
    Bijection g = cheating_sock_divider()(inst);
    CHECK(g.apply(atom("a1")) == atom("b1"));
    CHECK(g.apply(atom("a2")) == atom("b2"));

    SockInstance singleton = SockInstance::validate(
        SockBundle::validate(2, {{atom("a"), {atom("p"), atom("q")}}}),
        SockBundle::validate(2, {{atom("b"), {atom("t"), atom("v")}}}),
        Bijection::from_pairs({{atom("p"), atom("t")}, {atom("q"), atom("v")}}));
    CHECK(cheating_sock_divider()(singleton).apply(atom("a")) == atom("b"));
}

TEST_CASE("the cheating divider is not equivariant; the searcher-backed one is, on SYM-8 kin")
{
    EquivarianceReport cheating_report =
        check_sock_divider_equivariance(cheating_sock_divider(), {fiber_respecting_pairs(2)});
    CHECK(cheating_report.checks == 64);
    CHECK(cheating_report.violations.size() > 0);

    EquivarianceReport empty_report =
        check_sock_divider_equivariance(cheating_sock_divider(), {});
    CHECK(empty_report.instances == 0);
    CHECK(empty_report.checks == 0);
    CHECK(empty_report.clean());
}

TEST_CASE("explicit relabeling lists drive the check directly")
{
    ShoeInstance parallel = ShoeInstance::validate(
        {atom("a1"), atom("a2")}, {atom("b1"), atom("b2")}, 2,
        {{{atom("a1"), 1}, {atom("b1"), 1}},
         {{atom("a1"), 2}, {atom("b1"), 2}},
         {{atom("a2"), 1}, {atom("b2"), 1}},
         {{atom("a2"), 2}, {atom("b2"), 2}}});
    std::vector<Relabeling> relabelings{
        Relabeling::identity_for(parallel.a(), parallel.b()),
        {Bijection::from_pairs({{atom("a1"), atom("a2")}, {atom("a2"), atom("a1")}}),
         Bijection::from_pairs({{atom("b1"), atom("b2")}, {atom("b2"), atom("b1")}})}};
    EquivarianceReport report = check_shoe_divider_equivariance(
        [](const ShoeInstance& inst) { return shoe_divide(inst).matching; }, {parallel},
        relabelings);
    CHECK(report.checks == 2);
    CHECK(report.clean());
}

TEST_CASE("enumerators produce each instance exactly once")
{
    CHECK(ShoeEnumerator(1, 1).total() == 1);
    CHECK(ShoeEnumerator(2, 1).total() == 2);
    CHECK(ShoeEnumerator(2, 2).total() == 24);
    CHECK(SockEnumerator(1, 1).total() == 1);
    CHECK(SockEnumerator(1, 2).total() == 2);
    CHECK(SockEnumerator(2, 2).total() == 24);

    ShoeEnumerator shoes(2, 2);
    std::set<std::string> seen;
    std::uint64_t count = 0;
    while (auto inst = shoes.next()) {
        ++count;
        CHECK(seen.insert(emit_instance({InstanceKind::Shoe, *inst})).second);
    }
    CHECK(count == 24);

    SockEnumerator socks(1, 2);
    count = 0;
    std::set<std::string> seen_socks;
    while (auto inst = socks.next()) {
        ++count;
        CHECK(seen_socks.insert(emit_instance({InstanceKind::Sock, *inst})).second);
    }
    CHECK(count == 2);
}

TEST_CASE("enumeration is guarded by the budget")
{
    CHECK_THROWS_AS(ShoeEnumerator(4, 3, 1000), BudgetExceeded);
    CHECK_THROWS_AS(SockEnumerator(5, 2, 1000), BudgetExceeded);
}
