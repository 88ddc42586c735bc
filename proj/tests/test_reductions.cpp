#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "sockdiv/sockdiv.hpp"

using namespace sockdiv;

namespace {

Element atom(const char* s) { return Element::atom(s); }
Element atom(const std::string& s) { return Element::atom(s); }

PairFamily one_pair()
{
    return PairFamily::validate({atom("i0")}, {{atom("i0"), {atom("x0"), atom("y0")}}});
}

PairFamily two_pairs()
{
    return PairFamily::validate({atom("i0"), atom("i1")},
                                {{atom("i0"), {atom("x0"), atom("y0")}},
                                 {atom("i1"), {atom("x1"), atom("y1")}}});
}

/// Every assignment of 2k canonical sock labels to k ordered pairs.
std::vector<PairFamily> all_pair_families(int k)
{
    std::vector<std::string> labels;
    for (int t = 1; t <= 2 * k; ++t)
        labels.push_back("s" + std::to_string(t));
    std::sort(labels.begin(), labels.end());
    std::vector<PairFamily> out;
    do {
        bool canonical = true;
        for (int f = 0; f < k; ++f)
            canonical = canonical && labels[2 * f] < labels[2 * f + 1];
        if (!canonical)
            continue; // same fiber contents in the other order
        std::vector<Element> order;
        std::map<Element, ElementSet> fibers;
        for (int f = 0; f < k; ++f) {
            Element index = atom("i" + std::to_string(f));
            order.push_back(index);
            fibers.emplace(index, ElementSet{atom(labels[2 * f]), atom(labels[2 * f + 1])});
        }
        out.push_back(PairFamily::validate(order, fibers));
    } while (std::next_permutation(labels.begin(), labels.end()));
    return out;
}

} // namespace

TEST_CASE("pair family validation")
{
    CHECK(two_pairs().fiber_size() == 2);
    CHECK(two_pairs().rank(atom("i1")) == 1);

    CHECK_THROWS_AS(PairFamily::validate({atom("i0"), atom("i0")},
                                         {{atom("i0"), {atom("x"), atom("y")}}}),
                    DomainMismatch);
    CHECK_THROWS_AS(PairFamily::validate({atom("i0")}, {}), DomainMismatch);
    CHECK_THROWS_AS(PairFamily::validate({atom("i0"), atom("i1")},
                                         {{atom("i0"), {atom("x"), atom("y")}},
                                          {atom("i1"), {atom("y"), atom("z")}}}),
                    FibersOverlap);
    CHECK_THROWS_AS(PairFamily::validate({atom("i0"), atom("i1")},
                                         {{atom("i0"), {atom("x"), atom("y")}},
                                          {atom("i1"), {atom("z")}}}),
                    FiberSizeError);
}

TEST_CASE("rows bundle of a single pair")
{
    SockBundle rows = rows_bundle(one_pair(), 2);
    CHECK(rows.base() == ElementSet{atom("x0"), atom("y0")});
    CHECK(rows.fiber(atom("x0")) == ElementSet{dart(atom("x0"), 1), dart(atom("x0"), 2)});
    CHECK(rows.fiber(atom("y0")) == ElementSet{dart(atom("y0"), 1), dart(atom("y0"), 2)});
}

TEST_CASE("columns bundle of a single pair")
{
    SockBundle columns = columns_bundle(one_pair(), 2);
    CHECK(columns.base() == ElementSet{dart(atom("i0"), 1), dart(atom("i0"), 2)});
    CHECK(columns.fiber(dart(atom("i0"), 1))
          == ElementSet{dart(atom("x0"), 1), dart(atom("y0"), 1)});
    CHECK(columns.fiber(dart(atom("i0"), 2))
          == ElementSet{dart(atom("x0"), 2), dart(atom("y0"), 2)});
}

TEST_CASE("rows and columns of the empty family are empty")
{
    PairFamily empty = PairFamily::validate({}, {});
    CHECK(rows_bundle(empty, 2).total_space().empty());
    CHECK(columns_bundle(empty, 2).total_space().empty());
    CHECK(choice_from_sock_divider(empty, cheating_sock_divider()).selection.empty());
}

TEST_CASE("two pairs double up: 4 row fibers, 4 column fibers, total space 8")
{
    SockBundle rows = rows_bundle(two_pairs(), 2);
    SockBundle columns = columns_bundle(two_pairs(), 2);
    CHECK(rows.base().size() == 4);
    CHECK(rows.total_space().size() == 8);
    CHECK(columns.base().size() == 4);
    CHECK(columns.total_space().size() == 8);
}

TEST_CASE("rows/columns total spaces coincide elementwise for every family, k <= 3")
{
    for (int k = 0; k <= 3; ++k) {
        for (const PairFamily& family : all_pair_families(k)) {
            const int n = family.empty() ? 2 : family.fiber_size();
            CHECK(rows_bundle(family, n).total_space()
                  == columns_bundle(family, n).total_space());
        }
    }
}

TEST_CASE("family arity is enforced")
{
    CHECK_THROWS_AS(rows_bundle(two_pairs(), 3), FiberSizeError);
    CHECK_THROWS_AS(columns_bundle(two_pairs(), 0), ArityMismatch);
}

TEST_CASE("choice membership is forced for a single pair")
{
    ChoiceAssignment choice = choice_from_sock_divider(one_pair(), cheating_sock_divider());
    REQUIRE(choice.selection.size() == 1);
    CHECK(one_pair().fiber(atom("i0")).count(choice.selection.at(atom("i0"))) == 1);
}

TEST_CASE("choice membership holds for every family and the cheating oracle, k <= 3")
{
    for (int k = 1; k <= 3; ++k) {
        for (const PairFamily& family : all_pair_families(k)) {
            ChoiceAssignment choice = choice_from_sock_divider(family, cheating_sock_divider());
            REQUIRE(choice.selection.size() == family.indices().size());
            for (const auto& [index, sock] : choice.selection)
                CHECK(family.fiber(index).count(sock) == 1);
        }
    }
}

TEST_CASE("oracle violations are caught")
{
    // wrong codomain: pairs the left base with itself
    SockDividerOracle wrong_base = [](const SockInstance& inst) {
        return Bijection::identity(inst.left().base());
    };
    CHECK_THROWS_AS(choice_from_sock_divider(two_pairs(), wrong_base), OracleViolation);

    // stateful oracle: different answer on the second call
    auto flip = std::make_shared<bool>(false);
    SockDividerOracle nondeterministic = [flip](const SockInstance& inst) {
        std::vector<Element> left(inst.left().base().begin(), inst.left().base().end());
        std::vector<Element> right(inst.right().base().begin(), inst.right().base().end());
        *flip = !*flip;
        if (*flip)
            std::reverse(right.begin(), right.end());
        std::vector<std::pair<Element, Element>> pairs;
        for (std::size_t k = 0; k < left.size(); ++k)
            pairs.emplace_back(left[k], right[k]);
        return Bijection::from_pairs(pairs);
    };
    CHECK_THROWS_AS(choice_from_sock_divider(two_pairs(), nondeterministic), OracleViolation);
}

TEST_CASE("mra on a single fiber pairs the socks with (a,1),(a,2)")
{
    SockBundle bundle = SockBundle::validate(2, {{atom("a"), {atom("p"), atom("q")}}});
    Bijection m = mra_from_sock_divider(bundle, cheating_sock_divider());
    CHECK(m.domain() == bundle.total_space());
    CHECK(m.codomain() == ElementSet{dart(atom("a"), 1), dart(atom("a"), 2)});
}

TEST_CASE("mra on the empty bundle is empty")
{
    SockBundle empty = SockBundle::validate(2, {});
    CHECK(mra_from_sock_divider(empty, cheating_sock_divider()).size() == 0);
}

TEST_CASE("mra domain and codomain are exact on a two-fiber bundle")
{
    SockBundle bundle = SockBundle::validate(2, {{atom("a1"), {atom("p"), atom("q")}},
                                                 {atom("a2"), {atom("r"), atom("s")}}});
    Bijection m = mra_from_sock_divider(bundle, cheating_sock_divider());
    CHECK(m.domain() == bundle.total_space());
    CHECK(m.codomain() == trivial_bundle(bundle.base(), 2).total_space());
}

TEST_CASE("sock division via repeated addition: single fibers force the unique bijection")
{
    SockInstance inst = SockInstance::validate(
        SockBundle::validate(2, {{atom("a"), {atom("p"), atom("q")}}}),
        SockBundle::validate(2, {{atom("b"), {atom("t"), atom("v")}}}),
        Bijection::from_pairs({{atom("p"), atom("v")}, {atom("q"), atom("t")}}));
    Bijection m = sock_divide_from_mra(inst);
    CHECK(m.apply(atom("a")) == atom("b"));
}

TEST_CASE("fiber-respecting u forces the induced base bijection, all 8 cases at size 2")
{
    SockBundle left = SockBundle::validate(2, {{atom("a1"), {atom("p"), atom("q")}},
                                               {atom("a2"), {atom("r"), atom("s")}}});
    SockBundle right = SockBundle::validate(2, {{atom("b1"), {atom("t"), atom("u")}},
                                                {atom("b2"), {atom("v"), atom("w")}}});
    for (const Bijection& beta : all_bijections(left.base(), right.base())) {
        std::vector<std::vector<std::pair<Element, Element>>> partial{{}};
        for (const Element& a : left.base()) {
            std::vector<std::vector<std::pair<Element, Element>>> extended;
            for (const Bijection& fm : all_bijections(left.fiber(a), right.fiber(beta.apply(a))))
                for (const auto& prefix : partial) {
                    auto copy = prefix;
                    for (const auto& p : fm.pairs())
                        copy.push_back(p);
                    extended.push_back(std::move(copy));
                }
            partial = std::move(extended);
        }
        for (const auto& pairs : partial) {
            SockInstance inst =
                SockInstance::validate(left, right, Bijection::from_pairs(pairs));
            CHECK(sock_divide_from_mra(inst) == beta);
        }
    }
}

TEST_CASE("general u still yields a bijection of the bases, full (2,2) family")
{
    SockEnumerator stream(2, 2);
    while (auto inst = stream.next()) {
        Bijection m = sock_divide_from_mra(*inst);
        CHECK(m.domain() == inst->left().base());
        CHECK(m.codomain() == inst->right().base());
    }
}

TEST_CASE("trivialize_with_order sorts each fiber by the rank of its image")
{
    SockBundle bundle = SockBundle::validate(2, {{atom("a"), {atom("p"), atom("q")}}});
    LinearOrder order = LinearOrder::over({atom("a")});
    Bijection f = Bijection::from_pairs({{atom("p"), dart(atom("a"), 2)},
                                         {atom("q"), dart(atom("a"), 1)}});
    Bijection t = trivialize_with_order(bundle, order, f);
    CHECK(t.apply(atom("q")) == dart(atom("a"), 1)); // q sorts first
    CHECK(t.apply(atom("p")) == dart(atom("a"), 2));
    CHECK(is_bundle_isomorphism(t, bundle, trivial_bundle(bundle.base(), 2)));
}

TEST_CASE("trivializing the trivial bundle with the identity is the identity")
{
    SockBundle bundle = trivial_bundle({atom("a"), atom("b")}, 2);
    LinearOrder order = LinearOrder::over({atom("a"), atom("b")});
    Bijection id = Bijection::identity(bundle.total_space());
    CHECK(trivialize_with_order(bundle, order, id) == id);
}

TEST_CASE("f crossing fibers still trivializes within fibers")
{
    SockBundle bundle = SockBundle::validate(2, {{atom("a"), {atom("p"), atom("q")}},
                                                 {atom("b"), {atom("r"), atom("s")}}});
    LinearOrder order = LinearOrder::over({atom("a"), atom("b")});
    Bijection f = Bijection::from_pairs({{atom("p"), dart(atom("b"), 1)},
                                         {atom("q"), dart(atom("b"), 2)},
                                         {atom("r"), dart(atom("a"), 1)},
                                         {atom("s"), dart(atom("a"), 2)}});
    Bijection t = trivialize_with_order(bundle, order, f);
    CHECK(is_bundle_isomorphism(t, bundle, trivial_bundle(bundle.base(), 2)));
    CHECK(t.apply(atom("r")) == dart(atom("b"), 1)); // r's image outranks nothing in its fiber
}

TEST_CASE("trivialize rejects mismatched inputs")
{
    SockBundle bundle = SockBundle::validate(2, {{atom("a"), {atom("p"), atom("q")}}});
    Bijection f = Bijection::from_pairs({{atom("p"), dart(atom("a"), 1)},
                                         {atom("q"), dart(atom("a"), 2)}});
    CHECK_THROWS_AS(trivialize_with_order(bundle, LinearOrder::over({atom("z")}), f),
                    DomainMismatch);
    CHECK_THROWS_AS(LinearOrder::over({atom("a"), atom("a")}), DomainMismatch);
    Bijection not_onto_trivial = Bijection::from_pairs({{atom("p"), atom("x")},
                                                        {atom("q"), atom("y")}});
    CHECK_THROWS_AS(trivialize_with_order(bundle, LinearOrder::over({atom("a")}),
                                          not_onto_trivial),
                    DomainMismatch);
}

TEST_CASE("divisibility witnesses at the worked sizes")
{
    ElementSet six;
    for (int k = 1; k <= 6; ++k)
        six.insert(atom("e" + std::to_string(k)));
    auto strong = strong_divisibility_witness(six, 3);
    REQUIRE(strong.has_value());
    CHECK(strong->quotient_base.size() == 2);
    CHECK(strong->pairing.domain() == six);
    CHECK(strong->pairing.codomain() == trivial_bundle(strong->quotient_base, 3).total_space());

    ElementSet five(six.begin(), std::next(six.begin(), 5));
    CHECK_FALSE(strong_divisibility_witness(five, 3).has_value());

    auto empty_strong = strong_divisibility_witness({}, 4);
    REQUIRE(empty_strong.has_value());
    CHECK(empty_strong->quotient_base.empty());

    auto weak = weak_divisibility_witness(six, 2);
    REQUIRE(weak.has_value());
    CHECK(weak->total_space() == six);
    CHECK_FALSE(weak_divisibility_witness(five, 2).has_value());
}

TEST_CASE("strong and weak witnesses exist exactly when n divides |A|, sizes <= 12")
{
    for (int size = 0; size <= 12; ++size) {
        ElementSet set;
        for (int k = 1; k <= size; ++k)
            set.insert(atom("e" + std::to_string(k)));
        for (int n = 1; n <= 4; ++n) {
            auto strong = strong_divisibility_witness(set, n);
            auto weak = weak_divisibility_witness(set, n);
            CHECK(strong.has_value() == (size % n == 0));
            CHECK(weak.has_value() == strong.has_value());
            if (strong)
                CHECK(strong->pairing.domain() == set);
            if (weak)
                CHECK(weak->total_space() == set);
        }
    }
}

TEST_CASE("fresh quotient labels avoid clashes with the input set")
{
    ElementSet set{atom("q0"), atom("q1")};
    auto witness = weak_divisibility_witness(set, 2);
    REQUIRE(witness.has_value());
    for (const Element& b : witness->base())
        CHECK(set.count(b) == 0);
}
