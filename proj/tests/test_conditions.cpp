// Order-condition generation: rooted-tree enumeration, condition counts,
// canonicalization and the row-sum substitution.
#include "rk/conditions.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace rk;

TEST_CASE("rooted tree enumeration counts 1,1,2,4,9", "[trees]") {
    std::vector<std::vector<RootedTree>> by_order = trees_by_order(5);
    REQUIRE(by_order.size() == 5);
    CHECK(by_order[0].size() == 1);
    CHECK(by_order[1].size() == 1);
    CHECK(by_order[2].size() == 2);
    CHECK(by_order[3].size() == 4);
    CHECK(by_order[4].size() == 9);
    CHECK(enumerate_trees(4).size() == 8);

    // Encodings are canonical and distinct.
    std::set<std::string> codes;
    for (const auto& t : enumerate_trees(4)) codes.insert(t.encode());
    CHECK(codes.size() == 8);
}

TEST_CASE("tree densities", "[trees]") {
    std::map<std::string, long> gamma;
    for (const auto& t : enumerate_trees(4)) gamma[t.encode()] = t.density().get_si();

    CHECK(gamma.at(".") == 1);
    CHECK(gamma.at("[.]") == 2);
    CHECK(gamma.at("[..]") == 3);      // bushy order 3
    CHECK(gamma.at("[[.]]") == 6);     // chain order 3
    CHECK(gamma.at("[...]") == 4);     // bushy order 4
    CHECK(gamma.at("[.[.]]") == 8);
    CHECK(gamma.at("[[..]]") == 12);
    CHECK(gamma.at("[[[.]]]") == 24);  // chain order 4
}

TEST_CASE("condition counts match the derivations", "[conditions]") {
    CHECK(generate_conditions(2, 2, ExpansionMode::general, false).equations.size() == 3);
    CHECK(generate_conditions(3, 3, ExpansionMode::general, false).equations.size() == 8);
    CHECK(generate_conditions(4, 4, ExpansionMode::general, false).equations.size() == 19);
    CHECK(generate_conditions(4, 4, ExpansionMode::general, true).equations.size() == 10);
    CHECK(generate_conditions(4, 4, ExpansionMode::autonomous, true).equations.size() == 7);
    CHECK(tree_conditions(4, 4).equations.size() == 8);
    CHECK(tree_conditions(3, 3).equations.size() == 4);
}

TEST_CASE("generation is deterministic", "[conditions]") {
    ConditionSet a = generate_conditions(4, 4, ExpansionMode::general, true);
    ConditionSet b = generate_conditions(4, 4, ExpansionMode::general, true);
    REQUIRE(a.equations.size() == b.equations.size());
    for (std::size_t i = 0; i < a.equations.size(); ++i) {
        CHECK(a.equations[i].label == b.equations[i].label);
        CHECK(a.equations[i].poly == b.equations[i].poly);
    }
}

TEST_CASE("row-sum substitution eliminates the first a-column", "[conditions]") {
    ConditionSet cs = generate_conditions(4, 4, ExpansionMode::general, true);
    for (const auto& name : {"a21", "a31", "a41"}) {
        std::size_t idx = cs.ring->index(name);
        for (const auto& eq : cs.equations) CHECK(eq.poly.degree_in(idx) == 0);
    }

    // The consistency condition survives in every mode.
    MultiPoly consistency = MultiPoly::parse(cs.ring, "b1 + b2 + b3 + b4 - 1");
    bool found = false;
    for (const auto& eq : cs.equations)
        if (eq.poly.proportional(consistency)) found = true;
    CHECK(found);
}

TEST_CASE("equations are canonical: integer, content-free, deduplicated", "[conditions]") {
    ConditionSet cs = generate_conditions(4, 4, ExpansionMode::general, false);
    for (const auto& eq : cs.equations) {
        CHECK(eq.poly == eq.poly.primitive_normalized());
        CHECK(eq.poly.leading_term(MonomialOrder::grlex).second > 0);
    }
    for (std::size_t i = 0; i < cs.equations.size(); ++i)
        for (std::size_t j = i + 1; j < cs.equations.size(); ++j)
            CHECK_FALSE(cs.equations[i].poly.proportional(cs.equations[j].poly));
}

TEST_CASE("tree conditions evaluate to zero on a known method", "[conditions]") {
    // Classic RK4 zeroes every tree condition through order 4.
    ConditionSet cs = tree_conditions(4, 4);
    std::vector<Rational> pt(cs.ring->size(), Rational(0));
    auto set = [&](const std::string& n, const Rational& v) { pt[cs.ring->index(n)] = v; };
    set("c2", Rational(1, 2));
    set("c3", Rational(1, 2));
    set("c4", Rational(1));
    set("a21", Rational(1, 2));
    set("a32", Rational(1, 2));
    set("a43", Rational(1));
    set("b1", Rational(1, 6));
    set("b2", Rational(1, 3));
    set("b3", Rational(1, 3));
    set("b4", Rational(1, 6));
    for (const auto& eq : cs.equations) CHECK(eq.poly.evaluate(pt) == 0);
}
