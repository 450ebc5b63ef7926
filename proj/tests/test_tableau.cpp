// Tableau model: validation, exact order verification, the catalogue,
// embedded pairs, serialization and the floating-point harness.
#include "rk/integrate.hpp"
#include "rk/tableau.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rk;

TEST_CASE("catalogue methods verify their nominal orders exactly", "[tableau]") {
    for (const auto& t : catalogue()) {
        TableauValidation v = validate(t);
        CHECK(v.well_formed);
        CHECK(v.row_sum_ok);
        REQUIRE(t.nominal_order.has_value());
        OrderReport report = verify_order(t, *t.nominal_order);
        CHECK(report.satisfied);
        for (const auto& [label, residual] : report.residuals) CHECK(residual == 0);
    }
    CHECK_THROWS_AS(catalogue_entry("no-such-method"), TableauError);
}

TEST_CASE("verification fails beyond the real order, with exact residuals", "[tableau]") {
    OrderReport r5 = verify_order(catalogue_entry("rk4"), 5);
    CHECK_FALSE(r5.satisfied);
    // The order-5 chain tree has density 120 and residual exactly
    // sum(b*c*(a*(a*c))) - 1/120 for RK4.
    bool nonzero_seen = false;
    for (const auto& [label, residual] : r5.residuals)
        if (residual != 0) nonzero_seen = true;
    CHECK(nonzero_seen);

    CHECK_FALSE(verify_order(catalogue_entry("improved-euler"), 3).satisfied);
    CHECK(verify_order(catalogue_entry("rk4"), 3).satisfied);
}

TEST_CASE("validator flags structural problems", "[tableau]") {
    ButcherTableau bad = catalogue_entry("rk4");
    bad.a[2][0] = Rational(1, 10);  // row no longer sums to c3
    TableauValidation v = validate(bad);
    CHECK(v.well_formed);
    CHECK_FALSE(v.row_sum_ok);
    REQUIRE_FALSE(v.issues.empty());

    ButcherTableau malformed = catalogue_entry("rk4");
    malformed.b.pop_back();
    CHECK_FALSE(validate(malformed).well_formed);
    CHECK_THROWS_AS(verify_order(malformed, 4), TableauError);
}

TEST_CASE("structured text round trip", "[tableau]") {
    const ButcherTableau& rk4 = catalogue_entry("rk4");
    TableauDocument doc = tableau_from_text(to_text_form(rk4));
    CHECK(doc.tableau.s == rk4.s);
    CHECK(doc.tableau.c == rk4.c);
    CHECK(doc.tableau.a == rk4.a);
    CHECK(doc.tableau.b == rk4.b);
    CHECK(doc.tableau.label == rk4.label);
    CHECK(doc.tableau.nominal_order == rk4.nominal_order);
    CHECK_FALSE(doc.bhat.has_value());

    // Integers are accepted; floats are rejected outright.
    TableauDocument euler = tableau_from_text(
        R"({"s": 1, "c": [0], "a": [[]], "b": [1]})");
    CHECK(euler.tableau.b[0] == 1);
    CHECK_THROWS_AS(tableau_from_text(R"({"s": 1, "c": [0], "a": [[]], "b": [0.5]})"),
                    TableauError);
    CHECK_THROWS_AS(tableau_from_text(R"({"s": 1, "c": [0], "a": [[]]})"), TableauError);
    CHECK_THROWS_AS(tableau_from_text("not json"), TableauError);

    // bhat must have s+1 entries.
    CHECK_THROWS_AS(tableau_from_text(
                        R"({"s": 1, "c": [0], "a": [[]], "b": [1], "bhat": [1]})"),
                    TableauError);
}

TEST_CASE("latex rendering", "[tableau]") {
    std::string tex = to_latex(catalogue_entry("rk4"));
    CHECK(tex.find("\\begin{array}") != std::string::npos);
    CHECK(tex.find("\\frac{1}{6}") != std::string::npos);
    CHECK(tex.find("\\hline") != std::string::npos);
}

TEST_CASE("embedded pair construction on Kutta 3/8", "[tableau][embed]") {
    EmbeddedFamily fam = embed_lower_order(catalogue_entry("kutta38"));
    CHECK(fam.order == 4);
    CHECK(fam.hat_order == 3);

    EmbeddedPair pair = fam.at(Rational(1, 6));
    std::vector<Rational> expected{Rational(1, 12), Rational(1, 2), Rational(1, 4),
                                   Rational(0), Rational(1, 6)};
    CHECK(pair.bhat == expected);

    // The hat method is a genuine order-3 (and not order-4) 5-stage scheme.
    ButcherTableau hat = pair.hat_method();
    CHECK(hat.s == 5);
    CHECK(validate(hat).row_sum_ok);
    CHECK(verify_order(hat, 3).satisfied);
    CHECK_FALSE(verify_order(hat, 4).satisfied);

    // Serialization keeps the hat weights.
    TableauDocument doc = tableau_from_text(to_text_form(pair));
    REQUIRE(doc.bhat.has_value());
    CHECK(*doc.bhat == expected);

    ButcherTableau anonymous = catalogue_entry("rk4");
    anonymous.nominal_order.reset();
    CHECK_THROWS_AS(embed_lower_order(anonymous), TableauError);
}

TEST_CASE("one-step integration is exact in binary64 terms", "[integrate]") {
    const TestProblem& exp = test_problem("exp");

    // Improved Euler, h = 1 on y' = y: y1 = 1 + (1 + 2)/2 = 5/2.
    CHECK(integrate(catalogue_entry("improved-euler"), exp, 1.0) ==
          Catch::Approx(2.5).epsilon(1e-15));
    // Classic RK4, h = 1: y1 = 65/24.
    CHECK(integrate(catalogue_entry("rk4"), exp, 1.0) ==
          Catch::Approx(65.0 / 24.0).epsilon(1e-15));

    CHECK_THROWS(integrate(catalogue_entry("rk4"), exp, 0.3));   // non-integral step count
    CHECK_THROWS(integrate(catalogue_entry("rk4"), exp, -0.1));
    CHECK_THROWS_AS(test_problem("no-such-problem"), std::invalid_argument);
}

TEST_CASE("convergence estimation", "[integrate]") {
    ConvergenceReport r =
        estimate_order(catalogue_entry("improved-euler"), test_problem("exp"), 0.1, 5);
    CHECK(r.observed_order == Catch::Approx(2.0).margin(0.3));
    CHECK(r.samples.size() == 5);
    // Errors shrink monotonically across the halvings.
    for (std::size_t i = 0; i + 1 < r.samples.size(); ++i)
        CHECK(r.samples[i].second > r.samples[i + 1].second);

    CHECK_THROWS(estimate_order(catalogue_entry("rk4"), test_problem("exp"), 0.1, 2));
}
