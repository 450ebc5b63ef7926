// Command-line front end: condition generation, tree tables, Groebner
// reduction of equation files, coefficient families, tableau verification,
// embedded-pair construction, convergence tests and the method catalogue.
#include "rk/conditions.hpp"
#include "rk/groebner.hpp"
#include "rk/integrate.hpp"
#include "rk/solver.hpp"
#include "rk/tableau.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rk;

// Exit status contract: 0 success, 1 validation failure, 2 usage/parse error.
struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational parse_rational_arg(const std::string& text, const std::string& what) {
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError("expected a rational 'p/q' for " + what + ", got '" + text + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Conventional variable order for rings inferred from equation files:
// coupling coefficients a*, then weights b*, then nodes c*, then u, r1,
// then anything else alphabetically.
std::vector<std::string> conventional_order(const std::set<std::string>& names) {
    auto klass = [](const std::string& n) {
        if (n.size() >= 2 && n[0] == 'a' && std::isdigit((unsigned char)n[1])) return 0;
        if (n.size() >= 2 && n[0] == 'b' && std::isdigit((unsigned char)n[1])) return 1;
        if (n.size() >= 2 && n[0] == 'c' && std::isdigit((unsigned char)n[1])) return 2;
        if (n == "u") return 3;
        if (n == "r1") return 4;
        return 5;
    };
    std::vector<std::string> out(names.begin(), names.end());
    std::stable_sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
        if (klass(a) != klass(b)) return klass(a) < klass(b);
        return a < b;
    });
    return out;
}

std::set<std::string> scan_identifiers(const std::string& text) {
    std::set<std::string> names;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isalpha((unsigned char)text[i]) || text[i] == '_') {
            std::size_t start = i;
            while (i < text.size() &&
                   (std::isalnum((unsigned char)text[i]) || text[i] == '_'))
                ++i;
            names.insert(text.substr(start, i - start));
        } else {
            ++i;
        }
    }
    return names;
}

int cmd_conditions(unsigned stages, unsigned order, bool autonomous, bool row_sum,
                   const std::string& format) {
    ConditionSet cs = generate_conditions(
        stages, order, autonomous ? ExpansionMode::autonomous : ExpansionMode::general,
        row_sum);
    if (format == "machine") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& e : cs.equations)
            doc.push_back({{"label", e.label}, {"poly", e.poly.to_string()}});
        std::cout << doc.dump(2) << "\n";
    } else {
        // Count goes to the diagnostic stream so the equations pipe into
        // `reduce` unmodified.
        std::cerr << cs.equations.size() << " conditions (s=" << stages << ", p=" << order
                  << ", " << (autonomous ? "autonomous" : "general")
                  << (row_sum ? ", row-sum" : "") << ")\n";
        for (const auto& e : cs.equations)
            std::cout << e.label << ":  " << e.poly.to_string() << " = 0\n";
    }
    return 0;
}

int cmd_trees(unsigned order) {
    auto levels = trees_by_order(order);
    Ring ring = rk_ring(order);
    for (unsigned n = 1; n <= order; ++n) {
        std::cout << "order " << n << ": " << levels[n - 1].size() << " trees\n";
        for (const auto& t : levels[n - 1]) {
            std::vector<MultiPoly> phi = detail::elementary_weights(ring, order, t);
            MultiPoly lhs(ring);
            for (unsigned i = 1; i <= order; ++i)
                lhs += MultiPoly::variable(ring, bname(i)) * phi[i - 1];
            std::string rhs = t.density() == 1 ? "1" : "1/" + t.density().get_str();
            std::cout << "  " << t.encode() << "  gamma=" << t.density().get_str() << "  "
                      << lhs.to_string() << " = " << rhs << "\n";
        }
    }
    return 0;
}

int cmd_reduce(const std::string& path, const std::vector<std::string>& var_order,
               const std::vector<std::string>& substs) {
    std::string text = read_file(path);
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        // Strip an optional "label: " prefix and a trailing "= 0".
        std::size_t colon = line.find(":  ");
        if (colon != std::string::npos) line = line.substr(colon + 3);
        std::size_t eq = line.rfind("= 0");
        if (eq != std::string::npos && line.find_first_not_of(" \t", eq + 3) ==
                                           std::string::npos)
            line = line.substr(0, eq);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw UsageError("no equations in '" + path + "'");

    Ring ring;
    if (!var_order.empty()) {
        ring = make_ring(var_order);
    } else {
        std::set<std::string> names;
        for (const auto& l : lines)
            for (const auto& n : scan_identifiers(l)) names.insert(n);
        ring = make_ring(conventional_order(names));
    }

    std::vector<MultiPoly> eqs;
    for (const auto& l : lines) {
        try {
            eqs.push_back(MultiPoly::parse(ring, l));
        } catch (const std::exception& e) {
            throw UsageError(std::string("cannot parse equation '") + l + "': " + e.what());
        }
    }
    for (const auto& s : substs) {
        std::size_t pos = s.find('=');
        if (pos == std::string::npos) throw UsageError("--subst expects NAME=VALUE");
        std::string name = s.substr(0, pos);
        if (!ring->contains(name)) throw UsageError("unknown variable '" + name + "'");
        MultiPoly value = MultiPoly::parse(ring, s.substr(pos + 1));
        for (auto& e : eqs) e = e.substitute(name, value);
    }

    std::vector<MultiPoly> basis = interreduce(eqs, MonomialOrder::lex);
    std::cerr << basis.size() << " basis polynomials\n";
    for (const auto& p : basis) std::cout << p.to_string() << "\n";
    return 0;
}

void print_family(const FamilySolution& fam) {
    for (const auto& [name, value] : fam.coefficients)
        std::cout << name << " = " << value.to_string() << "\n";
    if (!fam.free_vars.empty()) {
        std::cout << "free:";
        for (const auto& v : fam.free_vars) std::cout << " " << v;
        std::cout << "\n";
    }
    for (const auto& locus : fam.excluded_loci)
        std::cout << "excluded locus: " << locus.to_string() << " = 0\n";
}

int cmd_solve_family(const std::string& scenario, std::optional<std::string> c2,
                     std::optional<std::string> c3, std::optional<std::string> r1) {
    FamilySolution fam;
    std::map<std::string, Rational> point;
    if (scenario == "order3") {
        fam = solve_order3_family(generate_conditions(3, 3, ExpansionMode::general, false));
    } else if (scenario == "order4") {
        fam = solve_order4_family(generate_conditions(4, 4, ExpansionMode::general, true));
    } else if (scenario == "order4-equal-c") {
        fam = solve_order4_equal_c(generate_conditions(4, 4, ExpansionMode::general, true));
    } else {
        throw UsageError("unknown scenario '" + scenario +
                         "' (expected order3, order4 or order4-equal-c)");
    }
    if (c2) point.emplace("c2", parse_rational_arg(*c2, "--c2"));
    if (c3) point.emplace("c3", parse_rational_arg(*c3, "--c3"));
    if (r1) point.emplace("r1", parse_rational_arg(*r1, "--r1"));

    if (point.empty()) {
        print_family(fam);
        return 0;
    }
    for (const auto& v : fam.free_vars)
        if (!point.count(v))
            throw UsageError("scenario " + scenario + " needs a value for " + v);
    try {
        auto values = instantiate(fam, point);
        for (const auto& [name, value] : values)
            std::cout << name << " = " << to_string(value) << "\n";
    } catch (const ExcludedLocusError& e) {
        throw ValidationFailure(std::string("point lies on an excluded locus: ") + e.what());
    }
    return 0;
}

int cmd_verify(unsigned order, const std::string& path) {
    TableauDocument doc;
    try {
        doc = tableau_from_text(read_file(path));
    } catch (const TableauError& e) {
        throw UsageError(e.what());
    }
    TableauValidation v = validate(doc.tableau);
    if (!v.row_sum_ok) {
        for (const auto& issue : v.issues) std::cout << issue << "\n";
        throw ValidationFailure("tableau violates the row-sum condition");
    }
    OrderReport report = verify_order(doc.tableau, order);
    if (report.satisfied) {
        std::cout << "satisfied: all order-" << order << " conditions hold exactly\n";
        return 0;
    }
    for (const auto& [label, residual] : report.residuals)
        if (residual != 0)
            std::cout << label << ": residual " << to_string(residual) << "\n";
    throw ValidationFailure("order-" + std::to_string(order) + " conditions not satisfied");
}

int cmd_embed(const std::string& path, std::optional<std::string> r1) {
    TableauDocument doc;
    try {
        doc = tableau_from_text(read_file(path));
    } catch (const TableauError& e) {
        throw UsageError(e.what());
    }
    EmbeddedFamily fam;
    try {
        fam = embed_lower_order(doc.tableau);
    } catch (const TableauError& e) {
        throw ValidationFailure(e.what());
    }
    if (!r1) {
        std::cout << "hat-weight family (order " << fam.hat_order << "):\n";
        print_family(fam.family);
        return 0;
    }
    EmbeddedPair pair = fam.at(parse_rational_arg(*r1, "--r1"));
    std::cout << to_text_form(pair);
    return 0;
}

int cmd_order_test(const std::string& path, const std::string& problem, const std::string& h0,
                   unsigned levels) {
    TableauDocument doc;
    try {
        doc = tableau_from_text(read_file(path));
    } catch (const TableauError& e) {
        throw UsageError(e.what());
    }
    const TestProblem* prob;
    try {
        prob = &test_problem(problem);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    double h = to_double(parse_rational_arg(h0, "--h0"));
    ConvergenceReport report = estimate_order(doc.tableau, *prob, h, levels);
    std::cout << "problem " << report.problem << ", method "
              << (report.label.empty() ? "(unnamed)" : report.label) << "\n";
    std::cout.precision(12);
    for (const auto& [step, err] : report.samples)
        std::cout << "h = " << step << "  |error| = " << err << "\n";
    std::cout << "observed order: " << report.observed_order << "\n";
    return 0;
}

int cmd_catalogue(std::optional<std::string> name, const std::string& format) {
    std::vector<ButcherTableau> entries;
    if (name) {
        try {
            entries.push_back(catalogue_entry(*name));
        } catch (const TableauError& e) {
            throw UsageError(e.what());
        }
    } else {
        entries = catalogue();
    }
    for (const auto& t : entries) {
        if (format == "machine") {
            std::cout << to_text_form(t);
        } else if (format == "latex") {
            std::cout << "% " << t.label << "\n" << to_latex(t);
        } else {
            std::cout << t.label << " (order " << *t.nominal_order << ")\n";
            for (unsigned i = 0; i < t.s; ++i) {
                std::cout << "  " << to_string(t.c[i]) << " |";
                for (unsigned j = 0; j < i; ++j) std::cout << " " << to_string(t.a[i][j]);
                std::cout << "\n";
            }
            std::cout << "  --+";
            std::cout << "\n    |";
            for (const auto& w : t.b) std::cout << " " << to_string(w);
            std::cout << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explicit Runge-Kutta order conditions, exact coefficient families and "
                 "tableau verification"};
    app.require_subcommand(1);

    // conditions
    auto* conditions = app.add_subcommand("conditions", "Generate order conditions");
    unsigned stages = 0, order = 0;
    bool autonomous = false, row_sum = false;
    std::string cformat = "text";
    conditions->add_option("--stages", stages, "number of stages")->required();
    conditions->add_option("--order", order, "target order")->required();
    conditions->add_flag("--autonomous", autonomous, "expand for y' = f(y)");
    conditions->add_flag("--row-sum", row_sum, "substitute a_i1 = c_i - sum a_ij");
    conditions->add_option("--format", cformat)->check(CLI::IsMember({"text", "machine"}));

    // trees
    auto* trees = app.add_subcommand("trees", "Rooted-tree order conditions");
    unsigned torder = 0;
    trees->add_option("--order", torder, "maximum tree order")->required();

    // reduce
    auto* reduce = app.add_subcommand("reduce", "Interreduce an equation file");
    std::string reduce_file;
    std::vector<std::string> var_order, substs;
    reduce->add_option("file", reduce_file, "equations, one per line")->required();
    reduce->add_option("--var-order", var_order, "comma-separated variable order")
        ->delimiter(',');
    reduce->add_option("--subst", substs, "NAME=VALUE substitutions before reduction");

    // solve-family
    auto* solve = app.add_subcommand("solve-family", "Solve a coefficient family");
    std::string scenario;
    std::string c2_opt, c3_opt, r1_opt;
    solve->add_option("--scenario", scenario, "order3 | order4 | order4-equal-c")->required();
    solve->add_option("--c2", c2_opt, "rational value for c2");
    solve->add_option("--c3", c3_opt, "rational value for c3");
    solve->add_option("--r1", r1_opt, "rational value for r1");

    // verify
    auto* verify = app.add_subcommand("verify", "Verify a tableau against order conditions");
    unsigned vorder = 0;
    std::string verify_file;
    verify->add_option("--order", vorder, "order to verify")->required();
    verify->add_option("file", verify_file, "tableau document")->required();

    // embed
    auto* embed = app.add_subcommand("embed", "Construct embedded lower-order weights");
    std::string embed_file, embed_r1;
    embed->add_option("file", embed_file, "tableau document")->required();
    embed->add_option("--r1", embed_r1, "specialize the free parameter");

    // order-test
    auto* otest = app.add_subcommand("order-test", "Empirical convergence order");
    std::string otest_file, problem, h0 = "1/10";
    unsigned levels = 5;
    otest->add_option("file", otest_file, "tableau document")->required();
    otest->add_option("--problem", problem, "test problem name")->required();
    otest->add_option("--h0", h0, "initial step size (rational)");
    otest->add_option("--levels", levels, "number of halvings + 1");

    // catalogue
    auto* cat = app.add_subcommand("catalogue", "Named methods");
    std::string cat_name, cat_format = "text";
    cat->add_option("--name", cat_name, "single entry");
    cat->add_option("--format", cat_format)
        ->check(CLI::IsMember({"text", "latex", "machine"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (conditions->parsed())
            return cmd_conditions(stages, order, autonomous, row_sum, cformat);
        if (trees->parsed()) return cmd_trees(torder);
        if (reduce->parsed()) return cmd_reduce(reduce_file, var_order, substs);
        if (solve->parsed())
            return cmd_solve_family(
                scenario, c2_opt.empty() ? std::nullopt : std::optional(c2_opt),
                c3_opt.empty() ? std::nullopt : std::optional(c3_opt),
                r1_opt.empty() ? std::nullopt : std::optional(r1_opt));
        if (verify->parsed()) return cmd_verify(vorder, verify_file);
        if (embed->parsed())
            return cmd_embed(embed_file,
                             embed_r1.empty() ? std::nullopt : std::optional(embed_r1));
        if (otest->parsed()) return cmd_order_test(otest_file, problem, h0, levels);
        if (cat->parsed())
            return cmd_catalogue(cat_name.empty() ? std::nullopt : std::optional(cat_name),
                                 cat_format);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}
