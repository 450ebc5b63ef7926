// Numerical validation harness: fixed-step integration of scalar test IVPs
// with arbitrary explicit tableaux and empirical convergence-order
// estimation. This is the only place the library touches floating point; the
// tableau's exact rationals are converted to binary64 once, here.
#pragma once

#include "rk/tableau.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rk {

struct DivergedError : std::runtime_error {
    explicit DivergedError(std::size_t step)
        : std::runtime_error("integration diverged (non-finite state) at step " +
                             std::to_string(step)),
          step_index(step) {}
    std::size_t step_index;
};

struct TestProblem {
    std::string name;
    std::function<double(double, double)> f;  // right-hand side f(x, y)
    double x0 = 0.0;
    double y0 = 0.0;
    double x_end = 1.0;
    std::function<double(double)> exact;
};

// Fixed built-in set: exponential growth, a non-autonomous linear problem to
// catch autonomous-only bugs, and a nonlinear decay.
inline const std::vector<TestProblem>& test_problems() {
    static const std::vector<TestProblem> problems = {
        {"exp", [](double, double y) { return y; }, 0.0, 1.0, 1.0,
         [](double x) { return std::exp(x); }},
        {"linear-xy", [](double x, double y) { return x + y; }, 0.0, 1.0, 1.0,
         [](double x) { return 2.0 * std::exp(x) - x - 1.0; }},
        {"decay", [](double, double y) { return -y * y; }, 0.0, 1.0, 1.0,
         [](double x) { return 1.0 / (1.0 + x); }},
    };
    return problems;
}

inline const TestProblem& test_problem(const std::string& name) {
    for (const auto& p : test_problems())
        if (p.name == name) return p;
    throw std::invalid_argument("no test problem named '" + name + "'");
}

// One fixed-step explicit RK sweep from x0 to x_end; (x_end - x0)/h must be a
// whole number of steps (callers pick h = span / 2^k).
inline double integrate(const ButcherTableau& t, const TestProblem& prob, double h) {
    TableauValidation v = validate(t);
    if (!v.well_formed) throw TableauError("malformed tableau: " + v.issues.front());
    if (h <= 0) throw std::invalid_argument("step size must be positive");

    double span = prob.x_end - prob.x0;
    double steps_real = span / h;
    auto n = (std::size_t)std::llround(steps_real);
    if (n == 0 || std::abs(steps_real - (double)n) > 1e-9 * steps_real)
        throw std::invalid_argument("(x_end - x0)/h must be a positive integer");

    std::vector<double> c(t.s), b(t.s);
    std::vector<std::vector<double>> a(t.s);
    for (unsigned i = 0; i < t.s; ++i) {
        c[i] = to_double(t.c[i]);
        b[i] = to_double(t.b[i]);
        for (const auto& e : t.a[i]) a[i].push_back(to_double(e));
    }

    double x = prob.x0, y = prob.y0;
    std::vector<double> k(t.s);
    for (std::size_t step = 0; step < n; ++step) {
        for (unsigned i = 0; i < t.s; ++i) {
            double yi = y;
            for (unsigned j = 0; j < i; ++j) yi += h * a[i][j] * k[j];
            k[i] = prob.f(x + c[i] * h, yi);
        }
        double dy = 0.0;
        for (unsigned i = 0; i < t.s; ++i) dy += b[i] * k[i];
        y += h * dy;
        x = prob.x0 + (double)(step + 1) * h;
        if (!std::isfinite(y)) throw DivergedError(step);
    }
    return y;
}

struct ConvergenceReport {
    std::string problem;
    std::string label;
    std::vector<std::pair<double, double>> samples;  // (h, |global error at x_end|)
    double observed_order = 0.0;
    unsigned levels_used = 0;  // levels above the rounding floor
    std::optional<unsigned> nominal_order;
};

// Errors at h0, h0/2, ..., h0/2^(levels-1); observed order is the mean of
// log2 error ratios between successive levels. Levels whose error is below
// the 1e-12 rounding floor are excluded from the fit.
inline ConvergenceReport estimate_order(const ButcherTableau& t, const TestProblem& prob,
                                        double h0, unsigned levels) {
    if (levels < 3) throw std::invalid_argument("estimate_order needs at least 3 levels");
    ConvergenceReport report;
    report.problem = prob.name;
    report.label = t.label;
    report.nominal_order = t.nominal_order;

    double exact = prob.exact(prob.x_end);
    double h = h0;
    for (unsigned lvl = 0; lvl < levels; ++lvl, h /= 2.0) {
        double err = std::abs(integrate(t, prob, h) - exact);
        report.samples.emplace_back(h, err);
    }

    constexpr double rounding_floor = 1e-12;
    double sum = 0.0;
    unsigned count = 0;
    for (std::size_t i = 0; i + 1 < report.samples.size(); ++i) {
        double e0 = report.samples[i].second, e1 = report.samples[i + 1].second;
        if (e0 < rounding_floor || e1 < rounding_floor || e1 == 0.0) continue;
        sum += std::log2(e0 / e1);
        ++count;
    }
    report.levels_used = count + (count > 0 ? 1 : 0);
    report.observed_order = count > 0 ? sum / (double)count : 0.0;
    return report;
}

}  // namespace rk
