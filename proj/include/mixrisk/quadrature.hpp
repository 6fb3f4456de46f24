#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "mixrisk/error.hpp"

namespace mixrisk {

// Deterministic Gauss-Legendre quadrature. Rules are cached per node count;
// integration over [a, b] may be split into panels at integrand kinks, and a
// checked variant re-evaluates with doubled nodes to estimate the error.

struct QuadratureSpec {
    int nodes = 64;       // per panel
    double tol = 1e-9;    // relative error tolerance for checked integration
    bool check = true;    // throw NumericalError when the estimate exceeds tol
};

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

namespace detail {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

// Newton iteration on Legendre polynomials, symmetric fill.
inline GaussRule make_gauss_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

inline const GaussRule& gauss_rule(int n) {
    if (n < 1) throw ConfigError("quadrature node count must be positive");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::scoped_lock lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
    return it->second;
}

}  // namespace detail

// Single-panel Gauss-Legendre on [a, b] with n nodes.
template <class F>
double integrate_panel(F&& f, double a, double b, int n) {
    const auto& rule = detail::gauss_rule(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * sum;
}

// Composite rule: [a, b] split at the interior breakpoints (integrand kinks).
template <class F>
double integrate(F&& f, double a, double b, int n,
                 std::span<const double> breakpoints = {}) {
    if (breakpoints.empty()) return integrate_panel(f, a, b, n);
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints) {
        if (c > a && c < b) cuts.push_back(c);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate_panel(f, cuts[i], cuts[i + 1], n);
    }
    return total;
}

// Doubled-node comparison yields the error estimate; the finer value is kept.
template <class F>
IntegrationResult integrate_checked(F&& f, double a, double b,
                                    const QuadratureSpec& spec,
                                    std::span<const double> breakpoints = {}) {
    const double coarse = integrate(f, a, b, spec.nodes, breakpoints);
    const double fine = integrate(f, a, b, 2 * spec.nodes, breakpoints);
    IntegrationResult result;
    result.value = fine;
    result.error_estimate = std::abs(fine - coarse);
    if (spec.check &&
        result.error_estimate > spec.tol * std::max(1.0, std::abs(fine))) {
        throw NumericalError("quadrature did not converge on [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "]",
                             result.error_estimate);
    }
    return result;
}

}  // namespace mixrisk
