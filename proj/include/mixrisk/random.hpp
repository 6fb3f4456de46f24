#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mixrisk/error.hpp"
#include "mixrisk/fuzzy.hpp"  // Interval
#include "mixrisk/quadrature.hpp"

namespace mixrisk {

// Random risks as expectation operators: uniform, finite discrete and
// degenerate variants with exact moments.
class RandomVariable {
public:
    static RandomVariable uniform(double c, double d) {
        if (!std::isfinite(c) || !std::isfinite(d) || !(c < d)) {
            throw ConfigError("uniform distribution needs finite c < d");
        }
        return RandomVariable(Uniform{c, d});
    }

    static RandomVariable degenerate(double value) {
        if (!std::isfinite(value)) throw ConfigError("degenerate value must be finite");
        return RandomVariable(Degenerate{value});
    }

    static RandomVariable discrete(std::vector<double> points,
                                   std::vector<double> probabilities) {
        if (points.size() != probabilities.size() || points.empty()) {
            throw ConfigError("discrete distribution needs matching non-empty arrays");
        }
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!std::isfinite(points[i])) {
                throw ConfigError("discrete support points must be finite");
            }
            if (!(probabilities[i] >= 0.0)) {
                throw ConfigError("discrete probabilities must be >= 0");
            }
            total += probabilities[i];
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw ConfigError("discrete probabilities must sum to 1, got " +
                              std::to_string(total));
        }
        Discrete d;
        d.points = std::move(points);
        d.probabilities = std::move(probabilities);
        return RandomVariable(std::move(d));
    }

    double mean() const {
        if (const auto* u = std::get_if<Uniform>(&dist_)) return 0.5 * (u->c + u->d);
        if (const auto* g = std::get_if<Degenerate>(&dist_)) return g->value;
        const auto& d = std::get<Discrete>(dist_);
        double m = 0.0;
        for (std::size_t i = 0; i < d.points.size(); ++i) {
            m += d.points[i] * d.probabilities[i];
        }
        return m;
    }

    double variance() const {
        if (const auto* u = std::get_if<Uniform>(&dist_)) {
            double w = u->d - u->c;
            return w * w / 12.0;
        }
        if (std::holds_alternative<Degenerate>(dist_)) return 0.0;
        const auto& d = std::get<Discrete>(dist_);
        double m = mean();
        double v = 0.0;
        for (std::size_t i = 0; i < d.points.size(); ++i) {
            double dx = d.points[i] - m;
            v += dx * dx * d.probabilities[i];
        }
        return v;
    }

    // M(g(X)): exact sums for discrete/degenerate, Gauss-Legendre for uniform.
    template <class G>
    double expect(G&& g, const QuadratureSpec& spec = {}) const {
        if (const auto* u = std::get_if<Uniform>(&dist_)) {
            const double width = u->d - u->c;
            auto integrand = [&](double x) { return g(x); };
            return integrate_checked(integrand, u->c, u->d, spec).value / width;
        }
        if (const auto* gd = std::get_if<Degenerate>(&dist_)) return g(gd->value);
        const auto& d = std::get<Discrete>(dist_);
        double sum = 0.0;
        for (std::size_t i = 0; i < d.points.size(); ++i) {
            sum += g(d.points[i]) * d.probabilities[i];
        }
        return sum;
    }

    Interval support() const {
        if (const auto* u = std::get_if<Uniform>(&dist_)) return {u->c, u->d};
        if (const auto* g = std::get_if<Degenerate>(&dist_)) return {g->value, g->value};
        const auto& d = std::get<Discrete>(dist_);
        auto [lo, hi] = std::minmax_element(d.points.begin(), d.points.end());
        return {*lo, *hi};
    }

    bool is_degenerate() const { return std::holds_alternative<Degenerate>(dist_); }

    enum class Kind { Uniform, Degenerate, Discrete };

    Kind kind() const {
        if (std::holds_alternative<Uniform>(dist_)) return Kind::Uniform;
        if (std::holds_alternative<Degenerate>(dist_)) return Kind::Degenerate;
        return Kind::Discrete;
    }

    double degenerate_value() const { return std::get<Degenerate>(dist_).value; }
    const std::vector<double>& points() const { return std::get<Discrete>(dist_).points; }
    const std::vector<double>& probabilities() const {
        return std::get<Discrete>(dist_).probabilities;
    }

    RandomVariable shifted(double offset) const {
        RandomVariable out = *this;
        if (auto* u = std::get_if<Uniform>(&out.dist_)) {
            u->c += offset;
            u->d += offset;
        } else if (auto* g = std::get_if<Degenerate>(&out.dist_)) {
            g->value += offset;
        } else {
            for (auto& p : std::get<Discrete>(out.dist_).points) p += offset;
        }
        return out;
    }

    RandomVariable scaled(double factor) const {
        RandomVariable out = *this;
        if (auto* u = std::get_if<Uniform>(&out.dist_)) {
            double a = factor * u->c, b = factor * u->d;
            if (a == b) return degenerate(a);
            u->c = std::min(a, b);
            u->d = std::max(a, b);
        } else if (auto* g = std::get_if<Degenerate>(&out.dist_)) {
            g->value *= factor;
        } else {
            for (auto& p : std::get<Discrete>(out.dist_).points) p *= factor;
        }
        return out;
    }

    // Spread contraction about a fixed point: X -> pivot + factor (X - pivot).
    RandomVariable scaled_about(double pivot, double factor) const {
        return shifted(-pivot).scaled(factor).shifted(pivot);
    }

private:
    struct Uniform {
        double c, d;
    };
    struct Degenerate {
        double value;
    };
    struct Discrete {
        std::vector<double> points;
        std::vector<double> probabilities;
    };

    explicit RandomVariable(Uniform u) : dist_(u) {}
    explicit RandomVariable(Degenerate g) : dist_(g) {}
    explicit RandomVariable(Discrete d) : dist_(std::move(d)) {}

    std::variant<Uniform, Degenerate, Discrete> dist_;
};

inline double prob_mean(const RandomVariable& x) { return x.mean(); }
inline double prob_variance(const RandomVariable& x) { return x.variance(); }

template <class G>
double prob_expect(G&& g, const RandomVariable& x, const QuadratureSpec& spec = {}) {
    return x.expect(std::forward<G>(g), spec);
}

}  // namespace mixrisk
