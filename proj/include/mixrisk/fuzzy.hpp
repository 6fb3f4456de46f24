#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mixrisk/error.hpp"
#include "mixrisk/quadrature.hpp"

namespace mixrisk {

// Fuzzy numbers represented by their level-set endpoint functions
// [a1(g), a2(g)] for membership grade g in [0, 1], plus the monotone
// weighting densities used by the possibilistic indicators.

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// ---------------------------------------------------------------------------
// WeightingFunction: non-negative, non-decreasing density on [0, 1] with
// unit integral. Power variant f(g) = (n+1) g^n; n = 1 is the default.
// ---------------------------------------------------------------------------
class WeightingFunction {
public:
    static WeightingFunction power(double exponent) {
        if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
            throw ConfigError("weighting exponent must be finite and >= 0");
        }
        WeightingFunction f;
        f.exponent_ = exponent;
        return f;
    }

    // Piecewise-linear density tabulated on an ascending grid covering [0, 1].
    static WeightingFunction tabulated(std::vector<double> gammas,
                                       std::vector<double> values) {
        if (gammas.size() != values.size() || gammas.size() < 2) {
            throw ConfigError("tabulated weighting needs matching grids of size >= 2");
        }
        if (gammas.front() != 0.0 || gammas.back() != 1.0) {
            throw ConfigError("tabulated weighting grid must span [0, 1]");
        }
        double integral = 0.0;
        for (std::size_t i = 0; i + 1 < gammas.size(); ++i) {
            if (!(gammas[i] < gammas[i + 1])) {
                throw ConfigError("tabulated weighting grid must be strictly ascending");
            }
            if (values[i] < 0.0 || values[i + 1] < 0.0) {
                throw ConfigError("tabulated weighting must be non-negative");
            }
            if (values[i + 1] < values[i]) {
                throw ConfigError("tabulated weighting must be non-decreasing");
            }
            integral += 0.5 * (values[i] + values[i + 1]) * (gammas[i + 1] - gammas[i]);
        }
        if (std::abs(integral - 1.0) > 1e-10) {
            throw ConfigError("tabulated weighting must integrate to 1, got " +
                              std::to_string(integral));
        }
        WeightingFunction f;
        f.gammas_ = std::move(gammas);
        f.values_ = std::move(values);
        return f;
    }

    double operator()(double gamma) const {
        if (gammas_.empty()) {
            if (exponent_ == 0.0) return 1.0;
            return (exponent_ + 1.0) * std::pow(gamma, exponent_);
        }
        auto it = std::upper_bound(gammas_.begin(), gammas_.end(), gamma);
        if (it == gammas_.begin()) return values_.front();
        if (it == gammas_.end()) return values_.back();
        std::size_t i = static_cast<std::size_t>(it - gammas_.begin()) - 1;
        double t = (gamma - gammas_[i]) / (gammas_[i + 1] - gammas_[i]);
        return values_[i] + t * (values_[i + 1] - values_[i]);
    }

    bool is_power() const { return gammas_.empty(); }
    double exponent() const { return exponent_; }

    // Interior kinks of the density; quadrature panels split here.
    std::vector<double> breakpoints() const {
        if (gammas_.empty()) return {};
        return std::vector<double>(gammas_.begin() + 1, gammas_.end() - 1);
    }

private:
    WeightingFunction() = default;

    double exponent_ = 1.0;
    std::vector<double> gammas_;  // empty for the power variant
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// FuzzyNumber
// ---------------------------------------------------------------------------
class FuzzyNumber {
public:
    // Level sets constant in g: [c, d] at every grade.
    static FuzzyNumber rectangular(double c, double d) {
        require_finite(c, "rectangular endpoint");
        require_finite(d, "rectangular endpoint");
        if (!(c <= d)) throw ConfigError("rectangular fuzzy number needs c <= d");
        return FuzzyNumber(Trapezoid{c, d, 0.0, 0.0});
    }

    static FuzzyNumber triangular(double center, double left_width, double right_width) {
        require_finite(center, "triangular center");
        if (!(left_width >= 0.0) || !(right_width >= 0.0)) {
            throw ConfigError("triangular widths must be >= 0");
        }
        return FuzzyNumber(Trapezoid{center, center, left_width, right_width});
    }

    static FuzzyNumber trapezoidal(double core_lo, double core_hi,
                                   double left_width, double right_width) {
        require_finite(core_lo, "trapezoidal core");
        require_finite(core_hi, "trapezoidal core");
        if (!(core_lo <= core_hi)) throw ConfigError("trapezoidal core needs m1 <= m2");
        if (!(left_width >= 0.0) || !(right_width >= 0.0)) {
            throw ConfigError("trapezoidal widths must be >= 0");
        }
        return FuzzyNumber(Trapezoid{core_lo, core_hi, left_width, right_width});
    }

    static FuzzyNumber constant(double value) {
        require_finite(value, "constant value");
        return FuzzyNumber(Trapezoid{value, value, 0.0, 0.0});
    }

    // Endpoint functions tabulated on an ascending g-grid covering [0, 1];
    // interpolation is piecewise linear, so nesting of the samples is enough.
    static FuzzyNumber sampled(std::vector<double> gammas,
                               std::vector<double> lower,
                               std::vector<double> upper) {
        if (gammas.size() != lower.size() || gammas.size() != upper.size() ||
            gammas.size() < 2) {
            throw ConfigError("sampled fuzzy number needs matching grids of size >= 2");
        }
        if (gammas.front() != 0.0 || gammas.back() != 1.0) {
            throw ConfigError("sampled fuzzy number grid must span [0, 1]");
        }
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            require_finite(lower[i], "sampled endpoint");
            require_finite(upper[i], "sampled endpoint");
            if (!(lower[i] <= upper[i])) {
                throw ConfigError("sampled fuzzy number needs a1(g) <= a2(g) at every sample");
            }
            if (i > 0) {
                if (!(gammas[i] > gammas[i - 1])) {
                    throw ConfigError("sampled fuzzy number grid must be strictly ascending");
                }
                if (lower[i] < lower[i - 1] || upper[i] > upper[i - 1]) {
                    throw ConfigError("sampled fuzzy number endpoints must nest");
                }
            }
        }
        Sampled s;
        s.gammas = std::move(gammas);
        s.lower = std::move(lower);
        s.upper = std::move(upper);
        return FuzzyNumber(std::move(s));
    }

    // [a1(g), a2(g)]; g = 0 yields the closure of the support.
    Interval level_set(double gamma) const {
        if (!(gamma >= 0.0 && gamma <= 1.0)) {
            throw DomainError("level-set grade must lie in [0, 1], got " +
                              std::to_string(gamma));
        }
        if (const auto* t = std::get_if<Trapezoid>(&shape_)) {
            return {t->core_lo - (1.0 - gamma) * t->left_width,
                    t->core_hi + (1.0 - gamma) * t->right_width};
        }
        const auto& s = std::get<Sampled>(shape_);
        return {interp(s.gammas, s.lower, gamma), interp(s.gammas, s.upper, gamma)};
    }

    double lower(double gamma) const { return level_set(gamma).lo; }
    double upper(double gamma) const { return level_set(gamma).hi; }

    Interval support() const { return level_set(0.0); }

    bool is_constant() const {
        Interval s = support();
        return s.lo == s.hi;
    }

    FuzzyNumber shifted(double offset) const {
        FuzzyNumber out = *this;
        if (auto* t = std::get_if<Trapezoid>(&out.shape_)) {
            t->core_lo += offset;
            t->core_hi += offset;
        } else {
            auto& s = std::get<Sampled>(out.shape_);
            for (auto& v : s.lower) v += offset;
            for (auto& v : s.upper) v += offset;
        }
        return out;
    }

    // Level-set image of scalar multiplication; endpoints swap for factor < 0.
    FuzzyNumber scaled(double factor) const {
        FuzzyNumber out = *this;
        if (auto* t = std::get_if<Trapezoid>(&out.shape_)) {
            if (factor >= 0.0) {
                t->core_lo *= factor;
                t->core_hi *= factor;
                t->left_width *= factor;
                t->right_width *= factor;
            } else {
                Trapezoid flipped;
                flipped.core_lo = factor * t->core_hi;
                flipped.core_hi = factor * t->core_lo;
                flipped.left_width = -factor * t->right_width;
                flipped.right_width = -factor * t->left_width;
                *t = flipped;
            }
        } else {
            auto& s = std::get<Sampled>(out.shape_);
            for (auto& v : s.lower) v *= factor;
            for (auto& v : s.upper) v *= factor;
            if (factor < 0.0) std::swap(s.lower, s.upper);
        }
        return out;
    }

    // Spread contraction about a fixed point: A -> pivot + factor (A - pivot).
    FuzzyNumber scaled_about(double pivot, double factor) const {
        return shifted(-pivot).scaled(factor).shifted(pivot);
    }

    // Interior kinks of the endpoint functions in g.
    std::vector<double> breakpoints() const {
        if (const auto* s = std::get_if<Sampled>(&shape_)) {
            return std::vector<double>(s->gammas.begin() + 1, s->gammas.end() - 1);
        }
        return {};
    }

    bool has_closed_form_moments() const {
        return std::holds_alternative<Trapezoid>(shape_);
    }

    // Exposed for closed-form moment formulas; only valid for parametric shapes.
    struct Trapezoid {
        double core_lo = 0.0;
        double core_hi = 0.0;
        double left_width = 0.0;
        double right_width = 0.0;
    };

    const Trapezoid& trapezoid() const { return std::get<Trapezoid>(shape_); }

    bool is_sampled() const { return std::holds_alternative<Sampled>(shape_); }
    const std::vector<double>& sample_gammas() const {
        return std::get<Sampled>(shape_).gammas;
    }
    const std::vector<double>& sample_lower() const {
        return std::get<Sampled>(shape_).lower;
    }
    const std::vector<double>& sample_upper() const {
        return std::get<Sampled>(shape_).upper;
    }

private:
    struct Sampled {
        std::vector<double> gammas;
        std::vector<double> lower;
        std::vector<double> upper;
    };

    explicit FuzzyNumber(Trapezoid t) : shape_(t) {}
    explicit FuzzyNumber(Sampled s) : shape_(std::move(s)) {}

    static void require_finite(double v, const char* what) {
        if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
    }

    static double interp(const std::vector<double>& xs, const std::vector<double>& ys,
                         double x) {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin()) return ys.front();
        if (it == xs.end()) return ys.back();
        std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
        double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return ys[i] + t * (ys[i + 1] - ys[i]);
    }

    std::variant<Trapezoid, Sampled> shape_;
};

// ---------------------------------------------------------------------------
// Possibilistic indicators
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> merged_breakpoints(const WeightingFunction& f,
                                              const FuzzyNumber& a) {
    std::vector<double> cuts = f.breakpoints();
    std::vector<double> more = a.breakpoints();
    cuts.insert(cuts.end(), more.begin(), more.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

// Moments of (1-g) against a power density (n+1) g^n:
//   int (1-g) f dg = 1/(n+2),  int (1-g)^2 f dg = 2/((n+2)(n+3)).
struct PowerMoments {
    double m1;
    double m2;
};

inline PowerMoments power_moments(double n) {
    return {1.0 / (n + 2.0), 2.0 / ((n + 2.0) * (n + 3.0))};
}

}  // namespace detail

// E(f, u(A)) = (1/2) int [u(a1(g)) + u(a2(g))] f(g) dg
template <class U>
double possibilistic_expected_utility(const WeightingFunction& f, U&& u,
                                      const FuzzyNumber& a,
                                      const QuadratureSpec& spec = {}) {
    auto cuts = detail::merged_breakpoints(f, a);
    auto integrand = [&](double g) {
        Interval iv = a.level_set(g);
        return 0.5 * (u(iv.lo) + u(iv.hi)) * f(g);
    };
    return integrate_checked(integrand, 0.0, 1.0, spec, cuts).value;
}

// f-weighted possibilistic expected value. Parametric shapes under a power
// weighting use the closed form; everything else goes through quadrature.
inline double possibilistic_mean(const WeightingFunction& f, const FuzzyNumber& a,
                                 const QuadratureSpec& spec = {}) {
    if (a.has_closed_form_moments() && f.is_power()) {
        const auto& t = a.trapezoid();
        const auto m = detail::power_moments(f.exponent());
        return 0.5 * (t.core_lo + t.core_hi) +
               0.5 * (t.right_width - t.left_width) * m.m1;
    }
    return possibilistic_expected_utility(f, [](double x) { return x; }, a, spec);
}

// f-weighted possibilistic variance about the possibilistic mean.
inline double possibilistic_variance(const WeightingFunction& f, const FuzzyNumber& a,
                                     const QuadratureSpec& spec = {}) {
    if (a.has_closed_form_moments() && f.is_power()) {
        const auto& t = a.trapezoid();
        const auto m = detail::power_moments(f.exponent());
        const double half_core = 0.5 * (t.core_hi - t.core_lo);
        const double skew = 0.5 * (t.right_width - t.left_width) * m.m1;
        double var = half_core * half_core + skew * skew +
                     0.5 * (t.left_width * t.left_width +
                            t.right_width * t.right_width) * m.m2 +
                     half_core * (t.left_width + t.right_width) * m.m1 +
                     skew * (t.left_width - t.right_width) * m.m1;
        return var;
    }
    const double mean = possibilistic_mean(f, a, spec);
    return possibilistic_expected_utility(
        f, [mean](double x) { return (x - mean) * (x - mean); }, a, spec);
}

}  // namespace mixrisk
