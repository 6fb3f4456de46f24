#pragma once

#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "mixrisk/error.hpp"

namespace mixrisk {

// Bivariate period utilities v(y, x) with partial derivatives through third
// order. Closed-form families carry analytic partials; a user-supplied
// callable falls back to nested central differences.

struct DomainBox {
    double y_lo = -std::numeric_limits<double>::infinity();
    double y_hi = std::numeric_limits<double>::infinity();
    double x_lo = -std::numeric_limits<double>::infinity();
    double x_hi = std::numeric_limits<double>::infinity();

    bool contains(double y, double x) const {
        return y >= y_lo && y <= y_hi && x >= x_lo && x <= x_hi;
    }
};

enum class UtilityFamily {
    CaraCrraProduct,  // v = -(scale/alpha) e^{-alpha y} x^{1-gc} / (1-gc)
    LogAdditive,      // v = scale (ln y + ln x)
    CaraAdditive,     // v = scale (-e^{-alpha y} - e^{-beta x})
    Quadratic,        // v = scale (y - qy y^2 + x - qx x^2)
    UserTabulated,
};

inline const char* to_string(UtilityFamily f) {
    switch (f) {
        case UtilityFamily::CaraCrraProduct: return "cara_crra_product";
        case UtilityFamily::LogAdditive: return "log_additive";
        case UtilityFamily::CaraAdditive: return "cara_additive";
        case UtilityFamily::Quadratic: return "quadratic";
        case UtilityFamily::UserTabulated: return "user_tabulated";
    }
    return "unknown";
}

class BiUtility {
public:
    static BiUtility cara_crra_product(double alpha, double gamma_c,
                                       double scale = 1.0) {
        if (!(alpha > 0.0)) throw ConfigError("cara_crra_product needs alpha > 0");
        if (!(gamma_c > 0.0) || gamma_c == 1.0) {
            throw ConfigError("cara_crra_product needs gamma_c > 0 and != 1");
        }
        BiUtility v(UtilityFamily::CaraCrraProduct, scale);
        v.alpha_ = alpha;
        v.gamma_c_ = gamma_c;
        v.box_.x_lo = 0.0;  // x > 0; the boundary itself is rejected below
        return v;
    }

    static BiUtility log_additive(double scale = 1.0) {
        BiUtility v(UtilityFamily::LogAdditive, scale);
        v.box_.y_lo = 0.0;
        v.box_.x_lo = 0.0;
        return v;
    }

    static BiUtility cara_additive(double alpha, double beta, double scale = 1.0) {
        if (!(alpha > 0.0) || !(beta > 0.0)) {
            throw ConfigError("cara_additive needs alpha > 0 and beta > 0");
        }
        BiUtility v(UtilityFamily::CaraAdditive, scale);
        v.alpha_ = alpha;
        v.beta_ = beta;
        return v;
    }

    // Restricted to the region where both marginal utilities stay positive.
    static BiUtility quadratic(double q_y, double q_x, double scale = 1.0) {
        if (!(q_y >= 0.0) || !(q_x >= 0.0)) throw ConfigError("quadratic needs q >= 0");
        BiUtility v(UtilityFamily::Quadratic, scale);
        v.q_y_ = q_y;
        v.q_x_ = q_x;
        if (q_y > 0.0) v.box_.y_hi = 0.5 / q_y;
        if (q_x > 0.0) v.box_.x_hi = 0.5 / q_x;
        return v;
    }

    static BiUtility user_tabulated(std::function<double(double, double)> fn,
                                    DomainBox box) {
        if (!fn) throw ConfigError("user_tabulated needs a callable");
        if (!(box.y_lo < box.y_hi) || !(box.x_lo < box.x_hi)) {
            throw ConfigError("user_tabulated needs a non-empty domain box");
        }
        BiUtility v(UtilityFamily::UserTabulated, 1.0);
        v.fn_ = std::move(fn);
        v.box_ = box;
        return v;
    }

    UtilityFamily family() const { return family_; }
    const DomainBox& domain() const { return box_; }
    double scale() const { return scale_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma_c() const { return gamma_c_; }
    double q_y() const { return q_y_; }
    double q_x() const { return q_x_; }

    // Shrink the domain box; the new box must sit inside the natural domain.
    BiUtility with_domain(const DomainBox& box) const {
        if (!(box.y_lo < box.y_hi) || !(box.x_lo < box.x_hi)) {
            throw ConfigError("domain box must be non-empty");
        }
        if (box.y_lo < box_.y_lo || box.y_hi > box_.y_hi || box.x_lo < box_.x_lo ||
            box.x_hi > box_.x_hi) {
            throw ConfigError("domain box exceeds the family's natural domain");
        }
        BiUtility out = *this;
        out.box_ = box;
        return out;
    }

    double value(double y, double x) const {
        check_point(y, x);
        switch (family_) {
            case UtilityFamily::CaraCrraProduct:
                return -(scale_ / alpha_) * std::exp(-alpha_ * y) * crra(x);
            case UtilityFamily::LogAdditive:
                return scale_ * (std::log(y) + std::log(x));
            case UtilityFamily::CaraAdditive:
                return scale_ * (-std::exp(-alpha_ * y) - std::exp(-beta_ * x));
            case UtilityFamily::Quadratic:
                return scale_ * (y - q_y_ * y * y + x - q_x_ * x * x);
            case UtilityFamily::UserTabulated:
                return fn_(y, x);
        }
        return 0.0;
    }

    // Partial derivative for a multi-index over {1, 2} of length 1..3; the
    // order of differentiation is immaterial for these C^3 families.
    double partial(std::initializer_list<int> index, double y, double x) const {
        int n1 = 0, n2 = 0;
        for (int i : index) {
            if (i == 1) {
                ++n1;
            } else if (i == 2) {
                ++n2;
            } else {
                throw ConfigError("partial index entries must be 1 or 2");
            }
        }
        int order = n1 + n2;
        if (order < 1 || order > 3) {
            throw ConfigError("partial index length must be 1..3");
        }
        check_point(y, x);
        if (family_ == UtilityFamily::UserTabulated) {
            return finite_difference(n1, n2, y, x);
        }
        return analytic_partial(n1, n2, y, x);
    }

    double d1(double y, double x) const { return partial({1}, y, x); }
    double d2(double y, double x) const { return partial({2}, y, x); }
    double d11(double y, double x) const { return partial({1, 1}, y, x); }
    double d12(double y, double x) const { return partial({1, 2}, y, x); }
    double d22(double y, double x) const { return partial({2, 2}, y, x); }
    double d111(double y, double x) const { return partial({1, 1, 1}, y, x); }
    double d112(double y, double x) const { return partial({1, 1, 2}, y, x); }
    double d122(double y, double x) const { return partial({1, 2, 2}, y, x); }
    double d222(double y, double x) const { return partial({2, 2, 2}, y, x); }

    bool has_analytic_partials() const {
        return family_ != UtilityFamily::UserTabulated;
    }

private:
    BiUtility(UtilityFamily family, double scale) : family_(family), scale_(scale) {
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw ConfigError("utility scale must be positive and finite");
        }
    }

    double crra(double x) const {
        return std::pow(x, 1.0 - gamma_c_) / (1.0 - gamma_c_);
    }

    void check_point(double y, double x) const {
        bool ok = box_.contains(y, x);
        // Positivity bounds are open: the boundary value itself is outside.
        if (family_ == UtilityFamily::LogAdditive && (y <= 0.0 || x <= 0.0)) ok = false;
        if (family_ == UtilityFamily::CaraCrraProduct && x <= 0.0) ok = false;
        if (!ok) {
            throw DomainError("utility " + std::string(to_string(family_)) +
                              " evaluated outside its domain at (y=" +
                              std::to_string(y) + ", x=" + std::to_string(x) + ")");
        }
    }

    double analytic_partial(int n1, int n2, double y, double x) const {
        switch (family_) {
            case UtilityFamily::CaraCrraProduct: {
                const double e = std::exp(-alpha_ * y);
                // y-direction: each derivative multiplies by -alpha, except the
                // leading -(1/alpha) cancels one factor.
                double ypart = 0.0;
                switch (n1) {
                    case 0: ypart = -(1.0 / alpha_) * e; break;
                    case 1: ypart = e; break;
                    case 2: ypart = -alpha_ * e; break;
                    case 3: ypart = alpha_ * alpha_ * e; break;
                }
                double xpart = 0.0;
                const double g = gamma_c_;
                switch (n2) {
                    case 0: xpart = std::pow(x, 1.0 - g) / (1.0 - g); break;
                    case 1: xpart = std::pow(x, -g); break;
                    case 2: xpart = -g * std::pow(x, -g - 1.0); break;
                    case 3: xpart = g * (g + 1.0) * std::pow(x, -g - 2.0); break;
                }
                return scale_ * ypart * xpart;
            }
            case UtilityFamily::LogAdditive: {
                if (n1 > 0 && n2 > 0) return 0.0;
                double t = (n1 > 0) ? y : x;
                int n = n1 + n2;
                // d^n/dt^n ln t: 1/t, -1/t^2, 2/t^3
                double d = (n == 1) ? 1.0 / t : (n == 2) ? -1.0 / (t * t)
                                                         : 2.0 / (t * t * t);
                return scale_ * d;
            }
            case UtilityFamily::CaraAdditive: {
                if (n1 > 0 && n2 > 0) return 0.0;
                double a = (n1 > 0) ? alpha_ : beta_;
                double t = (n1 > 0) ? y : x;
                int n = n1 + n2;
                // d^n/dt^n (-e^{-a t}) = -(-a)^n e^{-a t}
                double sign = (n % 2 == 1) ? 1.0 : -1.0;
                return scale_ * sign * std::pow(a, n) * std::exp(-a * t);
            }
            case UtilityFamily::Quadratic: {
                if (n1 + n2 >= 3) return 0.0;
                if (n1 > 0 && n2 > 0) return 0.0;
                if (n1 == 1) return scale_ * (1.0 - 2.0 * q_y_ * y);
                if (n1 == 2) return scale_ * (-2.0 * q_y_);
                if (n2 == 1) return scale_ * (1.0 - 2.0 * q_x_ * x);
                return scale_ * (-2.0 * q_x_);  // n2 == 2
            }
            case UtilityFamily::UserTabulated: break;
        }
        return 0.0;
    }

    // Nested central differences, step max(1e-5, 1e-5 |coordinate|) per level.
    double finite_difference(int n1, int n2, double y, double x) const {
        if (n1 > 0) {
            double h = std::max(1e-5, 1e-5 * std::abs(y));
            return (finite_difference_or_value(n1 - 1, n2, y + h, x) -
                    finite_difference_or_value(n1 - 1, n2, y - h, x)) /
                   (2.0 * h);
        }
        double h = std::max(1e-5, 1e-5 * std::abs(x));
        return (finite_difference_or_value(n1, n2 - 1, y, x + h) -
                finite_difference_or_value(n1, n2 - 1, y, x - h)) /
               (2.0 * h);
    }

    double finite_difference_or_value(int n1, int n2, double y, double x) const {
        if (n1 + n2 == 0) return fn_(y, x);
        return finite_difference(n1, n2, y, x);
    }

    UtilityFamily family_;
    double scale_ = 1.0;
    double alpha_ = 1.0;
    double beta_ = 1.0;
    double gamma_c_ = 0.5;
    double q_y_ = 0.0;
    double q_x_ = 0.0;
    std::function<double(double, double)> fn_;
    DomainBox box_;
};

// ---------------------------------------------------------------------------
// Grid validation
// ---------------------------------------------------------------------------

struct UtilityValidationReport {
    bool increasing_in_income = true;      // v_1 > 0 everywhere on the grid
    bool increasing_in_background = true;  // v_2 > 0 (warning-level)
    bool concave_in_income = true;         // v_11 < 0
    bool jointly_concave = true;           // Hessian negative definite
    bool derivatives_consistent = true;    // analytic vs finite differences
    double max_derivative_discrepancy = 0.0;

    // Acceptable for solver use: the income-direction conditions are hard,
    // the x-direction ones can be waived with an explicit override.
    bool solver_ready(bool override_flag) const {
        if (!increasing_in_income || !concave_in_income) return false;
        if (!jointly_concave && !override_flag) return false;
        if (!increasing_in_background && !override_flag) return false;
        return true;
    }
};

// Samples an interior grid of the window (default: the utility's own box) and
// checks monotonicity, concavity and analytic-vs-finite-difference agreement.
inline UtilityValidationReport validate_utility(
    const BiUtility& v, std::optional<DomainBox> window = std::nullopt,
    int grid_points = 17) {
    if (grid_points < 2) throw ConfigError("validation grid needs at least 2 points");
    DomainBox box = window.value_or(v.domain());
    // Infinite sides fall back to a fixed finite probe window.
    auto clamp = [](double lo, double hi) -> std::pair<double, double> {
        if (!std::isfinite(lo)) lo = std::isfinite(hi) ? hi - 20.0 : -10.0;
        if (!std::isfinite(hi)) hi = lo + 20.0;
        return {lo, hi};
    };
    auto [y_lo, y_hi] = clamp(box.y_lo, box.y_hi);
    auto [x_lo, x_hi] = clamp(box.x_lo, box.x_hi);
    if (!(y_lo < y_hi) || !(x_lo < x_hi)) throw ConfigError("validation grid is empty");

    UtilityValidationReport report;
    // Keep a margin so finite-difference stencils stay inside the domain.
    const double y_margin = 1e-3 * (y_hi - y_lo);
    const double x_margin = 1e-3 * (x_hi - x_lo);
    for (int i = 0; i < grid_points; ++i) {
        double ty = (i + 0.5) / grid_points;
        double y = y_lo + y_margin + ty * (y_hi - y_lo - 2.0 * y_margin);
        for (int j = 0; j < grid_points; ++j) {
            double tx = (j + 0.5) / grid_points;
            double x = x_lo + x_margin + tx * (x_hi - x_lo - 2.0 * x_margin);

            double v1 = v.d1(y, x);
            double v2 = v.d2(y, x);
            double v11 = v.d11(y, x);
            double v12 = v.d12(y, x);
            double v22 = v.d22(y, x);
            if (!(v1 > 0.0)) report.increasing_in_income = false;
            if (!(v2 > 0.0)) report.increasing_in_background = false;
            if (!(v11 < 0.0)) report.concave_in_income = false;
            if (!(v11 < 0.0 && v11 * v22 - v12 * v12 > 0.0)) {
                report.jointly_concave = false;
            }

            if (v.has_analytic_partials()) {
                auto fd1 = [&](auto&& g, double t, double h) {
                    return (g(t + h) - g(t - h)) / (2.0 * h);
                };
                double hy = std::max(1e-6, 1e-6 * std::abs(y));
                double hx = std::max(1e-6, 1e-6 * std::abs(x));
                double fd_v1 = fd1([&](double t) { return v.value(t, x); }, y, hy);
                double fd_v2 = fd1([&](double t) { return v.value(y, t); }, x, hx);
                double fd_v11 = fd1([&](double t) { return v.d1(t, x); }, y, hy);
                double fd_v12 = fd1([&](double t) { return v.d1(y, t); }, x, hx);
                double fd_v111 = fd1([&](double t) { return v.d11(t, x); }, y, hy);
                double fd_v122 = fd1([&](double t) { return v.d22(t, x); }, y, hy);
                auto record = [&](double analytic, double fd) {
                    double err = std::abs(analytic - fd);
                    if (err > std::max(1e-6, 1e-4 * std::abs(analytic))) {
                        report.derivatives_consistent = false;
                    }
                    report.max_derivative_discrepancy =
                        std::max(report.max_derivative_discrepancy, err);
                };
                record(v1, fd_v1);
                record(v2, fd_v2);
                record(v11, fd_v11);
                record(v12, fd_v12);
                record(v.d111(y, x), fd_v111);
                record(v.d122(y, x), fd_v122);
            }
        }
    }
    return report;
}

}  // namespace mixrisk
