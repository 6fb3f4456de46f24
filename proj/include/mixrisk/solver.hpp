#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixrisk/error.hpp"
#include "mixrisk/fuzzy.hpp"
#include "mixrisk/mixed.hpp"
#include "mixrisk/random.hpp"
#include "mixrisk/utility.hpp"

namespace mixrisk {

// Two-period saving problems: objectives, first-order conditions, optimal
// saving and the three precautionary indicators with their sign conditions.

enum class ModelKind {
    Probabilistic,  // both risks random
    MixedI,         // fuzzy income, random background
    MixedII,        // random income, fuzzy background
};

enum class Situation {
    FullRisk,        // both second-period risks live
    IncomeOnly,      // background pinned at its mean
    BackgroundOnly,  // income pinned at its mean
    Certainty,       // both pinned at their means
};

enum class IndicatorKind {
    AddIncome,      // full-risk optimum minus background-only optimum
    TwoSource,      // full-risk optimum minus certainty optimum
    AddBackground,  // full-risk optimum minus income-only optimum
};

inline const char* to_string(ModelKind m) {
    switch (m) {
        case ModelKind::Probabilistic: return "probabilistic";
        case ModelKind::MixedI: return "mixed-I";
        case ModelKind::MixedII: return "mixed-II";
    }
    return "unknown";
}

inline const char* to_string(Situation s) {
    switch (s) {
        case Situation::FullRisk: return "full_risk";
        case Situation::IncomeOnly: return "income_only";
        case Situation::BackgroundOnly: return "background_only";
        case Situation::Certainty: return "certainty";
    }
    return "unknown";
}

inline const char* to_string(IndicatorKind k) {
    switch (k) {
        case IndicatorKind::AddIncome: return "add_income";
        case IndicatorKind::TwoSource: return "two_source";
        case IndicatorKind::AddBackground: return "add_background";
    }
    return "unknown";
}

struct SolverSettings {
    double tolerance = 1e-10;
    std::optional<std::pair<double, double>> bounds;  // saving bounds [s_lo, s_hi]
    int quadrature_nodes = 64;
    double quadrature_tol = 1e-9;
    int max_iterations = 200;
};

struct SavingScenario {
    ModelKind model = ModelKind::MixedI;
    double y0 = 0.0;  // first-period income endowment
    double x0 = 0.0;  // first-period background endowment
    BiUtility first_period = BiUtility::log_additive();   // u
    BiUtility second_period = BiUtility::log_additive();  // v
    WeightingFunction weighting = WeightingFunction::power(1.0);

    // Risk slots; which pair is set must match the model kind.
    std::optional<FuzzyNumber> income_fuzzy;
    std::optional<RandomVariable> income_random;
    std::optional<FuzzyNumber> background_fuzzy;
    std::optional<RandomVariable> background_random;

    std::optional<Situation> situation;  // unset for whole-family runs
    SolverSettings solver;

    // Accepts a second-period utility that fails monotonicity in x or joint
    // concavity on the validation grid (the income-direction shape conditions
    // stay mandatory).
    bool shape_override = false;

    QuadratureSpec quad() const {
        return {solver.quadrature_nodes, solver.quadrature_tol, true};
    }
    MixedQuadratureSpec mixed_quad() const { return {quad(), quad()}; }

    double income_mean() const {
        switch (model) {
            case ModelKind::MixedI:
                return possibilistic_mean(weighting, *income_fuzzy, quad());
            default:
                return income_random->mean();
        }
    }

    double background_mean() const {
        switch (model) {
            case ModelKind::MixedII:
                return possibilistic_mean(weighting, *background_fuzzy, quad());
            default:
                return background_random->mean();
        }
    }

    double income_variance() const {
        switch (model) {
            case ModelKind::MixedI:
                return possibilistic_variance(weighting, *income_fuzzy, quad());
            default:
                return income_random->variance();
        }
    }

    double background_variance() const {
        switch (model) {
            case ModelKind::MixedII:
                return possibilistic_variance(weighting, *background_fuzzy, quad());
            default:
                return background_random->variance();
        }
    }

    Interval income_support() const {
        return model == ModelKind::MixedI ? income_fuzzy->support()
                                          : income_random->support();
    }

    Interval background_support() const {
        return model == ModelKind::MixedII ? background_fuzzy->support()
                                           : background_random->support();
    }

    // Contract both risks about their means; means are preserved.
    SavingScenario with_risk_scale(double factor) const {
        SavingScenario out = *this;
        const double im = income_mean();
        const double bm = background_mean();
        if (out.income_fuzzy) out.income_fuzzy = out.income_fuzzy->scaled_about(im, factor);
        if (out.income_random) {
            out.income_random = out.income_random->scaled_about(im, factor);
        }
        if (out.background_fuzzy) {
            out.background_fuzzy = out.background_fuzzy->scaled_about(bm, factor);
        }
        if (out.background_random) {
            out.background_random = out.background_random->scaled_about(bm, factor);
        }
        return out;
    }

    void validate() const {
        auto need = [&](bool cond, const char* msg) {
            if (!cond) throw ConfigError(msg);
        };
        switch (model) {
            case ModelKind::MixedI:
                need(income_fuzzy && background_random,
                     "mixed-I needs fuzzy income risk and random background risk");
                break;
            case ModelKind::MixedII:
                need(income_random && background_fuzzy,
                     "mixed-II needs random income risk and fuzzy background risk");
                break;
            case ModelKind::Probabilistic:
                need(income_random && background_random,
                     "probabilistic model needs random income and background risks");
                break;
        }
        need(std::isfinite(y0) && std::isfinite(x0), "endowments must be finite");
        need(solver.tolerance > 0.0, "solver tolerance must be positive");
        need(solver.quadrature_nodes > 0, "quadrature node count must be positive");
        if (solver.bounds && !(solver.bounds->first < solver.bounds->second)) {
            throw ConfigError("saving bounds need s_lo < s_hi");
        }
        if (!first_period.domain().contains(y0, x0)) {
            throw DomainError("first-period endowment (y0, x0) lies outside u's domain");
        }
        Interval bg = background_support();
        const DomainBox& vbox = second_period.domain();
        if (bg.lo < vbox.x_lo || bg.hi > vbox.x_hi) {
            throw DomainError("background risk support leaves v's domain box");
        }
    }
};

struct SavingSolution {
    double s_opt = 0.0;
    double objective = 0.0;
    double foc_residual = 0.0;
    double second_derivative = 0.0;
    int iterations = 0;
    std::pair<double, double> bracket{0.0, 0.0};
};

namespace detail {

inline bool income_live(Situation s) {
    return s == Situation::FullRisk || s == Situation::IncomeOnly;
}
inline bool background_live(Situation s) {
    return s == Situation::FullRisk || s == Situation::BackgroundOnly;
}

// Expectation of g(income draw, background draw) under the situation's live
// risks, with pinned sides held at their means.
template <class G>
double second_period_expectation(const SavingScenario& scn, Situation sit, G&& g) {
    const bool inc = income_live(sit);
    const bool bg = background_live(sit);
    const auto q = scn.quad();
    switch (scn.model) {
        case ModelKind::MixedI: {
            const FuzzyNumber& a = *scn.income_fuzzy;
            const RandomVariable& x = *scn.background_random;
            if (inc && bg) {
                return mixed_expected_utility(scn.weighting, g, a, x, scn.mixed_quad());
            }
            if (inc) {
                const double xbar = x.mean();
                return possibilistic_expected_utility(
                    scn.weighting, [&](double yv) { return g(yv, xbar); }, a, q);
            }
            const double mean = possibilistic_mean(scn.weighting, a, q);
            if (bg) return x.expect([&](double xv) { return g(mean, xv); }, q);
            return g(mean, x.mean());
        }
        case ModelKind::MixedII: {
            const RandomVariable& y = *scn.income_random;
            const FuzzyNumber& b = *scn.background_fuzzy;
            if (inc && bg) {
                return mixed_expected_utility_dual(scn.weighting, g, y, b,
                                                   scn.mixed_quad());
            }
            const double bmean = possibilistic_mean(scn.weighting, b, q);
            if (inc) return y.expect([&](double yv) { return g(yv, bmean); }, q);
            if (bg) {
                const double ybar = y.mean();
                return possibilistic_expected_utility(
                    scn.weighting, [&](double xv) { return g(ybar, xv); }, b, q);
            }
            return g(y.mean(), bmean);
        }
        case ModelKind::Probabilistic: {
            const RandomVariable& y = *scn.income_random;
            const RandomVariable& x = *scn.background_random;
            if (inc && bg) {
                return y.expect(
                    [&](double yv) {
                        return x.expect([&](double xv) { return g(yv, xv); }, q);
                    },
                    q);
            }
            if (inc) {
                const double xbar = x.mean();
                return y.expect([&](double yv) { return g(yv, xbar); }, q);
            }
            const double ybar = y.mean();
            if (bg) return x.expect([&](double xv) { return g(ybar, xv); }, q);
            return g(ybar, x.mean());
        }
    }
    throw ConfigError("unknown model kind");
}

}  // namespace detail

namespace detail {

inline void check_saving_bounds(const SavingScenario& scn, double s) {
    if (scn.solver.bounds &&
        (s < scn.solver.bounds->first || s > scn.solver.bounds->second)) {
        throw DomainError("saving " + std::to_string(s) +
                          " lies outside the configured bounds [" +
                          std::to_string(scn.solver.bounds->first) + ", " +
                          std::to_string(scn.solver.bounds->second) + "]");
    }
}

}  // namespace detail

// Expected lifetime utility of saving s under the given situation.
inline double lifetime_utility(const SavingScenario& scn, Situation sit, double s) {
    detail::check_saving_bounds(scn, s);
    const double first = scn.first_period.value(scn.y0 - s, scn.x0);
    const BiUtility& v = scn.second_period;
    return first + detail::second_period_expectation(
                       scn, sit, [&](double inc, double bg) {
                           return v.value(inc + s, bg);
                       });
}

inline double lifetime_utility(const SavingScenario& scn, double s) {
    if (!scn.situation) throw ConfigError("scenario has no situation selected");
    return lifetime_utility(scn, *scn.situation, s);
}

// dU/ds, with the analytic marginal utility under the integral.
inline double lifetime_utility_derivative(const SavingScenario& scn, Situation sit,
                                          double s) {
    detail::check_saving_bounds(scn, s);
    const double first = -scn.first_period.d1(scn.y0 - s, scn.x0);
    const BiUtility& v = scn.second_period;
    return first + detail::second_period_expectation(
                       scn, sit, [&](double inc, double bg) {
                           return v.d1(inc + s, bg);
                       });
}

inline double lifetime_utility_derivative(const SavingScenario& scn, double s) {
    if (!scn.situation) throw ConfigError("scenario has no situation selected");
    return lifetime_utility_derivative(scn, *scn.situation, s);
}

namespace detail {

struct FeasibleRange {
    double lo;
    double hi;
};

// Savings for which both periods' utility arguments stay strictly inside the
// domain boxes, with a small safety margin.
inline FeasibleRange feasible_saving_range(const SavingScenario& scn) {
    const double margin = 1e-6;
    const DomainBox& ubox = scn.first_period.domain();
    const DomainBox& vbox = scn.second_period.domain();
    Interval inc = scn.income_support();
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    if (std::isfinite(ubox.y_hi)) lo = std::max(lo, scn.y0 - ubox.y_hi + margin);
    if (std::isfinite(ubox.y_lo)) hi = std::min(hi, scn.y0 - ubox.y_lo - margin);
    if (std::isfinite(vbox.y_lo)) lo = std::max(lo, vbox.y_lo - inc.lo + margin);
    if (std::isfinite(vbox.y_hi)) hi = std::min(hi, vbox.y_hi - inc.hi - margin);
    if (scn.solver.bounds) {
        lo = std::max(lo, scn.solver.bounds->first);
        hi = std::min(hi, scn.solver.bounds->second);
    }
    if (!(lo < hi)) {
        throw ConfigError("no feasible saving range: domain boxes leave no room");
    }
    return {lo, hi};
}

// Income-direction shape checks along the solve path; x-direction weaknesses
// are waived only with the scenario's override flag.
inline void check_shape_assumptions(const SavingScenario& scn,
                                    const FeasibleRange& range) {
    const BiUtility& u = scn.first_period;
    const int samples = 17;
    double lo = std::isfinite(range.lo) ? range.lo : -1.0;
    double hi = std::isfinite(range.hi) ? range.hi : 1.0;
    for (int i = 0; i < samples; ++i) {
        double s = lo + (hi - lo) * (i + 0.5) / samples;
        double y = scn.y0 - s;
        if (!(u.d1(y, scn.x0) > 0.0)) {
            throw ModelError("first-period utility is not strictly increasing in "
                             "income over the saving range");
        }
        if (!(u.d11(y, scn.x0) < 0.0)) {
            throw ModelError("first-period utility is not strictly concave in "
                             "income over the saving range");
        }
    }

    Interval inc = scn.income_support();
    Interval bg = scn.background_support();
    DomainBox window;
    window.y_lo = inc.lo + lo;
    window.y_hi = inc.hi + hi;
    window.x_lo = bg.lo;
    window.x_hi = bg.hi;
    const DomainBox& vbox = scn.second_period.domain();
    window.y_lo = std::max(window.y_lo, vbox.y_lo);
    window.y_hi = std::min(window.y_hi, vbox.y_hi);
    window.x_lo = std::max(window.x_lo, vbox.x_lo);
    window.x_hi = std::min(window.x_hi, vbox.x_hi);
    // Degenerate sides get a thin probe band.
    if (!(window.x_lo < window.x_hi)) {
        double pad = std::max(1e-3, 1e-3 * std::abs(window.x_lo));
        window.x_lo = std::max(vbox.x_lo, window.x_lo - pad);
        window.x_hi = std::min(vbox.x_hi, window.x_hi + pad);
    }
    if (!(window.y_lo < window.y_hi)) {
        double pad = std::max(1e-3, 1e-3 * std::abs(window.y_lo));
        window.y_lo = std::max(vbox.y_lo, window.y_lo - pad);
        window.y_hi = std::min(vbox.y_hi, window.y_hi + pad);
    }
    auto report = validate_utility(scn.second_period, window, 9);
    if (!report.solver_ready(scn.shape_override)) {
        std::string detail;
        if (!report.increasing_in_income) detail += " v_1<=0";
        if (!report.concave_in_income) detail += " v_11>=0";
        if (!report.increasing_in_background) detail += " v_2<=0";
        if (!report.jointly_concave) detail += " hessian-not-negative-definite";
        throw ModelError("second-period utility rejected for solver use:" + detail +
                         (scn.shape_override ? "" : " (no override set)"));
    }
}

}  // namespace detail

// Locates the unique stationary point of the strictly concave objective by
// safeguarded secant steps inside a sign-change bracket. The bracket is the
// configured bounds when given, otherwise a window around zero, expanded
// within domain limits until the derivative changes sign.
inline SavingSolution solve_optimal_saving(const SavingScenario& scn, Situation sit) {
    scn.validate();
    auto range = detail::feasible_saving_range(scn);
    detail::check_shape_assumptions(scn, range);

    auto deriv = [&](double s) { return lifetime_utility_derivative(scn, sit, s); };

    double lo, hi;
    if (scn.solver.bounds) {
        lo = scn.solver.bounds->first;
        hi = scn.solver.bounds->second;
    } else {
        // Start away from the feasible edges: marginal utilities blow up
        // there and the derivative's sign flips long before them anyway.
        const double width =
            std::max({1.0, std::abs(scn.y0), std::abs(scn.income_mean())});
        const double span = range.hi - range.lo;
        const double pull = std::isfinite(span) ? 0.02 * span : 0.02 * width;
        const double lo0 = std::isfinite(range.lo) ? range.lo + pull : -width;
        const double hi0 = std::isfinite(range.hi) ? range.hi - pull : width;
        lo = std::max(lo0, -width);
        hi = std::min(hi0, width);
        if (!(lo < hi)) {
            lo = lo0;
            hi = hi0;
        }
    }

    int evals = 0;
    double g_lo = deriv(lo);
    double g_hi = deriv(hi);
    evals += 2;

    // The derivative is strictly decreasing, so a missing sign change means
    // the optimum lies beyond the current end; grow toward the domain limit,
    // halving the remaining gap so the near-singular margin itself is never
    // evaluated.
    auto expand = [&](double& end, double& value, double limit, double direction) {
        double step = std::max(1.0, hi - lo);
        for (int k = 0; k < 80 && value * direction > 0.0; ++k) {
            double remaining = std::abs(limit - end);
            if (!(remaining > 1e-12 * std::max(1.0, std::abs(end)))) break;
            double move = std::isfinite(remaining) ? std::min(step, 0.5 * remaining)
                                                   : step;
            end += direction * move;
            value = deriv(end);
            ++evals;
            step *= 2.0;
        }
    };
    if (g_lo < 0.0) expand(lo, g_lo, range.lo, -1.0);
    if (g_hi > 0.0) expand(hi, g_hi, range.hi, +1.0);

    const auto scale_at = [&](double s) {
        return std::max(1.0, std::abs(scn.first_period.d1(scn.y0 - s, scn.x0)));
    };
    const double tol = scn.solver.tolerance;
    const std::pair<double, double> bracket{lo, hi};

    auto finalize = [&](double s, double g_s) {
        SavingSolution sol;
        sol.s_opt = s;
        sol.foc_residual = g_s;
        sol.iterations = evals;
        sol.bracket = bracket;
        sol.objective = lifetime_utility(scn, sit, s);
        double h = 1e-5 * std::max(1.0, std::abs(s));
        h = std::min({h, 0.5 * (range.hi - s), 0.5 * (s - range.lo)});
        if (h <= 0.0) h = 1e-8;
        sol.second_derivative = (deriv(s + h) - deriv(s - h)) / (2.0 * h);
        evals += 2;
        sol.iterations = evals;
        if (!(sol.second_derivative < 0.0)) {
            throw ModelError("objective is not strictly concave at the optimum "
                             "(second derivative estimate " +
                             std::to_string(sol.second_derivative) + ")");
        }
        return sol;
    };

    if (g_lo < 0.0 || g_hi > 0.0) {
        // No sign change even at the domain limits; a stationary boundary
        // still counts, anything else has no interior optimum.
        if (std::abs(g_lo) <= tol * scale_at(lo)) return finalize(lo, g_lo);
        if (std::abs(g_hi) <= tol * scale_at(hi)) return finalize(hi, g_hi);
        throw SolverError(
            std::string("no interior optimum: derivative signs at bracket ends are ") +
            (g_lo > 0.0 ? "+" : "-") + "/" + (g_hi > 0.0 ? "+" : "-") + " on [" +
            std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    double s = 0.5 * (lo + hi);
    double g_s = deriv(s);
    ++evals;
    double prev_s = lo, prev_g = g_lo;
    int iter = 0;
    for (; iter < scn.solver.max_iterations; ++iter) {
        if (std::abs(g_s) <= tol * scale_at(s)) break;
        if (g_s > 0.0) {
            lo = s;
            g_lo = g_s;
        } else {
            hi = s;
            g_hi = g_s;
        }
        double next;
        double denom = g_s - prev_g;
        if (denom != 0.0 && std::isfinite(denom)) {
            next = s - g_s * (s - prev_s) / denom;
        } else {
            next = 0.5 * (lo + hi);
        }
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        prev_s = s;
        prev_g = g_s;
        s = next;
        g_s = deriv(s);
        ++evals;
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(s))) break;
    }
    if (std::abs(g_s) > tol * scale_at(s)) {
        throw SolverError("first-order condition not met after " +
                          std::to_string(iter) + " iterations; residual " +
                          std::to_string(g_s));
    }
    return finalize(s, g_s);
}

inline SavingSolution solve_optimal_saving(const SavingScenario& scn) {
    if (!scn.situation) throw ConfigError("scenario has no situation selected");
    return solve_optimal_saving(scn, *scn.situation);
}

// ---------------------------------------------------------------------------
// Sign conditions and the precautionary report
// ---------------------------------------------------------------------------

// Left-hand quantity whose sign the equivalence results tie to the indicator,
// evaluated at (income mean + full-risk optimum, background mean).
inline double sign_condition(IndicatorKind kind, const BiUtility& v, double y,
                             double x, double var_income, double var_background) {
    switch (kind) {
        case IndicatorKind::AddIncome: return v.d111(y, x);
        case IndicatorKind::AddBackground: return v.d122(y, x);
        case IndicatorKind::TwoSource:
            return v.d111(y, x) * var_income + v.d122(y, x) * var_background;
    }
    throw ConfigError("unknown indicator kind");
}

// Variance slots keyed by which side is fuzzy (mixed models only): mixed-I
// pairs the fuzzy variance with the income side, mixed-II with the background.
inline double sign_condition(ModelKind model, IndicatorKind kind, const BiUtility& v,
                             double y, double x, double var_fuzzy,
                             double var_random) {
    if (!(var_fuzzy >= 0.0) || !(var_random >= 0.0)) {
        throw ConfigError("variances must be non-negative");
    }
    double var_income = var_fuzzy, var_background = var_random;
    if (model == ModelKind::MixedII) std::swap(var_income, var_background);
    return sign_condition(kind, v, y, x, var_income, var_background);
}

struct IndicatorResult {
    IndicatorKind kind = IndicatorKind::AddIncome;
    double value = 0.0;       // saving difference against the full-risk optimum
    bool is_zero = false;     // |value| within the tie tolerance
    double predicate = 0.0;   // sign-condition left-hand side
    double taylor_gap = 0.0;  // predicted alternative-objective derivative at s*
    std::optional<bool> sign_agreement;  // set when the gap is decisively nonzero
};

struct SituationSolution {
    Situation situation = Situation::FullRisk;
    SavingSolution solution;
};

struct PrecautionaryReport {
    ModelKind model = ModelKind::MixedI;
    std::vector<SituationSolution> solutions;
    std::vector<IndicatorResult> indicators;
    double income_mean = 0.0;
    double background_mean = 0.0;
    double income_variance = 0.0;
    double background_variance = 0.0;
    double eval_y = 0.0;  // income mean + full-risk optimum
    double eval_x = 0.0;  // background mean
    double tie_tolerance = 0.0;

    const SavingSolution& solution(Situation sit) const {
        for (const auto& s : solutions) {
            if (s.situation == sit) return s.solution;
        }
        throw ConfigError(std::string("situation not solved: ") + to_string(sit));
    }

    const IndicatorResult& indicator(IndicatorKind kind) const {
        for (const auto& i : indicators) {
            if (i.kind == kind) return i;
        }
        throw ConfigError(std::string("indicator not present: ") + to_string(kind));
    }
};

// Taylor-predicted derivative of the alternative objective at the full-risk
// optimum; factor-of-one-half curvature terms throughout.
inline double derivative_gap(IndicatorKind kind, const BiUtility& v, double s_star,
                             double income_mean, double background_mean,
                             double var_income, double var_background) {
    const double y = income_mean + s_star;
    const double x = background_mean;
    const double income_term = 0.5 * v.d111(y, x) * var_income;
    const double background_term = 0.5 * v.d122(y, x) * var_background;
    switch (kind) {
        case IndicatorKind::AddIncome: return -(income_term);
        case IndicatorKind::AddBackground: return -(background_term);
        case IndicatorKind::TwoSource: return -(income_term + background_term);
    }
    throw ConfigError("unknown indicator kind");
}

// Solves every situation of the family and assembles the indicators with
// their predicates, Taylor gaps and agreement flags. The probabilistic
// baseline has no income-only objective, so it reports two indicators.
inline PrecautionaryReport precautionary_report(const SavingScenario& scn) {
    scn.validate();
    PrecautionaryReport report;
    report.model = scn.model;
    report.income_mean = scn.income_mean();
    report.background_mean = scn.background_mean();
    report.income_variance = scn.income_variance();
    report.background_variance = scn.background_variance();
    report.tie_tolerance = 10.0 * scn.solver.tolerance;

    std::vector<Situation> situations{Situation::FullRisk, Situation::IncomeOnly,
                                      Situation::BackgroundOnly, Situation::Certainty};
    if (scn.model == ModelKind::Probabilistic) {
        situations = {Situation::FullRisk, Situation::BackgroundOnly,
                      Situation::Certainty};
    }
    for (Situation sit : situations) {
        try {
            report.solutions.push_back({sit, solve_optimal_saving(scn, sit)});
        } catch (const Error& e) {
            // name the failing situation, keep the original failure category
            throw Error(e.category(), std::string("situation ") + to_string(sit) +
                                          " failed: " + e.what());
        }
    }

    const double s_star = report.solution(Situation::FullRisk).s_opt;
    report.eval_y = report.income_mean + s_star;
    report.eval_x = report.background_mean;

    auto make_indicator = [&](IndicatorKind kind, Situation alternative) {
        IndicatorResult r;
        r.kind = kind;
        r.value = s_star - report.solution(alternative).s_opt;
        r.is_zero = std::abs(r.value) <= report.tie_tolerance;
        r.predicate = sign_condition(kind, scn.second_period, report.eval_y,
                                     report.eval_x, report.income_variance,
                                     report.background_variance);
        r.taylor_gap = derivative_gap(kind, scn.second_period, s_star,
                                      report.income_mean, report.background_mean,
                                      report.income_variance,
                                      report.background_variance);
        if (std::abs(r.taylor_gap) > report.tie_tolerance) {
            // A decisive gap predicts the indicator's sign: the alternative
            // objective's derivative at s* is negative exactly when s* sits
            // past that objective's own optimum.
            bool predicted_positive = r.taylor_gap < 0.0;
            bool observed_positive = r.value > 0.0;
            r.sign_agreement = !r.is_zero && (predicted_positive == observed_positive);
        }
        return r;
    };

    report.indicators.push_back(
        make_indicator(IndicatorKind::AddIncome, Situation::BackgroundOnly));
    report.indicators.push_back(
        make_indicator(IndicatorKind::TwoSource, Situation::Certainty));
    if (scn.model != ModelKind::Probabilistic) {
        report.indicators.push_back(
            make_indicator(IndicatorKind::AddBackground, Situation::IncomeOnly));
    }
    return report;
}

struct CorollaryCheck {
    bool hypotheses_hold = false;   // add-income and add-background predicates >= 0
    bool implication_holds = true;  // two-source predicate >= 0 when they do
    bool violation = false;         // hypotheses hold but implication fails
};

// The combined-risk predicate is a non-negative mix of the single-risk ones,
// so whenever both hypotheses hold the conclusion must as well; a violation
// flags an internal inconsistency.
inline CorollaryCheck corollary_consistency(const PrecautionaryReport& report,
                                            const BiUtility& v) {
    CorollaryCheck check;
    const double p_income = sign_condition(IndicatorKind::AddIncome, v, report.eval_y,
                                           report.eval_x, report.income_variance,
                                           report.background_variance);
    const double p_background = sign_condition(
        IndicatorKind::AddBackground, v, report.eval_y, report.eval_x,
        report.income_variance, report.background_variance);
    const double p_both = sign_condition(IndicatorKind::TwoSource, v, report.eval_y,
                                         report.eval_x, report.income_variance,
                                         report.background_variance);
    check.hypotheses_hold = p_income >= 0.0 && p_background >= 0.0;
    if (check.hypotheses_hold) {
        check.implication_holds = p_both >= 0.0;
        check.violation = !check.implication_holds;
    }
    return check;
}

}  // namespace mixrisk
