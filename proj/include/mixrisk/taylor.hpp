#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mixrisk/error.hpp"
#include "mixrisk/solver.hpp"

namespace mixrisk {

// Second-order verification of the small-risk approximations: the expected
// second-period marginal utility against its curvature expansion, and the
// convergence of the predicted derivative gaps as the risks shrink.

enum class MarginalApproxKind {
    Full,            // both half-variance curvature terms
    IncomeOnly,      // income curvature term only
    BackgroundOnly,  // background curvature term only
};

// v_1 at the deterministic point plus the selected half-variance terms.
inline double taylor_marginal_approx(const BiUtility& v, double s, double income_mean,
                                     double background_mean, double var_income,
                                     double var_background, MarginalApproxKind kind) {
    const double y = income_mean + s;
    const double x = background_mean;
    const double base = v.d1(y, x);
    const double income_term = 0.5 * v.d111(y, x) * var_income;
    const double background_term = 0.5 * v.d122(y, x) * var_background;
    switch (kind) {
        case MarginalApproxKind::Full: return base + income_term + background_term;
        case MarginalApproxKind::IncomeOnly: return base + income_term;
        case MarginalApproxKind::BackgroundOnly: return base + background_term;
    }
    throw ConfigError("unknown approximation kind");
}

struct TaylorGapResult {
    double epsilon = 0.0;     // risk-spread multiplier applied to the base risks
    double exact = 0.0;       // alternative objective's derivative at s*, quadrature
    double predicted = 0.0;   // curvature-expansion prediction at the same s*
    double abs_error = 0.0;
    std::optional<double> rel_error;  // defined only for decisively nonzero exact
};

struct IndicatorConvergence {
    IndicatorKind kind = IndicatorKind::AddIncome;
    std::vector<TaylorGapResult> samples;  // one per epsilon, in input order
    std::vector<double> orders;            // empirical order between neighbours
    bool exact_to_tolerance = false;       // errors never rose above noise floor
};

struct EpsilonStudy {
    std::vector<double> epsilons;
    std::vector<IndicatorConvergence> indicators;
};

namespace detail {

inline Situation alternative_situation(IndicatorKind kind) {
    switch (kind) {
        case IndicatorKind::AddIncome: return Situation::BackgroundOnly;
        case IndicatorKind::TwoSource: return Situation::Certainty;
        case IndicatorKind::AddBackground: return Situation::IncomeOnly;
    }
    throw ConfigError("unknown indicator kind");
}

}  // namespace detail

// For each spread multiplier: solve the full-risk problem, evaluate the
// alternative objective's derivative there exactly and via the curvature
// prediction, and estimate the convergence order of the error.
inline EpsilonStudy epsilon_scaling_study(const SavingScenario& scn,
                                          const std::vector<double>& epsilons,
                                          double noise_floor = 1e-12) {
    if (epsilons.empty()) throw ConfigError("epsilon list must be non-empty");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0)) throw ConfigError("epsilons must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
            throw ConfigError("epsilons must be strictly decreasing");
        }
    }
    EpsilonStudy study;
    study.epsilons = epsilons;

    std::vector<IndicatorKind> kinds{IndicatorKind::AddIncome, IndicatorKind::TwoSource};
    if (scn.model != ModelKind::Probabilistic) {
        kinds.push_back(IndicatorKind::AddBackground);
    }
    for (IndicatorKind kind : kinds) {
        study.indicators.push_back({kind, {}, {}, false});
    }

    for (double eps : epsilons) {
        SavingScenario scaled = scn.with_risk_scale(eps);
        const double s_star =
            solve_optimal_saving(scaled, Situation::FullRisk).s_opt;
        const double income_mean = scaled.income_mean();
        const double background_mean = scaled.background_mean();
        const double var_income = scaled.income_variance();
        const double var_background = scaled.background_variance();

        for (auto& conv : study.indicators) {
            TaylorGapResult r;
            r.epsilon = eps;
            r.exact = lifetime_utility_derivative(
                scaled, detail::alternative_situation(conv.kind), s_star);
            r.predicted = derivative_gap(conv.kind, scaled.second_period, s_star,
                                         income_mean, background_mean, var_income,
                                         var_background);
            r.abs_error = std::abs(r.exact - r.predicted);
            if (std::abs(r.exact) > 1e-12) {
                r.rel_error = r.abs_error / std::abs(r.exact);
            }
            conv.samples.push_back(r);
        }
    }

    for (auto& conv : study.indicators) {
        bool all_tiny = true;
        for (const auto& s : conv.samples) {
            if (s.abs_error > noise_floor) all_tiny = false;
        }
        conv.exact_to_tolerance = all_tiny;
        for (std::size_t i = 0; i + 1 < conv.samples.size(); ++i) {
            const auto& coarse = conv.samples[i];
            const auto& fine = conv.samples[i + 1];
            if (coarse.abs_error <= noise_floor || fine.abs_error <= noise_floor) {
                continue;  // order undefined at quadrature noise level
            }
            double order = std::log(coarse.abs_error / fine.abs_error) /
                           std::log(coarse.epsilon / fine.epsilon);
            conv.orders.push_back(order);
        }
    }
    return study;
}

// ---------------------------------------------------------------------------
// Closed-form threshold for the CARA x CRRA utility with a rectangular fuzzy
// income risk on [c, d] and a uniform background risk on the same interval.
// ---------------------------------------------------------------------------

struct CaraCrraThresholdReport {
    double alpha = 0.0;
    double gamma_c = 0.0;
    double c = 0.0;
    double d = 0.0;
    double var_fuzzy = 0.0;       // (d - c)^2 / 4
    double var_random = 0.0;      // (d - c)^2 / 12
    double predicate_lhs = 0.0;   // alpha^2 / (gamma_c (1 - gamma_c))
    double predicate_rhs = 0.0;   // 4 / (3 (c + d)^2)
    double predicate = 0.0;       // lhs - rhs; sign predicts two-source saving
    double threshold_sum = 0.0;   // the c + d value where the predicate crosses 0
    double combination = 0.0;     // v_111 var_fuzzy + v_122 var_random at (y_eval, mean)
    double eval_y = 0.0;
    std::optional<double> solved_two_source;  // set when a full scenario is given
};

// Optional certainty-side data turning the threshold check into a solved
// two-source indicator.
struct ThresholdScenarioInputs {
    BiUtility first_period = BiUtility::log_additive();
    double y0 = 0.0;
    double x0 = 0.0;
    SolverSettings solver;
};

inline CaraCrraThresholdReport cara_crra_threshold(
    double alpha, double gamma_c, double c, double d,
    std::optional<ThresholdScenarioInputs> scenario = std::nullopt) {
    if (!(alpha > 0.0)) throw ConfigError("threshold report needs alpha > 0");
    if (!(gamma_c > 0.0 && gamma_c < 1.0)) {
        throw ConfigError("threshold report needs gamma_c in (0, 1)");
    }
    if (!(0.0 < c && c < d)) throw ConfigError("threshold report needs 0 < c < d");

    CaraCrraThresholdReport rep;
    rep.alpha = alpha;
    rep.gamma_c = gamma_c;
    rep.c = c;
    rep.d = d;
    const double spread = d - c;
    rep.var_fuzzy = spread * spread / 4.0;
    rep.var_random = spread * spread / 12.0;
    rep.predicate_lhs = alpha * alpha / (gamma_c * (1.0 - gamma_c));
    rep.predicate_rhs = 4.0 / (3.0 * (c + d) * (c + d));
    rep.predicate = rep.predicate_lhs - rep.predicate_rhs;
    rep.threshold_sum = (2.0 / alpha) * std::sqrt(gamma_c * (1.0 - gamma_c) / 3.0);

    const double mean = 0.5 * (c + d);
    BiUtility v = BiUtility::cara_crra_product(alpha, gamma_c);
    rep.eval_y = mean;

    if (scenario) {
        SavingScenario scn;
        scn.model = ModelKind::MixedI;
        scn.y0 = scenario->y0;
        scn.x0 = scenario->x0;
        scn.first_period = scenario->first_period;
        scn.second_period = v;
        scn.weighting = WeightingFunction::power(1.0);
        scn.income_fuzzy = FuzzyNumber::rectangular(c, d);
        scn.background_random = RandomVariable::uniform(c, d);
        scn.solver = scenario->solver;
        scn.shape_override = true;
        PrecautionaryReport pr = precautionary_report(scn);
        rep.solved_two_source = pr.indicator(IndicatorKind::TwoSource).value;
        rep.eval_y = pr.eval_y;
    }
    rep.combination = v.d111(rep.eval_y, mean) * rep.var_fuzzy +
                      v.d122(rep.eval_y, mean) * rep.var_random;
    return rep;
}

}  // namespace mixrisk
