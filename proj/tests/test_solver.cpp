#include <doctest.h>

#include <cmath>
#include <random>

#include "mixrisk/solver.hpp"

using namespace mixrisk;

namespace {

std::mt19937_64 rng(550123);

double draw(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
}

// Certainty scenario: constant fuzzy income a, degenerate background xbar.
SavingScenario certainty_scenario(BiUtility u, BiUtility v, double y0, double a,
                                  double x0, double xbar) {
    SavingScenario scn;
    scn.model = ModelKind::MixedI;
    scn.y0 = y0;
    scn.x0 = x0;
    scn.first_period = std::move(u);
    scn.second_period = std::move(v);
    scn.income_fuzzy = FuzzyNumber::constant(a);
    scn.background_random = RandomVariable::degenerate(xbar);
    return scn;
}

SavingScenario mixed1_scenario(BiUtility u, BiUtility v, double y0, double x0,
                               FuzzyNumber a, RandomVariable x) {
    SavingScenario scn;
    scn.model = ModelKind::MixedI;
    scn.y0 = y0;
    scn.x0 = x0;
    scn.first_period = std::move(u);
    scn.second_period = std::move(v);
    scn.income_fuzzy = std::move(a);
    scn.background_random = std::move(x);
    return scn;
}

SavingScenario mixed2_scenario(BiUtility u, BiUtility v, double y0, double x0,
                               RandomVariable y, FuzzyNumber b) {
    SavingScenario scn;
    scn.model = ModelKind::MixedII;
    scn.y0 = y0;
    scn.x0 = x0;
    scn.first_period = std::move(u);
    scn.second_period = std::move(v);
    scn.income_random = std::move(y);
    scn.background_fuzzy = std::move(b);
    return scn;
}

SavingScenario probabilistic_scenario(BiUtility u, BiUtility v, double y0, double x0,
                                      RandomVariable y, RandomVariable x) {
    SavingScenario scn;
    scn.model = ModelKind::Probabilistic;
    scn.y0 = y0;
    scn.x0 = x0;
    scn.first_period = std::move(u);
    scn.second_period = std::move(v);
    scn.income_random = std::move(y);
    scn.background_random = std::move(x);
    return scn;
}

}  // namespace

TEST_CASE("certainty lifetime utility closed form") {
    auto scn = certainty_scenario(BiUtility::log_additive(), BiUtility::log_additive(),
                                  10.0, 4.0, 1.0, 1.0);
    double got = lifetime_utility(scn, Situation::Certainty, 3.0);
    CHECK(got == doctest::Approx(2.0 * std::log(7.0)).epsilon(1e-12));

    // with degenerate risks every situation evaluates identically
    for (double s : {-1.0, 0.0, 2.0, 3.5}) {
        double base = lifetime_utility(scn, Situation::Certainty, s);
        CHECK(lifetime_utility(scn, Situation::FullRisk, s) ==
              doctest::Approx(base).epsilon(1e-9));
        CHECK(lifetime_utility(scn, Situation::IncomeOnly, s) ==
              doctest::Approx(base).epsilon(1e-9));
        CHECK(lifetime_utility(scn, Situation::BackgroundOnly, s) ==
              doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("certainty derivative closed form root") {
    auto scn = certainty_scenario(BiUtility::log_additive(), BiUtility::log_additive(),
                                  10.0, 4.0, 1.0, 1.0);
    CHECK(std::abs(lifetime_utility_derivative(scn, Situation::Certainty, 3.0)) <
          1e-10);
}

TEST_CASE("derivative matches a central difference of the objective") {
    auto scn = mixed1_scenario(BiUtility::log_additive(),
                               BiUtility::cara_crra_product(1.0, 0.75), 1.0, 1.0,
                               FuzzyNumber::rectangular(0.2, 0.25),
                               RandomVariable::uniform(0.2, 0.25));
    scn.shape_override = true;
    for (double s : {0.1, 0.3, 0.5}) {
        for (Situation sit : {Situation::FullRisk, Situation::IncomeOnly,
                              Situation::BackgroundOnly, Situation::Certainty}) {
            double h = 1e-6;
            double numeric = (lifetime_utility(scn, sit, s + h) -
                              lifetime_utility(scn, sit, s - h)) /
                             (2.0 * h);
            double analytic = lifetime_utility_derivative(scn, sit, s);
            CHECK(analytic == doctest::Approx(numeric).epsilon(1e-6));
        }
    }
}

TEST_CASE("quadratic marginal utility makes every situation's derivative equal") {
    // v_1 is linear in income and free of the background argument, so the
    // expectations collapse onto the certainty derivative with no remainder
    auto scn = mixed1_scenario(BiUtility::quadratic(0.01, 0.01),
                               BiUtility::quadratic(0.01, 0.01), 5.0, 2.0,
                               FuzzyNumber::rectangular(1.0, 3.0),
                               RandomVariable::uniform(0.5, 1.5));
    for (double s : {-0.5, 0.0, 1.0, 2.0}) {
        double certainty = lifetime_utility_derivative(scn, Situation::Certainty, s);
        for (Situation sit : {Situation::FullRisk, Situation::IncomeOnly,
                              Situation::BackgroundOnly}) {
            CHECK(lifetime_utility_derivative(scn, sit, s) ==
                  doctest::Approx(certainty).epsilon(1e-13));
        }
    }
}

TEST_CASE("saving outside configured bounds is a domain error") {
    auto scn = certainty_scenario(BiUtility::log_additive(), BiUtility::log_additive(),
                                  10.0, 4.0, 1.0, 1.0);
    scn.solver.bounds = {{0.0, 5.0}};
    CHECK_NOTHROW(lifetime_utility(scn, Situation::Certainty, 3.0));
    CHECK_THROWS_AS(lifetime_utility(scn, Situation::Certainty, 6.0), DomainError);
    CHECK_THROWS_AS(lifetime_utility_derivative(scn, Situation::Certainty, -1.0),
                    DomainError);
    // bounds that contain the optimum act as the solver's bracket
    auto sol = solve_optimal_saving(scn, Situation::Certainty);
    CHECK(sol.s_opt == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(sol.bracket.first == 0.0);
    CHECK(sol.bracket.second == 5.0);
}

TEST_CASE("mixed-I background-only equals the probabilistic counterpart") {
    auto a = FuzzyNumber::triangular(4.0, 1.0, 1.0);
    auto f = WeightingFunction::power(1.0);
    double abar = possibilistic_mean(f, a);
    auto x = RandomVariable::uniform(0.5, 1.5);

    auto mixed = mixed1_scenario(BiUtility::log_additive(), BiUtility::log_additive(),
                                 10.0, 1.0, a, x);
    auto prob = probabilistic_scenario(BiUtility::log_additive(),
                                       BiUtility::log_additive(), 10.0, 1.0,
                                       RandomVariable::degenerate(abar), x);
    for (double s : {0.0, 1.0, 2.5}) {
        CHECK(lifetime_utility(mixed, Situation::BackgroundOnly, s) ==
              doctest::Approx(lifetime_utility(prob, Situation::BackgroundOnly, s))
                  .epsilon(1e-11));
    }
}

TEST_CASE("closed-form certainty optima") {
    SUBCASE("log-additive midpoint rule") {
        auto scn = certainty_scenario(BiUtility::log_additive(),
                                      BiUtility::log_additive(), 10.0, 4.0, 1.0, 1.0);
        auto sol = solve_optimal_saving(scn, Situation::Certainty);
        CHECK(sol.s_opt == doctest::Approx(3.0).epsilon(1e-9));
        CHECK(sol.second_derivative < 0.0);
    }
    SUBCASE("equal endowments save nothing") {
        for (auto family : {BiUtility::log_additive(), BiUtility::cara_additive(1.0, 1.0)}) {
            auto scn = certainty_scenario(family, family, 5.0, 5.0, 1.0, 1.0);
            auto sol = solve_optimal_saving(scn, Situation::Certainty);
            CHECK(std::abs(sol.s_opt) < 1e-8);
        }
    }
    SUBCASE("doubled first-period cara weight") {
        auto scn = certainty_scenario(BiUtility::cara_additive(1.0, 1.0, 2.0),
                                      BiUtility::cara_additive(1.0, 1.0), 10.0, 4.0,
                                      1.0, 1.0);
        auto sol = solve_optimal_saving(scn, Situation::Certainty);
        CHECK(sol.s_opt ==
              doctest::Approx((6.0 - std::log(2.0)) / 2.0).epsilon(1e-9));
    }
}

TEST_CASE("foc residual and concavity hold at every returned optimum") {
    auto scn = mixed1_scenario(BiUtility::log_additive(),
                               BiUtility::cara_crra_product(1.0, 0.75), 1.0, 1.0,
                               FuzzyNumber::rectangular(0.2, 0.25),
                               RandomVariable::uniform(0.2, 0.25));
    scn.shape_override = true;
    for (Situation sit : {Situation::FullRisk, Situation::IncomeOnly,
                          Situation::BackgroundOnly, Situation::Certainty}) {
        auto sol = solve_optimal_saving(scn, sit);
        double scale =
            std::max(1.0, std::abs(scn.first_period.d1(scn.y0 - sol.s_opt, scn.x0)));
        CHECK(std::abs(sol.foc_residual) <= scn.solver.tolerance * scale);
        CHECK(sol.second_derivative < 0.0);
        CHECK(sol.s_opt > sol.bracket.first);
        CHECK(sol.s_opt < sol.bracket.second);
    }
}

TEST_CASE("degenerate risks collapse all situations to one optimum") {
    auto scn = certainty_scenario(BiUtility::log_additive(), BiUtility::log_additive(),
                                  10.0, 4.0, 1.0, 1.0);
    double base = solve_optimal_saving(scn, Situation::Certainty).s_opt;
    for (Situation sit : {Situation::FullRisk, Situation::IncomeOnly,
                          Situation::BackgroundOnly}) {
        CHECK(solve_optimal_saving(scn, sit).s_opt ==
              doctest::Approx(base).epsilon(1e-8));
    }
}

TEST_CASE("quadratic second-period utility produces no precautionary saving") {
    // exact second-order objectives: all three indicators vanish at any risk size
    auto u = BiUtility::quadratic(0.01, 0.01);
    auto v = BiUtility::quadratic(0.01, 0.01);

    SUBCASE("mixed-I") {
        auto scn = mixed1_scenario(u, v, 5.0, 2.0, FuzzyNumber::rectangular(1.0, 3.0),
                                   RandomVariable::uniform(0.5, 1.5));
        for (double eps : {1.0, 0.5, 0.25, 0.1}) {
            auto report = precautionary_report(scn.with_risk_scale(eps));
            for (const auto& ind : report.indicators) {
                CHECK(std::abs(ind.value) <= report.tie_tolerance);
                CHECK(ind.is_zero);
                CHECK(ind.predicate == 0.0);
            }
        }
    }
    SUBCASE("mixed-II") {
        auto scn = mixed2_scenario(u, v, 5.0, 2.0, RandomVariable::uniform(1.0, 3.0),
                                   FuzzyNumber::triangular(1.0, 0.5, 0.5));
        for (double eps : {1.0, 0.25}) {
            auto report = precautionary_report(scn.with_risk_scale(eps));
            for (const auto& ind : report.indicators) {
                CHECK(std::abs(ind.value) <= report.tie_tolerance);
                CHECK(ind.is_zero);
            }
        }
    }
}

TEST_CASE("rectangular-uniform threshold fixture signs") {
    auto make = [](double c, double d) {
        auto scn = mixed1_scenario(BiUtility::log_additive(),
                                   BiUtility::cara_crra_product(1.0, 0.75), 1.0, 1.0,
                                   FuzzyNumber::rectangular(c, d),
                                   RandomVariable::uniform(c, d));
        scn.shape_override = true;
        return scn;
    };

    SUBCASE("low mean level: two-source saving is negative") {
        auto report = precautionary_report(make(0.2, 0.25));
        const auto& add_income = report.indicator(IndicatorKind::AddIncome);
        CHECK(add_income.predicate > 0.0);  // third income partial positive
        CHECK(add_income.value > report.tie_tolerance);

        const auto& two_source = report.indicator(IndicatorKind::TwoSource);
        CHECK(two_source.predicate < 0.0);
        CHECK(two_source.value < -report.tie_tolerance);

        const auto& add_background = report.indicator(IndicatorKind::AddBackground);
        CHECK(add_background.predicate < 0.0);  // cross partial negative
        CHECK(add_background.value < -report.tie_tolerance);

        for (const auto& ind : report.indicators) {
            if (ind.sign_agreement.has_value()) CHECK(*ind.sign_agreement);
        }
    }
    SUBCASE("high mean level: two-source saving turns positive") {
        auto report = precautionary_report(make(0.25, 0.30));
        CHECK(report.indicator(IndicatorKind::TwoSource).predicate > 0.0);
        CHECK(report.indicator(IndicatorKind::TwoSource).value >
              report.tie_tolerance);
        CHECK(report.indicator(IndicatorKind::AddIncome).value >
              report.tie_tolerance);
        CHECK(report.indicator(IndicatorKind::AddBackground).value <
              -report.tie_tolerance);
    }
}

TEST_CASE("small-risk sign agreement across families and model types") {
    struct Fixture {
        BiUtility v;
        bool override_flag;
    };
    std::vector<Fixture> fixtures;
    fixtures.push_back({BiUtility::cara_crra_product(1.0, 0.75), true});
    fixtures.push_back({BiUtility::cara_additive(1.0, 1.0), false});
    fixtures.push_back({BiUtility::log_additive(), false});

    for (const auto& fx : fixtures) {
        for (int model = 0; model < 2; ++model) {
            SavingScenario scn;
            if (model == 0) {
                scn = mixed1_scenario(BiUtility::log_additive(), fx.v, 2.0, 1.0,
                                      FuzzyNumber::rectangular(0.5, 1.5),
                                      RandomVariable::uniform(0.5, 1.5));
            } else {
                scn = mixed2_scenario(BiUtility::log_additive(), fx.v, 2.0, 1.0,
                                      RandomVariable::uniform(0.5, 1.5),
                                      FuzzyNumber::rectangular(0.5, 1.5));
            }
            scn.shape_override = fx.override_flag;
            for (double eps : {0.1, 0.05, 0.025}) {
                auto report = precautionary_report(scn.with_risk_scale(eps));
                for (const auto& ind : report.indicators) {
                    if (ind.sign_agreement.has_value()) {
                        CHECK_MESSAGE(*ind.sign_agreement,
                                      "family=", to_string(fx.v.family()),
                                      " model=", model, " eps=", eps,
                                      " indicator=", to_string(ind.kind));
                    }
                    if (std::abs(ind.predicate) > 1e-2 &&
                        std::abs(ind.taylor_gap) > report.tie_tolerance) {
                        CHECK(std::signbit(ind.value) == std::signbit(ind.predicate));
                    }
                }
            }
        }
    }
}

TEST_CASE("probabilistic baseline reports two indicators") {
    auto scn = probabilistic_scenario(BiUtility::log_additive(),
                                      BiUtility::cara_additive(1.0, 1.0), 2.0, 1.0,
                                      RandomVariable::uniform(0.5, 1.5),
                                      RandomVariable::uniform(0.5, 1.5));
    auto report = precautionary_report(scn.with_risk_scale(0.1));
    CHECK(report.indicators.size() == 2);
    CHECK(report.solutions.size() == 3);
    // cara-additive has positive third income partial: both indicators positive
    CHECK(report.indicator(IndicatorKind::AddIncome).value > 0.0);
    CHECK(report.indicator(IndicatorKind::TwoSource).value > 0.0);
    CHECK_THROWS_AS(report.indicator(IndicatorKind::AddBackground), ConfigError);
}

TEST_CASE("sign condition pairs variances by model orientation") {
    auto v = BiUtility::cara_crra_product(1.0, 0.75);
    double y = 0.5, x = 0.225;
    double vf = 0.01, vr = 0.003;
    double mixed1 = sign_condition(ModelKind::MixedI, IndicatorKind::TwoSource, v, y,
                                   x, vf, vr);
    CHECK(mixed1 ==
          doctest::Approx(v.d111(y, x) * vf + v.d122(y, x) * vr).epsilon(1e-14));
    double mixed2 = sign_condition(ModelKind::MixedII, IndicatorKind::TwoSource, v, y,
                                   x, vf, vr);
    CHECK(mixed2 ==
          doctest::Approx(v.d111(y, x) * vr + v.d122(y, x) * vf).epsilon(1e-14));
    CHECK_THROWS_AS(sign_condition(ModelKind::MixedI, IndicatorKind::TwoSource, v, y,
                                   x, -1.0, 0.0),
                    ConfigError);

    CHECK(sign_condition(IndicatorKind::AddIncome, v, y, x, vf, vr) ==
          doctest::Approx(v.d111(y, x)));
    CHECK(sign_condition(IndicatorKind::AddBackground, v, y, x, vf, vr) ==
          doctest::Approx(v.d122(y, x)));

    auto q = BiUtility::quadratic(0.05, 0.05);
    for (auto kind : {IndicatorKind::AddIncome, IndicatorKind::TwoSource,
                      IndicatorKind::AddBackground}) {
        CHECK(sign_condition(kind, q, 1.0, 1.0, vf, vr) == 0.0);
    }
}

TEST_CASE("corollary implication on randomized predicate draws") {
    int hypothesis_count = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        BiUtility v = [&] {
            switch (trial % 4) {
                case 0:
                    return BiUtility::cara_crra_product(draw(0.3, 2.0),
                                                        draw(0.1, 0.9));
                case 1: return BiUtility::cara_additive(draw(0.3, 2.0), draw(0.3, 2.0));
                case 2: return BiUtility::quadratic(draw(0.01, 0.1), draw(0.01, 0.1));
                default: return BiUtility::log_additive();
            }
        }();
        const DomainBox& box = v.domain();
        double y = draw(std::max(box.y_lo + 0.1, 0.2),
                        std::min(box.y_hi - 0.1, 3.0));
        double x = draw(std::max(box.x_lo + 0.1, 0.2),
                        std::min(box.x_hi - 0.1, 3.0));
        double vi = draw(0.0, 0.05);
        double vb = draw(0.0, 0.05);
        double p_inc = sign_condition(IndicatorKind::AddIncome, v, y, x, vi, vb);
        double p_bg = sign_condition(IndicatorKind::AddBackground, v, y, x, vi, vb);
        double p_two = sign_condition(IndicatorKind::TwoSource, v, y, x, vi, vb);
        if (p_inc >= 0.0 && p_bg >= 0.0) {
            ++hypothesis_count;
            CHECK(p_two >= 0.0);
        }
    }
    CHECK(hypothesis_count > 100);  // the implication is exercised, not vacuous
}

TEST_CASE("corollary consistency check on solved reports") {
    auto scn = mixed1_scenario(BiUtility::log_additive(),
                               BiUtility::cara_additive(1.0, 1.0), 2.0, 1.0,
                               FuzzyNumber::rectangular(0.9, 1.1),
                               RandomVariable::uniform(0.9, 1.1));
    auto report = precautionary_report(scn);
    auto check = corollary_consistency(report, scn.second_period);
    CHECK(check.hypotheses_hold);  // v_111 > 0 and v_122 = 0
    CHECK(check.implication_holds);
    CHECK_FALSE(check.violation);

    // the cara-crra fixture falsifies the hypotheses instead
    auto scn2 = mixed1_scenario(BiUtility::log_additive(),
                                BiUtility::cara_crra_product(1.0, 0.75), 1.0, 1.0,
                                FuzzyNumber::rectangular(0.2, 0.25),
                                RandomVariable::uniform(0.2, 0.25));
    scn2.shape_override = true;
    auto report2 = precautionary_report(scn2);
    auto check2 = corollary_consistency(report2, scn2.second_period);
    CHECK_FALSE(check2.hypotheses_hold);
    CHECK_FALSE(check2.violation);
}

TEST_CASE("numeric corollary consistency at tolerance") {
    // if both single-source indicators are decisively positive, the two-source
    // one cannot be decisively negative
    auto scn = mixed1_scenario(BiUtility::log_additive(),
                               BiUtility::cara_additive(1.0, 1.0), 2.0, 1.0,
                               FuzzyNumber::rectangular(0.7, 1.3),
                               RandomVariable::uniform(0.7, 1.3));
    for (double eps : {0.2, 0.1}) {
        auto report = precautionary_report(scn.with_risk_scale(eps));
        double tol = report.tie_tolerance;
        const auto& inc = report.indicator(IndicatorKind::AddIncome);
        const auto& bg = report.indicator(IndicatorKind::AddBackground);
        const auto& two = report.indicator(IndicatorKind::TwoSource);
        if (inc.value >= tol && bg.value >= tol) CHECK(two.value >= -tol);
    }
}

TEST_CASE("solver error paths") {
    SUBCASE("bounds excluding the root report the boundary signs") {
        auto scn = certainty_scenario(BiUtility::log_additive(),
                                      BiUtility::log_additive(), 10.0, 4.0, 1.0, 1.0);
        scn.solver.bounds = {{1.0, 2.0}};  // true optimum is 3
        CHECK_THROWS_AS(solve_optimal_saving(scn, Situation::Certainty), SolverError);
    }
    SUBCASE("bracket expansion reaches a distant optimum") {
        auto scn = certainty_scenario(BiUtility::cara_additive(0.2, 1.0, 5.0),
                                      BiUtility::cara_additive(0.2, 1.0), 40.0, 2.0,
                                      1.0, 1.0);
        // FOC: 5 e^{-0.2(40-s)} = e^{-0.2(2+s)} -> s = (38 - 5 ln 5)/2
        auto sol = solve_optimal_saving(scn, Situation::Certainty);
        CHECK(sol.s_opt ==
              doctest::Approx((38.0 - 5.0 * std::log(5.0)) / 2.0).epsilon(1e-9));
    }
    SUBCASE("convex first-period utility is a model error") {
        auto convex = BiUtility::user_tabulated(
            [](double y, double x) { return y * y + x; }, {0.1, 20.0, 0.1, 20.0});
        auto scn = certainty_scenario(convex, BiUtility::log_additive(), 10.0, 4.0,
                                      1.0, 1.0);
        CHECK_THROWS_AS(solve_optimal_saving(scn, Situation::Certainty), ModelError);
    }
    SUBCASE("shape-violating second period utility needs the override") {
        auto scn = mixed1_scenario(BiUtility::log_additive(),
                                   BiUtility::cara_crra_product(1.0, 0.75), 1.0, 1.0,
                                   FuzzyNumber::rectangular(0.2, 0.25),
                                   RandomVariable::uniform(0.2, 0.25));
        scn.shape_override = false;
        CHECK_THROWS_AS(solve_optimal_saving(scn, Situation::FullRisk), ModelError);
    }
    SUBCASE("risk slots must match the model kind") {
        SavingScenario scn;
        scn.model = ModelKind::MixedI;
        scn.y0 = 1.0;
        scn.x0 = 1.0;
        scn.income_random = RandomVariable::uniform(0.0, 1.0);  // wrong slot
        scn.background_random = RandomVariable::uniform(0.0, 1.0);
        CHECK_THROWS_AS(scn.validate(), ConfigError);
    }
    SUBCASE("endowment outside the first-period domain") {
        auto scn = certainty_scenario(BiUtility::log_additive(),
                                      BiUtility::log_additive(), 10.0, 4.0, -1.0,
                                      1.0);
        CHECK_THROWS_AS(scn.validate(), DomainError);
    }
    SUBCASE("background support outside the second-period domain") {
        auto scn = mixed1_scenario(BiUtility::log_additive(),
                                   BiUtility::log_additive(), 10.0, 1.0,
                                   FuzzyNumber::rectangular(2.0, 3.0),
                                   RandomVariable::uniform(-1.0, 1.0));
        CHECK_THROWS_AS(scn.validate(), DomainError);
    }
}

TEST_CASE("report solutions carry every situation and the evaluation point") {
    auto scn = mixed1_scenario(BiUtility::log_additive(),
                               BiUtility::cara_additive(1.0, 1.0), 2.0, 1.0,
                               FuzzyNumber::rectangular(0.9, 1.1),
                               RandomVariable::uniform(0.9, 1.1));
    auto report = precautionary_report(scn);
    CHECK(report.solutions.size() == 4);
    CHECK(report.indicators.size() == 3);
    double s_star = report.solution(Situation::FullRisk).s_opt;
    CHECK(report.eval_y == doctest::Approx(report.income_mean + s_star));
    CHECK(report.eval_x == doctest::Approx(report.background_mean));
    CHECK(report.income_mean == doctest::Approx(1.0));
    CHECK(report.background_mean == doctest::Approx(1.0));
    CHECK(report.income_variance == doctest::Approx(0.01));          // (0.2)^2/4
    CHECK(report.background_variance == doctest::Approx(0.04 / 12.0));
}
