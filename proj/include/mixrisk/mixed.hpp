#pragma once

#include <utility>

#include "mixrisk/fuzzy.hpp"
#include "mixrisk/quadrature.hpp"
#include "mixrisk/random.hpp"

namespace mixrisk {

// Mixed expected utility over a pair of independent risks, one fuzzy and one
// random. The fuzzy part is averaged over its level-set endpoints, with the
// probabilistic expectation nested inside:
//
//   E(f, u(A, X)) = (1/2) int [ M(u(a1(g), X)) + M(u(a2(g), X)) ] f(g) dg
//
// Node counts for the outer (grade) and inner (probabilistic) integrals are
// independent.
struct MixedQuadratureSpec {
    QuadratureSpec outer;  // grade integral on [0, 1]
    QuadratureSpec inner;  // probabilistic expectation
};

// u takes (fuzzy slot value, random slot value).
template <class U>
double mixed_expected_utility(const WeightingFunction& f, U&& u,
                              const FuzzyNumber& a, const RandomVariable& x,
                              const MixedQuadratureSpec& spec = {}) {
    auto cuts = detail::merged_breakpoints(f, a);
    auto integrand = [&](double g) {
        Interval iv = a.level_set(g);
        double lo = x.expect([&](double xv) { return u(iv.lo, xv); }, spec.inner);
        double hi = x.expect([&](double xv) { return u(iv.hi, xv); }, spec.inner);
        return 0.5 * (lo + hi) * f(g);
    };
    return integrate_checked(integrand, 0.0, 1.0, spec.outer, cuts).value;
}

// Mirror construction for vectors whose first slot is random: the utility is
// transposed and routed through the same kernel.
template <class U>
double mixed_expected_utility_dual(const WeightingFunction& f, U&& u,
                                   const RandomVariable& y, const FuzzyNumber& b,
                                   const MixedQuadratureSpec& spec = {}) {
    auto transposed = [&](double bv, double yv) { return u(yv, bv); };
    return mixed_expected_utility(f, transposed, b, y, spec);
}

// Slot layout of a mixed vector: which side carries the fuzzy risk.
enum class MixedOrientation {
    FuzzyRandom,  // (A, X)
    RandomFuzzy,  // (Y, B)
};

struct MixedVector {
    MixedOrientation orientation = MixedOrientation::FuzzyRandom;
    FuzzyNumber fuzzy;
    RandomVariable random;

    static MixedVector fuzzy_random(FuzzyNumber a, RandomVariable x) {
        return {MixedOrientation::FuzzyRandom, std::move(a), std::move(x)};
    }
    static MixedVector random_fuzzy(RandomVariable y, FuzzyNumber b) {
        return {MixedOrientation::RandomFuzzy, std::move(b), std::move(y)};
    }
};

// u takes the vector's slots in declared order.
template <class U>
double mixed_expected_utility(const WeightingFunction& f, U&& u,
                              const MixedVector& v,
                              const MixedQuadratureSpec& spec = {}) {
    if (v.orientation == MixedOrientation::FuzzyRandom) {
        return mixed_expected_utility(f, std::forward<U>(u), v.fuzzy, v.random, spec);
    }
    return mixed_expected_utility_dual(f, std::forward<U>(u), v.random, v.fuzzy, spec);
}

}  // namespace mixrisk
