#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "brjuno/brjuno.hpp"
#include "test_support.hpp"

using namespace brjuno;

namespace {
const ExactReal one(1);
const ExactReal half(BigInt(1), BigInt(2));

template <class Real>
Real closed_form_fixed_point(const ExactReal& fix) {
    // B(fix) = log(1/fix)/(1 - fix) at a fixed point of A_alpha
    const Real f = to_real<Real>(fix);
    return -log(f) / (Real(1) - f);
}
}  // namespace

TEST_CASE("partial sums") {
    SECTION("single term at g") {
        REQUIRE(partial_sum<double>(golden(), one, 0) ==
                Catch::Approx(0.4812118250596034).epsilon(1e-14));
    }
    SECTION("geometric series limit at g") {
        const HighPrec limit = closed_form_fixed_point<HighPrec>(golden());
        const HighPrec s60 = partial_sum<HighPrec>(golden(), one, 60);
        REQUIRE(double(abs(s60 - limit)) < 1e-12);
    }
    SECTION("rational hit gives the +inf sentinel") {
        const auto e = expand(ExactReal(BigInt(1), BigInt(3)), one, 8);
        REQUIRE(std::isinf(partial_sum<double>(e, e.digit_count())));
    }
    SECTION("monotone in K") {
        testsup::SurdSampler s(301);
        for (int it = 0; it < 10; ++it) {
            const ExactReal x = s.surd_in(ExactReal(BigInt(1), BigInt(20)), half);
            const auto e = expand(x, one, 64);
            double prev = -1;
            for (std::size_t k = 0; k < 20; ++k) {
                const double v = partial_sum<double>(e, k);
                REQUIRE(v >= prev);
                prev = v;
            }
        }
    }
    SECTION("depth error when digits run out") {
        const auto e = expand(0.375, one, 64);  // terminates quickly
        REQUIRE_THROWS_AS(partial_sum<double>(e, e.digit_count() + 5), std::out_of_range);
    }
}

TEST_CASE("periodic closed forms") {
    SECTION("B_1(g) = log(1/g)/(1-g)") {
        const auto ev = eval_periodic<HighPrec>(golden(), one);
        REQUIRE(ev.method == EvalMethod::periodic_exact);
        REQUIRE(*ev.tail_bound == 0);
        REQUIRE(double(abs(ev.value - closed_form_fixed_point<HighPrec>(golden()))) < 1e-25);
        REQUIRE(double(ev.value) == Catch::Approx(1.2598289137944102).epsilon(1e-15));
    }
    SECTION("B_1/2(gamma) = log(1/gamma)/(1-gamma)") {
        const auto ev = eval_periodic<HighPrec>(silver(), half);
        REQUIRE(double(abs(ev.value - closed_form_fixed_point<HighPrec>(silver()))) < 1e-25);
        REQUIRE(double(ev.value) == Catch::Approx(1.5045988271597735).epsilon(1e-15));
    }
    SECTION("B_1(g^2) = -3 log g") {
        const auto ev = eval_periodic<HighPrec>(golden() * golden(), one);
        const HighPrec expect = HighPrec(-3) * log(to_real<HighPrec>(golden()));
        REQUIRE(double(abs(ev.value - expect)) < 1e-25);
        REQUIRE(double(ev.value) == Catch::Approx(1.4436354751788103).epsilon(1e-15));
    }
    SECTION("precondition: expansion must be periodic") {
        const auto e = expand(ExactReal(BigInt(2), BigInt(7)), one, 16);
        REQUIRE_THROWS_AS(eval_periodic<HighPrec>(e), std::domain_error);
    }
}

TEST_CASE("float-path evaluation") {
    SECTION("double(g) evaluates within 1e-6 of the exact value") {
        const double exact = double(eval_periodic<HighPrec>(golden(), one).value);
        const auto ev = eval_float<double>(to_real<double>(golden()), one, 1e-6);
        REQUIRE(std::abs(ev.value - exact) < 1e-6);
        REQUIRE(ev.value <= exact);  // partial sums are lower bounds
    }
    SECTION("double(gamma) under alpha = 1/2") {
        const double exact = double(eval_periodic<HighPrec>(silver(), half).value);
        const auto ev = eval_float<double>(to_real<double>(silver()), half, 1e-6);
        REQUIRE(std::abs(ev.value - exact) < 1e-6);
    }
    SECTION("exact dyadic rational gives +inf") {
        REQUIRE(std::isinf(eval_float<double>(0.5, one, 1e-6).value));
    }
    SECTION("certificates appear at reachable tolerances") {
        const FloatEvaluator eval(one, 1e-4);
        const auto ev = eval.evaluate(to_real<double>(golden()));
        REQUIRE(ev.tail_bound.has_value());
        REQUIRE(*ev.tail_bound <= 1e-4);
    }
}

TEST_CASE("evaluator agreement on the 50-surd fixture set") {
    for (const ExactReal& alpha : testsup::alpha_set()) {
        const CertifiedEvaluator<HighPrec> exact_eval(alpha);
        const double cap = tail_cap<double>(alpha);
        double worst = 0;
        for (const ExactReal& s : testsup::surd_fixtures()) {
            const double exact = double(exact_eval.evaluate(s).value);
            const auto ev = eval_float<double>(to_real<double>(s), alpha, 1e-8, cap);
            worst = std::max(worst, std::abs(ev.value - exact));
        }
        INFO("alpha = " << alpha.str() << " worst = " << worst);
        REQUIRE(worst <= 1e-6);
    }
}

TEST_CASE("tail certificates are honest on surd fixtures") {
    for (const ExactReal& alpha : {half, one}) {
        const CertifiedEvaluator<HighPrec> exact_eval(alpha);
        const double cap = tail_cap<double>(alpha);
        int certified = 0;
        for (const ExactReal& s : testsup::surd_fixtures()) {
            const double truth = double(exact_eval.evaluate(s).value);
            const auto ev = eval_float<double>(to_real<double>(s), alpha, 1e-4, cap);
            if (!ev.tail_bound) continue;
            ++certified;
            REQUIRE(truth >= ev.value - 1e-12);
            REQUIRE(truth <= ev.value + *ev.tail_bound + 1e-12);
        }
        REQUIRE(certified > 25);
    }
}

TEST_CASE("functional equation residuals") {
    SECTION("fixed point identity at g") {
        const CertifiedEvaluator<HighPrec> eval(one);
        REQUIRE(double(functional_eq_residual<HighPrec>(eval, golden())) < 1e-25);
    }
    SECTION("exact back-substitution at g^2") {
        const CertifiedEvaluator<HighPrec> eval(one);
        REQUIRE(double(functional_eq_residual<HighPrec>(eval, golden() * golden())) < 1e-20);
    }
    SECTION("random doubles stay below 3 tol for every alpha") {
        testsup::SurdSampler s(302);
        for (const ExactReal& alpha : testsup::alpha_set()) {
            const FloatEvaluator eval(alpha, 1e-8);
            const double ad = to_real<double>(alpha);
            int checked = 0;
            for (int it = 0; it < 1000; ++it) {
                const double x = s.uniform01() * ad;
                if (x < 1e-3 || x > ad - 1e-9) continue;
                const double r = functional_eq_residual(eval, x);
                if (std::isnan(r)) continue;  // rational-sentinel collision
                ++checked;
                REQUIRE(r < 3e-8);
            }
            REQUIRE(checked > 900);
        }
    }
}

TEST_CASE("tilde sum over the regular CF") {
    SECTION("all partial quotients 1 gives zero") {
        REQUIRE(brjuno_tilde<double>(golden(), 5) == 0.0);
    }
    SECTION("gamma: Pell denominators") {
        REQUIRE(brjuno_tilde<double>(silver(), 3) ==
                Catch::Approx(1.2361124719985691).epsilon(1e-14));
    }
    SECTION("leading digit 3") {
        // x = [0; 3, 1, 1, 1, ...] = 1/(3 + g) ... K = 0 term is log 3
        const ExactReal x = (ExactReal(3) + golden()).inverse();
        REQUIRE(brjuno_tilde<double>(x, 0) == Catch::Approx(std::log(3.0)).epsilon(1e-14));
    }
}

TEST_CASE("B_1 - B_tilde stays within the empirical cap") {
    testsup::SurdSampler s(303);
    const FloatEvaluator eval(one, 1e-8);
    double worst = 0;
    for (int it = 0; it < 1000; ++it) {
        const double x = 0.02 + 0.96 * s.uniform01();
        const auto e = expand(x, one, 128);
        if (e.status == ExpansionStatus::terminated || e.digit_count() < 4) continue;
        const double b = partial_sum<double>(e, e.digit_count());
        const double bt = brjuno_tilde<double>(e, e.digit_count() - 1);
        if (!std::isfinite(b) || !std::isfinite(bt)) continue;
        worst = std::max(worst, std::abs(b - bt));
    }
    INFO("empirical max |B_1 - B~| = " << worst);
    REQUIRE(worst < 5.0);
}

TEST_CASE("generalized Brjuno sums") {
    SECTION("(1, NegLog) is bit-identical to the partial sum") {
        testsup::SurdSampler s(304);
        const WeightSpec w{1, WeightSpec::Kind::neg_log, 0};
        for (int it = 0; it < 10; ++it) {
            const ExactReal x = s.surd_in(ExactReal(BigInt(1), BigInt(20)), half);
            const auto e = expand(x, one, 64);
            for (std::size_t k : {std::size_t(0), std::size_t(5), std::size_t(12)})
                REQUIRE(generalized_partial_sum<double>(e, w, k) == partial_sum<double>(e, k));
        }
    }
    SECTION("power weight at g converges to g^{-1/3}/(1-g)") {
        const auto e = expand(golden(), one, 8);
        const WeightSpec w{1, WeightSpec::Kind::power_inv_sigma, 3.0};
        const HighPrec g = to_real<HighPrec>(golden());
        const HighPrec limit = pow(g, HighPrec(-1) / 3) / (1 - g);
        const HighPrec s = generalized_partial_sum<HighPrec>(e, w, 200);
        REQUIRE(double(abs(s - limit)) < 1e-9);
    }
    SECTION("nu = 2 at g converges to log(1/g)/(1-g^2)") {
        const auto e = expand(golden(), one, 8);
        const WeightSpec w{2, WeightSpec::Kind::neg_log, 0};
        const HighPrec g = to_real<HighPrec>(golden());
        const HighPrec limit = -log(g) / (1 - g * g);
        REQUIRE(double(abs(generalized_partial_sum<HighPrec>(e, w, 200) - limit)) < 1e-9);
    }
    SECTION("weight validation") {
        const auto e = expand(golden(), one, 8);
        REQUIRE_THROWS_AS(
            generalized_partial_sum<double>(e, WeightSpec{0, WeightSpec::Kind::neg_log, 0}, 4),
            std::domain_error);
        REQUIRE_THROWS_AS(
            generalized_partial_sum<double>(
                e, WeightSpec{1, WeightSpec::Kind::power_inv_sigma, 1.5}, 4),
            std::domain_error);
    }
}

TEST_CASE("divergence lower bound near rationals") {
    const FloatEvaluator eval(one, 1e-8);
    SECTION("r = 1/2") {
        const auto rep = divergence_bound_check(BigRational(1, 2), one, {1e-6}, eval);
        REQUIRE(rep.all_passed);
        for (const auto& row : rep.rows) {
            // paper's prefactor 1/((alpha+1) q) = 1/4 here
            REQUIRE(row.bound == Catch::Approx(2.7607).epsilon(1e-3));
            REQUIRE(row.value >= row.bound);
        }
    }
    SECTION("r = 1/3 at eps = 1e-8") {
        const auto rep = divergence_bound_check(BigRational(1, 3), one, {1e-8}, eval);
        REQUIRE(rep.all_passed);
        for (const auto& row : rep.rows)
            REQUIRE(row.bound == Catch::Approx(2.473).epsilon(1e-2));
    }
    SECTION("bound grows as eps shrinks") {
        const auto rep =
            divergence_bound_check(BigRational(1, 2), one, {1e-4, 1e-6, 1e-8, 1e-10}, eval);
        REQUIRE(rep.all_passed);
        double prev = -1;
        for (const auto& row : rep.rows) {
            if (row.side != 1) continue;
            REQUIRE(row.bound > prev);
            prev = row.bound;
        }
    }
}

TEST_CASE("shared constants") {
    REQUIRE(double(golden_minimum_value<HighPrec>()) ==
            Catch::Approx(1.2598289137944102).epsilon(1e-15));
    REQUIRE(double(silver_minimum_value<HighPrec>()) ==
            Catch::Approx(1.5045988271597735).epsilon(1e-15));
}
