#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "eustar/axioms.hpp"
#include "eustar/metrics.hpp"
#include "eustar/simulate.hpp"
#include "eustar/solver.hpp"
#include "support/test_oracles.hpp"

using namespace eustar;

namespace {

Dataset single(std::vector<double> p, std::vector<double> x,
               std::vector<double> mu = {0.5, 0.5}) {
    return Dataset("s", {Observation{std::move(p), std::move(x)}},
                   ObjectiveBelief(std::move(mu)));
}

void check_bands(const Dataset& d, const PerturbationSolution& sol, bool objective) {
    const int K = d.num_observations();
    const int S = d.states();
    const double hi = (1.0 + sol.e_star) + 1e-6;
    const double lo = 1.0 / (1.0 + sol.e_star) - 1e-6;
    double max_ratio = 0.0;
    for (int k = 0; k < K; ++k) {
        double bsum = 0.0;
        for (int s = 0; s < S; ++s) {
            CHECK(sol.epsilon[static_cast<size_t>(k * S + s)] > 0.0);
            CHECK(sol.beliefs[static_cast<size_t>(k * S + s)] > 0.0);
            bsum += sol.beliefs[static_cast<size_t>(k * S + s)];
        }
        CHECK(bsum == doctest::Approx(1.0).epsilon(1e-9));
        for (int s = 0; s < S; ++s) {
            for (int t = 0; t < S; ++t) {
                if (s == t) continue;
                const double eps_ratio = sol.epsilon[static_cast<size_t>(k * S + s)] /
                                         sol.epsilon[static_cast<size_t>(k * S + t)];
                max_ratio = std::max(max_ratio, eps_ratio);
                if (objective) {
                    CHECK(eps_ratio <= hi);
                    CHECK(eps_ratio >= lo);
                    // Utility form: the reciprocal perturbation obeys the same band.
                    CHECK(1.0 / eps_ratio <= hi);
                    const double mu_ratio =
                        (sol.beliefs[static_cast<size_t>(k * S + s)] /
                         sol.beliefs[static_cast<size_t>(k * S + t)]) /
                        (d.belief()[s] / d.belief()[t]);
                    CHECK(mu_ratio <= hi);
                    CHECK(mu_ratio >= lo);
                }
            }
        }
    }
    if (objective) {
        CHECK(max_ratio == doctest::Approx(1.0 + sol.e_star).epsilon(1e-6));
    } else {
        // Subjective case: the band holds across observation pairs.
        for (int k = 0; k < K; ++k) {
            for (int l = 0; l < K; ++l) {
                for (int s = 0; s < S; ++s) {
                    for (int t = 0; t < S; ++t) {
                        if (s == t || k == l) continue;
                        const double r =
                            (sol.beliefs[static_cast<size_t>(k * S + s)] /
                             sol.beliefs[static_cast<size_t>(k * S + t)]) /
                            (sol.beliefs[static_cast<size_t>(l * S + s)] /
                             sol.beliefs[static_cast<size_t>(l * S + t)]);
                        CHECK(r <= hi);
                        CHECK(r >= lo);
                    }
                }
            }
        }
    }
}

}  // namespace

TEST_CASE("constant quantities are rational at e = 0") {
    const auto sol = min_e_oeu(single({2, 1}, {2, 2}));
    CHECK(sol.e_star == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single observation binding pair") {
    const auto d = single({2, 1}, {3, 1});
    const auto sol = min_e_oeu(d);
    CHECK(sol.e_star == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.e_star == doctest::Approx(oracle_min_e(d, AxiomKind::oeu)).epsilon(1e-9));
    CHECK(!sol.binding_rows.empty());
    check_bands(d, sol, true);
}

TEST_CASE("two observations satisfying the axiom solve to zero") {
    Dataset d("s", {Observation{{2, 1}, {1, 2}}, Observation{{1, 2}, {2, 1}}},
              ObjectiveBelief::uniform(2));
    const auto sol = min_e_oeu(d);
    CHECK(sol.e_star <= 1e-9);
    CHECK(!check_axiom(d, AxiomKind::oeu, 1e-9).has_value());
}

TEST_CASE("subjective solve: one observation is always rational") {
    const auto d = single({2, 1}, {3, 1});
    const auto sol = min_e_seu(d);
    CHECK(sol.e_star <= 1e-9);
    // Contrast with the objective measure on the same data.
    CHECK(min_e_oeu(d).e_star == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("subjective solve: mirrored quantities at equal prices") {
    Dataset d("s", {Observation{{1, 1}, {3, 1}}, Observation{{1, 1}, {1, 3}}},
              ObjectiveBelief::uniform(2));
    CHECK(min_e_seu(d).e_star <= 1e-9);
}

TEST_CASE("subjective solve matches the oracle on the violating fixture") {
    Dataset d("s", {Observation{{1, 1}, {3, 1}}, Observation{{1, 4}, {2, 2}}},
              ObjectiveBelief::uniform(2));
    const auto sol = min_e_seu(d);
    CHECK(sol.e_star == doctest::Approx(1.0).epsilon(1e-6));
    check_bands(d, sol, false);
}

TEST_CASE("oracle equivalence on random datasets") {
    std::mt19937_64 rng(314159);
    for (int it = 0; it < 40; ++it) {
        const int K = 1 + static_cast<int>(rng() % 3);
        const auto d = testing::random_dataset(rng, K, 2);
        const double lp_oeu = min_e_oeu(d).e_star;
        const double br_oeu = oracle_min_e(d, AxiomKind::oeu);
        CHECK(lp_oeu == doctest::Approx(br_oeu).epsilon(1e-6));
        const double lp_seu = min_e_seu(d).e_star;
        const double br_seu = oracle_min_e(d, AxiomKind::seu);
        CHECK(lp_seu == doctest::Approx(br_seu).epsilon(1e-6));
    }
}

TEST_CASE("perturbation bands hold on random instances") {
    std::mt19937_64 rng(2718);
    for (int it = 0; it < 25; ++it) {
        const int K = 1 + static_cast<int>(rng() % 4);
        const auto d = testing::random_dataset(rng, K, 2);
        check_bands(d, min_e_oeu(d), true);
        check_bands(d, min_e_seu(d), false);
    }
}

TEST_CASE("epsilon centering: min times max is 1 per observation") {
    std::mt19937_64 rng(99);
    const auto d = testing::random_dataset(rng, 4, 2);
    const auto sol = min_e_oeu(d);
    for (int k = 0; k < 4; ++k) {
        const double a = sol.epsilon[static_cast<size_t>(2 * k)];
        const double b = sol.epsilon[static_cast<size_t>(2 * k + 1)];
        CHECK(std::min(a, b) * std::max(a, b) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("scale invariance of the minimal perturbation") {
    std::mt19937_64 rng(1234);
    for (int it = 0; it < 15; ++it) {
        const auto d = testing::random_dataset(rng, 3, 2);
        const double base = min_e_oeu(d).e_star;
        std::vector<Observation> obs(d.observations());
        const double lambda = 0.2 + 4.0 * testing::uniform01(rng);
        for (double& p : obs[1].prices) p *= lambda;
        const Dataset scaled("s", std::move(obs), d.belief());
        CHECK(min_e_oeu(scaled).e_star == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("removing observations cannot raise the minimal perturbation") {
    std::mt19937_64 rng(777);
    for (int it = 0; it < 15; ++it) {
        const auto d = testing::random_dataset(rng, 4, 2);
        const double full = min_e_oeu(d).e_star;
        CHECK(min_e_oeu(d.subset({0, 1, 2})).e_star <= full + 1e-9);
        CHECK(min_e_oeu(d.subset({1, 3})).e_star <= full + 1e-9);
    }
}

TEST_CASE("within-observation price ratio bounds the solution") {
    std::mt19937_64 rng(31337);
    for (int it = 0; it < 30; ++it) {
        const int K = 1 + static_cast<int>(rng() % 5);
        const auto d = testing::random_dataset(rng, K, 2);
        CHECK(1.0 + min_e_oeu(d).e_star <= 1.0 + e_upper_bound(d) + 1e-9);
    }
}

TEST_CASE("exact maximizers solve to zero") {
    std::mt19937_64 rng(555);
    for (double gamma : {0.5, 1.0, 3.0, 10.0}) {
        const auto b = BudgetSet::random_two_state(10, 5.0, rng());
        const auto d = crra_subject(b, gamma, ObjectiveBelief::uniform(2));
        CHECK(min_e_oeu(d).e_star <= 1e-6);
    }
}

TEST_CASE("average perturbation: rational data needs none") {
    Dataset d("s", {Observation{{2, 1}, {1, 2}}, Observation{{1, 2}, {2, 1}}},
              ObjectiveBelief::uniform(2));
    CHECK(min_avg_perturbation(d).e_bar <= 1e-9);
}

TEST_CASE("average perturbation on the single-observation fixture") {
    const auto d = single({2, 1}, {3, 1});
    const auto sol = min_avg_perturbation(d);
    CHECK(sol.e_bar == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-9));

    // Brute-force grid over the log perturbation split.
    double best = 1e18;
    for (int i = -300; i <= 300; ++i) {
        const double dv = i * 0.01;  // log v1 - log v2, feasible when <= 0
        if (dv > 0.0) continue;
        for (int j = -300; j <= 300; ++j) {
            const double c = j * 0.01;  // common shift from lambda
            const double d1 = dv - std::log(2.0) - c;
            const double d2 = 0.0 - std::log(1.0) - c;
            best = std::min(best, 0.5 * (std::abs(d1) + std::abs(d2)));
        }
    }
    CHECK(sol.e_bar == doctest::Approx(best).epsilon(2e-2));
}

TEST_CASE("average perturbation is bounded by the minimax solution") {
    std::mt19937_64 rng(8080);
    for (int it = 0; it < 20; ++it) {
        const int K = 1 + static_cast<int>(rng() % 3);
        const int S = 2 + static_cast<int>(rng() % 2);
        const auto d = testing::random_dataset(rng, K, S);
        const double e_bar = min_avg_perturbation(d).e_bar;
        const double e_star = min_e_oeu(d).e_star;
        CHECK(e_bar <= (S - 1) * std::log1p(e_star) + 1e-9);
        // Both vanish together.
        CHECK((e_bar <= 1e-7) == (e_star <= 1e-7));
    }
}

TEST_CASE("recovered datasets") {
    const auto d = single({2, 1}, {3, 1});
    const auto sol = min_e_oeu(d);

    SUBCASE("identity perturbation returns the same dataset") {
        const auto same = recover_perturbed_dataset(d, std::vector<double>{1.0, 1.0});
        CHECK(same.price(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(same.price(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("incomes are preserved and the axiom passes") {
        const auto fixed = recover_perturbed_dataset(d, sol);
        CHECK(fixed.income(0) == doctest::Approx(d.income(0)).epsilon(1e-12));
        CHECK(!check_axiom(fixed, AxiomKind::oeu, 1e-9).has_value());
        // The mismatch is repriced to equal relative risk-neutral prices.
        CHECK(fixed.price(0, 0) == doctest::Approx(fixed.price(0, 1)).epsilon(1e-9));
    }
    SUBCASE("random instances stay rational after reconstruction") {
        std::mt19937_64 rng(4444);
        for (int it = 0; it < 15; ++it) {
            const auto rd = testing::random_dataset(rng, 3, 2);
            const auto rsol = min_e_oeu(rd);
            const auto fixed = recover_perturbed_dataset(rd, rsol);
            for (int k = 0; k < rd.num_observations(); ++k) {
                CHECK(fixed.income(k) == doctest::Approx(rd.income(k)).epsilon(1e-12));
            }
            CHECK(!check_axiom(fixed, AxiomKind::oeu, 1e-9).has_value());
        }
    }
    SUBCASE("zero perturbation solutions keep prices") {
        Dataset r("s", {Observation{{2, 1}, {1, 2}}, Observation{{1, 2}, {2, 1}}},
                  ObjectiveBelief::uniform(2));
        const auto rsol = min_e_oeu(r);
        REQUIRE(rsol.e_star <= 1e-9);
        const auto fixed = recover_perturbed_dataset(r, rsol);
        for (int k = 0; k < 2; ++k) {
            for (int s = 0; s < 2; ++s) {
                CHECK(fixed.price(k, s) == doctest::Approx(r.price(k, s)).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("solution serialization carries the diagnostic fields") {
    const auto d = single({2, 1}, {3, 1});
    const auto sol = min_e_oeu(d);
    const std::string js = solution_to_json(sol, 1, 2);
    for (const char* key : {"e_star", "epsilon", "beliefs", "log_v", "binding_rows"}) {
        CAPTURE(key);
        CHECK(js.find(key) != std::string::npos);
    }
}
