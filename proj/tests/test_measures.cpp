#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ifskit/measures.hpp"
#include "ifskit/transport.hpp"

using namespace ifskit;

namespace {

IFSystem cantor_ifs() {
    BoundingBox box{{0.0, 0.0}, {1.0, 0.0}, 1};
    return IFSystem({AffineContraction(1.0 / 3.0, 0.0), AffineContraction(1.0 / 3.0, 2.0 / 3.0)},
                    box);
}

IFSystem dyadic_ifs() {
    BoundingBox box{{0.0, 0.0}, {1.0, 0.0}, 1};
    return IFSystem({AffineContraction(0.5, 0.0), AffineContraction(0.5, 0.5)}, box);
}

IFSystem bernoulli_ifs() {
    BoundingBox box{{0.0, 0.0}, {1.0, 0.0}, 1};
    return IFSystem({AffineContraction(0.6, 0.0), AffineContraction(0.6, 0.4)}, box);
}

DiscreteMeasure delta0() { return DiscreteMeasure({Point::line(0.0)}, {1.0}, {Word{}}); }

}  // namespace

TEST_CASE("transfer_step splits a delta across the maps") {
    const auto pushed = transfer_step(cantor_ifs(), delta0());
    REQUIRE(pushed.size() == 2);
    CHECK(pushed.atoms()[0].x() == doctest::Approx(0.0));
    CHECK(pushed.weights()[0] == doctest::Approx(0.5));
    CHECK(pushed.atoms()[1].x() == doctest::Approx(2.0 / 3.0));
    CHECK(pushed.weights()[1] == doctest::Approx(0.5));
    CHECK(pushed.labels()[0].str() == "0");
    CHECK(pushed.labels()[1].str() == "1");
}

TEST_CASE("transfer_step fixes the fixed measure of a degenerate pair") {
    // Two identical maps: T(delta_0) = delta_0 exactly (images merge).
    BoundingBox box{{-1.0, 0.0}, {1.0, 0.0}, 1};
    const IFSystem ifs({AffineContraction(0.5, 0.0), AffineContraction(0.5, 0.0)}, box);
    const auto pushed = transfer_step(ifs, DiscreteMeasure({Point::line(0.0)}, {1.0}));
    REQUIRE(pushed.size() == 1);
    CHECK(pushed.atoms()[0].x() == 0.0);
    CHECK(pushed.weights()[0] == doctest::Approx(1.0));
}

TEST_CASE("two dyadic transfer steps give the uniform quarter grid") {
    auto mu = transfer_step(dyadic_ifs(), delta0());
    mu = transfer_step(dyadic_ifs(), mu);
    REQUIRE(mu.size() == 4);
    const double expect[4] = {0.0, 0.25, 0.5, 0.75};
    std::vector<double> sorted;
    for (const auto& a : mu.atoms()) sorted.push_back(a.x());
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 4; ++i) {
        CHECK(sorted[i] == doctest::Approx(expect[i]));
    }
    for (double w : mu.weights()) CHECK(w == doctest::Approx(0.25));
}

TEST_CASE("transfer_step preserves mass exactly") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> atoms;
    std::vector<double> weights;
    double total = 0.0;
    for (int i = 0; i < 17; ++i) {
        atoms.push_back(Point::line(u(rng)));
        weights.push_back(u(rng) + 0.01);
        total += weights.back();
    }
    for (auto& w : weights) w /= total;
    // Renormalize the final entry so the sum is exactly 1 in floating point.
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) s += weights[i];
    weights.back() = 1.0 - s;
    DiscreteMeasure nu(std::move(atoms), std::move(weights));
    const auto pushed = transfer_step(bernoulli_ifs(), nu);
    CHECK(std::abs(pushed.total_mass() - 1.0) <= 1e-12);
}

TEST_CASE("hutchinson measure fixtures") {
    // Cantor depth 1: mass of [0, 1/3] is exactly 1/2.
    const auto cantor1 = hutchinson_measure(cantor_ifs(), 1);
    CHECK(cantor1.mass_on({{0.0, 1.0 / 3.0}}) == doctest::Approx(0.5));

    // Dyadic depth k: uniform on the 2^-k grid.
    for (int k : {2, 4, 6}) {
        const auto mu = hutchinson_measure(dyadic_ifs(), k);
        REQUIRE(mu.size() == std::size_t{1} << k);
        for (double w : mu.weights())
            CHECK(w == doctest::Approx(std::ldexp(1.0, -k)).epsilon(1e-14));
    }

    // Bernoulli depth 3: 8 distinct atoms, all weight 1/8.
    const auto b3 = hutchinson_measure(bernoulli_ifs(), 3);
    REQUIRE(b3.size() == 8);
    for (double w : b3.weights()) CHECK(w == doctest::Approx(0.125));
    for (const auto& label : b3.labels()) CHECK(label.length() == 3);
}

TEST_CASE("hutchinson depth k+1 equals a transfer step at depth k") {
    const auto ifs = bernoulli_ifs();
    const auto mu4 = hutchinson_measure(ifs, 4);
    const auto stepped = transfer_step(ifs, hutchinson_measure(ifs, 3));
    REQUIRE(mu4.size() == stepped.size());
    for (std::size_t i = 0; i < mu4.size(); ++i) {
        CHECK(mu4.atoms()[i].x() == stepped.atoms()[i].x());
        CHECK(mu4.weights()[i] == stepped.weights()[i]);
        CHECK(mu4.labels()[i].str() == stepped.labels()[i].str());
    }
}

TEST_CASE("kravchenko sequence construction") {
    const auto nu1 = kravchenko_sequence(1, {0.0, 1.0});
    REQUIRE(nu1.size() == 2);
    CHECK(nu1.weights()[0] == doctest::Approx(0.5));
    CHECK(nu1.weights()[1] == doctest::Approx(0.5));

    const auto nu2 = kravchenko_sequence(2, {0.0, 1.0, 2.0});
    REQUIRE(nu2.size() == 3);
    CHECK(nu2.weights()[0] == doctest::Approx(0.25));
    CHECK(nu2.weights()[1] == doctest::Approx(0.5));
    CHECK(nu2.weights()[2] == doctest::Approx(0.25));

    for (int n : {3, 7, 12}) {
        std::vector<double> pos(static_cast<std::size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) pos[static_cast<std::size_t>(k)] = k;
        CHECK(std::abs(kravchenko_sequence(n, pos).total_mass() - 1.0) <= 1e-15);
    }

    CHECK_THROWS_AS(kravchenko_sequence(2, {0.0, 5.0, 2.0}), std::domain_error);
}

TEST_CASE("truncate_measure renormalizes on the surviving atoms") {
    const DiscreteMeasure mu({Point::line(0.0), Point::line(1.0), Point::line(2.0)},
                             {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    const auto t = truncate_measure(mu, {{0.0, 1.0}});
    REQUIRE(t.size() == 2);
    CHECK(t.weights()[0] == doctest::Approx(0.5));
    CHECK(t.weights()[1] == doctest::Approx(0.5));

    // K containing the support leaves the measure unchanged.
    const auto full = truncate_measure(mu, {{-1.0, 3.0}});
    REQUIRE(full.size() == 3);
    for (double w : full.weights()) CHECK(w == doctest::Approx(1.0 / 3.0));

    const DiscreteMeasure two({Point::line(0.0), Point::line(2.0)}, {0.5, 0.5});
    const auto single = truncate_measure(two, {{1.5, 3.0}});
    REQUIRE(single.size() == 1);
    CHECK(single.atoms()[0].x() == doctest::Approx(2.0));
    CHECK(single.weights()[0] == doctest::Approx(1.0));

    CHECK_THROWS_AS(truncate_measure(two, {{5.0, 6.0}}), std::domain_error);
}

TEST_CASE("truncation family enforces nesting and satisfies the MH bound") {
    std::vector<Point> atoms;
    std::vector<double> weights;
    for (int k = 0; k <= 9; ++k) {
        atoms.push_back(Point::line(double(k)));
        weights.push_back(std::ldexp(1.0, -(k + 1)));
    }
    weights.back() = std::ldexp(1.0, -9);
    const DiscreteMeasure mu(atoms, weights);

    std::vector<IntervalUnion> nested;
    for (int n = 1; n <= 6; ++n) nested.push_back({{0.0, double(n) + 0.5}});
    const auto fam = make_truncation_family(mu, nested);
    REQUIRE(fam.members.size() == 6);
    for (std::size_t n = 0; n < fam.members.size(); ++n) {
        const double mh = modified_kantorovich(fam.members[n], mu);
        const double bound = 2.0 * (1.0 - mu.mass_on(fam.sets[n]));
        CHECK(mh <= bound + 1e-12);
    }

    std::vector<IntervalUnion> not_nested{{{0.0, 3.5}}, {{1.5, 5.0}}};
    CHECK_THROWS_AS(make_truncation_family(mu, not_nested), std::domain_error);
}

TEST_CASE("transfer iterates contract in the kantorovich metric") {
    for (const auto& [ifs, ratio] :
         {std::pair{cantor_ifs(), 1.0 / 3.0}, std::pair{dyadic_ifs(), 0.5}}) {
        DiscreteMeasure prev = delta0();
        DiscreteMeasure curr = transfer_step(ifs, prev);
        const double base_gap = kantorovich_h(prev, curr);
        double prev_gap = base_gap;
        for (int m = 1; m <= 6; ++m) {
            DiscreteMeasure next = transfer_step(ifs, curr);
            const double gap = kantorovich_h(curr, next);
            CHECK(gap <= ratio * prev_gap + 1e-9);
            CHECK(gap <= std::pow(ratio, m) * base_gap + 1e-9);
            prev = std::move(curr);
            curr = std::move(next);
            prev_gap = gap;
        }
    }
}

TEST_CASE("measure validation catches broken inputs") {
    CHECK_THROWS_AS(DiscreteMeasure({Point::line(0.0)}, {0.5}), std::domain_error);
    CHECK_THROWS_AS(DiscreteMeasure({Point::line(0.0), Point::line(0.0)}, {0.5, 0.5}),
                    std::domain_error);
    CHECK_THROWS_AS(DiscreteMeasure({Point::line(0.0), Point::line(1.0)}, {1.5, -0.5}),
                    std::domain_error);
    CHECK_THROWS_AS(hutchinson_measure(cantor_ifs(), 0), std::domain_error);
}
