#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ifskit/measures.hpp"
#include "ifskit/symbolic.hpp"

using namespace ifskit;

namespace {

IFSystem cantor_ifs() {
    BoundingBox box{{0.0, 0.0}, {1.0, 0.0}, 1};
    return IFSystem({AffineContraction(1.0 / 3.0, 0.0), AffineContraction(1.0 / 3.0, 2.0 / 3.0)},
                    box);
}

}  // namespace

TEST_CASE("omega metric fixtures") {
    CHECK(omega_metric(Word{{0, 1, 1}}, Word{{0, 1, 1}}) == 0.0);
    CHECK(omega_metric(Word{{0, 1, 1}}, Word{{1, 1, 1}}) == doctest::Approx(0.5));
    CHECK(omega_metric(Word{{0, 1, 0}}, Word{{0, 1, 1}}) == doctest::Approx(0.125));
    CHECK_THROWS_AS(omega_metric(Word{{0}}, Word{{0, 1}}), std::domain_error);
}

TEST_CASE("shift maps") {
    const ShiftSpaceModel model(2, 3);
    CHECK(shift_in(0, Word{{1, 1}}, model).str() == "011");
    CHECK(shift_in(1, Word{{0, 1, 0}}, model).str() == "101");  // prepend then truncate
    CHECK_THROWS_AS(shift_in(2, Word{{0}}, model), std::domain_error);

    CHECK(shift_out(Word{{0, 1, 1}}).str() == "11");
    CHECK(shift_out(Word{{1}}).empty());
    CHECK(shift_out(Word{{1, 0, 1}}).str() == "01");
    CHECK_THROWS_AS(shift_out(Word{}), std::domain_error);

    // eta o eta_i = identity on words of length <= K-1.
    for (const Word& w : {Word{{0, 1}}, Word{{1, 0}}, Word{{1, 1}}}) {
        for (int i = 0; i < 2; ++i) {
            CHECK(shift_out(shift_in(i, w, model)) == w);
        }
    }
}

TEST_CASE("shift maps halve the omega metric exactly") {
    const ShiftSpaceModel model(2, 5);
    for (std::size_t a = 0; a < model.word_count(); a += 3) {
        for (std::size_t b = 0; b < model.word_count(); b += 5) {
            const Word wa = model.word_at(a), wb = model.word_at(b);
            const double d = omega_metric(wa, wb);
            for (int i = 0; i < 2; ++i) {
                const Word ia = shift_in(i, wa, model), ib = shift_in(i, wb, model);
                // Truncation can only erase a difference at the deepest level.
                if (omega_metric(ia, ib) != 0.0 || d <= std::ldexp(1.0, -model.depth)) {
                    CHECK(omega_metric(ia, ib) <= 0.5 * d + 1e-15);
                    if (d < std::ldexp(1.0, -model.depth + 1))
                        continue;  // fully truncated tail difference
                    CHECK(omega_metric(ia, ib) == doctest::Approx(0.5 * d));
                }
            }
        }
    }
}

TEST_CASE("bernoulli masses") {
    const ShiftSpaceModel model(2, 4);
    CHECK(bernoulli_mass(Cylinder{Word{}}, model) == doctest::Approx(1.0));
    CHECK(bernoulli_mass(Cylinder{Word{{0}}}, model) == doctest::Approx(0.5));
    CHECK(bernoulli_mass(Cylinder{Word{{0, 1, 1}}}, model) == doctest::Approx(0.125));

    // Cylinder masses at fixed length sum to one exactly.
    for (int len : {1, 2, 3, 4}) {
        const ShiftSpaceModel sub(2, len);
        double total = 0.0;
        for (std::size_t i = 0; i < sub.word_count(); ++i)
            total += bernoulli_mass(Cylinder{sub.word_at(i)}, model);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("shift preimages of cylinders") {
    const auto whole = shift_in_preimage(0, Cylinder{Word{}});
    CHECK(whole.exists);
    CHECK(whole.cylinder.prefix.empty());

    const auto hit = shift_in_preimage(1, Cylinder{Word{{1, 0, 1}}});
    CHECK(hit.exists);
    CHECK(hit.cylinder.prefix.str() == "01");

    CHECK_FALSE(shift_in_preimage(0, Cylinder{Word{{1, 0}}}).exists);
}

TEST_CASE("coding points of constant words hit the map fixed points") {
    const auto ifs = cantor_ifs();
    for (int k : {2, 5, 8}) {
        Word zeros, ones;
        zeros.letters.assign(static_cast<std::size_t>(k), 0);
        ones.letters.assign(static_cast<std::size_t>(k), 1);
        CHECK(coding_point(ifs, zeros).x() == doctest::Approx(0.0));
        CHECK(std::abs(coding_point(ifs, ones).x() - 1.0) <= std::pow(3.0, -k));
    }
    CHECK(coding_point(ifs, Word{{1, 0}}).x() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("coding points reproduce hutchinson atoms bit for bit") {
    const auto ifs = cantor_ifs();
    const ShiftSpaceModel model(2, 6);
    const auto mu = hutchinson_measure(ifs, 6);
    REQUIRE(mu.size() == model.word_count());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const Word w = mu.labels()[i];
        CHECK(coding_point(ifs, w).x() == mu.atoms()[i].x());
    }
}

TEST_CASE("semiconjugacy up to truncation error") {
    const auto ifs = cantor_ifs();
    const ShiftSpaceModel model(2, 6);
    const double bound = std::pow(ifs.ratio(), model.depth) * ifs.bounding_box().diameter();
    for (std::size_t idx = 0; idx < model.word_count(); idx += 7) {
        const Word w = model.word_at(idx);
        for (int i = 0; i < 2; ++i) {
            const double lhs = coding_point(ifs, shift_in(i, w, model)).x();
            const double rhs = ifs.map(static_cast<std::size_t>(i)).apply(coding_point(ifs, w)).x();
            CHECK(std::abs(lhs - rhs) <= bound + 1e-15);
        }
    }
}

TEST_CASE("coding preimages of cantor cells") {
    const auto ifs = cantor_ifs();
    const ShiftSpaceModel model(2, 3);

    // The whole bounding interval captures every cylinder unambiguously.
    const auto all = coding_preimage(ifs, {{0.0, 1.0}}, model);
    CHECK(all.inside.size() == model.word_count());
    CHECK(all.ambiguous.empty());

    // [0, 1/3] captures exactly the four words with first letter 0.
    const auto left = coding_preimage(ifs, {{0.0, 1.0 / 3.0}}, model);
    CHECK(left.inside.size() == 4);
    for (const auto& w : left.inside) CHECK(w.letters.front() == 0);

    const auto empty = coding_preimage(ifs, {}, model);
    CHECK(empty.inside.empty());
}

TEST_CASE("word enumeration round-trips") {
    const ShiftSpaceModel model(3, 4);
    CHECK(model.word_count() == 81);
    for (std::size_t i = 0; i < model.word_count(); ++i)
        CHECK(model.index_of(model.word_at(i)) == i);
    // Lexicographic order: successive words compare increasing.
    for (std::size_t i = 0; i + 1 < model.word_count(); ++i)
        CHECK(model.word_at(i).str() < model.word_at(i + 1).str());
}
