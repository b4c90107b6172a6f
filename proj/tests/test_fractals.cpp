#include "fracproj/fractals.hpp"
#include "fracproj/regularity.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace fracproj;

TEST_CASE("cantor product examples")
{
    const auto full = gen_cantor_product(CantorPattern::uniform(1, {0, 1, 2, 3}), 2);
    CHECK(full.level() == 4);
    CHECK(full.size() == 16);

    const auto q = gen_cantor_product(CantorPattern::uniform(1, {0, 3}), 3);
    CHECK(q == GridPointSet::from_cells(1, 6, {{0}, {3}, {12}, {15}, {48}, {51}, {60}, {63}}));

    const auto base = gen_cantor_product(CantorPattern::uniform(2, {0, 3}), 0);
    CHECK(base.level() == 0);
    CHECK(base.size() == 1);

    // recursion c -> 4c + {0,3} per axis
    const auto plane = gen_cantor_product(CantorPattern::uniform(2, {0, 3}), 4);
    CHECK(plane.size() == 256);
    for (std::size_t i = 0; i < plane.size(); ++i)
        for (Coord c : plane.cell(i))
            for (Coord x = c; x > 0; x /= 4) CHECK((x % 4 == 0 || x % 4 == 3));

    CantorPattern mixed{4, {{0, 3}, {1}}};
    const auto m = gen_cantor_product(mixed, 2);
    CHECK(m.size() == 4);
    CHECK(mixed.dimension() == doctest::Approx(0.5));

    CHECK_THROWS_AS(gen_cantor_product(CantorPattern::uniform(1, {0, 3}), 11), std::invalid_argument);
    CHECK_THROWS_AS(gen_cantor_product(CantorPattern::uniform(1, {0, 4}), 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_cantor_product(CantorPattern::uniform(1, {0, 0}), 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_cantor_product(CantorPattern::uniform(1, {0}, 3), 1), std::invalid_argument);
}

TEST_CASE("random tree sets")
{
    const auto full = gen_random_tree_set(2, 2.0, 5, 9);
    CHECK(full.size() == 1024);

    for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(gen_random_tree_set(2, 0.01, 8, seed).size() >= 1);

    const auto a = gen_random_tree_set(2, 1.0, 10, 42);
    CHECK(a == gen_random_tree_set(2, 1.0, 10, 42));
    CHECK_FALSE(a == gen_random_tree_set(2, 1.0, 10, 43));
    CHECK(a.size() >= 256);
    CHECK(a.size() <= 4096);
    CHECK(minimal_spread_constant(a, 1.0) <= 40.0);
    // frozen regression values
    CHECK(a.size() == 1888);
    CHECK(minimal_spread_constant(a, 1.0) == doctest::Approx(4.65625));

    CHECK_THROWS_AS(gen_random_tree_set(2, 2.5, 4, 1), std::invalid_argument);
}

TEST_CASE("degenerate generators")
{
    const auto line = gen_degenerate(DegenerateKind::line, {2, 6, {7}, 0});
    CHECK(line.size() == 64);
    for (std::size_t i = 0; i < line.size(); ++i) CHECK(line.cell(i)[1] == 7);

    CHECK(gen_degenerate(DegenerateKind::cluster, {1, 10, {3}, 5}).size() == 32);
    const auto pt = gen_degenerate(DegenerateKind::point, {3, 4, {1, 2, 3}, 0});
    CHECK(pt.size() == 1);
    CHECK(pt.cell(0)[2] == 3);

    CHECK_THROWS_AS(gen_degenerate(DegenerateKind::line, {2, 3, {8}, 0}), std::invalid_argument);
    CHECK_THROWS_AS(gen_degenerate(DegenerateKind::cluster, {2, 3, {0}, 4}), std::invalid_argument);
    CHECK_THROWS_AS(gen_degenerate(DegenerateKind::point, {2, 3, {0, 0, 0}, 0}), std::invalid_argument);
}
