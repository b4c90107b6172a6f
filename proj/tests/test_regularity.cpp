#include "fracproj/content.hpp"
#include "fracproj/errors.hpp"
#include "fracproj/fractals.hpp"
#include "fracproj/regularity.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fracproj;

namespace {

GridPointSet full_grid(int dim, int level)
{
    std::vector<Coord> flat;
    for (const auto& c : oracle::all_cells(dim, level)) flat.insert(flat.end(), c.begin(), c.end());
    return GridPointSet::from_flat(dim, level, std::move(flat));
}

bool inside_some(std::span<const Coord> cell, int level, const std::vector<DyadicCube>& cubes)
{
    for (const auto& q : cubes)
        if (oracle::inside(cell, level, q.coords(), q.level())) return true;
    return false;
}

}  // namespace

TEST_CASE("minimal_spread_constant examples")
{
    CHECK(minimal_spread_constant(GridPointSet::from_cells(2, 6, {{4, 5}}), 1.3) == 1.0);
    CHECK(minimal_spread_constant(full_grid(1, 6), 1.0) == 1.0);
    const auto four = GridPointSet::from_cells(1, 4, {{0}, {1}, {2}, {3}});
    CHECK(minimal_spread_constant(four, 0.5) == doctest::Approx(2.0));
    CHECK(oracle::spread(four, 0.5) == doctest::Approx(2.0));
    CHECK(minimal_spread_constant(GridPointSet(2, 3), 1.0) == 0.0);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = oracle::random_set(1 + static_cast<int>(seed % 2), 4, 0.3, seed);
        for (double s : {0.4, 1.0})
            CHECK(minimal_spread_constant(p, s) == doctest::Approx(oracle::spread(p, s)).epsilon(1e-12));
    }
}

TEST_CASE("heavy_decompose examples")
{
    const auto sparse = GridPointSet::from_cells(2, 6, {{0, 0}, {40, 17}, {63, 63}});
    const auto none = heavy_decompose(sparse, {1.0, 4.0, 1.0, 1.0});
    CHECK(none.bad.empty());
    CHECK(none.good == sparse);
    CHECK(none.maximal_heavy.empty());

    // 1024 cells filling one level-5 cube of the level-10 grid in the plane.
    const auto cluster = gen_degenerate(DegenerateKind::cluster, {2, 10, {3, 17}, 5});
    REQUIRE(cluster.size() == 1024);
    const auto dec = heavy_decompose(cluster, {1.0, 1.0, 4.0, 0.25});
    CHECK(dec.good.empty());
    CHECK(dec.bad == cluster);
    CHECK(dec.heavy_content <= 1.0 / (0.25 * 4.0));
    for (const auto& q : dec.maximal_heavy) CHECK(q.level() <= 5);

    // Cluster plus a full-grid spread component in n = 1.
    const auto line_cluster = gen_degenerate(DegenerateKind::cluster, {1, 10, {5}, 5});
    CHECK(line_cluster.size() == 32);
    std::vector<Coord> spread_flat;
    for (Coord c = 0; c < 1024; c += 16) spread_flat.push_back(c);
    const auto spread = GridPointSet::from_flat(1, 10, spread_flat);
    const auto mixed = set_union(line_cluster, spread);
    const HeavyParams params{0.5, std::max(1.0, static_cast<double>(mixed.size()) * std::exp2(-5.0)), 2.0, 0.25};
    const auto mdec = heavy_decompose(mixed, params);
    CHECK(line_cluster.subset_of(mdec.bad));
    for (std::size_t i = 0; i < spread.size(); ++i)
        if (!inside_some(spread.cell(i), 10, mdec.maximal_heavy)) CHECK(mdec.good.contains(spread.cell(i)));

    CHECK_THROWS_AS(heavy_decompose(cluster, {1.0, 1.0, 4.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(heavy_decompose(cluster, {1.0, 1.0, 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("heavy_decompose invariants")
{
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const int dim = 1 + static_cast<int>(seed % 2);
        const auto p = set_union(oracle::random_set(dim, dim == 1 ? 8 : 5, 0.05, seed),
                                 gen_degenerate(DegenerateKind::cluster,
                                                {dim, dim == 1 ? 8 : 5, std::vector<Coord>(dim, 1), 2}));
        const double s = 0.5 * dim;
        const double big_c = std::max(1.0, static_cast<double>(p.size()) * std::exp2(-p.level() * s));
        const HeavyParams params{s, big_c, 1.0 + static_cast<double>(seed % 4), default_tau(dim)};
        const auto dec = heavy_decompose(p, params);

        CHECK(set_union(dec.good, dec.bad) == p);
        CHECK(set_difference(dec.good, dec.bad) == dec.good);
        for (std::size_t i = 0; i < dec.bad.size(); ++i) CHECK(inside_some(dec.bad.cell(i), p.level(), dec.maximal_heavy));
        for (std::size_t i = 0; i < dec.good.size(); ++i)
            CHECK_FALSE(inside_some(dec.good.cell(i), p.level(), dec.maximal_heavy));
        for (std::size_t a = 0; a < dec.maximal_heavy.size(); ++a)
            for (std::size_t b = 0; b < dec.maximal_heavy.size(); ++b)
                if (a != b) CHECK_FALSE(dec.maximal_heavy[a].contains(dec.maximal_heavy[b]));

        const double scale = params.tau * params.big_c * params.big_l;
        CHECK(dec.heavy_content <= 1.0 / (params.tau * params.big_l) * (1 + 1e-12));
        CHECK(minimal_spread_constant(dec.net, s) <= std::pow(4.0, dim) * scale);
        CHECK(heavy_decompose(dec.good, params).bad.empty());
    }
}

TEST_CASE("separated_net")
{
    const auto p = GridPointSet::from_cells(1, 4, {{0}, {1}, {2}, {5}, {6}});
    CHECK(separated_net(p, 1) == p);
    CHECK(separated_net(p, 2) == GridPointSet::from_cells(1, 4, {{0}, {2}, {5}}));
    CHECK(separated_net(p, 3) == GridPointSet::from_cells(1, 4, {{0}, {5}}));
}

TEST_CASE("frostman_subset")
{
    const auto regular = GridPointSet::from_cells(1, 6, {{0}, {20}, {50}});
    CHECK(frostman_subset(regular, 0.5) == regular);

    const auto grid = full_grid(2, 6);
    const auto s1 = frostman_subset(grid, 1.0);
    CHECK(s1.subset_of(grid));
    CHECK(static_cast<double>(s1.size()) >= kFrostmanFraction * optimal_cover(grid, 1.0).value * 64.0);
    CHECK(minimal_spread_constant(s1, 1.0) <= 1.0);

    const auto cantor = gen_cantor_product(CantorPattern::uniform(1, {0, 3}), 3);
    const auto sc = frostman_subset(cantor, 0.5);
    CHECK(static_cast<double>(sc.size()) >= kFrostmanFraction * 8.0);
    CHECK(minimal_spread_constant(sc, 0.5) <= 1.0);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int dim = 1 + static_cast<int>(seed % 2);
        const auto p = oracle::random_set(dim, 5, 0.3, seed);
        if (p.empty()) continue;
        const double s = 0.4 * dim;
        const auto sub = frostman_subset(p, s);
        CHECK(sub.subset_of(p));
        CHECK(oracle::spread(sub, s) <= std::pow(4.0, dim));
        CHECK(static_cast<double>(sub.size()) >=
              kFrostmanFraction * optimal_cover(p, s).value * std::exp2(5 * s) * (1 - 1e-12));
    }
    CHECK_THROWS_AS(frostman_subset(GridPointSet(1, 3), 0.5), EmptyInputError);
}
