#include "fracproj/errors.hpp"
#include "fracproj/fractals.hpp"
#include "fracproj/projection.hpp"
#include "fracproj/regularity.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace fracproj;

namespace {

ProjectedPoints on_line(std::vector<double> xs)
{
    return ProjectedPoints{1, std::move(xs)};
}

double dist(std::span<const double> a, std::span<const double> b)
{
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(d2);
}

}  // namespace

TEST_CASE("Haar planes are orthonormal and isotropic")
{
    Rng rng(20240601);
    for (int n = 2; n <= 5; ++n)
        for (int m = 1; m < n; ++m)
            for (int rep = 0; rep < 20; ++rep) {
                const Plane v = haar_sample(n, m, rng);
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b) {
                        double dot = 0.0;
                        for (int i = 0; i < n; ++i) dot += v.row(a)[i] * v.row(b)[i];
                        CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
                    }
            }

    // E |pi_V e_1|^2 = m/n
    double sum = 0.0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        const Plane v = haar_sample(2, 1, rng);
        sum += v.row(0)[0] * v.row(0)[0];
    }
    CHECK(std::abs(sum / trials - 0.5) < 0.01);

    Rng a(7), b(7);
    CHECK(haar_sample(4, 2, a).frame() == haar_sample(4, 2, b).frame());
    CHECK_THROWS_AS(haar_sample(2, 2, a), std::invalid_argument);
    CHECK_THROWS_AS(Plane(2, 1, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("projection of cell centres")
{
    const auto p = GridPointSet::from_cells(2, 2, {{1, 3}});
    const auto proj = project_points(Plane::coordinate(2, {1}), p);
    REQUIRE(proj.size() == 1);
    CHECK(proj.point(0)[0] == doctest::Approx(0.875));

    Rng rng(3);
    const auto q = oracle::random_set(3, 3, 0.2, 11);
    for (int rep = 0; rep < 10; ++rep) {
        const Plane v = haar_sample(3, 2, rng);
        const auto pq = project_points(v, q);
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < q.size(); ++j)
                CHECK(dist(pq.point(i), pq.point(j)) <= dist(q.centre(i), q.centre(j)) + 1e-12);
    }
    CHECK_THROWS_AS(project_points(Plane::coordinate(3, {0}), p), std::invalid_argument);
}

TEST_CASE("pair energy examples")
{
    const auto clump = GridPointSet::from_cells(2, 10, {{100, 100}, {101, 100}, {100, 101}, {101, 101}});
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) CHECK(pair_energy(clump, haar_sample(2, 1, rng), 0.01) == 16);

    const auto line = gen_degenerate(DegenerateKind::line, {2, 6, {0}, 0});
    CHECK(pair_energy(line, Plane::coordinate(2, {1}), std::ldexp(1.0, -6)) == 64 * 64);

    const double delta = 0.01;
    CHECK(pair_energy(on_line({0.1, 0.1 + 2 * delta, 0.1 + 4 * delta}), delta) == 3);
    CHECK(pair_energy(on_line({}), delta) == 0);
}

TEST_CASE("pair energy agrees with brute force and the off-diagonal count")
{
    Rng rng(99);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int n = 2 + static_cast<int>(seed % 2);
        const int m = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(n - 1));
        const auto p = oracle::random_set(n, n == 2 ? 5 : 3, 0.3, seed);
        const Plane v = haar_sample(n, m, rng);
        for (double delta : {1.0 / 64, 1.0 / 16, 0.2}) {
            const auto proj = project_points(v, p);
            const auto e = pair_energy(proj, delta);
            CHECK(e == oracle::energy(proj.coords, m, delta));
            CHECK(e == offdiagonal_energy(p, v, delta) + p.size());
        }
    }
}

TEST_CASE("Riesz sums")
{
    const auto two = GridPointSet::from_cells(1, 1, {{0}, {1}});
    CHECK(riesz_sum(two, 1).sum == doctest::Approx(2.0 / 0.5));

    const double h = 1.0 / 16;
    const auto four = GridPointSet::from_cells(1, 4, {{0}, {1}, {2}, {3}});
    const auto r = riesz_sum(four, 1);
    CHECK(r.sum == doctest::Approx((26.0 / 3.0) / h));
    CHECK(r.sum <= r.annuli_bound);

    const auto cantor = gen_cantor_product(CantorPattern::uniform(2, {0, 3}), 5);
    REQUIRE(cantor.size() == 1024);
    const auto rc = riesz_sum(cantor, 1);
    const double c = minimal_spread_constant(cantor, 1.0);
    const double spread_bound = riesz_spread_bound(2, 10, cantor.size(), 1.0, c, 1);
    CHECK(rc.sum <= rc.annuli_bound);
    CHECK(rc.annuli_bound <= spread_bound * (1 + 1e-12));

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = oracle::random_set(2, 4, 0.3, seed);
        if (p.size() < 2) continue;
        double brute = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < p.size(); ++j)
                if (i != j) brute += 1.0 / std::pow(dist(p.centre(i), p.centre(j)), 2);
        const auto rp = riesz_sum(p, 2);
        CHECK(rp.sum == doctest::Approx(brute).epsilon(1e-12));
        CHECK(rp.sum <= rp.annuli_bound);
    }
    CHECK_THROWS_AS(riesz_sum(GridPointSet::from_cells(1, 1, {{0}}), 1), std::invalid_argument);
}

TEST_CASE("coincidence probability")
{
    for (double t : {0.05, 0.2, 0.5, 0.9})
        CHECK(coincidence_probability(2, 1, t) == doctest::Approx(2.0 / std::numbers::pi * std::asin(t)).epsilon(1e-12));
    // uniform on the sphere in R^3: the first coordinate is uniform on [-1, 1]
    CHECK(coincidence_probability(3, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(coincidence_probability(2, 1, 2.0) == 1.0);
    for (int n = 2; n <= 6; ++n)
        for (int m = 1; m < n; ++m) {
            const double c = coincidence_constant(n, m);
            for (double t = 0.01; t <= 1.0; t += 0.01)
                CHECK(coincidence_probability(n, m, t) <= c * std::pow(t, m) * (1 + 1e-9));
        }
}

TEST_CASE("min projection cover")
{
    // delta = 1/8 in m = 1 gives bins of side 1/8; counts 5, 3, 2.
    const double delta = 0.125;
    std::vector<double> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(0.01 + 0.02 * i);
    for (int i = 0; i < 3; ++i) xs.push_back(0.26 + 0.02 * i);
    for (int i = 0; i < 2; ++i) xs.push_back(0.76 + 0.02 * i);
    const auto proj = on_line(xs);
    CHECK(min_projection_cover(proj, delta, 7).bins == 2);
    CHECK(oracle::min_bins_exhaustive({0, 0, 0, 0, 0, 2, 2, 2, 6, 6}, 7) == 2);
    CHECK(min_projection_cover(proj, delta, 1).bins == 1);
    CHECK(min_projection_cover(proj, delta, 10).bins == 3);
    CHECK(min_projection_cover(proj, delta, 10).occupied == 3);
    CHECK_THROWS_AS(min_projection_cover(proj, delta, 11), std::invalid_argument);
    CHECK_THROWS_AS(min_projection_cover(proj, delta, 0), std::invalid_argument);

    Rng rng(17);
    const auto p = oracle::random_set(2, 6, 0.2, 3);
    for (int rep = 0; rep < 20; ++rep) {
        const Plane v = haar_sample(2, 1, rng);
        const double d = 1.0 / 64;
        const auto e = pair_energy(p, v, d);
        for (std::size_t kappa : {std::size_t{1}, p.size() / 3, p.size()}) {
            const auto cover = min_projection_cover(p, v, d, kappa);
            CHECK(static_cast<double>(e) >= static_cast<double>(kappa * kappa) / static_cast<double>(cover.bins));
        }
    }
}

TEST_CASE("direction classification")
{
    const auto single = GridPointSet::from_cells(2, 10, {{5, 5}});
    const auto c1 = classify_direction(single, Plane::coordinate(2, {0}), std::ldexp(1.0, -10), 1.0, 0.1, 4.0);
    CHECK(c1.label == Label::good);
    CHECK(c1.energy == 1);

    const auto line = gen_degenerate(DegenerateKind::line, {2, 10, {0}, 0});
    const auto c2 = classify_direction(line, Plane::coordinate(2, {1}), std::ldexp(1.0, -10), 1.0, 0.1, 4.0);
    CHECK(c2.label == Label::bad);
    CHECK(c2.energy == line.size() * line.size());
    CHECK(c2.threshold == doctest::Approx(std::pow(2.0, 14.0) / 4.0));

    CHECK(scan_kappa(std::ldexp(1.0, -10), 1.0, 0.1, 1024) == 512);
    CHECK(scan_kappa(std::ldexp(1.0, -10), 1.0, 0.1, 100) == 100);
    CHECK(cover_floor(std::ldexp(1.0, -10), 1.0, 0.1, 1, 4.0) == doctest::Approx(4.0 * std::pow(2.0, 4.0)));
}

TEST_CASE("direction scans")
{
    const auto cantor = gen_cantor_product(CantorPattern::uniform(2, {0, 3}), 4);
    ScanParams params;
    params.s = 1.0;
    params.eps = 0.1;
    params.master_seed = 77;

    const auto empty = direction_scan(cantor, params);
    CHECK(empty.directions.empty());
    CHECK(empty.bad_fraction == 0.0);

    params.num_samples = 40;
    const auto one = direction_scan(cantor, params);
    params.workers = 4;
    const auto many = direction_scan(cantor, params);
    std::ostringstream a, b;
    write_scan_report(a, one);
    write_scan_report(b, many);
    CHECK(a.str() == b.str());
    CHECK(one.slack == 4.0);
    for (const auto& d : one.directions) CHECK((d.label == Label::bad) == (static_cast<double>(d.energy) >= d.threshold));

    std::istringstream in(a.str());
    const auto back = read_scan_report(in);
    std::ostringstream c;
    write_scan_report(c, back);
    CHECK(c.str() == a.str());
    CHECK(back.directions.size() == 40);
    CHECK(back.directions[7].plane.frame() == one.directions[7].plane.frame());
    CHECK(a.str().find(summary_line(one)) != std::string::npos);
    CHECK(summary_line(one).rfind("bad_fraction ", 0) == 0);

    std::ostringstream csv;
    write_scan_csv(csv, one);
    CHECK(csv.str().rfind("index,energy,min_cover,label\n", 0) == 0);

    std::istringstream junk("scan_report 2\n");
    CHECK_THROWS_AS(read_scan_report(junk), FormatError);
}

TEST_CASE("line set scan matches the angular measure of the bad window")
{
    // Projected spacing is h|cos(theta)|, so with delta = h the energy is
    // N + 2 sum_{d=1}^{D} (N - d), D = floor(1/|cos(theta)|). Bad iff D >= D_min,
    // i.e. |cos(theta)| <= 1/D_min, which has measure (2/pi) asin(1/D_min).
    const int level = 10;
    const auto line = gen_degenerate(DegenerateKind::line, {2, level, {0}, 0});
    const double n_pts = static_cast<double>(line.size());
    const double delta = std::ldexp(1.0, -level);
    const double threshold = energy_threshold(delta, 1.0, 0.1, 1, 4.0);
    int d_min = 1;
    auto energy_at = [&](int d) { return n_pts + 2.0 * (n_pts * d - d * (d + 1) / 2.0); };
    while (energy_at(d_min) < threshold) ++d_min;
    const double expected = 2.0 / std::numbers::pi * std::asin(1.0 / d_min);

    ScanParams params;
    params.s = 1.0;
    params.eps = 0.1;
    params.num_samples = 2000;
    params.master_seed = 4242;
    params.workers = 4;
    const auto report = direction_scan(line, params);
    const double se = std::sqrt(expected * (1 - expected) / params.num_samples);
    CHECK(std::abs(report.bad_fraction - expected) <= 4 * se);
}
