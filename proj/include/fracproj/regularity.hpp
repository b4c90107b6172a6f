#pragma once

#include "fracproj/content.hpp"
#include "fracproj/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fracproj {

/// Least C such that P is a (C, 2^-k, s)-set with respect to dyadic windows:
/// the maximum of count(Q) / (side(Q)/delta)^s over occupied cubes of levels 0..k.
/// Returns 0 for an empty set.
double minimal_spread_constant(const GridPointSet& points, double s);
double minimal_spread_constant(const CoverTree& tree, double s);

struct HeavyParams {
    double s = 1.0;
    double big_c = 1.0;
    double big_l = 1.0;
    double tau = 1.0;
};

struct Decomposition {
    GridPointSet good;
    GridPointSet bad;
    std::vector<DyadicCube> maximal_heavy;  // level-major, lexicographic
    HeavyParams params;
    GridPointSet net;
    /// sum over maximal heavy cubes of side^s
    double heavy_content = 0.0;
    std::vector<std::string> warnings;
};

/// A cube Q is heavy when count(Q) >= tau*C*L*(side(Q)/delta)^s. Cells under
/// a maximal heavy cube are bad, the rest good. `net` is the greedy
/// (lexicographic) maximal subset of `good` with pairwise Chebyshev distance
/// at least `separation` cells.
Decomposition heavy_decompose(const GridPointSet& points, const HeavyParams& params, int separation = 1);

/// Default tau = 4^-n.
double default_tau(int dim);

/// Greedy lexicographic maximal subset with pairwise Chebyshev distance >= separation.
GridPointSet separated_net(const GridPointSet& points, int separation);

/// Subset S of P with minimal_spread_constant(S, s) <= 1 and
/// |S| >= content(P, s) * 2^{k s} / 2. Cubes holding more than
/// floor((side/delta)^s) surviving cells are thinned bottom-up, alternating
/// between child cubes.
GridPointSet frostman_subset(const GridPointSet& points, double s);

/// Multiplier c_n in the cardinality guarantee of frostman_subset.
inline constexpr double kFrostmanFraction = 0.5;

/// good.pts, bad.pts and heavy.cubes inside `dir`.
void save_decomposition(const std::string& dir, const Decomposition& decomposition);

}  // namespace fracproj
