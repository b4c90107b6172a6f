#pragma once

#include "fracproj/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fracproj {

/// Product Cantor pattern: at each step every cell is split into base^n
/// sub-cells and the sub-cell with digit d_a on axis a survives iff
/// d_a is in keep[a].
struct CantorPattern {
    int base = 4;
    std::vector<std::vector<int>> keep;  // one digit list per axis

    int dim() const { return static_cast<int>(keep.size()); }
    /// sum_a log|keep[a]| / log base
    double dimension() const;
    void validate() const;

    /// Same digit set on every axis.
    static CantorPattern uniform(int dim, std::vector<int> digits, int base = 4);
};

/// Output level is iterations * log2(base); |cells| = prod_a |keep[a]|^iterations.
GridPointSet gen_cantor_product(const CantorPattern& pattern, int iterations);

/// Conditioned branching process: every occupied cube keeps each of its 2^n
/// children independently with probability 2^{s-n}, redrawn until at least one
/// child survives. Each node draws from its own stream derived from
/// (seed, level, coordinates), so the output depends only on the seed.
GridPointSet gen_random_tree_set(int dim, double s, int level, std::uint64_t seed);

enum class DegenerateKind { line, cluster, point };

struct DegenerateParams {
    int dim = 2;
    int level = 0;
    /// line: value of the non-first coordinates; point: the cell coordinates
    /// (one value broadcasts); cluster: coordinates of the coarse cube.
    std::vector<Coord> at;
    /// cluster only
    int coarse_level = 0;
};

/// line: all cells whose non-first coordinates equal `at`;
/// cluster: the full sub-grid inside one level-`coarse_level` cube;
/// point: a single cell.
GridPointSet gen_degenerate(DegenerateKind kind, const DegenerateParams& params);

}  // namespace fracproj
