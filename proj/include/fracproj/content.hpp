#pragma once

#include "fracproj/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracproj {

/// Sparse dyadic tree over a point set: every occupied cube at levels
/// 0..P.level together with the number of P-cells beneath it.
///
/// Nodes of one level are stored in lexicographic order of their coordinates;
/// each node knows its parent (index into the previous level) and its occupied
/// children (indices into the next level).
class CoverTree {
public:
    explicit CoverTree(const GridPointSet& points);

    int dim() const { return dim_; }
    int leaf_level() const { return leaf_level_; }

    std::size_t level_size(int level) const { return levels_.at(static_cast<std::size_t>(level)).counts.size(); }
    std::uint64_t count(int level, std::size_t node) const { return levels_[static_cast<std::size_t>(level)].counts[node]; }
    std::span<const Coord> coords(int level, std::size_t node) const;
    DyadicCube cube(int level, std::size_t node) const;

    std::size_t parent(int level, std::size_t node) const;
    std::span<const std::uint32_t> children(int level, std::size_t node) const;

    /// Largest count among level-j nodes.
    std::uint64_t max_count(int level) const;
    std::optional<std::size_t> find(const DyadicCube& cube) const;

    std::size_t node_count() const;

private:
    struct Level {
        std::vector<Coord> coords;
        std::vector<std::uint64_t> counts;
        std::vector<std::uint32_t> parent;
        std::vector<std::uint32_t> child_offsets;
        std::vector<std::uint32_t> children;
    };

    int dim_;
    int leaf_level_;
    std::vector<Level> levels_;
};

/// Antichain of dyadic cubes together with sum of side^s.
struct DyadicCover {
    int dim = 0;
    double s = 1.0;
    std::vector<DyadicCube> cubes;  // level-major, lexicographic
    double value = 0.0;

    /// Sum of side^s recomputed from `cubes`.
    double recompute_value() const;
    /// True iff every cell of `points` lies in exactly one cube and every cube meets `points`.
    bool covers_exactly(const GridPointSet& points) const;
};

/// Cover by the leaves themselves (always a feasible cover).
DyadicCover leaf_cover(const GridPointSet& points, double s);

/// Minimizes sum side(Q)^s over disjoint dyadic covers of P with cube levels
/// in [coarsest_level, P.level]. Ties prefer the coarser cube.
DyadicCover optimal_cover(const GridPointSet& points, double s, int coarsest_level = 0);
DyadicCover optimal_cover(const CoverTree& tree, double s, int coarsest_level = 0);

/// Splits a minimal cover by level into centre sets. Throws
/// PreconditionViolation naming the first cube Q0 for which
/// sum{side(Q)^s : Q in cover, Q inside Q0} > side(Q0)^s.
std::map<int, GridPointSet> delta_s_sets_from_cover(const DyadicCover& cover);

struct StrongCover {
    int k_lo = 0;
    int k_hi = 0;
    std::map<int, GridPointSet> sets;  // every k in [k_lo, k_hi] present, possibly empty
    /// Scales whose refinement had to be clamped because the unconstrained
    /// minimizer used cubes outside the allowed level window.
    std::vector<std::string> diagnostics;
};

/// Finite-range strong covering: for every precision level i in [k_lo, k_hi],
/// the level-i cubes meeting P are re-covered by a minimizing dyadic cover with
/// levels in [max(k_lo, floor(eps*i/s)), i]; the cover's level-k cubes are
/// unioned into P_k.
StrongCover finite_strong_cover(const GridPointSet& points, double s, double eps, int k_lo, int k_hi);

/// Cover export: one `level c_1 ... c_n` line per cube, then `value <decimal>`.
void write_cover(std::ostream& out, const DyadicCover& cover);
DyadicCover read_cover(std::istream& in, int dim, double s);

}  // namespace fracproj
