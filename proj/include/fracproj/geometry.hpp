#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fracproj {

inline constexpr int kMaxDim = 8;
inline constexpr int kMaxLevel = 20;

using Coord = std::int64_t;

/// Closed-open dyadic cube prod_i [c_i 2^-j, (c_i + 1) 2^-j) inside [0,1]^n.
class DyadicCube {
public:
    DyadicCube() = default;
    DyadicCube(int level, std::vector<Coord> coords);

    static DyadicCube root(int dim);

    int level() const { return level_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<Coord>& coords() const { return coords_; }

    double side() const;

    DyadicCube parent() const;
    /// Ancestor at a coarser (or equal) level.
    DyadicCube ancestor(int level) const;
    std::vector<DyadicCube> children() const;
    bool contains(const DyadicCube& other) const;

    auto operator<=>(const DyadicCube&) const = default;
    bool operator==(const DyadicCube&) const = default;

    std::string to_string() const;

private:
    int level_ = 0;
    std::vector<Coord> coords_;
};

/// Finite set of level-k grid cells in [0,1)^n, stored deduplicated and in
/// lexicographic order. The represented points are the cell centres.
class GridPointSet {
public:
    GridPointSet() = default;
    GridPointSet(int dim, int level);

    /// Takes a flat row-major array of cells; duplicates are merged.
    static GridPointSet from_flat(int dim, int level, std::vector<Coord> flat);
    static GridPointSet from_cells(int dim, int level,
                                   const std::vector<std::vector<Coord>>& cells);

    int dim() const { return dim_; }
    int level() const { return level_; }
    std::size_t size() const { return dim_ == 0 ? 0 : flat_.size() / static_cast<std::size_t>(dim_); }
    bool empty() const { return flat_.empty(); }

    std::span<const Coord> cell(std::size_t i) const {
        return {flat_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    const std::vector<Coord>& flat() const { return flat_; }

    bool contains(std::span<const Coord> cell) const;
    /// Index of `cell` or size() when absent.
    std::size_t find(std::span<const Coord> cell) const;

    /// Centre of cell i in [0,1)^n.
    std::vector<double> centre(std::size_t i) const;
    double cell_side() const;

    bool subset_of(const GridPointSet& other) const;

    bool operator==(const GridPointSet&) const = default;

private:
    int dim_ = 0;
    int level_ = 0;
    std::vector<Coord> flat_;
};

void validate_dim_level(int dim, int level);

/// Number of level-j dyadic cubes meeting P.
std::size_t covering_number(const GridPointSet& points, int level);

/// The level-j cubes meeting P, as a point set at level j.
GridPointSet coarsen(const GridPointSet& points, int level);

/// All cells within Chebyshev distance `radius` (in cells) of some cell of P,
/// clipped to [0, 2^k)^n.
GridPointSet dilate(const GridPointSet& points, int radius);

GridPointSet set_union(const GridPointSet& a, const GridPointSet& b);
GridPointSet set_difference(const GridPointSet& a, const GridPointSet& b);

/// Text format: header `n k count`, then `count` rows of n integers.
/// Duplicate or out-of-range rows are rejected with FormatError.
GridPointSet read_point_set(std::istream& in);
void write_point_set(std::ostream& out, const GridPointSet& points);

GridPointSet load_point_set(const std::string& path);
void save_point_set(const std::string& path, const GridPointSet& points);

}  // namespace fracproj
