#include "fracproj/geometry.hpp"

#include "fracproj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fracproj {

namespace {

bool lex_less(std::span<const Coord> a, std::span<const Coord> b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Sorts rows of a flat array lexicographically and drops duplicates.
std::vector<Coord> sort_unique_rows(int dim, std::vector<Coord> flat)
{
    const auto d = static_cast<std::size_t>(dim);
    const std::size_t rows = flat.size() / d;
    std::vector<std::size_t> order(rows);
    for (std::size_t i = 0; i < rows; ++i) order[i] = i;
    auto row = [&](std::size_t i) { return std::span<const Coord>(flat.data() + i * d, d); };
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return lex_less(row(a), row(b)); });

    std::vector<Coord> out;
    out.reserve(flat.size());
    for (std::size_t k = 0; k < rows; ++k) {
        auto r = row(order[k]);
        if (!out.empty() && std::equal(r.begin(), r.end(), out.end() - static_cast<std::ptrdiff_t>(d)))
            continue;
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

}  // namespace

void validate_dim_level(int dim, int level)
{
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("dimension must lie in [1, " + std::to_string(kMaxDim) + "], got " +
                                    std::to_string(dim));
    if (level < 0 || level > kMaxLevel)
        throw std::invalid_argument("level must lie in [0, " + std::to_string(kMaxLevel) + "], got " +
                                    std::to_string(level));
}

// ---------------------------------------------------------------------------
// DyadicCube

DyadicCube::DyadicCube(int level, std::vector<Coord> coords) : level_(level), coords_(std::move(coords))
{
    validate_dim_level(dim(), level_);
    const Coord limit = Coord{1} << level_;
    for (Coord c : coords_)
        if (c < 0 || c >= limit)
            throw std::invalid_argument("cube coordinate " + std::to_string(c) + " out of range at level " +
                                        std::to_string(level_));
}

DyadicCube DyadicCube::root(int dim)
{
    return DyadicCube(0, std::vector<Coord>(static_cast<std::size_t>(dim), 0));
}

double DyadicCube::side() const { return std::ldexp(1.0, -level_); }

DyadicCube DyadicCube::parent() const
{
    if (level_ == 0) throw std::invalid_argument("the root cube has no parent");
    return ancestor(level_ - 1);
}

DyadicCube DyadicCube::ancestor(int level) const
{
    if (level < 0 || level > level_) throw std::invalid_argument("ancestor level out of range");
    std::vector<Coord> c(coords_);
    for (auto& x : c) x >>= (level_ - level);
    DyadicCube out;
    out.level_ = level;
    out.coords_ = std::move(c);
    return out;
}

std::vector<DyadicCube> DyadicCube::children() const
{
    if (level_ >= kMaxLevel) throw std::invalid_argument("children would exceed the maximum level");
    const int n = dim();
    std::vector<DyadicCube> out;
    out.reserve(std::size_t{1} << n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        DyadicCube child;
        child.level_ = level_ + 1;
        child.coords_.resize(coords_.size());
        for (int i = 0; i < n; ++i) child.coords_[i] = 2 * coords_[i] + ((mask >> i) & 1u);
        out.push_back(std::move(child));
    }
    return out;
}

bool DyadicCube::contains(const DyadicCube& other) const
{
    if (other.dim() != dim() || other.level_ < level_) return false;
    return other.ancestor(level_) == *this;
}

std::string DyadicCube::to_string() const
{
    std::ostringstream os;
    os << "Q(level " << level_ << ";";
    for (Coord c : coords_) os << ' ' << c;
    os << ')';
    return os.str();
}

// ---------------------------------------------------------------------------
// GridPointSet

GridPointSet::GridPointSet(int dim, int level) : dim_(dim), level_(level) { validate_dim_level(dim, level); }

GridPointSet GridPointSet::from_flat(int dim, int level, std::vector<Coord> flat)
{
    GridPointSet out(dim, level);
    if (flat.size() % static_cast<std::size_t>(dim) != 0)
        throw std::invalid_argument("flat cell array length is not a multiple of the dimension");
    const Coord limit = Coord{1} << level;
    for (Coord c : flat)
        if (c < 0 || c >= limit)
            throw std::invalid_argument("cell coordinate " + std::to_string(c) + " out of range at level " +
                                        std::to_string(level));
    out.flat_ = sort_unique_rows(dim, std::move(flat));
    return out;
}

GridPointSet GridPointSet::from_cells(int dim, int level, const std::vector<std::vector<Coord>>& cells)
{
    std::vector<Coord> flat;
    flat.reserve(cells.size() * static_cast<std::size_t>(dim));
    for (const auto& c : cells) {
        if (static_cast<int>(c.size()) != dim) throw std::invalid_argument("cell has the wrong dimension");
        flat.insert(flat.end(), c.begin(), c.end());
    }
    return from_flat(dim, level, std::move(flat));
}

std::size_t GridPointSet::find(std::span<const Coord> c) const
{
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (lex_less(cell(mid), c))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < size() && std::ranges::equal(cell(lo), c)) return lo;
    return size();
}

bool GridPointSet::contains(std::span<const Coord> c) const
{
    return static_cast<int>(c.size()) == dim_ && find(c) != size();
}

std::vector<double> GridPointSet::centre(std::size_t i) const
{
    const double h = cell_side();
    auto c = cell(i);
    std::vector<double> x(c.size());
    for (std::size_t a = 0; a < c.size(); ++a) x[a] = (static_cast<double>(c[a]) + 0.5) * h;
    return x;
}

double GridPointSet::cell_side() const { return std::ldexp(1.0, -level_); }

bool GridPointSet::subset_of(const GridPointSet& other) const
{
    if (other.dim_ != dim_ || other.level_ != level_) return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (!other.contains(cell(i))) return false;
    return true;
}

// ---------------------------------------------------------------------------

GridPointSet coarsen(const GridPointSet& points, int level)
{
    if (level < 0 || level > points.level())
        throw std::invalid_argument("coarsening level " + std::to_string(level) + " outside [0, " +
                                    std::to_string(points.level()) + "]");
    std::vector<Coord> flat(points.flat());
    const int shift = points.level() - level;
    for (auto& c : flat) c >>= shift;
    return GridPointSet::from_flat(points.dim(), level, std::move(flat));
}

std::size_t covering_number(const GridPointSet& points, int level)
{
    return coarsen(points, level).size();
}

GridPointSet dilate(const GridPointSet& points, int radius)
{
    if (radius < 0) throw std::invalid_argument("dilation radius must be non-negative");
    if (radius == 0 || points.empty()) return points;

    const int n = points.dim();
    const Coord limit = Coord{1} << points.level();
    const Coord width = 2 * static_cast<Coord>(radius) + 1;
    std::size_t window = 1;
    for (int a = 0; a < n; ++a) window *= static_cast<std::size_t>(width);

    std::vector<Coord> flat;
    flat.reserve(points.size() * std::min<std::size_t>(window, 1u << 16));
    std::vector<Coord> c(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto base = points.cell(i);
        for (std::size_t w = 0; w < window; ++w) {
            std::size_t rest = w;
            bool inside = true;
            for (int a = 0; a < n; ++a) {
                const Coord off = static_cast<Coord>(rest % static_cast<std::size_t>(width)) - radius;
                rest /= static_cast<std::size_t>(width);
                c[a] = base[a] + off;
                if (c[a] < 0 || c[a] >= limit) {
                    inside = false;
                    break;
                }
            }
            if (inside) flat.insert(flat.end(), c.begin(), c.end());
        }
        // Keep memory bounded for large windows.
        if (flat.size() > (std::size_t{1} << 24)) {
            flat = GridPointSet::from_flat(n, points.level(), std::move(flat)).flat();
        }
    }
    return GridPointSet::from_flat(n, points.level(), std::move(flat));
}

GridPointSet set_union(const GridPointSet& a, const GridPointSet& b)
{
    if (a.dim() != b.dim() || a.level() != b.level())
        throw std::invalid_argument("union of point sets with different dimension or level");
    std::vector<Coord> flat(a.flat());
    flat.insert(flat.end(), b.flat().begin(), b.flat().end());
    return GridPointSet::from_flat(a.dim(), a.level(), std::move(flat));
}

GridPointSet set_difference(const GridPointSet& a, const GridPointSet& b)
{
    if (a.dim() != b.dim() || a.level() != b.level())
        throw std::invalid_argument("difference of point sets with different dimension or level");
    std::vector<Coord> flat;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!b.contains(a.cell(i))) flat.insert(flat.end(), a.cell(i).begin(), a.cell(i).end());
    return GridPointSet::from_flat(a.dim(), a.level(), std::move(flat));
}

// ---------------------------------------------------------------------------
// I/O

GridPointSet read_point_set(std::istream& in)
{
    long long n = 0, k = 0, count = 0;
    if (!(in >> n >> k >> count)) throw FormatError("point-set header `n k count` missing or malformed");
    if (n < 1 || n > kMaxDim || k < 0 || k > kMaxLevel || count < 0)
        throw FormatError("point-set header values out of range");
    const int dim = static_cast<int>(n), level = static_cast<int>(k);
    const Coord limit = Coord{1} << level;

    std::vector<Coord> flat;
    flat.reserve(static_cast<std::size_t>(count) * static_cast<std::size_t>(dim));
    for (long long r = 0; r < count; ++r) {
        for (int a = 0; a < dim; ++a) {
            long long v = 0;
            if (!(in >> v)) throw FormatError("point-set row " + std::to_string(r + 1) + " is truncated");
            if (v < 0 || v >= limit)
                throw FormatError("point-set row " + std::to_string(r + 1) + " has an out-of-range coordinate");
            flat.push_back(v);
        }
    }
    std::string trailing;
    if (in >> trailing) throw FormatError("unexpected trailing content after " + std::to_string(count) + " rows");

    auto out = GridPointSet::from_flat(dim, level, std::move(flat));
    if (out.size() != static_cast<std::size_t>(count)) throw FormatError("point-set file contains duplicate rows");
    return out;
}

void write_point_set(std::ostream& out, const GridPointSet& points)
{
    out << points.dim() << ' ' << points.level() << ' ' << points.size() << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto c = points.cell(i);
        for (std::size_t a = 0; a < c.size(); ++a) out << (a ? " " : "") << c[a];
        out << '\n';
    }
}

GridPointSet load_point_set(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open point-set file " + path);
    return read_point_set(in);
}

void save_point_set(const std::string& path, const GridPointSet& points)
{
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write point-set file " + path);
    write_point_set(out, points);
}

}  // namespace fracproj
