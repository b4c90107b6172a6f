#include "fracproj/content.hpp"

#include "fracproj/errors.hpp"
#include "fracproj/power_sum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace fracproj {

namespace {

void check_exponent(double s, int dim)
{
    if (!(s > 0.0) || s > static_cast<double>(dim))
        throw std::invalid_argument("exponent s must lie in (0, n]; got s = " + std::to_string(s) +
                                    " with n = " + std::to_string(dim));
}

bool lex_less(std::span<const Coord> a, std::span<const Coord> b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// CoverTree

CoverTree::CoverTree(const GridPointSet& points) : dim_(points.dim()), leaf_level_(points.level())
{
    if (points.empty()) throw EmptyInputError("cannot build a cover tree over an empty point set");
    const auto d = static_cast<std::size_t>(dim_);
    levels_.resize(static_cast<std::size_t>(leaf_level_) + 1);

    Level& leaves = levels_.back();
    leaves.coords = points.flat();
    leaves.counts.assign(points.size(), 1);

    for (int j = leaf_level_ - 1; j >= 0; --j) {
        Level& fine = levels_[static_cast<std::size_t>(j) + 1];
        Level& coarse = levels_[static_cast<std::size_t>(j)];
        std::vector<Coord> up(fine.coords);
        for (auto& c : up) c >>= 1;
        coarse.coords = GridPointSet::from_flat(dim_, j, std::move(up)).flat();
        const std::size_t m = coarse.coords.size() / d;
        coarse.counts.assign(m, 0);

        const std::size_t nf = fine.counts.size();
        fine.parent.resize(nf);
        std::vector<Coord> key(d);
        for (std::size_t i = 0; i < nf; ++i) {
            for (std::size_t a = 0; a < d; ++a) key[a] = fine.coords[i * d + a] >> 1;
            std::size_t lo = 0, hi = m;
            while (lo < hi) {
                const std::size_t mid = lo + (hi - lo) / 2;
                if (lex_less({coarse.coords.data() + mid * d, d}, key))
                    lo = mid + 1;
                else
                    hi = mid;
            }
            fine.parent[i] = static_cast<std::uint32_t>(lo);
            coarse.counts[lo] += fine.counts[i];
        }

        coarse.child_offsets.assign(m + 1, 0);
        for (std::size_t i = 0; i < nf; ++i) ++coarse.child_offsets[fine.parent[i] + 1];
        for (std::size_t p = 0; p < m; ++p) coarse.child_offsets[p + 1] += coarse.child_offsets[p];
        coarse.children.resize(nf);
        std::vector<std::uint32_t> cursor(coarse.child_offsets.begin(), coarse.child_offsets.end() - 1);
        for (std::size_t i = 0; i < nf; ++i) coarse.children[cursor[fine.parent[i]]++] = static_cast<std::uint32_t>(i);
    }
    levels_.back().child_offsets.assign(points.size() + 1, 0);
    levels_.front().parent.assign(1, 0);
}

std::span<const Coord> CoverTree::coords(int level, std::size_t node) const
{
    const auto d = static_cast<std::size_t>(dim_);
    return {levels_[static_cast<std::size_t>(level)].coords.data() + node * d, d};
}

DyadicCube CoverTree::cube(int level, std::size_t node) const
{
    auto c = coords(level, node);
    return DyadicCube(level, std::vector<Coord>(c.begin(), c.end()));
}

std::size_t CoverTree::parent(int level, std::size_t node) const
{
    if (level == 0) throw std::invalid_argument("the root has no parent");
    return levels_[static_cast<std::size_t>(level)].parent[node];
}

std::span<const std::uint32_t> CoverTree::children(int level, std::size_t node) const
{
    const Level& l = levels_[static_cast<std::size_t>(level)];
    if (level == leaf_level_) return {};
    return {l.children.data() + l.child_offsets[node], l.child_offsets[node + 1] - l.child_offsets[node]};
}

std::uint64_t CoverTree::max_count(int level) const
{
    const auto& c = levels_.at(static_cast<std::size_t>(level)).counts;
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end());
}

std::optional<std::size_t> CoverTree::find(const DyadicCube& q) const
{
    if (q.dim() != dim_ || q.level() > leaf_level_) return std::nullopt;
    const auto d = static_cast<std::size_t>(dim_);
    const Level& l = levels_[static_cast<std::size_t>(q.level())];
    std::size_t lo = 0, hi = l.counts.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (lex_less({l.coords.data() + mid * d, d}, q.coords()))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < l.counts.size() && std::ranges::equal(coords(q.level(), lo), q.coords())) return lo;
    return std::nullopt;
}

std::size_t CoverTree::node_count() const
{
    std::size_t n = 0;
    for (const auto& l : levels_) n += l.counts.size();
    return n;
}

// ---------------------------------------------------------------------------
// DyadicCover

double DyadicCover::recompute_value() const
{
    double v = 0.0;
    for (const auto& q : cubes) v += std::pow(q.side(), s);
    return v;
}

bool DyadicCover::covers_exactly(const GridPointSet& points) const
{
    std::vector<std::size_t> hits(points.size(), 0);
    for (const auto& q : cubes) {
        if (q.dim() != points.dim() || q.level() > points.level()) return false;
        bool meets = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto c = points.cell(i);
            const int shift = points.level() - q.level();
            bool inside = true;
            for (std::size_t a = 0; a < c.size() && inside; ++a) inside = (c[a] >> shift) == q.coords()[a];
            if (inside) {
                ++hits[i];
                meets = true;
            }
        }
        if (!meets) return false;
    }
    return std::all_of(hits.begin(), hits.end(), [](std::size_t h) { return h == 1; });
}

DyadicCover leaf_cover(const GridPointSet& points, double s)
{
    check_exponent(s, points.dim());
    DyadicCover cover;
    cover.dim = points.dim();
    cover.s = s;
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto c = points.cell(i);
        cover.cubes.emplace_back(points.level(), std::vector<Coord>(c.begin(), c.end()));
    }
    const PowerSumComparator cmp(s, points.level());
    cover.value = static_cast<double>(points.size()) * cmp.weight(points.level());
    return cover;
}

DyadicCover optimal_cover(const GridPointSet& points, double s, int coarsest_level)
{
    check_exponent(s, points.dim());
    if (points.empty()) throw EmptyInputError("optimal_cover needs a non-empty point set");
    return optimal_cover(CoverTree(points), s, coarsest_level);
}

DyadicCover optimal_cover(const CoverTree& tree, double s, int coarsest_level)
{
    check_exponent(s, tree.dim());
    const int k = tree.leaf_level();
    if (coarsest_level < 0 || coarsest_level > k)
        throw std::invalid_argument("coarsest cover level must lie in [0, " + std::to_string(k) + "]");

    const PowerSumComparator cmp(s, k);
    std::vector<std::vector<char>> take_self(static_cast<std::size_t>(k) + 1);

    std::vector<LevelProfile> below(tree.level_size(k));
    for (std::size_t i = 0; i < below.size(); ++i) below[i] = LevelProfile::single(k);
    take_self[static_cast<std::size_t>(k)].assign(below.size(), 1);

    for (int j = k - 1; j >= 0; --j) {
        const std::size_t m = tree.level_size(j);
        std::vector<LevelProfile> here(m);
        auto& flags = take_self[static_cast<std::size_t>(j)];
        flags.assign(m, 0);
        for (std::size_t node = 0; node < m; ++node) {
            LevelProfile split;
            for (auto child : tree.children(j, node)) split.add(below[child]);
            LevelProfile self = LevelProfile::single(j);
            if (j >= coarsest_level && cmp.compare(self, split) <= 0) {
                flags[node] = 1;
                here[node] = std::move(self);
            } else {
                here[node] = std::move(split);
            }
        }
        below = std::move(here);
    }

    DyadicCover cover;
    cover.dim = tree.dim();
    cover.s = s;
    cover.value = cmp.value(below.front());

    std::vector<std::pair<int, std::size_t>> chosen;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [level, node] = stack.back();
        stack.pop_back();
        if (take_self[static_cast<std::size_t>(level)][node]) {
            chosen.emplace_back(level, node);
            continue;
        }
        for (auto child : tree.children(level, node)) stack.emplace_back(level + 1, child);
    }
    std::sort(chosen.begin(), chosen.end());
    cover.cubes.reserve(chosen.size());
    for (auto [level, node] : chosen) cover.cubes.push_back(tree.cube(level, node));
    return cover;
}

// ---------------------------------------------------------------------------

std::map<int, GridPointSet> delta_s_sets_from_cover(const DyadicCover& cover)
{
    check_exponent(cover.s, std::max(cover.dim, 1));
    int max_level = 0;
    for (const auto& q : cover.cubes) max_level = std::max(max_level, q.level());
    const PowerSumComparator cmp(cover.s, max_level);

    std::map<DyadicCube, LevelProfile> inside;
    for (const auto& q : cover.cubes)
        for (int a = 0; a <= q.level(); ++a) inside[q.ancestor(a)].add(LevelProfile::single(q.level()));

    for (const auto& [q0, profile] : inside) {
        if (cmp.compare(profile, LevelProfile::single(q0.level())) > 0) {
            std::ostringstream msg;
            msg << std::setprecision(17) << "cover is not minimal: cubes inside " << q0.to_string()
                << " contribute " << cmp.value(profile) << " > side^s = " << cmp.weight(q0.level());
            throw PreconditionViolation(msg.str());
        }
    }

    std::map<int, std::vector<Coord>> flat;
    for (const auto& q : cover.cubes) {
        auto& f = flat[q.level()];
        f.insert(f.end(), q.coords().begin(), q.coords().end());
    }
    std::map<int, GridPointSet> out;
    for (auto& [level, f] : flat) out.emplace(level, GridPointSet::from_flat(cover.dim, level, std::move(f)));
    return out;
}

StrongCover finite_strong_cover(const GridPointSet& points, double s, double eps, int k_lo, int k_hi)
{
    if (k_lo > k_hi) throw std::invalid_argument("empty scale range");
    if (k_lo < 1 || k_hi > points.level())
        throw std::invalid_argument("scale range must lie in [1, " + std::to_string(points.level()) + "]");
    if (!(eps > 0.0) || !(s > eps)) throw std::invalid_argument("need s > eps > 0");
    check_exponent(s, points.dim());
    if (points.empty()) throw EmptyInputError("finite_strong_cover needs a non-empty point set");

    StrongCover out;
    out.k_lo = k_lo;
    out.k_hi = k_hi;
    std::map<int, std::vector<Coord>> flat;
    for (int k = k_lo; k <= k_hi; ++k) flat[k];

    for (int i = k_lo; i <= k_hi; ++i) {
        const CoverTree tree(coarsen(points, i));
        const int window_lo = static_cast<int>(std::floor(eps * i / s));
        const int lo = std::max(k_lo, window_lo);
        const DyadicCover cover = optimal_cover(tree, s, lo);

        if (lo > 0) {
            const DyadicCover free = optimal_cover(tree, s, 0);
            const int coarsest = free.cubes.front().level();
            if (coarsest < lo) {
                std::ostringstream msg;
                msg << "scale " << i << ": unconstrained minimizer uses level " << coarsest
                    << ", clamped to [" << lo << ", " << i << "] (window starts at " << window_lo << ")";
                out.diagnostics.push_back(msg.str());
            }
        }
        for (const auto& q : cover.cubes) {
            auto& f = flat[q.level()];
            f.insert(f.end(), q.coords().begin(), q.coords().end());
        }
    }
    for (auto& [k, f] : flat) out.sets.emplace(k, GridPointSet::from_flat(points.dim(), k, std::move(f)));
    return out;
}

// ---------------------------------------------------------------------------

void write_cover(std::ostream& out, const DyadicCover& cover)
{
    for (const auto& q : cover.cubes) {
        out << q.level();
        for (Coord c : q.coords()) out << ' ' << c;
        out << '\n';
    }
    std::ostringstream v;
    v << std::setprecision(17) << cover.value;
    out << "value " << v.str() << '\n';
}

DyadicCover read_cover(std::istream& in, int dim, double s)
{
    validate_dim_level(dim, 0);
    DyadicCover cover;
    cover.dim = dim;
    cover.s = s;
    std::string line;
    bool footer = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (footer) throw FormatError("content after the cover footer");
        std::istringstream row(line);
        if (line.rfind("value", 0) == 0) {
            std::string tag;
            if (!(row >> tag >> cover.value)) throw FormatError("malformed cover footer: " + line);
            footer = true;
            continue;
        }
        int level = 0;
        if (!(row >> level)) throw FormatError("malformed cover row: " + line);
        std::vector<Coord> c(static_cast<std::size_t>(dim));
        for (auto& x : c)
            if (!(row >> x)) throw FormatError("cover row has too few coordinates: " + line);
        std::string extra;
        if (row >> extra) throw FormatError("cover row has too many coordinates: " + line);
        try {
            cover.cubes.emplace_back(level, std::move(c));
        } catch (const std::invalid_argument& e) {
            throw FormatError(std::string("invalid cube in cover: ") + e.what());
        }
    }
    if (!footer) throw FormatError("cover file lacks the `value` footer");
    return cover;
}

}  // namespace fracproj
