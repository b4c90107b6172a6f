#include "fracproj/regularity.hpp"

#include "fracproj/errors.hpp"
#include "fracproj/power_sum.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fracproj {

double default_tau(int dim) { return std::pow(4.0, -dim); }

double minimal_spread_constant(const CoverTree& tree, double s)
{
    const int k = tree.leaf_level();
    double best = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double window = std::exp2((k - j) * s);
        best = std::max(best, static_cast<double>(tree.max_count(j)) / window);
    }
    return best;
}

double minimal_spread_constant(const GridPointSet& points, double s)
{
    if (!(s > 0.0)) throw std::invalid_argument("exponent s must be positive");
    if (points.empty()) return 0.0;
    return minimal_spread_constant(CoverTree(points), s);
}

GridPointSet separated_net(const GridPointSet& points, int separation)
{
    if (separation < 1) throw std::invalid_argument("net separation must be at least one cell");
    if (separation == 1) return points;

    const int n = points.dim();
    const Coord reach = separation - 1;
    const Coord width = 2 * reach + 1;
    std::size_t window = 1;
    for (int a = 0; a < n; ++a) window *= static_cast<std::size_t>(width);

    std::set<std::vector<Coord>> accepted;
    std::vector<Coord> probe(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto c = points.cell(i);
        bool free = true;
        for (std::size_t w = 0; w < window && free; ++w) {
            std::size_t rest = w;
            for (int a = 0; a < n; ++a) {
                probe[a] = c[a] + static_cast<Coord>(rest % static_cast<std::size_t>(width)) - reach;
                rest /= static_cast<std::size_t>(width);
            }
            free = !accepted.contains(probe);
        }
        if (free) accepted.emplace(c.begin(), c.end());
    }
    std::vector<Coord> flat;
    for (const auto& c : accepted) flat.insert(flat.end(), c.begin(), c.end());
    return GridPointSet::from_flat(n, points.level(), std::move(flat));
}

Decomposition heavy_decompose(const GridPointSet& points, const HeavyParams& params, int separation)
{
    if (!(params.tau > 0.0) || params.tau > 1.0) throw std::invalid_argument("tau must lie in (0, 1]");
    if (!(params.big_l >= 1.0)) throw std::invalid_argument("L must be at least 1");
    if (!(params.big_c > 0.0)) throw std::invalid_argument("C must be positive");
    if (!(params.s > 0.0) || params.s > points.dim()) throw std::invalid_argument("exponent s must lie in (0, n]");

    Decomposition out;
    out.params = params;
    out.good = GridPointSet(points.dim(), points.level());
    out.bad = GridPointSet(points.dim(), points.level());
    out.net = out.good;
    if (points.empty()) return out;

    const int k = points.level();
    const double s = params.s;
    const double budget = params.big_c * std::exp2(k * s);
    if (static_cast<double>(points.size()) > budget * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "covering hypothesis violated: " << points.size() << " cells > C * delta^-s = " << budget;
        out.warnings.push_back(msg.str());
    }

    const CoverTree tree(points);
    const PowerSumComparator weights(s, k);
    const double scale = params.tau * params.big_c * params.big_l;

    std::vector<std::vector<char>> covered(static_cast<std::size_t>(k) + 1);
    std::vector<std::pair<int, std::size_t>> maximal;
    for (int j = 0; j <= k; ++j) {
        const double threshold = scale * std::exp2((k - j) * s);
        auto& cov = covered[static_cast<std::size_t>(j)];
        cov.assign(tree.level_size(j), 0);
        for (std::size_t node = 0; node < cov.size(); ++node) {
            if (j > 0 && covered[static_cast<std::size_t>(j) - 1][tree.parent(j, node)]) {
                cov[node] = 1;
                continue;
            }
            if (static_cast<double>(tree.count(j, node)) >= threshold) {
                cov[node] = 1;
                maximal.emplace_back(j, node);
            }
        }
    }

    std::vector<Coord> good_flat, bad_flat;
    const auto& leaves = covered[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto c = points.cell(i);
        auto& dst = leaves[i] ? bad_flat : good_flat;
        dst.insert(dst.end(), c.begin(), c.end());
    }
    out.good = GridPointSet::from_flat(points.dim(), k, std::move(good_flat));
    out.bad = GridPointSet::from_flat(points.dim(), k, std::move(bad_flat));

    for (auto [level, node] : maximal) {
        out.maximal_heavy.push_back(tree.cube(level, node));
        out.heavy_content += weights.weight(level);
    }
    out.net = separated_net(out.good, separation);

    const double content_bound = 1.0 / (params.tau * params.big_l);
    if (out.heavy_content > content_bound * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "heavy content " << out.heavy_content << " exceeds 1/(tau L) = " << content_bound;
        out.warnings.push_back(msg.str());
    }
    return out;
}

GridPointSet frostman_subset(const GridPointSet& points, double s)
{
    if (!(s > 0.0) || s > points.dim()) throw std::invalid_argument("exponent s must lie in (0, n]");
    if (points.empty()) throw EmptyInputError("frostman_subset needs a non-empty point set");

    const CoverTree tree(points);
    const int k = points.level();

    // kept[node] = surviving leaf indices below node, in selection order.
    std::vector<std::vector<std::uint32_t>> kept(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) kept[i] = {static_cast<std::uint32_t>(i)};

    for (int j = k - 1; j >= 0; --j) {
        const auto cap = static_cast<std::size_t>(std::floor(std::exp2((k - j) * s) * (1.0 + 1e-12)));
        std::vector<std::vector<std::uint32_t>> here(tree.level_size(j));
        for (std::size_t node = 0; node < here.size(); ++node) {
            auto kids = tree.children(j, node);
            auto& mine = here[node];
            for (std::size_t round = 0; mine.size() < cap; ++round) {
                bool any = false;
                for (auto child : kids) {
                    const auto& list = kept[child];
                    if (round < list.size() && mine.size() < cap) {
                        mine.push_back(list[round]);
                        any = true;
                    }
                }
                if (!any) break;
            }
        }
        kept = std::move(here);
    }

    std::vector<Coord> flat;
    for (auto leaf : kept.front()) {
        auto c = points.cell(leaf);
        flat.insert(flat.end(), c.begin(), c.end());
    }
    GridPointSet subset = GridPointSet::from_flat(points.dim(), k, std::move(flat));

    const double content = optimal_cover(tree, s).value;
    const double floor_size = kFrostmanFraction * content * std::exp2(k * s);
    if (static_cast<double>(subset.size()) < floor_size * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "extracted " << subset.size() << " cells, fewer than c_n * content * delta^-s = " << floor_size
            << " (content " << content << ")";
        throw ExtractionFailed(msg.str());
    }
    return subset;
}

void save_decomposition(const std::string& dir, const Decomposition& decomposition)
{
    std::filesystem::create_directories(dir);
    save_point_set(dir + "/good.pts", decomposition.good);
    save_point_set(dir + "/bad.pts", decomposition.bad);

    DyadicCover heavy;
    heavy.dim = decomposition.good.dim();
    heavy.s = decomposition.params.s;
    heavy.cubes = decomposition.maximal_heavy;
    heavy.value = decomposition.heavy_content;
    std::ofstream out(dir + "/heavy.cubes");
    if (!out) throw FormatError("cannot write " + dir + "/heavy.cubes");
    write_cover(out, heavy);
}

}  // namespace fracproj
