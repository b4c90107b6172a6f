#include "fracproj/fractals.hpp"

#include "fracproj/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace fracproj {

double CantorPattern::dimension() const
{
    double d = 0.0;
    for (const auto& k : keep) d += std::log(static_cast<double>(k.size())) / std::log(static_cast<double>(base));
    return d;
}

void CantorPattern::validate() const
{
    if (base < 2 || !std::has_single_bit(static_cast<unsigned>(base)))
        throw std::invalid_argument("Cantor base must be a power of two >= 2");
    if (keep.empty() || dim() > kMaxDim) throw std::invalid_argument("Cantor pattern needs 1..8 axes");
    for (const auto& axis : keep) {
        if (axis.empty()) throw std::invalid_argument("Cantor pattern keeps no digit on some axis");
        for (int d : axis)
            if (d < 0 || d >= base) throw std::invalid_argument("Cantor digit out of range for base");
        auto sorted = axis;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("Cantor digit repeated on an axis");
    }
}

CantorPattern CantorPattern::uniform(int dim, std::vector<int> digits, int base)
{
    CantorPattern p;
    p.base = base;
    p.keep.assign(static_cast<std::size_t>(dim), std::move(digits));
    p.validate();
    return p;
}

GridPointSet gen_cantor_product(const CantorPattern& pattern, int iterations)
{
    pattern.validate();
    if (iterations < 0) throw std::invalid_argument("iteration count must be non-negative");
    const int bits = std::countr_zero(static_cast<unsigned>(pattern.base));
    const long long level = static_cast<long long>(iterations) * bits;
    if (level > kMaxLevel)
        throw std::invalid_argument("Cantor construction would reach level " + std::to_string(level) + " > " +
                                    std::to_string(kMaxLevel));

    const int n = pattern.dim();
    // Per-axis digit expansions, then the product.
    std::vector<std::vector<Coord>> axis_values(static_cast<std::size_t>(n), std::vector<Coord>{0});
    for (int it = 0; it < iterations; ++it) {
        for (int a = 0; a < n; ++a) {
            std::vector<Coord> next;
            for (Coord c : axis_values[a])
                for (int d : pattern.keep[a]) next.push_back(c * pattern.base + d);
            axis_values[a] = std::move(next);
        }
    }

    std::size_t total = 1;
    for (const auto& v : axis_values) total *= v.size();
    std::vector<Coord> flat;
    flat.reserve(total * static_cast<std::size_t>(n));
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int a = 0; a < n; ++a) {
            const auto& v = axis_values[a];
            flat.push_back(v[rest % v.size()]);
            rest /= v.size();
        }
    }
    return GridPointSet::from_flat(n, static_cast<int>(level), std::move(flat));
}

GridPointSet gen_random_tree_set(int dim, double s, int level, std::uint64_t seed)
{
    validate_dim_level(dim, level);
    if (!(s > 0.0) || s > dim) throw std::invalid_argument("exponent s must lie in (0, n]");

    const double keep_probability = std::min(1.0, std::exp2(s - dim));
    const unsigned fan = 1u << dim;
    const auto d = static_cast<std::size_t>(dim);

    std::vector<Coord> current(d, 0);
    for (int j = 0; j < level; ++j) {
        std::vector<Coord> next;
        const std::size_t nodes = current.size() / d;
        for (std::size_t node = 0; node < nodes; ++node) {
            const Coord* c = current.data() + node * d;
            std::uint64_t path = derive_seed(seed, static_cast<std::uint64_t>(j));
            for (std::size_t a = 0; a < d; ++a) path = derive_seed(path, static_cast<std::uint64_t>(c[a]));
            Rng rng(path);

            std::uint32_t mask = 0;
            while (mask == 0) {
                for (unsigned child = 0; child < fan; ++child) {
                    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                    if (u < keep_probability) mask |= 1u << child;
                }
            }
            for (unsigned child = 0; child < fan; ++child) {
                if (!(mask & (1u << child))) continue;
                for (std::size_t a = 0; a < d; ++a) next.push_back(2 * c[a] + ((child >> a) & 1u));
            }
        }
        current = std::move(next);
    }
    return GridPointSet::from_flat(dim, level, std::move(current));
}

GridPointSet gen_degenerate(DegenerateKind kind, const DegenerateParams& params)
{
    validate_dim_level(params.dim, params.level);
    const auto n = static_cast<std::size_t>(params.dim);
    const Coord side = Coord{1} << params.level;

    auto broadcast = [&](std::size_t want) {
        std::vector<Coord> at = params.at;
        if (at.empty()) at.assign(want, 0);
        if (at.size() == 1 && want > 1) at.assign(want, at.front());
        if (at.size() != want)
            throw std::invalid_argument("expected " + std::to_string(want) + " position values, got " +
                                        std::to_string(params.at.size()));
        return at;
    };

    std::vector<Coord> flat;
    switch (kind) {
    case DegenerateKind::line: {
        const auto rest = broadcast(n - 1);
        for (Coord x = 0; x < side; ++x) {
            flat.push_back(x);
            flat.insert(flat.end(), rest.begin(), rest.end());
        }
        break;
    }
    case DegenerateKind::cluster: {
        if (params.coarse_level < 0 || params.coarse_level > params.level)
            throw std::invalid_argument("cluster coarse level must lie in [0, level]");
        const auto corner = broadcast(n);
        const int shift = params.level - params.coarse_level;
        if (shift * params.dim > 26) throw std::invalid_argument("cluster would hold more than 2^26 cells");
        const Coord width = Coord{1} << shift;
        std::size_t total = std::size_t{1} << (shift * params.dim);
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rest = idx;
            for (std::size_t a = 0; a < n; ++a) {
                flat.push_back((corner[a] << shift) + static_cast<Coord>(rest % static_cast<std::size_t>(width)));
                rest /= static_cast<std::size_t>(width);
            }
        }
        break;
    }
    case DegenerateKind::point: {
        const auto at = broadcast(n);
        flat = at;
        break;
    }
    }
    // from_flat range-checks every coordinate.
    return GridPointSet::from_flat(params.dim, params.level, std::move(flat));
}

}  // namespace fracproj
