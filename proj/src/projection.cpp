#include "fracproj/projection.hpp"

#include "fracproj/content.hpp"
#include "fracproj/errors.hpp"
#include "fracproj/regularity.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace fracproj {

// ---------------------------------------------------------------------------
// Plane

Plane::Plane(int n, int m, std::vector<double> frame) : n_(n), m_(m), frame_(std::move(frame))
{
    if (m <= 0 || m >= n) throw std::invalid_argument("plane dimension must satisfy 0 < m < n");
    if (frame_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(m))
        throw std::invalid_argument("frame must hold m rows of length n");
    for (int a = 0; a < m; ++a) {
        for (int b = a; b < m; ++b) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += row(a)[i] * row(b)[i];
            if (std::abs(dot - (a == b ? 1.0 : 0.0)) > 1e-12)
                throw std::invalid_argument("frame is not orthonormal (Gram entry " + std::to_string(a) + "," +
                                            std::to_string(b) + " = " + std::to_string(dot) + ")");
        }
    }
}

Plane Plane::coordinate(int n, std::vector<int> axes)
{
    std::vector<double> frame(axes.size() * static_cast<std::size_t>(n), 0.0);
    for (std::size_t r = 0; r < axes.size(); ++r) {
        if (axes[r] < 0 || axes[r] >= n) throw std::invalid_argument("coordinate axis out of range");
        frame[r * static_cast<std::size_t>(n) + static_cast<std::size_t>(axes[r])] = 1.0;
    }
    return Plane(n, static_cast<int>(axes.size()), std::move(frame));
}

void Plane::project(std::span<const double> x, std::span<double> out) const
{
    for (int a = 0; a < m_; ++a) {
        double dot = 0.0;
        auto f = row(a);
        for (int i = 0; i < n_; ++i) dot += f[i] * x[i];
        out[a] = dot;
    }
}

Plane haar_sample(int n, int m, Rng& rng)
{
    if (m <= 0 || m >= n || n > kMaxDim) throw std::invalid_argument("Haar sampling needs 0 < m < n <= 8");
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto un = static_cast<std::size_t>(n);

    for (;;) {
        std::vector<double> frame(un * static_cast<std::size_t>(m));
        for (auto& v : frame) v = gauss(rng);

        bool degenerate = false;
        for (int a = 0; a < m && !degenerate; ++a) {
            double* v = frame.data() + static_cast<std::size_t>(a) * un;
            const double before = std::sqrt(std::inner_product(v, v + n, v, 0.0));
            // Two Gram-Schmidt passes keep the Gram matrix at roundoff level.
            for (int pass = 0; pass < 2; ++pass) {
                for (int b = 0; b < a; ++b) {
                    const double* u = frame.data() + static_cast<std::size_t>(b) * un;
                    const double dot = std::inner_product(v, v + n, u, 0.0);
                    for (int i = 0; i < n; ++i) v[i] -= dot * u[i];
                }
            }
            const double norm = std::sqrt(std::inner_product(v, v + n, v, 0.0));
            if (!(norm > 1e-8 * before) || !(norm > 0.0)) {
                degenerate = true;
                break;
            }
            for (int i = 0; i < n; ++i) v[i] /= norm;
            auto first = std::find_if(v, v + n, [](double x) { return x != 0.0; });
            if (first != v + n && *first < 0.0)
                for (int i = 0; i < n; ++i) v[i] = -v[i];
        }
        if (!degenerate) return Plane(n, m, std::move(frame));
    }
}

ProjectedPoints project_points(const Plane& plane, const GridPointSet& points)
{
    if (plane.n() != points.dim())
        throw std::invalid_argument("plane lives in R^" + std::to_string(plane.n()) + " but the points in R^" +
                                    std::to_string(points.dim()));
    ProjectedPoints out;
    out.m = plane.m();
    out.coords.resize(points.size() * static_cast<std::size_t>(plane.m()));
    std::vector<double> x(static_cast<std::size_t>(points.dim()));
    const double h = points.cell_side();
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto c = points.cell(i);
        for (std::size_t a = 0; a < x.size(); ++a) x[a] = (static_cast<double>(c[a]) + 0.5) * h;
        plane.project(x, {out.coords.data() + i * static_cast<std::size_t>(plane.m()), static_cast<std::size_t>(plane.m())});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Energies

std::uint64_t pair_energy(const ProjectedPoints& projected, double delta)
{
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    const std::size_t count = projected.size();
    const int m = projected.m;
    std::uint64_t unordered = 0;

    if (m == 1) {
        std::vector<double> p(projected.coords);
        std::sort(p.begin(), p.end());
        std::size_t hi = 0;
        for (std::size_t i = 0; i < count; ++i) {
            hi = std::max(hi, i + 1);
            while (hi < count && p[hi] - p[i] <= delta) ++hi;
            unordered += hi - i - 1;
        }
    } else {
        std::vector<std::size_t> order(count);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return projected.point(a)[0] < projected.point(b)[0]; });
        const double delta2 = delta * delta;
        for (std::size_t i = 0; i < count; ++i) {
            auto x = projected.point(order[i]);
            for (std::size_t j = i + 1; j < count; ++j) {
                auto y = projected.point(order[j]);
                if (y[0] - x[0] > delta) break;
                double d2 = 0.0;
                for (int a = 0; a < m; ++a) d2 += (x[a] - y[a]) * (x[a] - y[a]);
                if (d2 <= delta2) ++unordered;
            }
        }
    }
    return static_cast<std::uint64_t>(count) + 2 * unordered;
}

std::uint64_t pair_energy(const GridPointSet& points, const Plane& plane, double delta)
{
    return pair_energy(project_points(plane, points), delta);
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<Coord>& key) const
    {
        std::uint64_t h = 0x84222325CBF29CE4ULL;
        for (Coord c : key) h = (h ^ static_cast<std::uint64_t>(c)) * 0x100000001B3ULL;
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

std::uint64_t offdiagonal_energy(const GridPointSet& points, const Plane& plane, double delta)
{
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    const ProjectedPoints proj = project_points(plane, points);
    const int m = proj.m;
    const auto um = static_cast<std::size_t>(m);

    std::unordered_map<std::vector<Coord>, std::vector<std::size_t>, KeyHash> buckets;
    std::vector<Coord> key(um);
    for (std::size_t i = 0; i < proj.size(); ++i) {
        auto x = proj.point(i);
        for (std::size_t a = 0; a < um; ++a) key[a] = static_cast<Coord>(std::floor(x[a] / delta));
        buckets[key].push_back(i);
    }

    std::size_t offsets = 1;
    for (int a = 0; a < m; ++a) offsets *= 3;
    const double delta2 = delta * delta;
    std::uint64_t ordered = 0;
    std::vector<Coord> probe(um);
    for (const auto& [base, members] : buckets) {
        for (std::size_t o = 0; o < offsets; ++o) {
            std::size_t rest = o;
            for (std::size_t a = 0; a < um; ++a) {
                probe[a] = base[a] + static_cast<Coord>(rest % 3) - 1;
                rest /= 3;
            }
            auto it = buckets.find(probe);
            if (it == buckets.end()) continue;
            for (std::size_t i : members) {
                auto x = proj.point(i);
                for (std::size_t j : it->second) {
                    if (i == j) continue;
                    auto y = proj.point(j);
                    double d2 = 0.0;
                    for (std::size_t a = 0; a < um; ++a) d2 += (x[a] - y[a]) * (x[a] - y[a]);
                    if (d2 <= delta2) ++ordered;
                }
            }
        }
    }
    return ordered;
}

// ---------------------------------------------------------------------------
// Riesz sums

namespace {

int coarsest_annulus(int n)
{
    // smallest t >= 0 with 2^t >= sqrt(n)
    int t = 0;
    while ((1 << (2 * t)) < n) ++t;
    return -t;
}

template <typename CountAt>
double annuli_bound(int n, int level, std::size_t size, int m_exp, CountAt count_at)
{
    const double total = static_cast<double>(size);
    const double window = std::pow(3.0, n);
    double per_point = 0.0;
    for (int j = coarsest_annulus(n); j <= level; ++j) {
        const double ball = j < 0 ? total : std::min(total, window * count_at(j));
        per_point += std::max(0.0, ball - 1.0) * std::ldexp(1.0, (j + 1) * m_exp);
    }
    return total * per_point;
}

}  // namespace

double riesz_spread_bound(int n, int level, std::size_t size, double s, double spread_constant, int m_exp)
{
    return annuli_bound(n, level, size, m_exp,
                        [&](int j) { return spread_constant * std::exp2((level - j) * s); });
}

RieszResult riesz_sum(const GridPointSet& points, int m_exp)
{
    if (points.size() < 2) throw std::invalid_argument("riesz_sum needs at least two points");
    if (m_exp < 1) throw std::invalid_argument("Riesz exponent must be a positive integer");

    const std::size_t count = points.size();
    const int n = points.dim();
    const double scale = std::ldexp(1.0, points.level() * m_exp);  // h^{-m}
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        auto x = points.cell(i);
        double row = 0.0;
        for (std::size_t j = i + 1; j < count; ++j) {
            auto y = points.cell(j);
            long long d2 = 0;
            for (int a = 0; a < n; ++a) {
                const long long d = x[a] - y[a];
                d2 += d * d;
            }
            const double dist = std::sqrt(static_cast<double>(d2));
            row += m_exp == 1 ? 1.0 / dist : std::pow(dist, -m_exp);
        }
        sum += row;
    }

    RieszResult out;
    out.sum = 2.0 * scale * sum;
    const CoverTree tree(points);
    out.annuli_bound = annuli_bound(n, points.level(), count, m_exp,
                                    [&](int j) { return static_cast<double>(tree.max_count(j)); });
    if (out.sum > out.annuli_bound * (1.0 + 1e-12))
        throw std::logic_error("Riesz sum " + std::to_string(out.sum) + " exceeds its annuli bound " +
                               std::to_string(out.annuli_bound));
    return out;
}

double coincidence_probability(int n, int m, double t)
{
    if (m <= 0 || m >= n) throw std::invalid_argument("need 0 < m < n");
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return boost::math::ibeta(0.5 * m, 0.5 * (n - m), t * t);
}

double coincidence_constant(int n, int m)
{
    if (m <= 0 || m >= n) throw std::invalid_argument("need 0 < m < n");
    if (n - m <= 2) return 1.0;
    const double a = 0.5 * m, b = 0.5 * (n - m);
    return 1.0 / (a * boost::math::beta(a, b));
}

// ---------------------------------------------------------------------------
// Projection covers

ProjectionCover min_projection_cover(const ProjectedPoints& projected, double delta, std::size_t kappa)
{
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    const std::size_t count = projected.size();
    if (kappa < 1) throw std::invalid_argument("kappa must be at least 1");
    if (kappa > count)
        throw std::invalid_argument("kappa = " + std::to_string(kappa) + " exceeds |P| = " + std::to_string(count));

    const int m = projected.m;
    const auto um = static_cast<std::size_t>(m);
    ProjectionCover out;
    out.bin_level = static_cast<int>(std::ceil(std::log2(std::sqrt(static_cast<double>(m)) / delta)));
    out.bin_side = std::ldexp(1.0, -out.bin_level);
    const double margin = 1e-9 * delta;

    std::vector<Coord> keys(count * um);
    for (std::size_t i = 0; i < count; ++i) {
        auto x = projected.point(i);
        bool near_face = false;
        for (std::size_t a = 0; a < um; ++a) {
            const double scaled = x[a] / out.bin_side;
            const double cell = std::floor(scaled);
            const double offset = (scaled - cell) * out.bin_side;
            if (offset < margin || out.bin_side - offset < margin) near_face = true;
            keys[i * um + a] = static_cast<Coord>(cell);
        }
        if (near_face) ++out.boundary_points;
    }

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) { return std::span<const Coord>(keys.data() + i * um, um); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto ka = key(a), kb = key(b);
        return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end());
    });
    std::vector<std::size_t> sizes;
    for (std::size_t i = 0; i < count; ++i) {
        if (i == 0 || !std::ranges::equal(key(order[i]), key(order[i - 1])))
            sizes.push_back(1);
        else
            ++sizes.back();
    }
    out.occupied = sizes.size();

    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    for (std::size_t c : sizes) {
        if (out.covered >= kappa) break;
        out.covered += c;
        ++out.bins;
    }
    return out;
}

ProjectionCover min_projection_cover(const GridPointSet& points, const Plane& plane, double delta, std::size_t kappa)
{
    return min_projection_cover(project_points(plane, points), delta, kappa);
}

// ---------------------------------------------------------------------------
// Classification and scans

const char* to_string(Label label) { return label == Label::good ? "good" : "bad"; }

double energy_threshold(double delta, double s, double eps, int m, double slack)
{
    return std::pow(delta, std::min(s, static_cast<double>(m)) - 2.0 * s - 4.0 * eps) / slack;
}

DirectionClass classify_direction(const GridPointSet& points, const Plane& plane, double delta, double s, double eps,
                                  double slack)
{
    if (points.empty()) throw EmptyInputError("cannot classify a direction for an empty point set");
    if (!(eps > 0.0) || !(eps < s)) throw std::invalid_argument("need 0 < eps < s");
    if (!(slack > 0.0)) throw std::invalid_argument("slack must be positive");
    DirectionClass out;
    out.energy = pair_energy(points, plane, delta);
    out.threshold = energy_threshold(delta, s, eps, plane.m(), slack);
    out.label = static_cast<double>(out.energy) >= out.threshold ? Label::bad : Label::good;
    return out;
}

std::size_t scan_kappa(double delta, double s, double eps, std::size_t size)
{
    if (size == 0) return 0;
    const double raw = std::ceil(std::pow(delta, -s + eps) * (1.0 - 1e-12));
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1.0, raw)), 1, size);
}

double cover_floor(double delta, double s, double eps, int m, double slack)
{
    return slack * std::pow(delta, -std::min(s, static_cast<double>(m)) + 6.0 * eps);
}

std::size_t ScanReport::bad_count() const
{
    return static_cast<std::size_t>(
        std::count_if(directions.begin(), directions.end(), [](const auto& d) { return d.label == Label::bad; }));
}

ScanReport direction_scan(const GridPointSet& points, const ScanParams& params)
{
    const int n = points.dim();
    if (params.m <= 0 || params.m >= n) throw std::invalid_argument("scan needs 0 < m < n");
    if (!(params.eps > 0.0) || !(params.eps < params.s)) throw std::invalid_argument("need 0 < eps < s");
    if (params.s > n) throw std::invalid_argument("exponent s must not exceed n");
    if (points.empty() && params.num_samples > 0) throw EmptyInputError("cannot scan an empty point set");

    ScanReport report;
    report.n = n;
    report.m = params.m;
    report.level = points.level();
    report.size = points.size();
    report.delta = params.delta > 0.0 ? params.delta : points.cell_side();
    report.s = params.s;
    report.eps = params.eps;
    report.slack = params.slack > 0.0 ? params.slack : std::ldexp(1.0, n);
    report.master_seed = params.master_seed;
    report.kappa = scan_kappa(report.delta, report.s, report.eps, points.size());
    report.cover_floor = cover_floor(report.delta, report.s, report.eps, report.m, report.slack);
    report.budget = std::pow(report.delta, report.eps);
    report.delta_too_large = report.budget > 0.5;
    report.energy_rate = params.m < params.s ? std::pow(report.delta, params.m - 2.0 * params.s - 2.0 * params.eps)
                                             : std::pow(report.delta, -params.s - 3.0 * params.eps);
    if (points.empty()) return report;

    const double threshold = energy_threshold(report.delta, report.s, report.eps, report.m, report.slack);
    report.directions.resize(params.num_samples);

    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < params.num_samples; i += stride) {
            DirectionRecord& rec = report.directions[i];
            rec.index = i;
            rec.seed = derive_seed(params.master_seed, static_cast<std::uint64_t>(i));
            Rng rng(rec.seed);
            rec.plane = haar_sample(n, params.m, rng);
            const ProjectedPoints proj = project_points(rec.plane, points);
            rec.energy = pair_energy(proj, report.delta);
            rec.threshold = threshold;
            rec.label = static_cast<double>(rec.energy) >= threshold ? Label::bad : Label::good;
            const ProjectionCover cover = min_projection_cover(proj, report.delta, report.kappa);
            rec.min_cover = cover.bins;
            rec.boundary_points = cover.boundary_points;
        }
    };
    const unsigned workers = std::max(1u, params.workers);
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    }

    double energy_sum = 0.0;
    for (const auto& rec : report.directions) energy_sum += static_cast<double>(rec.energy);
    if (!report.directions.empty()) {
        report.bad_fraction = static_cast<double>(report.bad_count()) / static_cast<double>(report.directions.size());
        report.mean_energy = energy_sum / static_cast<double>(report.directions.size());
    }

    report.spread_constant = minimal_spread_constant(points, report.s);
    report.mean_energy_bound = static_cast<double>(points.size());
    if (points.size() >= 2)
        report.mean_energy_bound += coincidence_constant(n, report.m) * std::pow(report.delta, report.m) *
                               riesz_spread_bound(n, points.level(), points.size(), report.s,
                                                  report.spread_constant, report.m);
    return report;
}

}  // namespace fracproj
