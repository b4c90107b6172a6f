#pragma once

#include "fracproj/geometry.hpp"
#include "fracproj/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fracproj {

/// An m-dimensional linear subspace of R^n given by an orthonormal frame
/// (m rows of length n, row-major).
class Plane {
public:
    Plane() = default;
    /// Throws std::invalid_argument unless 0 < m < n and the frame is
    /// orthonormal to within 1e-12 entrywise.
    Plane(int n, int m, std::vector<double> frame);

    /// span of the listed standard basis vectors
    static Plane coordinate(int n, std::vector<int> axes);

    int n() const { return n_; }
    int m() const { return m_; }
    std::span<const double> row(int i) const { return {frame_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)}; }
    const std::vector<double>& frame() const { return frame_; }

    /// Frame coordinates of the orthogonal projection of x.
    void project(std::span<const double> x, std::span<double> out) const;

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<double> frame_;
};

/// Haar-random m-plane: Gram-Schmidt on m standard Gaussian n-vectors, with
/// the first nonzero entry of each frame vector made positive.
Plane haar_sample(int n, int m, Rng& rng);

/// Frame coordinates of the cell centres, row-major (|P| rows of m values).
struct ProjectedPoints {
    int m = 0;
    std::vector<double> coords;

    std::size_t size() const { return m == 0 ? 0 : coords.size() / static_cast<std::size_t>(m); }
    std::span<const double> point(std::size_t i) const { return {coords.data() + i * static_cast<std::size_t>(m), static_cast<std::size_t>(m)}; }
};

ProjectedPoints project_points(const Plane& plane, const GridPointSet& points);

/// Number of ordered pairs (x, y) in P x P, diagonal included, with
/// |pi_V x - pi_V y| <= delta. Sort-and-sweep along the first frame coordinate.
std::uint64_t pair_energy(const GridPointSet& points, const Plane& plane, double delta);
std::uint64_t pair_energy(const ProjectedPoints& projected, double delta);

/// Off-diagonal part of the energy, counted independently of pair_energy by
/// hashing projections into a delta-grid and scanning neighbouring buckets.
std::uint64_t offdiagonal_energy(const GridPointSet& points, const Plane& plane, double delta);

struct RieszResult {
    double sum = 0.0;
    /// Dyadic-annuli bound from the per-level maximum cube counts.
    double annuli_bound = 0.0;
};

/// sum over ordered x != y of |x - y|^-m_exp, together with its dyadic-annuli
/// upper bound; throws std::logic_error if the bound is violated.
RieszResult riesz_sum(const GridPointSet& points, int m_exp);

/// Annuli bound expressed through a single spread constant C (count of any
/// level-j cube <= C 2^{(k-j)s}):
///   |P| * sum_j (min(|P|, 3^n C 2^{(k-j)s}) - 1) 2^{(j+1) m_exp}
/// over annuli 2^{-j-1} < |x-y| <= 2^{-j}, j from -ceil(log2 sqrt n) to k.
double riesz_spread_bound(int n, int level, std::size_t size, double s, double spread_constant, int m_exp);

/// Haar measure of {V in G(n,m) : |pi_V u| <= t} for a unit vector u:
/// the regularized incomplete beta I_{t^2}(m/2, (n-m)/2).
double coincidence_probability(int n, int m, double t);

/// Least c with coincidence_probability(n, m, t) <= c t^m for all t in (0, 1].
double coincidence_constant(int n, int m);

struct ProjectionCover {
    std::size_t bins = 0;        // least number of bins holding >= kappa points
    std::size_t covered = 0;     // points inside those bins
    std::size_t occupied = 0;    // bins meeting the full projection
    int bin_level = 0;
    double bin_side = 0.0;
    std::size_t boundary_points = 0;  // within 1e-9 delta of a bin face
};

/// Bins the projections into dyadic cubes of side 2^-b on V's coordinates, with
/// b = ceil(log2(sqrt(m)/delta)) so that each bin has diameter <= delta, then
/// takes bins greedily by decreasing count until kappa points are covered.
ProjectionCover min_projection_cover(const GridPointSet& points, const Plane& plane, double delta, std::size_t kappa);
ProjectionCover min_projection_cover(const ProjectedPoints& projected, double delta, std::size_t kappa);

enum class Label { good, bad };
const char* to_string(Label label);

struct DirectionClass {
    Label label = Label::good;
    std::uint64_t energy = 0;
    double threshold = 0.0;
};

/// threshold = delta^{min(s,m) - 2s - 4 eps} / slack; bad iff energy >= threshold.
double energy_threshold(double delta, double s, double eps, int m, double slack);
DirectionClass classify_direction(const GridPointSet& points, const Plane& plane, double delta, double s, double eps,
                                  double slack);

/// kappa = ceil(delta^{-s+eps}), clamped to [1, size].
std::size_t scan_kappa(double delta, double s, double eps, std::size_t size);

/// Lower bound slack * delta^{-min(s,m) + 6 eps} that every good direction's
/// min_projection_cover at kappa must meet.
double cover_floor(double delta, double s, double eps, int m, double slack);

struct ScanParams {
    int m = 1;
    double delta = 0.0;  // <= 0 means 2^-level
    double s = 1.0;
    double eps = 0.1;
    std::size_t num_samples = 0;
    std::uint64_t master_seed = 0;
    double slack = 0.0;  // <= 0 means 2^n
    unsigned workers = 1;
};

struct DirectionRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    Plane plane;
    std::uint64_t energy = 0;
    double threshold = 0.0;
    std::size_t min_cover = 0;
    Label label = Label::good;
    std::size_t boundary_points = 0;
};

struct ScanReport {
    int n = 0;
    int m = 0;
    int level = 0;
    std::size_t size = 0;
    double delta = 0.0;
    double s = 0.0;
    double eps = 0.0;
    double slack = 0.0;
    std::uint64_t master_seed = 0;
    std::size_t kappa = 0;
    double cover_floor = 0.0;
    std::vector<DirectionRecord> directions;
    double bad_fraction = 0.0;
    double budget = 0.0;       // delta^eps
    double mean_energy = 0.0;
    /// |P| + c_{n,m} delta^m * riesz_spread_bound(...) with the measured spread
    /// constant: an upper bound for the Haar average of the energy.
    double mean_energy_bound = 0.0;
    /// delta^{m-2s-2eps} if m < s, delta^{-s-3eps} otherwise.
    double energy_rate = 0.0;
    double spread_constant = 0.0;
    bool delta_too_large = false;  // budget > 1/2

    std::size_t bad_count() const;
};

/// Samples num_samples Haar planes, plane i drawn from derive_seed(master_seed, i),
/// and classifies each. Results do not depend on `workers`.
ScanReport direction_scan(const GridPointSet& points, const ScanParams& params);

/// Structured report: header, one block per direction (frame to 17 significant
/// digits), and the summary line
/// `bad_fraction <f> budget <b> mean_energy <e> form18_bound <b>`.
void write_scan_report(std::ostream& out, const ScanReport& report);
ScanReport read_scan_report(std::istream& in);
/// `index,energy,min_cover,label` rows.
void write_scan_csv(std::ostream& out, const ScanReport& report);
std::string summary_line(const ScanReport& report);

}  // namespace fracproj
