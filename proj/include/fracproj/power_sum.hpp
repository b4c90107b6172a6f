#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fracproj {

/// A sum of side-length powers  sum_j counts[j] * 2^{-(base + j) s}, kept as an
/// integer multiplicity per level so that comparisons can be made exactly.
struct LevelProfile {
    int base = 0;
    std::vector<std::uint64_t> counts;

    static LevelProfile single(int level) { return {level, {1}}; }
    void add(const LevelProfile& other);
    std::uint64_t total() const;
};

/// Compares sums of the form sum_j a_j 2^{-j s}.
///
/// If s = p/q with q <= 64, equality is decided exactly: writing u = 2^{-1/q},
/// each term reduces to 2^{-floor(jp/q)} u^{(jp) mod q}, and since x^q - 1/2 is
/// irreducible the sum vanishes iff every residue coefficient vanishes.
/// Otherwise sums within relative 1e-12 compare equal.
class PowerSumComparator {
public:
    PowerSumComparator(double s, int max_level);

    double s() const { return s_; }
    bool exact() const { return q_ != 0; }
    int numerator() const { return p_; }
    int denominator() const { return q_; }

    /// 2^{-level s}
    double weight(int level) const { return weights_.at(static_cast<std::size_t>(level)); }
    double value(const LevelProfile& profile) const;

    /// Returns -1, 0 or 1 as a <, =, > b.
    int compare(const LevelProfile& a, const LevelProfile& b) const;

private:
    int exact_sign(const LevelProfile& a, const LevelProfile& b) const;

    double s_;
    int max_level_;
    int p_ = 0;
    int q_ = 0;
    std::vector<double> weights_;
};

}  // namespace fracproj
