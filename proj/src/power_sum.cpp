#include "fracproj/power_sum.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracproj {

namespace mp = boost::multiprecision;

void LevelProfile::add(const LevelProfile& other)
{
    if (other.counts.empty()) return;
    if (counts.empty()) {
        *this = other;
        return;
    }
    const int lo = std::min(base, other.base);
    const int hi = std::max(base + static_cast<int>(counts.size()), other.base + static_cast<int>(other.counts.size()));
    if (lo != base || hi != base + static_cast<int>(counts.size())) {
        std::vector<std::uint64_t> grown(static_cast<std::size_t>(hi - lo), 0);
        std::copy(counts.begin(), counts.end(), grown.begin() + (base - lo));
        counts = std::move(grown);
        base = lo;
    }
    for (std::size_t i = 0; i < other.counts.size(); ++i)
        counts[static_cast<std::size_t>(other.base - base) + i] += other.counts[i];
}

std::uint64_t LevelProfile::total() const
{
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

PowerSumComparator::PowerSumComparator(double s, int max_level) : s_(s), max_level_(max_level)
{
    if (!(s > 0.0)) throw std::invalid_argument("exponent s must be positive");
    if (max_level < 0) throw std::invalid_argument("max_level must be non-negative");
    for (int q = 1; q <= 64; ++q) {
        const double sq = s * q;
        const double r = std::round(sq);
        if (r >= 1.0 && std::abs(sq - r) <= 1e-12 * std::max(1.0, sq)) {
            p_ = static_cast<int>(r);
            q_ = q;
            break;
        }
    }
    weights_.resize(static_cast<std::size_t>(max_level) + 1);
    for (int j = 0; j <= max_level; ++j) {
        // Exact for rational s: 2^{-floor(jp/q)} * 2^{-((jp) mod q)/q}.
        if (exact()) {
            const long long e = static_cast<long long>(j) * p_;
            weights_[static_cast<std::size_t>(j)] =
                std::ldexp(std::exp2(-static_cast<double>(e % q_) / q_), -static_cast<int>(e / q_));
        } else {
            weights_[static_cast<std::size_t>(j)] = std::exp2(-j * s);
        }
    }
}

double PowerSumComparator::value(const LevelProfile& profile) const
{
    double v = 0.0;
    for (std::size_t i = 0; i < profile.counts.size(); ++i)
        if (profile.counts[i] != 0) v += static_cast<double>(profile.counts[i]) * weight(profile.base + static_cast<int>(i));
    return v;
}

int PowerSumComparator::compare(const LevelProfile& a, const LevelProfile& b) const
{
    const double va = value(a), vb = value(b);
    const double scale = std::max(std::abs(va), std::abs(vb));
    if (std::abs(va - vb) > 1e-9 * scale) return va < vb ? -1 : 1;
    if (exact()) return exact_sign(a, b);
    if (std::abs(va - vb) <= 1e-12 * scale) return 0;
    return va < vb ? -1 : 1;
}

int PowerSumComparator::exact_sign(const LevelProfile& a, const LevelProfile& b) const
{
    const long long shift_max = static_cast<long long>(max_level_) * p_ / q_;
    std::vector<mp::cpp_int> residue(static_cast<std::size_t>(q_));

    auto accumulate = [&](const LevelProfile& prof, int sign) {
        for (std::size_t i = 0; i < prof.counts.size(); ++i) {
            if (prof.counts[i] == 0) continue;
            const long long level = prof.base + static_cast<long long>(i);
            const long long e = level * p_;
            mp::cpp_int term = prof.counts[i];
            term <<= static_cast<unsigned>(shift_max - e / q_);
            if (sign > 0)
                residue[static_cast<std::size_t>(e % q_)] += term;
            else
                residue[static_cast<std::size_t>(e % q_)] -= term;
        }
    };
    accumulate(a, 1);
    accumulate(b, -1);

    if (std::all_of(residue.begin(), residue.end(), [](const mp::cpp_int& c) { return c == 0; })) return 0;

    using Float = mp::cpp_bin_float_100;
    const Float u = mp::pow(Float(2), Float(-1) / q_);
    Float sum = 0;
    Float power = 1;
    for (int r = 0; r < q_; ++r) {
        sum += Float(residue[static_cast<std::size_t>(r)]) * power;
        power *= u;
    }
    return sum < 0 ? -1 : (sum > 0 ? 1 : 0);
}

}  // namespace fracproj
