#include "fracproj/errors.hpp"
#include "fracproj/projection.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace fracproj {

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// Reads `tag value` and checks the tag.
template <typename T>
void expect(std::istream& in, const char* tag, T& value)
{
    std::string got;
    if (!(in >> got) || got != tag) throw FormatError(std::string("scan report: expected `") + tag + "`, got `" + got + "`");
    if (!(in >> value)) throw FormatError(std::string("scan report: bad value after `") + tag + "`");
}

Label parse_label(const std::string& s)
{
    if (s == "good") return Label::good;
    if (s == "bad") return Label::bad;
    throw FormatError("scan report: unknown label `" + s + "`");
}

}  // namespace

std::string summary_line(const ScanReport& report)
{
    return "bad_fraction " + num(report.bad_fraction) + " budget " + num(report.budget) + " mean_energy " +
           num(report.mean_energy) + " form18_bound " + num(report.mean_energy_bound);
}

void write_scan_report(std::ostream& out, const ScanReport& report)
{
    out << "scan_report 1\n";
    out << "n " << report.n << " m " << report.m << " level " << report.level << " size " << report.size << '\n';
    out << "delta " << num(report.delta) << " s " << num(report.s) << " eps " << num(report.eps) << " slack "
        << num(report.slack) << " master_seed " << report.master_seed << '\n';
    out << "kappa " << report.kappa << " cover_floor " << num(report.cover_floor) << " spread_constant "
        << num(report.spread_constant) << " energy_rate " << num(report.energy_rate) << " delta_too_large "
        << (report.delta_too_large ? 1 : 0) << '\n';
    out << "directions " << report.directions.size() << '\n';
    for (const auto& d : report.directions) {
        out << "direction " << d.index << " seed " << d.seed << " energy " << d.energy << " threshold "
            << num(d.threshold) << " min_cover " << d.min_cover << " boundary " << d.boundary_points << " label "
            << to_string(d.label) << '\n';
        for (int r = 0; r < d.plane.m(); ++r) {
            out << "frame";
            for (double v : d.plane.row(r)) out << ' ' << num(v);
            out << '\n';
        }
    }
    out << summary_line(report) << '\n';
}

ScanReport read_scan_report(std::istream& in)
{
    ScanReport r;
    int version = 0;
    expect(in, "scan_report", version);
    if (version != 1) throw FormatError("scan report: unsupported version " + std::to_string(version));
    expect(in, "n", r.n);
    expect(in, "m", r.m);
    expect(in, "level", r.level);
    expect(in, "size", r.size);
    expect(in, "delta", r.delta);
    expect(in, "s", r.s);
    expect(in, "eps", r.eps);
    expect(in, "slack", r.slack);
    expect(in, "master_seed", r.master_seed);
    expect(in, "kappa", r.kappa);
    expect(in, "cover_floor", r.cover_floor);
    expect(in, "spread_constant", r.spread_constant);
    expect(in, "energy_rate", r.energy_rate);
    int too_large = 0;
    expect(in, "delta_too_large", too_large);
    r.delta_too_large = too_large != 0;

    std::size_t count = 0;
    expect(in, "directions", count);
    r.directions.resize(count);
    for (auto& d : r.directions) {
        std::string label;
        expect(in, "direction", d.index);
        expect(in, "seed", d.seed);
        expect(in, "energy", d.energy);
        expect(in, "threshold", d.threshold);
        expect(in, "min_cover", d.min_cover);
        expect(in, "boundary", d.boundary_points);
        expect(in, "label", label);
        d.label = parse_label(label);
        std::vector<double> frame;
        for (int row = 0; row < r.m; ++row) {
            std::string tag;
            if (!(in >> tag) || tag != "frame") throw FormatError("scan report: expected `frame`");
            for (int i = 0; i < r.n; ++i) {
                double v = 0.0;
                if (!(in >> v)) throw FormatError("scan report: truncated frame");
                frame.push_back(v);
            }
        }
        try {
            d.plane = Plane(r.n, r.m, std::move(frame));
        } catch (const std::invalid_argument& e) {
            throw FormatError(std::string("scan report: ") + e.what());
        }
    }
    expect(in, "bad_fraction", r.bad_fraction);
    expect(in, "budget", r.budget);
    expect(in, "mean_energy", r.mean_energy);
    expect(in, "form18_bound", r.mean_energy_bound);
    return r;
}

void write_scan_csv(std::ostream& out, const ScanReport& report)
{
    out << "index,energy,min_cover,label\n";
    for (const auto& d : report.directions)
        out << d.index << ',' << d.energy << ',' << d.min_cover << ',' << to_string(d.label) << '\n';
}

}  // namespace fracproj
