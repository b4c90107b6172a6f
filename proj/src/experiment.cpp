#include "fracproj/experiment.hpp"

#include "fracproj/content.hpp"
#include "fracproj/errors.hpp"
#include "fracproj/fractals.hpp"
#include "fracproj/projection.hpp"
#include "fracproj/regularity.hpp"
#include "fracproj/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fracproj {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

long long to_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw UsageError("generator parameter `" + key + "` expects an integer, got `" + v + "`");
}

double to_real(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw UsageError("generator parameter `" + key + "` expects a number, got `" + v + "`");
}

std::vector<Coord> to_int_list(const std::string& key, const std::string& v)
{
    std::vector<Coord> out;
    for (const auto& part : split(v, '+')) out.push_back(to_int(key, part));
    return out;
}

class SpecReader {
public:
    explicit SpecReader(const GeneratorSpec& spec) : spec_(spec) {}

    std::optional<std::string> get(const std::string& key)
    {
        used_.push_back(key);
        auto it = spec_.params.find(key);
        if (it == spec_.params.end()) return std::nullopt;
        return it->second;
    }
    std::optional<long long> get_int(const std::string& key)
    {
        auto v = get(key);
        return v ? std::optional<long long>(to_int(key, *v)) : std::nullopt;
    }
    long long need_int(const std::string& key, std::optional<long long> fallback = std::nullopt)
    {
        auto v = get_int(key);
        if (v) return *v;
        if (fallback) return *fallback;
        throw UsageError("generator `" + spec_.kind + "` needs `" + key + "=`");
    }
    void finish() const
    {
        for (const auto& [k, v] : spec_.params)
            if (std::find(used_.begin(), used_.end(), k) == used_.end())
                throw UsageError("generator `" + spec_.kind + "` does not take `" + k + "`");
    }

private:
    const GeneratorSpec& spec_;
    std::vector<std::string> used_;
};

GridPointSet generate(const GeneratorSpec& spec, const ExperimentConfig& config, std::optional<int> default_level)
{
    SpecReader r(spec);
    std::optional<long long> level_fallback;
    if (config.level) level_fallback = *config.level;
    else if (default_level) level_fallback = *default_level;

    GridPointSet points;
    if (spec.kind == "cantor") {
        CantorPattern pattern;
        pattern.base = static_cast<int>(r.get_int("base").value_or(4));
        const auto keep = r.get("keep");
        if (!keep) throw UsageError("generator `cantor` needs `keep=`");
        const auto axes = split(*keep, '/');
        const auto n = r.get_int("n").value_or(static_cast<long long>(axes.size()));
        if (axes.size() != 1 && static_cast<long long>(axes.size()) != n)
            throw UsageError("cantor `keep` lists " + std::to_string(axes.size()) + " axes but n = " + std::to_string(n));
        for (long long a = 0; a < n; ++a) {
            std::vector<int> digits;
            for (Coord d : to_int_list("keep", axes[axes.size() == 1 ? 0 : static_cast<std::size_t>(a)]))
                digits.push_back(static_cast<int>(d));
            pattern.keep.push_back(std::move(digits));
        }
        const auto iters = r.need_int("iters");
        r.finish();
        points = gen_cantor_product(pattern, static_cast<int>(iters));
    } else if (spec.kind == "random") {
        const auto n = r.need_int("n");
        const auto s_text = r.get("s");
        const double s = s_text ? to_real("s", *s_text) : config.s;
        const auto level = r.need_int("level", level_fallback);
        r.finish();
        if (!config.seed) throw UsageError("randomized generator `random` requires --seed");
        points = gen_random_tree_set(static_cast<int>(n), s, static_cast<int>(level), *config.seed);
    } else if (spec.kind == "line" || spec.kind == "cluster" || spec.kind == "point") {
        DegenerateParams p;
        p.dim = static_cast<int>(r.need_int("n"));
        p.level = static_cast<int>(r.need_int("level", level_fallback));
        if (auto at = r.get("at")) p.at = to_int_list("at", *at);
        DegenerateKind kind = DegenerateKind::point;
        if (spec.kind == "line") kind = DegenerateKind::line;
        if (spec.kind == "cluster") {
            kind = DegenerateKind::cluster;
            p.coarse_level = static_cast<int>(r.need_int("coarse"));
        }
        r.finish();
        points = gen_degenerate(kind, p);
    } else {
        throw UsageError("unknown generator kind `" + spec.kind + "`");
    }
    return points;
}

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << content;
}

}  // namespace

GeneratorSpec parse_generator_spec(const std::string& text)
{
    GeneratorSpec spec;
    const auto colon = text.find(':');
    spec.kind = text.substr(0, colon);
    if (spec.kind.empty()) throw UsageError("generator spec `" + text + "` lacks a kind");
    if (colon == std::string::npos || colon + 1 == text.size()) return spec;
    for (const auto& item : split(text.substr(colon + 1), ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
            throw UsageError("generator parameter `" + item + "` is not of the form key=value");
        if (!spec.params.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
            throw UsageError("generator parameter `" + item.substr(0, eq) + "` given twice");
    }
    return spec;
}

bool is_randomized(const GeneratorSpec& spec) { return spec.kind == "random"; }

GridPointSet load_or_generate(const ExperimentConfig& config, std::optional<int> default_level)
{
    if (config.input.empty() == config.gen.empty()) throw UsageError("exactly one of --input and --gen is required");

    GridPointSet points;
    if (!config.input.empty()) {
        try {
            points = load_point_set(config.input);
        } catch (const FormatError& e) {
            throw UsageError(e.what());
        }
    } else {
        try {
            points = generate(parse_generator_spec(config.gen), config, default_level);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("generator: ") + e.what());
        }
    }
    if (config.level) {
        if (*config.level > points.level())
            throw UsageError("--level " + std::to_string(*config.level) + " is finer than the input level " +
                             std::to_string(points.level()));
        points = coarsen(points, *config.level);
    }
    return points;
}

MultiscaleResult run_multiscale_scan(const ExperimentConfig& config)
{
    if (config.level_lo < 0 || config.level_hi < config.level_lo)
        throw UsageError("multiscan needs a non-empty level range LO:HI");
    if (!config.seed) throw UsageError("multiscan requires --seed");
    if (config.out.empty()) throw UsageError("multiscan requires --out");
    if (!(config.eps > 0.0) || !(config.eps < config.s)) throw UsageError("need 0 < eps < s");

    const fs::path out_dir(config.out);
    if (fs::exists(out_dir / "summary.csv") && !config.force)
        throw UsageError(out_dir.string() + " already holds a report; pass --force to overwrite");

    ExperimentConfig base_config = config;
    base_config.level.reset();
    const GridPointSet base = load_or_generate(base_config, config.level_hi);
    if (base.level() < config.level_hi)
        throw UsageError("input level " + std::to_string(base.level()) + " is coarser than the requested scale " +
                         std::to_string(config.level_hi));
    if (config.s > base.dim()) throw UsageError("--s must not exceed the ambient dimension");
    if (config.m <= 0 || config.m >= base.dim()) throw UsageError("--m must satisfy 0 < m < n");

    const int n = base.dim();
    const double slack = config.slack.value_or(std::ldexp(1.0, n));
    const double budget_slack = config.budget_slack.value_or(slack);
    const double tau = config.tau.value_or(default_tau(n));

    fs::create_directories(out_dir);
    MultiscaleResult result;
    double worst_ratio = -1.0;

    for (int j = config.level_lo; j <= config.level_hi; ++j) {
        const GridPointSet points = coarsen(base, j);
        const double delta = std::ldexp(1.0, -j);
        ScaleRow row;
        row.scale = j;
        row.cells = points.size();

        const CoverTree tree(points);
        row.content = optimal_cover(tree, config.s).value;
        row.spread_constant = minimal_spread_constant(tree, config.s);

        HeavyParams hp;
        hp.s = config.s;
        hp.big_c = std::max(1.0, static_cast<double>(points.size()) * std::pow(delta, config.s));
        hp.tau = tau;
        hp.big_l = config.big_l.value_or(std::max(1.0, std::pow(delta, -config.eps) / tau));
        const Decomposition dec = heavy_decompose(points, hp);
        row.good_cells = dec.good.size();

        ScanParams sp;
        sp.m = config.m;
        sp.delta = delta;
        sp.s = config.s;
        sp.eps = config.eps;
        sp.num_samples = dec.net.empty() ? 0 : config.samples;
        sp.master_seed = derive_seed(*config.seed, static_cast<std::uint64_t>(j));
        sp.slack = slack;
        sp.workers = config.workers;
        const ScanReport report = direction_scan(dec.net, sp);
        row.bad_fraction = report.bad_fraction;
        row.budget = report.budget;
        row.violated = row.bad_fraction > row.budget * budget_slack;

        const fs::path scale_dir = out_dir / ("scale_" + std::to_string(j));
        fs::create_directories(scale_dir);
        save_decomposition(scale_dir.string(), dec);
        std::ostringstream txt, csv;
        write_scan_report(txt, report);
        write_scan_csv(csv, report);
        write_file(scale_dir / "scan.txt", txt.str());
        write_file(scale_dir / "scan.csv", csv.str());

        if (row.violated) {
            const double ratio = row.bad_fraction / row.budget;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                result.worst_scale = j;
            }
        }
        result.rows.push_back(row);
    }

    std::ostringstream summary;
    summary << "scale,cells,content,spread_constant,good_cells,bad_fraction,budget,violated\n";
    for (const auto& r : result.rows)
        summary << r.scale << ',' << r.cells << ',' << num(r.content) << ',' << num(r.spread_constant) << ','
                << r.good_cells << ',' << num(r.bad_fraction) << ',' << num(r.budget) << ',' << (r.violated ? 1 : 0)
                << '\n';
    write_file(out_dir / "summary.csv", summary.str());

    result.exit_code = result.worst_scale ? 2 : 0;
    return result;
}

}  // namespace fracproj
