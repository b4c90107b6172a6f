#include "fracproj/content.hpp"
#include "fracproj/errors.hpp"
#include "fracproj/experiment.hpp"
#include "fracproj/projection.hpp"
#include "fracproj/regularity.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fracproj {

namespace fs = std::filesystem;

namespace {

struct CliState {
    ExperimentConfig config;
    std::string levels;
    std::optional<double> big_c;
};

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

fs::path output_file(const ExperimentConfig& config, const std::string& name)
{
    if (config.out.empty()) throw UsageError("--out DIR is required");
    fs::create_directories(config.out);
    fs::path p = fs::path(config.out) / name;
    if (fs::exists(p) && !config.force) throw UsageError(p.string() + " exists; pass --force to overwrite");
    return p;
}

std::ofstream open_output(const fs::path& p)
{
    std::ofstream out(p, std::ios::binary);
    if (!out) throw UsageError("cannot write " + p.string());
    return out;
}

void add_input_flags(CLI::App* cmd, CliState& st)
{
    cmd->add_option("--input", st.config.input, "point-set file");
    cmd->add_option("--gen", st.config.gen, "generator spec, e.g. cantor:n=2,keep=0+3,iters=5");
    cmd->add_option("--level", st.config.level, "working resolution level K");
    cmd->add_option("--seed", st.config.seed, "seed for randomized generators");
}

int cmd_generate(const CliState& st, std::ostream& out)
{
    const GridPointSet points = load_or_generate(st.config);
    auto file = open_output(output_file(st.config, "points.pts"));
    write_point_set(file, points);
    out << "cells " << points.size() << " level " << points.level() << " dim " << points.dim() << '\n';
    return 0;
}

int cmd_content(const CliState& st, std::ostream& out)
{
    const GridPointSet points = load_or_generate(st.config);
    if (points.empty()) throw UsageError("content of an empty set is zero; nothing to cover");
    const DyadicCover cover = optimal_cover(points, st.config.s);
    if (!st.config.out.empty()) {
        auto file = open_output(output_file(st.config, "cover.txt"));
        write_cover(file, cover);
    }
    out << "value " << num(cover.value) << " cubes " << cover.cubes.size() << '\n';
    return 0;
}

int cmd_spread(const CliState& st, std::ostream& out)
{
    const GridPointSet points = load_or_generate(st.config);
    out << "spread_constant " << num(minimal_spread_constant(points, st.config.s)) << '\n';
    return 0;
}

int cmd_decompose(const CliState& st, std::ostream& out)
{
    const GridPointSet points = load_or_generate(st.config);
    HeavyParams p;
    p.s = st.config.s;
    p.big_c = st.big_c.value_or(
        std::max(1.0, static_cast<double>(points.size()) * std::pow(points.cell_side(), st.config.s)));
    p.big_l = st.config.big_l.value_or(1.0);
    p.tau = st.config.tau.value_or(default_tau(points.dim()));
    if (st.config.out.empty()) throw UsageError("--out DIR is required");
    for (const char* name : {"good.pts", "bad.pts", "heavy.cubes"}) output_file(st.config, name);

    const Decomposition dec = heavy_decompose(points, p);
    save_decomposition(st.config.out, dec);
    out << "good " << dec.good.size() << " bad " << dec.bad.size() << " maximal_heavy " << dec.maximal_heavy.size()
        << " heavy_content " << num(dec.heavy_content) << " bound " << num(1.0 / (p.tau * p.big_l)) << '\n';
    for (const auto& w : dec.warnings) out << "warning: " << w << '\n';
    return 0;
}

int cmd_frostman(const CliState& st, std::ostream& out)
{
    const GridPointSet points = load_or_generate(st.config);
    const GridPointSet subset = frostman_subset(points, st.config.s);
    auto file = open_output(output_file(st.config, "subset.pts"));
    write_point_set(file, subset);
    out << "cells " << subset.size() << " spread_constant " << num(minimal_spread_constant(subset, st.config.s))
        << '\n';
    return 0;
}

int cmd_scan(const CliState& st, std::ostream& out)
{
    if (!st.config.seed) throw UsageError("scan requires --seed");
    const GridPointSet points = load_or_generate(st.config);
    ScanParams p;
    p.m = st.config.m;
    p.s = st.config.s;
    p.eps = st.config.eps;
    p.num_samples = st.config.samples;
    p.master_seed = *st.config.seed;
    p.slack = st.config.slack.value_or(0.0);
    p.workers = st.config.workers;
    const auto txt_path = output_file(st.config, "scan.txt");
    const auto csv_path = output_file(st.config, "scan.csv");

    const ScanReport report = direction_scan(points, p);
    auto txt = open_output(txt_path);
    write_scan_report(txt, report);
    auto csv = open_output(csv_path);
    write_scan_csv(csv, report);
    out << summary_line(report) << '\n';
    if (report.delta_too_large) out << "note: delta^eps > 1/2, delta is likely above the asymptotic regime\n";
    const double budget_slack = st.config.budget_slack.value_or(report.slack);
    return report.bad_fraction > report.budget * budget_slack ? 2 : 0;
}

int cmd_multiscan(CliState st, std::ostream& out)
{
    const auto colon = st.levels.find(':');
    if (st.levels.empty() || colon == std::string::npos) throw UsageError("--levels LO:HI is required");
    try {
        st.config.level_lo = std::stoi(st.levels.substr(0, colon));
        st.config.level_hi = std::stoi(st.levels.substr(colon + 1));
    } catch (const std::exception&) {
        throw UsageError("--levels expects LO:HI, got `" + st.levels + "`");
    }
    const MultiscaleResult result = run_multiscale_scan(st.config);
    for (const auto& r : result.rows)
        out << "scale " << r.scale << " cells " << r.cells << " content " << num(r.content) << " spread "
            << num(r.spread_constant) << " bad_fraction " << num(r.bad_fraction) << " budget " << num(r.budget)
            << (r.violated ? " VIOLATED" : "") << '\n';
    if (result.worst_scale) out << "budget violated; worst scale " << *result.worst_scale << '\n';
    return result.exit_code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Dyadic covers, (C,delta,s)-set regularity and projection-energy experiments"};
    app.require_subcommand(1);
    CliState st;

    auto* generate = app.add_subcommand("generate", "write a generated or resampled point set");
    auto* content = app.add_subcommand("content", "optimal dyadic cover and content at scale");
    auto* spread = app.add_subcommand("spread", "least C making the set a (C,delta,s)-set");
    auto* decompose = app.add_subcommand("decompose", "heavy-cube split into good and bad parts");
    auto* frostman = app.add_subcommand("frostman", "extract a regular subset carrying the content");
    auto* scan = app.add_subcommand("scan", "Monte-Carlo scan of projection energies over random planes");
    auto* multiscan = app.add_subcommand("multiscan", "decompose and scan at every level of a range");

    for (auto* cmd : {generate, content, spread, decompose, frostman, scan, multiscan}) {
        add_input_flags(cmd, st);
        cmd->add_flag("--force", st.config.force, "overwrite existing outputs");
        cmd->add_option("--out", st.config.out, "output directory");
    }
    for (auto* cmd : {content, spread, decompose, frostman, scan, multiscan})
        cmd->add_option("--s", st.config.s, "exponent s")->check(CLI::PositiveNumber);
    for (auto* cmd : {decompose, multiscan}) {
        cmd->add_option("--big-l", st.config.big_l, "level L >= 1");
        cmd->add_option("--tau", st.config.tau, "heaviness constant tau in (0,1] (default 4^-n)");
    }
    decompose->add_option("--big-c", st.big_c, "covering constant C (default max(1, |P| delta^s))");
    for (auto* cmd : {scan, multiscan}) {
        cmd->add_option("--eps", st.config.eps, "epsilon")->check(CLI::PositiveNumber);
        cmd->add_option("--m", st.config.m, "plane dimension");
        cmd->add_option("--samples", st.config.samples, "number of Haar planes");
        cmd->add_option("--slack", st.config.slack, "constant replacing implicit bounds (default 2^n)");
        cmd->add_option("--budget-slack", st.config.budget_slack, "allowed bad_fraction / delta^eps (default slack)");
        cmd->add_option("--workers", st.config.workers, "worker threads");
    }
    multiscan->add_option("--levels", st.levels, "scale range LO:HI");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*generate) return cmd_generate(st, out);
        if (*content) return cmd_content(st, out);
        if (*spread) return cmd_spread(st, out);
        if (*decompose) return cmd_decompose(st, out);
        if (*frostman) return cmd_frostman(st, out);
        if (*scan) return cmd_scan(st, out);
        if (*multiscan) return cmd_multiscan(st, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace fracproj
