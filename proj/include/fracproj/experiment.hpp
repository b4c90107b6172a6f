#pragma once

#include "fracproj/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracproj {

/// Bad flags, missing inputs, refusing to overwrite: exit status 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// `kind:key=value,key=value`. Kinds: cantor, random, line, cluster, point.
/// Lists use `+` (e.g. keep=0+3); per-axis Cantor digit sets are separated by `/`.
struct GeneratorSpec {
    std::string kind;
    std::map<std::string, std::string> params;
};

GeneratorSpec parse_generator_spec(const std::string& text);
bool is_randomized(const GeneratorSpec& spec);

struct ExperimentConfig {
    std::string input;
    std::string gen;
    std::optional<int> level;
    int level_lo = -1;  // multiscan range
    int level_hi = -1;
    double s = 1.0;
    double eps = 0.1;
    int m = 1;
    std::optional<double> big_l;
    std::optional<double> tau;
    std::size_t samples = 0;
    std::optional<std::uint64_t> seed;
    std::optional<double> slack;
    std::optional<double> budget_slack;
    unsigned workers = 1;
    std::string out;
    bool force = false;
};

/// Point set named by --input or --gen, coarsened to --level when given.
/// `default_level` fills in a generator level left unspecified.
GridPointSet load_or_generate(const ExperimentConfig& config, std::optional<int> default_level = std::nullopt);

struct ScaleRow {
    int scale = 0;
    std::size_t cells = 0;
    double content = 0.0;
    double spread_constant = 0.0;
    std::size_t good_cells = 0;
    double bad_fraction = 0.0;
    double budget = 0.0;
    bool violated = false;
};

struct MultiscaleResult {
    int exit_code = 0;  // 0 ok, 2 budget violated
    std::vector<ScaleRow> rows;
    std::optional<int> worst_scale;
};

/// For every level j in [level_lo, level_hi]: coarsen to j, decompose into
/// heavy/good parts, scan the good net, and write scale_<j>/ plus summary.csv
/// under config.out. A scale is violated when
/// bad_fraction > delta^eps * budget_slack (budget_slack defaults to slack).
MultiscaleResult run_multiscale_scan(const ExperimentConfig& config);

/// Full command line (`generate`, `content`, `spread`, `decompose`,
/// `frostman`, `scan`, `multiscan`). Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracproj
