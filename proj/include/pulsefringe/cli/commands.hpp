#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

namespace pf::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_infeasible = 3,   // includes an oracle grid that would exceed its point budget
    exit_validation = 4,
};

struct CommonOptions {
    std::string config;
    std::string out_dir = ".";
    unsigned workers = 0;
    std::string bb_table;          // overrides the config key
    std::optional<double> m_sigma; // overrides the config key
    // oracle-validate only
    double debug_delta_x_scale = 1.0;
    std::size_t max_grid_points = std::size_t(1) << 22;
};

int cmd_case_study(const CommonOptions& opt, std::ostream& log);
int cmd_sweep(const CommonOptions& opt, std::ostream& log);
int cmd_optimize_splitting(const CommonOptions& opt, std::ostream& log);
int cmd_oracle_validate(const CommonOptions& opt, std::ostream& log);
int cmd_pressure_requirement(const CommonOptions& opt, std::ostream& log);
int cmd_thermal(const CommonOptions& opt, std::ostream& log);

// Command-line front end.
int run_cli(int argc, char** argv, std::ostream& log, std::ostream& err);

} // namespace pf::cli
