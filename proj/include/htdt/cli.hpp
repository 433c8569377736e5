#pragma once

#include <iostream>
#include <vector>

namespace htdt::cli {

/// Command-line entry point. Subcommands: simulate, fig3, fig5,
/// check-theorem. Returns 0 on success, 2 on validation/usage errors,
/// 1 on internal errors. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

/// CSV sweep over the attenuator transmissivity at fixed resource
/// log-negativity 2r. Columns:
/// x,F_qt,F_an,F_ef,delta_qt,delta_an,d_opt,r_nc
void write_fig3_csv(std::ostream& out, double r, double x_min, double x_max,
                    int x_steps);

/// CSV sweep over Charlie's position and source entanglement. Columns:
/// h_C,r_C,x_C,two_r_distributed,F_an,F_qt,F_ef,d_opt
void write_fig5_csv(std::ostream& out, double gamma, double x_ab,
                    double hc_min, double hc_max, int hc_steps,
                    const std::vector<double>& r_c_values);

}  // namespace htdt::cli
