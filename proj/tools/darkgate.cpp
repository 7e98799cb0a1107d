#include <iostream>

#include "CLI11.hpp"
#include "darkgate/cli.hpp"

int main(int argc, char** argv) {
  darkgate::CliOptions o;
  CLI::App app{"darkgate: dark-mode controlled-phase gate simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config, "config file or preset name (paper_sec4, paper_sec3_fig3)");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--nmax", o.nmax, "Fock cutoff per bosonic mode");
  app.add_option("--dt", o.dt, "RK4 step in seconds (0: automatic)");

  app.add_subcommand("check", "run the invariant self-test battery");
  auto* evolve = app.add_subcommand("evolve", "propagate a basis state and write populations");
  evolve->add_option("--state", o.state, "gg, ge, eg, ee or max");
  evolve->add_option("--t", o.t, "final time in seconds");
  app.add_subcommand("cphase", "gate-time summary with F_cp(t) and average gate fidelity");
  auto* tomo = app.add_subcommand("tomography", "4x4 computational-block matrix of the gate");
  tomo->add_option("--propagator", o.propagator, "effective, resonant or full");
  tomo->add_option("--t", o.t, "evolution time in seconds");
  auto* fig3 = app.add_subcommand("fig3", "F(gt) of the maximally superposed state for several line ratios");
  fig3->add_option("--deltas", o.deltas, "line ratios gf/g1_ge")->delimiter(',');
  auto* fig7 = app.add_subcommand("fig7", "lossy gate: F_cp(t) (panel a) or a robustness scan (b..f)");
  fig7->add_option("--panel", o.panel, "a, b, c, d, e or f");
  auto* sweep = app.add_subcommand("sweep", "average gate fidelity versus g1_ge");
  sweep->add_option("--from", o.from, "lowest g1_ge/2pi in Hz");
  sweep->add_option("--to", o.to, "highest g1_ge/2pi in Hz");
  sweep->add_option("--step", o.step, "step in Hz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : darkgate::exit_code::config_error;
  }
  o.command = app.get_subcommands().front()->get_name();
  return darkgate::run_command(o, std::cout, std::cerr);
}
