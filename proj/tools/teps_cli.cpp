#include "teps/experiments.hpp"
#include "teps/registry.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string out_dir;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config, "configuration file (sectioned key = value)");
  sub->add_option("-s,--set", c.overrides, "override one field: section.key=value (repeatable)");
  sub->add_option("-o,--out", c.out_dir, "output directory (same as output.dir)");
}

teps::RunConfig load(const Common& c) {
  auto overrides = c.overrides;
  if (!c.out_dir.empty()) overrides.push_back("output.dir=" + c.out_dir);
  return teps::load_config(c.config, overrides);
}

void print_paths(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-evolution phase shifts: TEPS, V-TEPS, Numerov oracle and circuit emulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", teps::software_version());

  Common teps_opt, vteps_opt, oracle_opt, sweep_opt, emu_opt;
  auto* teps_cmd = app.add_subcommand("teps", "time scan of |delta| from the detector overlap");
  auto* vteps_cmd = app.add_subcommand("vteps", "variational detector-phase scan and cos^2 fit");
  auto* oracle_cmd = app.add_subcommand("oracle", "Numerov phase shift at initial.k");
  auto* sweep_cmd = app.add_subcommand("sweep", "one-parameter TEPS sweep (sweep.parameter, sweep.values)");
  auto* emu_cmd = app.add_subcommand("emulate", "gate-level emulation of the eigenbasis circuit");
  auto* verify_cmd = app.add_subcommand("verify-all", "run every registered reference check");
  add_common(teps_cmd, teps_opt);
  add_common(vteps_cmd, vteps_opt);
  add_common(oracle_cmd, oracle_opt);
  add_common(sweep_cmd, sweep_opt);
  add_common(emu_cmd, emu_opt);
  std::vector<int> only;
  verify_cmd->add_option("--criterion", only, "restrict to these criterion numbers");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*teps_cmd) {
      const auto cfg = load(teps_opt);
      const auto o = teps::run_teps(cfg);
      std::printf("k_in = %.6f  c_L = %.6f  tau = %.3f  exact = %.5f\n", o.k_in, o.norms.c_L, o.tau, o.exact);
      if (o.value)
        std::printf("plateau [%.3f, %.3f]  |delta| = %.5f +- %.5f\n", o.series.plateau->t_a, o.series.plateau->t_b,
                    o.value->mean, o.value->std);
      else
        std::printf("no plateau detected\n");
      print_paths(teps::write_teps(cfg, o));
    } else if (*vteps_cmd) {
      const auto cfg = load(vteps_opt);
      const auto o = teps::run_vteps(cfg);
      std::printf("k_in = %.6f  window n = [%d, %d]  exact = %.5f\n", o.k_in, o.n_i, o.n_f, o.exact);
      if (o.value)
        std::printf("plateau [%.3f, %.3f]  delta = %.5f +- %.5f\n", o.plateau->t_a, o.plateau->t_b, o.value->mean,
                    o.value->std);
      else
        std::printf("no plateau detected\n");
      print_paths(teps::write_vteps(cfg, o));
    } else if (*oracle_cmd) {
      const auto cfg = load(oracle_opt);
      const auto o = teps::run_oracle(cfg);
      std::printf("k = %.6f  E = %.8g  delta = %.6f\n", o.k, o.energy, o.delta);
      print_paths(teps::write_oracle(cfg, o));
    } else if (*sweep_cmd) {
      const auto cfg = load(sweep_opt);
      const auto rows = teps::run_sweep(cfg);
      for (const auto& r : rows) {
        if (r.outcome.value)
          std::printf("%s = %-10g |delta| = %.5f +- %.5f\n", cfg.sweep.parameter.c_str(), r.value, r.outcome.value->mean,
                      r.outcome.value->std);
        else
          std::printf("%s = %-10g no plateau\n", cfg.sweep.parameter.c_str(), r.value);
      }
      print_paths(teps::write_sweep(cfg, rows));
    } else if (*emu_cmd) {
      const auto cfg = load(emu_opt);
      const auto o = teps::run_emulate(cfg);
      std::printf("qubits = %d  k_in = %.6f  max |P_emu - P_classical| = %.3g\n", o.qubits, o.k_in, o.max_abs_diff);
      if (o.plateau) std::printf("plateau [%.1f, %.1f]\n", o.plateau->t_a, o.plateau->t_b);
      if (o.fit_ideal.maximizer)
        std::printf("t = %.1f  noiseless delta* = %.4f +- %.4f  exact = %.4f\n", o.t_scan, *o.fit_ideal.maximizer,
                    o.fit_ideal.sigma_B, o.exact);
      if (o.fit_noisy && o.fit_noisy->maximizer)
        std::printf("noisy f1 delta* = %.4f +- %.4f  floor C = %.4f\n", *o.fit_noisy->maximizer, o.fit_noisy->sigma_B,
                    o.fit_noisy->C.value_or(0.0));
      if (o.fit_dr && o.fit_dr->maximizer)
        std::printf("DR f2 delta* = %.4f +- %.4f  A = %.4f\n", *o.fit_dr->maximizer, o.fit_dr->sigma_B, o.fit_dr->A);
      print_paths(teps::write_emulate(cfg, o));
    } else if (*verify_cmd) {
      bool ok = true;
      for (int n = 1; n <= teps::kCriterionCount; ++n) {
        if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
        const auto rep = teps::run_criterion(n);
        for (const auto& c : rep.checks) std::cout << "  " << teps::format_check(c) << "\n";
        std::cout << teps::format_summary(rep) << std::endl;
        ok = ok && rep.pass();
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
