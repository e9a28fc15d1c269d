#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wittcount/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wittcount: solution counts of congruence systems over boxes in truncated "
               "unramified rings, with divisibility-bound verification"};
  app.require_subcommand(1);

  wittcount::cli::RunConfig cfg;
  std::string format = "table";
  app.add_option("--cap", cfg.cap, "enumeration cap on q^n")->capture_default_str();
  app.add_option("--budget", cfg.budget, "structure polynomial term budget")
      ->capture_default_str();
  app.add_option("--interp-cap", cfg.interp_cap, "box interpolation point cap")
      ->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads for counting")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed, recorded in reports")->capture_default_str();
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"table", "records"}))
      ->capture_default_str();

  wittcount::cli::WittPolysArgs wargs;
  auto* wp = app.add_subcommand("witt-polys", "emit Witt structure polynomials");
  wp->add_option("--p", wargs.p, "prime")->required();
  wp->add_option("--r", wargs.r, "number of summands")->capture_default_str();
  wp->add_option("--nmax", wargs.nmax, "highest coordinate level")->capture_default_str();
  wp->add_flag("--substituted", wargs.substituted,
               "emit the homogeneous substituted sums s_n instead of S_n");
  wp->add_flag("--mul", wargs.mul, "emit the binary multiplication polynomials M_n");

  std::string count_path, reduce_path, interp_path;
  auto* cc = app.add_subcommand("count", "count and verify an instance file");
  cc->add_option("file", count_path, "instance JSON file, - for stdin")->required();
  auto* rd = app.add_subcommand("reduce", "emit the reduced F_q system of an instance");
  rd->add_option("file", reduce_path, "instance JSON file, - for stdin")->required();
  auto* bi = app.add_subcommand("box-interp", "emit a box's digit polynomials");
  bi->add_option("file", interp_path, "instance JSON file, - for stdin")->required();
  app.add_subcommand("repro", "recompute the built-in reference examples");
  wittcount::cli::PropSuiteArgs pargs;
  auto* ps = app.add_subcommand("prop-suite", "seeded randomized property suites");
  ps->add_option("--instances", pargs.instances, "number of random instances")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  cfg.records = format == "records";

  if (wp->parsed()) return wittcount::cli::cmd_witt_polys(wargs, cfg, std::cout, std::cerr);
  if (cc->parsed()) return wittcount::cli::cmd_count(count_path, cfg, std::cout, std::cerr);
  if (rd->parsed()) return wittcount::cli::cmd_reduce(reduce_path, cfg, std::cout, std::cerr);
  if (bi->parsed()) return wittcount::cli::cmd_box_interp(interp_path, cfg, std::cout, std::cerr);
  if (app.get_subcommand("repro")->parsed()) {
    return wittcount::cli::cmd_repro(cfg, std::cout, std::cerr);
  }
  if (ps->parsed()) return wittcount::cli::cmd_prop_suite(pargs, cfg, std::cout, std::cerr);
  return wittcount::cli::kExitFailure;
}
