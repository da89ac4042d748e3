#include <iostream>
#include <ostream>

#include "CLI11.hpp"

#include "csinst/common.hpp"
#include "csinst/harness.hpp"

namespace {

using csinst::Tolerances;

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
  cmd->add_option("--eps-fail", tol.eps_fail,
                  "decode failure threshold on ||d - e||inf")
      ->capture_default_str();
  cmd->add_option("--tau", tol.tau, "support threshold for the l0 norm")
      ->capture_default_str();
  cmd->add_option("--feas-tol", tol.feas_tol,
                  "LP feasibility tolerance (relative)")
      ->capture_default_str();
  cmd->add_option("--gap-tol", tol.gap_tol,
                  "LP duality gap tolerance (relative)")
      ->capture_default_str();
  cmd->add_option("--max-iter", tol.max_iter, "LP iteration cap")
      ->capture_default_str();
}

void print_config(std::ostream& os, const Tolerances& t) {
  os << "tolerance   value        meaning\n"
     << "eps-fail    " << t.eps_fail
     << "        decode failure threshold on ||d - e||inf\n"
     << "tau         " << t.tau
     << "        support threshold for the l0 norm\n"
     << "feas-tol    " << t.feas_tol
     << "        LP feasibility, relative to 1 + ||b||inf\n"
     << "gap-tol     " << t.gap_tol
     << "        LP duality gap, relative to 1 + |objective|\n"
     << "max-iter    " << t.max_iter << "          LP iteration cap\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace csinst::harness;

  CLI::App app{"instanton search for basis-pursuit decoding"};
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "read flag defaults from an INI file");
  bool show_config = false;
  app.add_flag("--show-config", show_config,
               "print the effective tolerance table");

  GenMatrixOptions gen;
  auto* cmd_gen = app.add_subcommand(
      "gen-matrix", "draw a Gaussian matrix and orthonormalize its rows");
  cmd_gen->add_option("--rows", gen.rows, "measurement count")->required();
  cmd_gen->add_option("--cols", gen.cols, "signal length")->required();
  cmd_gen->add_option("--seed", gen.seed, "generator seed")
      ->capture_default_str();
  cmd_gen->add_option("--out", gen.out, "matrix file to write")->required();

  RunIsaOptions run;
  auto* cmd_run = app.add_subcommand(
      "run-isa", "search for one instanton from a seeded initialization");
  cmd_run->add_option("--matrix", run.matrix, "matrix file")->required();
  cmd_run->add_option("--init-k", run.init_k, "initial support size")
      ->required();
  cmd_run->add_option("--seed", run.seed, "initialization seed")
      ->capture_default_str();
  cmd_run->add_option("--out", run.out,
                      "record file to write (prints JSON when omitted)");
  add_tolerance_flags(cmd_run, run.tol);

  SampleOptions sam;
  auto* cmd_sam = app.add_subcommand(
      "sample", "run many seeded searches and histogram instanton lengths");
  cmd_sam->add_option("--matrix", sam.matrix, "matrix file")->required();
  cmd_sam->add_option("--trials", sam.trials, "number of searches")
      ->required();
  cmd_sam->add_option("--init-k", sam.init_k, "initial support size")
      ->required();
  cmd_sam->add_option("--base-seed", sam.base_seed,
                      "trial t uses seed base-seed + t")
      ->capture_default_str();
  cmd_sam->add_option("--workers", sam.workers, "parallel trial workers")
      ->capture_default_str();
  cmd_sam->add_option("--out", sam.out_dir,
                      "output directory for records and histogram");
  add_tolerance_flags(cmd_sam, sam.tol);

  VerifyOptions ver;
  auto* cmd_ver = app.add_subcommand(
      "verify", "re-certify a stored record against its matrix");
  cmd_ver->add_option("--matrix", ver.matrix, "matrix file")->required();
  cmd_ver->add_option("record", ver.record, "record file")->required();
  add_tolerance_flags(cmd_ver, ver.tol);

  HistogramOptions his;
  auto* cmd_his =
      app.add_subcommand("histogram", "render a histogram CSV as text bars");
  cmd_his->add_option("csv", his.csv, "histogram.csv path")->required();
  cmd_his->add_option("--width", his.width, "bar width of the largest bin")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (show_config) {
    Tolerances effective;
    if (cmd_run->parsed()) effective = run.tol;
    if (cmd_sam->parsed()) effective = sam.tol;
    if (cmd_ver->parsed()) effective = ver.tol;
    print_config(std::cout, effective);
    if (app.get_subcommands().empty()) return kExitOk;
  }

  if (cmd_gen->parsed()) return cmd_gen_matrix(gen, std::cout, std::cerr);
  if (cmd_run->parsed()) return cmd_run_isa(run, std::cout, std::cerr);
  if (cmd_sam->parsed()) return cmd_sample(sam, std::cout, std::cerr);
  if (cmd_ver->parsed()) return cmd_verify(ver, std::cout, std::cerr);
  if (cmd_his->parsed()) return cmd_histogram(his, std::cout, std::cerr);

  std::cout << app.help();
  return kExitUsage;
}
