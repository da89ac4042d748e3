#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "csinst/common.hpp"
#include "csinst/isa.hpp"
#include "csinst/matrix.hpp"

namespace csinst::harness {

// Exit codes shared by the CLI commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDiscardedInit = 2;   // run-isa: e0 decoded correctly
inline constexpr int kExitVerifyFailure = 3;   // verify: record not certified
inline constexpr int kExitUsage = 4;
inline constexpr int kExitNumerical = 5;

struct Histogram {
  std::map<std::size_t, std::size_t> bins;  // instanton length -> count
  std::size_t trials_attempted = 0;
  std::size_t trials_discarded = 0;  // init decoded correctly, no search run
  std::size_t min_length() const;    // smallest key, 0 when empty
};

// "length,count" header plus one ascending row per bin.
std::string histogram_csv(const Histogram& h);
Histogram histogram_from_csv(const std::string& text);

// Fixed-width text bar chart, one row per occupied length.
std::string render_histogram(const Histogram& h, std::size_t width = 50);

struct SampleConfig {
  std::size_t trials = 0;
  std::size_t init_k = 0;
  std::uint64_t base_seed = 0;
  std::size_t workers = 1;
  std::string out_dir;  // records land here; empty keeps them in memory only
  Tolerances tol;
};

struct SampleResult {
  Histogram histogram;
  std::vector<isa::InstantonRecord> records;  // kept in trial order
};

// Runs `trials` independent searches on f, trial i seeded base_seed + i.
// Initial vectors that decode correctly are discarded (counted, not
// retried). Output is a pure function of (f, config) regardless of
// workers: trials are distributed over OpenMP threads but every per-trial
// computation is bit-identical to the serial path and results are
// aggregated in trial order. With out_dir set, writes record_<trial>.json
// per instanton plus histogram.csv and summary.json.
SampleResult run_sample(const Matrix& f, const SampleConfig& cfg);

// CLI command bodies. Each parses nothing: options arrive pre-parsed, and
// human-readable output goes to `out` (diagnostics to `err`). The return
// value is the process exit code.

struct GenMatrixOptions {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t seed = 0;
  std::string out;  // matrix file path
};
int cmd_gen_matrix(const GenMatrixOptions& opt, std::ostream& out,
                   std::ostream& err);

struct RunIsaOptions {
  std::string matrix;  // path of a stored matrix
  std::size_t init_k = 0;
  std::uint64_t seed = 0;
  std::string out;  // record file path, empty prints to `out` stream
  Tolerances tol;
};
int cmd_run_isa(const RunIsaOptions& opt, std::ostream& out, std::ostream& err);

struct SampleOptions {
  std::string matrix;
  std::size_t trials = 0;
  std::size_t init_k = 0;
  std::uint64_t base_seed = 0;
  std::size_t workers = 1;
  std::string out_dir;
  Tolerances tol;
};
int cmd_sample(const SampleOptions& opt, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string matrix;
  std::string record;  // record file path
  Tolerances tol;
};
// Recomputes the certification from scratch: decode failure on the stored
// instanton, decode success on every reduction, trace consistency (strict
// support descent, step cases), and the matrix hash match.
int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

struct HistogramOptions {
  std::string csv;  // histogram.csv path
  std::size_t width = 50;
};
int cmd_histogram(const HistogramOptions& opt, std::ostream& out,
                  std::ostream& err);

}  // namespace csinst::harness
