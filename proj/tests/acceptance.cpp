// Acceptance suite for the instanton search pipeline. Each criterion prints
// one [PASS]/[FAIL] line with its measured numbers; the exit code is the
// number of failed criteria. Pass criterion numbers as arguments to run a
// subset, e.g. "acceptance 1 2 8".

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "csinst/harness.hpp"
#include "csinst/isa.hpp"
#include "csinst/linalg.hpp"
#include "csinst/lp.hpp"
#include "csinst/oracle.hpp"
#include "csinst/rng.hpp"
#include "csinst/serialize.hpp"

using namespace csinst;
namespace fs = std::filesystem;

namespace {

double now_seconds() {
  static const auto start = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

struct MatrixSize {
  std::size_t p, m;
  std::uint64_t matrix_seed;
};

const MatrixSize kSmall = {15, 64, 7};
const MatrixSize kMedium = {40, 160, 8};
const MatrixSize kLarge = {120, 512, 2008};

Matrix make_matrix(const MatrixSize& s) {
  return orthonormalize_rows(gaussian_matrix(s.p, s.m, s.matrix_seed));
}

// Shared 120x512 sampling run, produced through the same command bodies the
// CLI uses. Criteria 4, 6, and 7 all read from it.
struct LargeRun {
  bool ready = false;
  std::string matrix_path = "acceptance_out/matrix.mat";
  std::string dir_w8 = "acceptance_out/w8";
  double elapsed_w8 = 0.0;
  std::size_t trials = 500;
  std::size_t init_k = 40;
  std::uint64_t base_seed = 90000;
};

LargeRun g_large;

harness::SampleOptions large_options(std::size_t workers,
                                     const std::string& out_dir) {
  harness::SampleOptions so;
  so.matrix = g_large.matrix_path;
  so.trials = g_large.trials;
  so.init_k = g_large.init_k;
  so.base_seed = g_large.base_seed;
  so.workers = workers;
  so.out_dir = out_dir;
  return so;
}

void ensure_large_run() {
  if (g_large.ready) return;
  fs::create_directories("acceptance_out");
  std::ostringstream out, err;
  harness::GenMatrixOptions gm{kLarge.p, kLarge.m, kLarge.matrix_seed,
                               g_large.matrix_path};
  if (harness::cmd_gen_matrix(gm, out, err) != harness::kExitOk)
    throw std::runtime_error("matrix generation failed: " + err.str());

  fs::remove_all(g_large.dir_w8);
  double t0 = now_seconds();
  int rc = harness::cmd_sample(large_options(8, g_large.dir_w8), out, err);
  g_large.elapsed_w8 = now_seconds() - t0;
  if (rc != harness::kExitOk)
    throw std::runtime_error("sample command failed: " + err.str());
  g_large.ready = true;
}

std::vector<std::string> record_files(const std::string& dir) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("record_", 0) == 0) names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  return names;
}

bool run_criterion(int n, bool (*body)(std::string&)) {
  std::string msg;
  bool ok = false;
  try {
    ok = body(msg);
  } catch (const std::exception& e) {
    ok = false;
    msg = std::string("unexpected exception: ") + e.what();
  }
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", n, msg.c_str());
  std::fflush(stdout);
  return ok;
}

// 1. median support of e - BasP(e) never exceeds the support of e
bool criterion1(std::string& msg) {
  double t0 = now_seconds();
  std::size_t violations = 0, checked = 0, vacuous = 0;
  for (const MatrixSize& sz : {kSmall, kMedium}) {
    Matrix f = make_matrix(sz);
    basp::Decoder dec(f);
    for (std::size_t t = 0; t < 250; ++t) {
      std::size_t k = 1 + t % sz.p;
      Vector e = isa::random_init(sz.m, k, 20000 + t);
      basp::Result r = dec.decode(e);
      Vector v(sz.m);
      for (std::size_t i = 0; i < sz.m; ++i) v[i] = e[i] - r.d[i];
      if (l1_norm(v) == 0.0) {
        ++vacuous;  // exact recovery leaves nothing to take a median of
        continue;
      }
      isa::MedianResult med = isa::median(v);
      ++checked;
      if (basp::l0_norm(med.median, 1e-6) > basp::l0_norm(e, 1e-6))
        ++violations;
    }
  }
  double dt = now_seconds() - t0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "median support bound: %zu violations in %zu trials "
                "(%zu vacuous) in %.1f s (limit 120)",
                violations, checked + vacuous, vacuous, dt);
  msg = buf;
  return violations == 0 && dt <= 120.0;
}

// 2. the median of a null-space vector never decodes correctly
bool criterion2(std::string& msg) {
  double t0 = now_seconds();
  std::size_t violations = 0, ties = 0, total = 0;
  for (const MatrixSize& sz : {kSmall, kMedium}) {
    Matrix f = make_matrix(sz);
    basp::Decoder dec(f);
    for (std::size_t t = 0; t < 200; ++t) {
      Vector e = null_space_sample(f, 40000 + t);
      if (linf_norm(matvec(f, e)) > 1e-9) {
        ++violations;
        continue;
      }
      isa::MedianResult med = isa::median(e);
      basp::Result r = dec.decode(med.median);
      ++total;
      if (r.verdict != basp::Verdict::failure) ++violations;
      double l1m = l1_norm(med.median);
      if (std::abs(r.l1_norm - l1m) <= 1e-9 * (1.0 + l1m)) ++ties;
    }
  }
  double dt = now_seconds() - t0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "null-space medians: %zu decoded correctly of %zu "
                "(%zu equal-norm ties, counted as failure) in %.1f s (limit 120)",
                violations, total, ties, dt);
  msg = buf;
  return violations == 0 && dt <= 120.0;
}

// 3. every search run terminates in a certified instanton within the
//    initial support count, along a strictly shrinking trace
bool criterion3(std::string& msg) {
  std::size_t runs = 0, discarded = 0, bad = 0;
  for (const MatrixSize& sz : {kSmall, kMedium}) {
    Matrix f = make_matrix(sz);
    basp::Decoder dec(f);
    for (std::size_t t = 0; t < 500; ++t) {
      std::uint64_t seed = 60000 + t;
      Vector e0 = isa::random_init(sz.m, sz.p, seed);
      basp::Result first = dec.decode(e0);
      if (first.verdict == basp::Verdict::success) {
        ++discarded;
        continue;
      }
      ++runs;
      std::size_t init_l0 = basp::l0_norm(e0, 1e-6);
      try {
        isa::InstantonRecord rec =
            isa::isa_run(dec, e0, first, init_l0, seed, sz.p, "acceptance");
        bool ok = rec.trace.steps.size() <= init_l0;
        for (std::size_t i = 0; i + 1 < rec.trace.steps.size(); ++i)
          ok = ok && rec.trace.steps[i].l0 > rec.trace.steps[i + 1].l0;
        ok = ok && isa::verify_instanton(dec, rec.instanton).certified;
        if (!ok) ++bad;
      } catch (const std::exception&) {
        ++bad;  // includes a step budget overrun past init_l0
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "terminating certified runs: %zu of %zu (%zu initializations "
                "discarded out of 1000 trials)",
                runs - bad, runs, discarded);
  msg = buf;
  return bad == 0;
}

// 4. every emitted record file passes the verify command
bool criterion4(std::string& msg) {
  ensure_large_run();
  std::vector<std::string> names = record_files(g_large.dir_w8);
  std::size_t passed = 0;
  std::string first_fail;
  for (const std::string& name : names) {
    std::ostringstream out, err;
    harness::VerifyOptions vo;
    vo.matrix = g_large.matrix_path;
    vo.record = (fs::path(g_large.dir_w8) / name).string();
    if (harness::cmd_verify(vo, out, err) == harness::kExitOk) {
      ++passed;
    } else if (first_fail.empty()) {
      first_fail = name;
    }
  }
  char buf[200];
  if (first_fail.empty())
    std::snprintf(buf, sizeof buf, "verify command passes %zu of %zu records",
                  passed, names.size());
  else
    std::snprintf(buf, sizeof buf,
                  "verify command passes %zu of %zu records (first failure %s)",
                  passed, names.size(), first_fail.c_str());
  msg = buf;
  return !names.empty() && passed == names.size();
}

// 5. decode success coincides with a strict dual certificate, and the
//    exhaustive sparsest fit always matches the measurements
bool criterion5(std::string& msg) {
  double t0 = now_seconds();
  Matrix f = orthonormalize_rows(gaussian_matrix(8, 20, 55));
  basp::Decoder dec(f);
  std::size_t disagreements = 0, boundary = 0, oracle_bad = 0;
  for (std::size_t t = 0; t < 100; ++t) {
    std::size_t k = 1 + t % 3;
    Vector e = isa::random_init(20, k, 30000 + t);
    bool success = dec.decode(e).verdict == basp::Verdict::success;
    oracle::Certificate cert = oracle::dual_certificate(f, e);
    if (success && !cert.strict) {
      ++boundary;  // sufficient condition only; log and exclude
      std::printf("  criterion 5 note: trial %zu succeeded with off-support "
                  "max %.12f, excluded\n",
                  t, cert.off_support_max);
    } else if (!success && cert.strict) {
      ++disagreements;
    }

    auto fit = oracle::l0_oracle(f, matvec(f, e), basp::l0_norm(e, 1e-6));
    bool fit_ok = fit.has_value() && fit->residual_inf <= 1e-8 &&
                  fit->k <= basp::l0_norm(e, 1e-6);
    if (fit_ok) {
      Vector fd = matvec(f, fit->d);
      Vector fe = matvec(f, e);
      for (std::size_t i = 0; i < fd.size(); ++i)
        if (std::abs(fd[i] - fe[i]) > 1e-8) fit_ok = false;
    }
    if (!fit_ok) ++oracle_bad;
  }
  double dt = now_seconds() - t0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "certificate equivalence: %zu unexplained disagreements, "
                "%zu boundary cases excluded, %zu oracle mismatches "
                "in 100 instances, %.1f s (limit 300)",
                disagreements, boundary, oracle_bad, dt);
  msg = buf;
  return disagreements == 0 && oracle_bad == 0 && dt <= 300.0;
}

// 6. full-scale statistics: low discard rate, certified records, a
//    reconciled histogram, and no degenerate short instantons
bool criterion6(std::string& msg) {
  ensure_large_run();
  auto summary = nlohmann::json::parse(serialize::read_text_file(
      (fs::path(g_large.dir_w8) / "summary.json").string()));
  harness::Histogram hist = harness::histogram_from_csv(
      serialize::read_text_file(
          (fs::path(g_large.dir_w8) / "histogram.csv").string()));
  std::vector<std::string> names = record_files(g_large.dir_w8);

  Matrix f = serialize::read_matrix_file(g_large.matrix_path);
  basp::Decoder dec(f);
  std::size_t uncertified = 0;
  std::map<std::size_t, std::size_t> lengths;
  for (const std::string& name : names) {
    isa::InstantonRecord rec = serialize::read_record_file(
        (fs::path(g_large.dir_w8) / name).string());
    ++lengths[rec.length];
    if (!isa::verify_instanton(dec, rec.instanton).certified) ++uncertified;
  }

  std::size_t discarded = summary.at("discarded").get<std::size_t>();
  double discard_rate =
      static_cast<double>(discarded) / static_cast<double>(g_large.trials);
  bool reconciled =
      summary.at("trials").get<std::size_t>() == g_large.trials &&
      summary.at("instantons").get<std::size_t>() == names.size() &&
      discarded + names.size() == g_large.trials && lengths == hist.bins &&
      summary.at("min_length").get<std::size_t>() == hist.min_length();

  double per_trial =
      g_large.elapsed_w8 / static_cast<double>(g_large.trials);
  char buf[260];
  std::snprintf(buf, sizeof buf,
                "%zu instantons from %zu trials (discard rate %.1f%%), "
                "%zu uncertified, histogram %s, min length %zu, "
                "%.1f s total, %.3f s per trial (limit 3600 s)",
                names.size(), g_large.trials, 100.0 * discard_rate,
                uncertified, reconciled ? "reconciled" : "INCONSISTENT",
                hist.min_length(), g_large.elapsed_w8, per_trial);
  msg = buf;
  return discard_rate < 0.2 && uncertified == 0 && reconciled &&
         hist.min_length() >= 3 && g_large.elapsed_w8 <= 3600.0;
}

// 7. worker count never changes output bytes
bool criterion7(std::string& msg) {
  ensure_large_run();
  std::string dir_w1 = "acceptance_out/w1";
  fs::remove_all(dir_w1);
  std::ostringstream out, err;
  double t0 = now_seconds();
  int rc = harness::cmd_sample(large_options(1, dir_w1), out, err);
  double elapsed = now_seconds() - t0;
  if (rc != harness::kExitOk) {
    msg = "single-worker rerun failed: " + err.str();
    return false;
  }

  std::vector<std::string> files = record_files(g_large.dir_w8);
  files.push_back("histogram.csv");
  files.push_back("summary.json");
  std::vector<std::string> other = record_files(dir_w1);
  std::size_t mismatched = 0;
  std::string first_diff;
  if (other.size() + 2 != files.size()) {
    ++mismatched;
    first_diff = "record file count";
  }
  for (const std::string& name : files) {
    std::string a = serialize::read_text_file(
        (fs::path(g_large.dir_w8) / name).string());
    std::string b =
        serialize::read_text_file((fs::path(dir_w1) / name).string());
    if (a != b) {
      ++mismatched;
      if (first_diff.empty()) first_diff = name;
    }
  }
  char buf[220];
  if (mismatched == 0)
    std::snprintf(buf, sizeof buf,
                  "8-worker and 1-worker outputs byte-identical across %zu "
                  "files (rerun %.1f s)",
                  files.size(), elapsed);
  else
    std::snprintf(buf, sizeof buf, "%zu files differ (first: %s)", mismatched,
                  first_diff.c_str());
  msg = buf;
  return mismatched == 0;
}

// 8. the LP solver meets its advertised feasibility and gap bounds on
//    planted feasible problems
bool criterion8(std::string& msg) {
  std::size_t violations = 0;
  double worst_resid = 0.0, worst_gap = 0.0;
  for (std::size_t trial = 0; trial < 200; ++trial) {
    SplitMix64 rng(5000 + trial);
    std::size_t k = 3 + rng.next_below(18);
    std::size_t n = k + 1 + rng.next_below(3 * k);
    Matrix a(k, n);
    for (auto& v : a.data) v = rng.next_normal();
    Vector xs(n, 0.0);
    for (auto& v : xs)
      if (rng.next_unit() < 0.6) v = std::abs(rng.next_normal());
    Vector b = matvec(a, xs);
    Vector w(k);
    for (auto& v : w) v = rng.next_normal();
    Vector atw = matvec_transpose(a, w);
    Vector c(n);
    for (std::size_t i = 0; i < n; ++i)
      c[i] = std::abs(rng.next_normal()) + atw[i];
    double planted = 0.0;
    for (std::size_t i = 0; i < n; ++i) planted += c[i] * xs[i];

    lp::StandardFormLP prob{c, a, b};
    lp::Solution s = lp::solve_lp(prob);
    bool ok = s.status == lp::Status::optimal && s.primal_residual <= 1e-8 &&
              s.dual_residual <= 1e-8 && s.duality_gap <= 1e-8 &&
              s.objective <= planted + 1e-8 * (1.0 + std::abs(planted));
    if (!ok) ++violations;
    worst_resid = std::max(worst_resid, s.primal_residual);
    worst_gap = std::max(worst_gap, s.duality_gap);
  }
  char buf[180];
  std::snprintf(buf, sizeof buf,
                "planted LPs: %zu violations in 200, worst feasibility "
                "%.2e, worst gap %.2e",
                violations, worst_resid, worst_gap);
  msg = buf;
  return violations == 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) {
    int n = std::atoi(argv[i]);
    if (n < 1 || n > 8) {
      std::fprintf(stderr, "usage: %s [criterion numbers 1-8]\n", argv[0]);
      return 64;
    }
    wanted.insert(n);
  }
  if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8};

  bool (*bodies[8])(std::string&) = {criterion1, criterion2, criterion3,
                                     criterion4, criterion5, criterion6,
                                     criterion7, criterion8};
  int failures = 0;
  for (int n : wanted)
    if (!run_criterion(n, bodies[n - 1])) ++failures;

  std::printf("%d of %zu criteria failed\n", failures, wanted.size());
  return failures;
}
