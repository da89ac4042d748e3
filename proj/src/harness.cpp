#include "csinst/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"

#include "csinst/linalg.hpp"
#include "csinst/oracle.hpp"
#include "csinst/serialize.hpp"

namespace csinst::harness {

std::size_t Histogram::min_length() const {
  return bins.empty() ? 0 : bins.begin()->first;
}

std::string histogram_csv(const Histogram& h) {
  std::string s = "length,count\n";
  for (const auto& [len, cnt] : h.bins)
    s += std::to_string(len) + "," + std::to_string(cnt) + "\n";
  return s;
}

Histogram histogram_from_csv(const std::string& text) {
  Histogram h;
  std::istringstream is(text);
  std::string line;
  bool saw_header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "length,count")
        throw IoError("histogram csv: bad header on line " +
                      std::to_string(lineno));
      saw_header = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw IoError("histogram csv: no comma on line " +
                    std::to_string(lineno));
    std::string left = line.substr(0, comma);
    std::string right = line.substr(comma + 1);
    auto digits = [](const std::string& s) {
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    if (!digits(left) || !digits(right))
      throw IoError("histogram csv: non-numeric field on line " +
                    std::to_string(lineno));
    try {
      std::size_t len = std::stoull(left);
      std::size_t cnt = std::stoull(right);
      h.bins[len] += cnt;
      h.trials_attempted += cnt;
    } catch (const std::logic_error&) {
      throw IoError("histogram csv: count out of range on line " +
                    std::to_string(lineno));
    }
  }
  return h;
}

std::string render_histogram(const Histogram& h, std::size_t width) {
  if (h.bins.empty()) return "no data\n";
  std::size_t max_count = 0;
  for (const auto& [len, cnt] : h.bins) max_count = std::max(max_count, cnt);
  std::string s;
  char head[40];
  for (const auto& [len, cnt] : h.bins) {
    std::size_t bar = 0;
    if (cnt > 0 && max_count > 0) {
      bar = static_cast<std::size_t>(std::llround(
          static_cast<double>(cnt) * static_cast<double>(width) /
          static_cast<double>(max_count)));
      bar = std::max<std::size_t>(bar, 1);
    }
    std::snprintf(head, sizeof head, "%6zu | ", len);
    s += head;
    s.append(bar, '#');
    s += " " + std::to_string(cnt) + "\n";
  }
  return s;
}

namespace {

struct TrialSlot {
  int state = 0;  // 0 untouched, 1 discarded, 2 instanton
  isa::InstantonRecord rec;
  std::exception_ptr err;
};

// Number of supports the l0 oracle would enumerate, saturating well past
// the budget so the caller can compare without overflow.
double support_count(std::size_t m, std::size_t k_max) {
  double total = 0.0, binom = 1.0;
  for (std::size_t j = 0; j <= k_max; ++j) {
    total += binom;
    if (total > 1e15) return total;
    binom = binom * static_cast<double>(m - j) / static_cast<double>(j + 1);
  }
  return total;
}

}  // namespace

SampleResult run_sample(const Matrix& f, const SampleConfig& cfg) {
  if (cfg.workers < 1)
    throw DimensionError("run_sample: workers must be >= 1");
  if (cfg.trials > 0 && (cfg.init_k < 1 || cfg.init_k > f.cols))
    throw DimensionError("run_sample: init_k out of range");

  const std::string matrix_id = serialize::matrix_hash(f);
  basp::Decoder dec(f, cfg.tol);
  std::vector<TrialSlot> slots(cfg.trials);

  auto run_trial = [&](std::size_t t) {
    TrialSlot& slot = slots[t];
    try {
      std::uint64_t seed = cfg.base_seed + t;
      Vector e0 = isa::random_init(f.cols, cfg.init_k, seed);
      basp::Result first = dec.decode(e0);
      if (first.verdict == basp::Verdict::success) {
        slot.state = 1;
        return;
      }
      slot.rec = isa::isa_run(dec, e0, first, cfg.init_k + 1, seed, cfg.init_k,
                              matrix_id);
      slot.state = 2;
    } catch (...) {
      slot.err = std::current_exception();
    }
  };

  if (cfg.workers == 1) {
    // Plain loop: the dense kernels inside may parallelize on their own.
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      run_trial(t);
      if (slots[t].err) break;
    }
  } else {
    // One trial per task; inner kernel regions serialize under nesting.
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(cfg.trials);
#ifdef _OPENMP
#pragma omp parallel for num_threads(static_cast<int>(cfg.workers)) \
    schedule(dynamic)
#endif
    for (std::ptrdiff_t t = 0; t < n; ++t)
      run_trial(static_cast<std::size_t>(t));
  }

  for (std::size_t t = 0; t < cfg.trials; ++t)
    if (slots[t].err) std::rethrow_exception(slots[t].err);

  SampleResult out;
  out.histogram.trials_attempted = cfg.trials;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    if (slots[t].state == 1) ++out.histogram.trials_discarded;
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    char name[40];
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      if (slots[t].state != 2) continue;
      std::snprintf(name, sizeof name, "record_%05zu.json", t);
      serialize::write_record_file(
          (std::filesystem::path(cfg.out_dir) / name).string(), slots[t].rec);
    }
  }

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    if (slots[t].state != 2) continue;
    ++out.histogram.bins[slots[t].rec.length];
    out.records.push_back(std::move(slots[t].rec));
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::path dir(cfg.out_dir);
    serialize::write_text_file((dir / "histogram.csv").string(),
                               histogram_csv(out.histogram));
    nlohmann::ordered_json j;
    j["format"] = "sample-summary-v1";
    j["matrix_id"] = matrix_id;
    j["trials"] = cfg.trials;
    j["init_k"] = cfg.init_k;
    j["base_seed"] = cfg.base_seed;
    j["discarded"] = out.histogram.trials_discarded;
    j["instantons"] = out.records.size();
    j["min_length"] = out.histogram.min_length();
    nlohmann::ordered_json bins = nlohmann::ordered_json::array();
    for (const auto& [len, cnt] : out.histogram.bins)
      bins.push_back(nlohmann::ordered_json::array({len, cnt}));
    j["bins"] = std::move(bins);
    serialize::write_text_file((dir / "summary.json").string(),
                               j.dump(2) + "\n");
  }
  return out;
}

namespace {

template <typename Body>
int guard(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const HashMismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerifyFailure;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int cmd_gen_matrix(const GenMatrixOptions& opt, std::ostream& out,
                   std::ostream& err) {
  return guard(err, [&]() -> int {
    if (opt.rows < 1 || opt.cols < opt.rows || opt.out.empty()) {
      err << "gen-matrix: need 1 <= rows <= cols and an output path\n";
      return kExitUsage;
    }
    Matrix g = gaussian_matrix(opt.rows, opt.cols, opt.seed);
    Matrix f = orthonormalize_rows(g);
    serialize::write_matrix_file(opt.out, f);
    out << "wrote " << f.rows << "x" << f.cols
        << " orthonormal-row matrix to " << opt.out << "\n"
        << "hash " << serialize::matrix_hash(f) << "\n";
    return kExitOk;
  });
}

int cmd_run_isa(const RunIsaOptions& opt, std::ostream& out,
                std::ostream& err) {
  return guard(err, [&]() -> int {
    if (opt.matrix.empty() || opt.init_k < 1) {
      err << "run-isa: need --matrix and --init-k >= 1\n";
      return kExitUsage;
    }
    Matrix f = serialize::read_matrix_file(opt.matrix);
    basp::Decoder dec(f, opt.tol);
    Vector e0 = isa::random_init(f.cols, opt.init_k, opt.seed);
    basp::Result first = dec.decode(e0);
    if (first.verdict == basp::Verdict::success) {
      out << "initialization decoded correctly; nothing to search\n";
      return kExitDiscardedInit;
    }
    isa::InstantonRecord rec =
        isa::isa_run(dec, e0, first, opt.init_k + 1, opt.seed, opt.init_k,
                     serialize::matrix_hash(f));
    std::string line = "instanton length " + std::to_string(rec.length) +
                       " after " + std::to_string(rec.trace.steps.size()) +
                       " iterates\n";
    if (opt.out.empty()) {
      out << serialize::record_to_json(rec);
      err << line;
    } else {
      serialize::write_record_file(opt.out, rec);
      out << line << "record written to " << opt.out << "\n";
    }
    return kExitOk;
  });
}

int cmd_sample(const SampleOptions& opt, std::ostream& out,
               std::ostream& err) {
  return guard(err, [&]() -> int {
    if (opt.matrix.empty() || opt.trials < 1 || opt.init_k < 1 ||
        opt.workers < 1) {
      err << "sample: need --matrix, --trials >= 1, --init-k >= 1, "
             "--workers >= 1\n";
      return kExitUsage;
    }
    Matrix f = serialize::read_matrix_file(opt.matrix);
    SampleConfig cfg;
    cfg.trials = opt.trials;
    cfg.init_k = opt.init_k;
    cfg.base_seed = opt.base_seed;
    cfg.workers = opt.workers;
    cfg.out_dir = opt.out_dir;
    cfg.tol = opt.tol;

    auto t0 = std::chrono::steady_clock::now();
    SampleResult res = run_sample(f, cfg);
    double elapsed = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();

    out << "trials " << res.histogram.trials_attempted << ", discarded "
        << res.histogram.trials_discarded << ", instantons "
        << res.records.size();
    if (!res.records.empty())
      out << ", min length " << res.histogram.min_length();
    out << "\n";
    out << render_histogram(res.histogram);
    char timing[96];
    std::snprintf(timing, sizeof timing,
                  "elapsed %.2f s (%.3f s per trial, console only)\n", elapsed,
                  elapsed / static_cast<double>(cfg.trials));
    out << timing;
    if (cfg.out_dir.empty())
      out << histogram_csv(res.histogram);
    else
      out << "outputs in " << cfg.out_dir << "\n";
    return kExitOk;
  });
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out,
               std::ostream& err) {
  return guard(err, [&]() -> int {
    if (opt.matrix.empty() || opt.record.empty()) {
      err << "verify: need --matrix and a record path\n";
      return kExitUsage;
    }
    Matrix f = serialize::read_matrix_file(opt.matrix);
    isa::InstantonRecord rec = serialize::read_record_file(opt.record);

    std::string hash = serialize::matrix_hash(f);
    if (hash != rec.matrix_id) {
      out << "check matrix_hash: fail (record " << rec.matrix_id
          << " vs matrix " << hash << ")\n"
          << "not certified\n";
      return kExitVerifyFailure;
    }
    out << "check matrix_hash: pass\n";

    bool ok = true;
    auto report = [&](const char* name, bool pass, const std::string& detail) {
      out << "check " << name << (pass ? ": pass" : ": fail");
      if (!pass && !detail.empty()) out << " (" << detail << ")";
      out << "\n";
      ok = ok && pass;
    };

    std::size_t l0 = basp::l0_norm(rec.instanton, opt.tol.tau);
    report("recorded_length", l0 == rec.length,
           "support " + std::to_string(l0) + " vs recorded " +
               std::to_string(rec.length));

    basp::Decoder dec(f, opt.tol);
    isa::CertificationReport cert = isa::verify_instanton(dec, rec.instanton);
    report("decode_fails_on_instanton",
           cert.on_vector == basp::Verdict::failure, "decoded correctly");
    std::size_t bad = 0;
    for (const auto& r : cert.reductions)
      if (r.verdict != basp::Verdict::success) ++bad;
    report("reductions_decode_correctly", bad == 0,
           std::to_string(bad) + " of " + std::to_string(cert.reductions.size()) +
               " reductions still fail");

    bool loo_ok = rec.leave_one_out_verdicts.size() == rec.length;
    for (bool v : rec.leave_one_out_verdicts) loo_ok = loo_ok && v;
    report("recorded_verdicts", loo_ok,
           "stored leave-one-out verdicts inconsistent");

    bool trace_ok = !rec.trace.steps.empty();
    std::string trace_why = trace_ok ? "" : "empty trace";
    if (trace_ok) {
      std::size_t prev = 0;
      for (std::size_t i = 0; i < rec.trace.steps.size(); ++i) {
        const auto& st = rec.trace.steps[i];
        bool last = i + 1 == rec.trace.steps.size();
        if (basp::l0_norm(st.e, opt.tol.tau) != st.l0) {
          trace_ok = false;
          trace_why = "stored l0 disagrees at step " + std::to_string(i);
          break;
        }
        if (i > 0 && st.l0 >= prev) {
          trace_ok = false;
          trace_why = "support not strictly decreasing at step " +
                      std::to_string(i);
          break;
        }
        if (last != (st.step_case == isa::StepCase::halt)) {
          trace_ok = false;
          trace_why = "halt label misplaced at step " + std::to_string(i);
          break;
        }
        if (st.verdict != basp::Verdict::failure) {
          trace_ok = false;
          trace_why = "iterate marked success at step " + std::to_string(i);
          break;
        }
        prev = st.l0;
      }
      if (trace_ok && rec.trace.steps.back().l0 != rec.length) {
        trace_ok = false;
        trace_why = "halting support differs from instanton length";
      }
    }
    report("trace_consistent", trace_ok, trace_why);

    if (support_count(f.cols, rec.length) <= kOracleBudget) {
      Vector y = matvec(f, rec.instanton);
      auto fit = oracle::l0_oracle(f, y, rec.length);
      bool oracle_ok = fit.has_value() && fit->k <= rec.length &&
                       fit->residual_inf <= kOracleResidual;
      report("sparsity_oracle", oracle_ok,
             fit ? "oracle found support " + std::to_string(fit->k)
                 : "oracle found no fit");
    } else {
      out << "check sparsity_oracle: skipped (enumeration over budget)\n";
    }

    out << (ok ? "certified\n" : "not certified\n");
    return ok ? kExitOk : kExitVerifyFailure;
  });
}

int cmd_histogram(const HistogramOptions& opt, std::ostream& out,
                  std::ostream& err) {
  return guard(err, [&]() -> int {
    if (opt.csv.empty()) {
      err << "histogram: need a csv path\n";
      return kExitUsage;
    }
    Histogram h = histogram_from_csv(serialize::read_text_file(opt.csv));
    out << render_histogram(h, opt.width);
    return kExitOk;
  });
}

}  // namespace csinst::harness
