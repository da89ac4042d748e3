#include "csinst/isa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "csinst/rng.hpp"

namespace csinst::isa {

MedianResult median(const Vector& v) {
  if (v.empty()) throw DimensionError("median: empty vector");
  double total = l1_norm(v);
  if (total == 0.0) throw DimensionError("median: zero vector");

  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    double ai = std::abs(v[i]), aj = std::abs(v[j]);
    if (ai != aj) return ai > aj;
    return i < j;
  });

  double half = 0.5 * total;
  double partial = 0.0;
  std::size_t t = 0;
  while (t < order.size()) {
    partial += std::abs(v[order[t]]);
    ++t;
    if (partial >= half) break;
  }

  MedianResult out;
  out.t = t;
  out.support.assign(order.begin(), order.begin() + t);
  std::sort(out.support.begin(), out.support.end());
  out.median.assign(v.size(), 0.0);
  for (std::size_t i : out.support) out.median[i] = v[i];
  return out;
}

const char* step_case_name(StepCase c) {
  switch (c) {
    case StepCase::median_step: return "median_step";
    case StepCase::leave_one_out_step: return "leave_one_out_step";
    case StepCase::halt: return "halt";
  }
  return "unknown";
}

StepResult isa_step(const Matrix& f, const Vector& e_prev,
                    const Tolerances& tol) {
  basp::Decoder dec(f, tol);
  return isa_step(dec, e_prev, dec.decode(e_prev));
}

StepResult isa_step(const basp::Decoder& dec, const Vector& e_prev,
                    const basp::Result& prev_decode) {
  const Tolerances& tol = dec.tolerances();
  if (prev_decode.verdict == basp::Verdict::success)
    throw InitNotFailingError("isa_step: iterate decodes correctly");

  std::size_t l0_prev = basp::l0_norm(e_prev, tol.tau);
  Vector diff(e_prev.size());
  for (std::size_t i = 0; i < e_prev.size(); ++i)
    diff[i] = e_prev[i] - prev_decode.d[i];
  MedianResult med = median(diff);
  // BasP failure is invariant under positive scaling, while eps_fail and tau
  // are absolute and calibrated for unit-scale entries. Rescale each median
  // iterate to unit sup norm so a near-threshold failure cannot hand the next
  // iterate the solver's error scale, where support counts stop meaning
  // anything.
  Vector med_e = med.median;
  double top = linf_norm(med_e);
  for (double& x : med_e) x /= top;
  std::size_t l0_med = basp::l0_norm(med_e, tol.tau);

  // e_prev - d lies in the measurement null space, so the median's support
  // can never outgrow the iterate's.
  if (l0_med > l0_prev)
    throw ContractViolationError(
        "isa_step: median support grew from " + std::to_string(l0_prev) +
        " to " + std::to_string(l0_med));

  if (l0_med < l0_prev) return NextVector{med_e, StepCase::median_step};

  // Support size held. The median itself still fails (checked by the caller
  // on the next decode); scan its single-removal reductions in index order.
  std::vector<std::size_t> support = basp::threshold_support(med_e, tol.tau);
  std::vector<bool> verdicts;
  verdicts.reserve(support.size());
  for (std::size_t i : support) {
    Vector reduced = med_e;
    reduced[i] = 0.0;
    basp::Result r = dec.decode(reduced);
    if (r.verdict == basp::Verdict::failure)
      return NextVector{reduced, StepCase::leave_one_out_step};
    verdicts.push_back(true);
  }

  // Every reduction decodes correctly: the median is an instanton, provided
  // it fails itself. Its difference from e_prev is a null-space vector, so
  // failure is guaranteed; assert it anyway.
  basp::Result on_med = dec.decode(med_e);
  if (on_med.verdict == basp::Verdict::success)
    throw ContractViolationError(
        "isa_step: median of a null-space shift decoded correctly");
  return InstantonFound{med_e, verdicts};
}

InstantonRecord isa_run(const Matrix& f, const Vector& e0,
                        std::size_t max_steps, const Tolerances& tol) {
  basp::Decoder dec(f, tol);
  return isa_run(dec, e0, dec.decode(e0), max_steps, 0, 0, "");
}

InstantonRecord isa_run(const basp::Decoder& dec, const Vector& e0,
                        const basp::Result& first_decode,
                        std::size_t max_steps, std::uint64_t seed,
                        std::size_t init_k, const std::string& matrix_id) {
  const Tolerances& tol = dec.tolerances();
  if (first_decode.verdict == basp::Verdict::success)
    throw InitNotFailingError("isa_run: initial vector decodes correctly");

  InstantonRecord rec;
  rec.trace.seed = seed;
  rec.trace.init_k = init_k;
  rec.matrix_id = matrix_id;

  Vector e = e0;
  basp::Result cur = first_decode;
  for (std::size_t step = 0;; ++step) {
    if (step >= max_steps)
      throw BudgetError("isa_run: step budget exhausted after " +
                        std::to_string(step) + " iterates");
    std::size_t l0_e = basp::l0_norm(e, tol.tau);
    StepResult sr = isa_step(dec, e, cur);

    if (auto* found = std::get_if<InstantonFound>(&sr)) {
      rec.trace.steps.push_back({e, l0_e, StepCase::halt,
                                 basp::Verdict::failure});
      rec.instanton = found->instanton;
      rec.length = basp::l0_norm(found->instanton, tol.tau);
      rec.leave_one_out_verdicts = found->leave_one_out_verdicts;
      return rec;
    }

    auto& next = std::get<NextVector>(sr);
    std::size_t l0_next = basp::l0_norm(next.e, tol.tau);
    if (l0_next >= l0_e)
      throw ContractViolationError("isa_run: support did not shrink (" +
                                   std::to_string(l0_e) + " -> " +
                                   std::to_string(l0_next) + ")");
    rec.trace.steps.push_back({e, l0_e, next.step_case,
                               basp::Verdict::failure});
    e = next.e;
    cur = dec.decode(e);
    if (cur.verdict == basp::Verdict::success)
      throw ContractViolationError(
          "isa_run: descent produced a correctly decoded iterate");
  }
}

CertificationReport verify_instanton(const Matrix& f, const Vector& e,
                                     const Tolerances& tol) {
  basp::Decoder dec(f, tol);
  return verify_instanton(dec, e);
}

CertificationReport verify_instanton(const basp::Decoder& dec,
                                     const Vector& e) {
  const Tolerances& tol = dec.tolerances();
  CertificationReport rep;
  rep.on_vector = dec.decode(e).verdict;
  std::vector<std::size_t> support = basp::threshold_support(e, tol.tau);
  bool all_ok = true;
  for (std::size_t i : support) {
    Vector reduced = e;
    reduced[i] = 0.0;
    basp::Verdict v = dec.decode(reduced).verdict;
    rep.reductions.push_back({i, v});
    all_ok = all_ok && v == basp::Verdict::success;
  }
  rep.certified = rep.on_vector == basp::Verdict::failure && all_ok &&
                  !support.empty();
  return rep;
}

Vector random_init(std::size_t m, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > m)
    throw DimensionError("random_init: need 1 <= k <= m, got k = " +
                         std::to_string(k) + ", m = " + std::to_string(m));
  SplitMix64 rng(seed);
  std::vector<std::size_t> pool(m);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t t = 0; t < k; ++t) {
    std::size_t j = t + static_cast<std::size_t>(rng.next_below(m - t));
    std::swap(pool[t], pool[j]);
  }
  std::vector<std::size_t> support(pool.begin(), pool.begin() + k);
  std::sort(support.begin(), support.end());
  Vector e(m, 0.0);
  for (std::size_t i : support) e[i] = rng.next_normal();
  return e;
}

}  // namespace csinst::isa
