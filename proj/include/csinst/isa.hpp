#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "csinst/basp.hpp"
#include "csinst/matrix.hpp"

namespace csinst::isa {

// Restriction of a vector to its fewest largest-magnitude entries whose
// absolute sum reaches half the l1 norm.
struct MedianResult {
  Vector median;                     // input values on the support, 0 elsewhere
  std::size_t t = 0;                 // retained entry count
  std::vector<std::size_t> support;  // ascending indices of the t entries
};

// Magnitude ties are broken toward the lower index; the >= test on the
// running partial sum is exact. Throws DimensionError on a zero vector.
MedianResult median(const Vector& v);

enum class StepCase { median_step, leave_one_out_step, halt };

const char* step_case_name(StepCase c);

struct TraceStep {
  Vector e;
  std::size_t l0 = 0;  // support count after thresholding at tau
  StepCase step_case = StepCase::halt;
  basp::Verdict verdict = basp::Verdict::failure;
};

struct Trace {
  std::vector<TraceStep> steps;
  std::uint64_t seed = 0;
  std::size_t init_k = 0;
};

struct InstantonRecord {
  Vector instanton;
  std::size_t length = 0;  // l0 norm of the instanton
  Trace trace;
  std::vector<bool> leave_one_out_verdicts;  // all true once certified
  std::string matrix_id;
};

struct NextVector {
  Vector e;
  StepCase step_case;  // median_step or leave_one_out_step
};

struct InstantonFound {
  Vector instanton;
  std::vector<bool> leave_one_out_verdicts;
};

using StepResult = std::variant<NextVector, InstantonFound>;

// One descent step from a failing iterate e_prev. Decodes e_prev, forms the
// median of e_prev - d, and either returns the median when its support
// shrank, runs the leave-one-out scan when it did not, or certifies the
// median as an instanton when every single-removal reduction decodes
// correctly. The first failing reduction in increasing index order is the
// one selected. A support growth is a ContractViolationError. The median
// iterate is rescaled to unit sup norm before use: failure is invariant
// under positive scaling, and the absolute eps_fail / tau thresholds only
// mean something at unit scale.
StepResult isa_step(const Matrix& f, const Vector& e_prev,
                    const Tolerances& tol = {});

// Same, on a prepared decoder with the decode of e_prev already in hand.
StepResult isa_step(const basp::Decoder& dec, const Vector& e_prev,
                    const basp::Result& prev_decode);

// Iterate isa_step from e0 to a certified instanton. e0 must fail to decode
// (InitNotFailingError otherwise); the iteration count never exceeds the l0
// norm of e0, so max_steps at least that large never trips BudgetError.
InstantonRecord isa_run(const Matrix& f, const Vector& e0,
                        std::size_t max_steps, const Tolerances& tol = {});

// Harness entry point: reuses the decoder and the already-computed first
// decode, and stamps seed / init_k / matrix_id into the record.
InstantonRecord isa_run(const basp::Decoder& dec, const Vector& e0,
                        const basp::Result& first_decode,
                        std::size_t max_steps, std::uint64_t seed,
                        std::size_t init_k, const std::string& matrix_id);

struct ReductionCheck {
  std::size_t index = 0;  // support index zeroed out
  basp::Verdict verdict = basp::Verdict::failure;
};

struct CertificationReport {
  basp::Verdict on_vector = basp::Verdict::success;
  std::vector<ReductionCheck> reductions;
  bool certified = false;  // failure on e, success on every reduction
};

// Definition check for an instanton: BasP must fail on e and succeed on all
// single-removal reductions. Negative certification is a value, not an error.
CertificationReport verify_instanton(const Matrix& f, const Vector& e,
                                     const Tolerances& tol = {});
CertificationReport verify_instanton(const basp::Decoder& dec, const Vector& e);

// k-sparse vector of length m: support uniform without replacement, values
// i.i.d. standard normal, both from a SplitMix64 stream seeded by `seed`.
Vector random_init(std::size_t m, std::size_t k, std::uint64_t seed);

}  // namespace csinst::isa
