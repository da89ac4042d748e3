#include "csinst/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace csinst::serialize {

namespace {

using ordered_json = nlohmann::ordered_json;

// %.17g round-trips IEEE doubles exactly and stays locale-independent.
void append_double(std::string& s, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  s += buf;
}

constexpr std::size_t kDimLimit = 1u << 20;

}  // namespace

void write_matrix(std::ostream& os, const Matrix& m) {
  std::string s;
  s.reserve(m.data.size() * 26 + 32);
  s += std::to_string(m.rows);
  s += ' ';
  s += std::to_string(m.cols);
  s += '\n';
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j) s += ' ';
      append_double(s, m(i, j));
    }
    s += '\n';
  }
  os << s;
}

Matrix read_matrix(std::istream& is) {
  std::size_t r = 0, c = 0;
  if (!(is >> r >> c)) throw IoError("matrix header unreadable");
  if (r == 0 || c == 0 || r > kDimLimit || c > kDimLimit)
    throw IoError("matrix dimensions out of range");
  Matrix m(r, c);
  for (double& x : m.data)
    if (!(is >> x)) throw IoError("matrix body truncated");
  return m;
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  write_matrix(os, m);
  if (!os) throw IoError("write failed: " + path);
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  return read_matrix(is);
}

void write_vector(std::ostream& os, const Vector& v) {
  std::string s;
  s.reserve(v.size() * 26 + 16);
  s += std::to_string(v.size());
  s += '\n';
  for (double x : v) {
    append_double(s, x);
    s += '\n';
  }
  os << s;
}

Vector read_vector(std::istream& is) {
  std::size_t n = 0;
  if (!(is >> n)) throw IoError("vector header unreadable");
  if (n > kDimLimit) throw IoError("vector length out of range");
  Vector v(n);
  for (double& x : v)
    if (!(is >> x)) throw IoError("vector body truncated");
  return v;
}

void write_vector_file(const std::string& path, const Vector& v) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  write_vector(os, v);
  if (!os) throw IoError("write failed: " + path);
}

Vector read_vector_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  return read_vector(is);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string matrix_hash(const Matrix& m) {
  std::ostringstream os;
  write_matrix(os, m);
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(os.str())));
  return buf;
}

namespace {

ordered_json sparse_json(const Vector& v) {
  ordered_json entries = ordered_json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) entries.push_back(ordered_json::array({i, v[i]}));
  ordered_json out;
  out["size"] = v.size();
  out["entries"] = std::move(entries);
  return out;
}

Vector sparse_from_json(const ordered_json& j) {
  std::size_t n = j.at("size").get<std::size_t>();
  if (n > kDimLimit) throw IoError("record vector length out of range");
  Vector v(n, 0.0);
  for (const auto& pair : j.at("entries")) {
    std::size_t i = pair.at(0).get<std::size_t>();
    if (i >= n) throw IoError("record entry index out of range");
    v[i] = pair.at(1).get<double>();
  }
  return v;
}

isa::StepCase step_case_from(const std::string& s) {
  if (s == "median_step") return isa::StepCase::median_step;
  if (s == "leave_one_out_step") return isa::StepCase::leave_one_out_step;
  if (s == "halt") return isa::StepCase::halt;
  throw IoError("unknown step case: " + s);
}

basp::Verdict verdict_from(const std::string& s) {
  if (s == "success") return basp::Verdict::success;
  if (s == "failure") return basp::Verdict::failure;
  throw IoError("unknown verdict: " + s);
}

}  // namespace

std::string record_to_json(const isa::InstantonRecord& rec) {
  ordered_json j;
  j["format"] = "instanton-record-v1";
  j["matrix_id"] = rec.matrix_id;
  j["length"] = rec.length;
  j["instanton"] = sparse_json(rec.instanton);
  ordered_json loo = ordered_json::array();
  for (bool v : rec.leave_one_out_verdicts) loo.push_back(v);
  j["leave_one_out_verdicts"] = std::move(loo);
  ordered_json trace;
  trace["seed"] = rec.trace.seed;
  trace["init_k"] = rec.trace.init_k;
  ordered_json steps = ordered_json::array();
  for (const auto& st : rec.trace.steps) {
    ordered_json s;
    s["l0"] = st.l0;
    s["case"] = isa::step_case_name(st.step_case);
    s["verdict"] = basp::verdict_name(st.verdict);
    s["e"] = sparse_json(st.e);
    steps.push_back(std::move(s));
  }
  trace["steps"] = std::move(steps);
  j["trace"] = std::move(trace);
  return j.dump(2) + "\n";
}

isa::InstantonRecord record_from_json(const std::string& text) {
  try {
    ordered_json j = ordered_json::parse(text);
    if (j.at("format").get<std::string>() != "instanton-record-v1")
      throw IoError("unknown record format");
    isa::InstantonRecord rec;
    rec.matrix_id = j.at("matrix_id").get<std::string>();
    rec.length = j.at("length").get<std::size_t>();
    rec.instanton = sparse_from_json(j.at("instanton"));
    for (const auto& v : j.at("leave_one_out_verdicts"))
      rec.leave_one_out_verdicts.push_back(v.get<bool>());
    const auto& trace = j.at("trace");
    rec.trace.seed = trace.at("seed").get<std::uint64_t>();
    rec.trace.init_k = trace.at("init_k").get<std::size_t>();
    for (const auto& s : trace.at("steps")) {
      isa::TraceStep st;
      st.l0 = s.at("l0").get<std::size_t>();
      st.step_case = step_case_from(s.at("case").get<std::string>());
      st.verdict = verdict_from(s.at("verdict").get<std::string>());
      st.e = sparse_from_json(s.at("e"));
      rec.trace.steps.push_back(std::move(st));
    }
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("record parse: ") + e.what());
  }
}

void write_record_file(const std::string& path,
                       const isa::InstantonRecord& rec) {
  write_text_file(path, record_to_json(rec));
}

isa::InstantonRecord read_record_file(const std::string& path) {
  return record_from_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  if (is.bad()) throw IoError("read failed: " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << text;
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace csinst::serialize
