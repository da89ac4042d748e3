#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "csinst/isa.hpp"
#include "csinst/matrix.hpp"

namespace csinst::serialize {

// Text formats. Matrices: "rows cols" header then one whitespace-separated
// row per line; vectors: "len" header then one entry per line. All values
// are printed with %.17g, which round-trips IEEE doubles exactly.

void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);
void write_matrix_file(const std::string& path, const Matrix& m);
Matrix read_matrix_file(const std::string& path);

void write_vector(std::ostream& os, const Vector& v);
Vector read_vector(std::istream& is);
void write_vector_file(const std::string& path, const Vector& v);
Vector read_vector_file(const std::string& path);

// FNV-1a over a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

// Hash of the canonical text serialization, rendered "fnv1a64:%016x".
// Stable across platforms since it sees only the printed text.
std::string matrix_hash(const Matrix& m);

// Instanton records as JSON. Sparse vectors are stored as [index, value]
// pairs; field order is fixed so equal records serialize to equal bytes.
std::string record_to_json(const isa::InstantonRecord& rec);
isa::InstantonRecord record_from_json(const std::string& text);
void write_record_file(const std::string& path, const isa::InstantonRecord& rec);
isa::InstantonRecord read_record_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace csinst::serialize
