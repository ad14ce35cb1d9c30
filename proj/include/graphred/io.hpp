#pragma once

#include "graphred/construct.hpp"
#include "graphred/types.hpp"

#include <iosfwd>
#include <string>

namespace graphred {

/// Comma-separated rows, no header. Values are written with 17 significant
/// digits so a write/read round trip is bit-exact.
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::string& path);

/// Vertex block of an OFF file; faces and colours are ignored.
Matrix read_off_vertices(std::istream& in);

enum class PointFormat { infer, csv, off };

/// Infers the format from the extension when `format` is infer.
PointSet load_point_cloud(const std::string& path, PointFormat format = PointFormat::infer);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace graphred
