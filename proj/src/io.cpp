#include "graphred/io.hpp"

#include "graphred/error.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace graphred {

namespace {

std::string where(long line_no) { return "line " + std::to_string(line_no); }

bool parse_double(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str()) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0' && errno != ERANGE;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string extension(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  char buf[40];
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path);
  write_matrix_csv(out, m);
  require(static_cast<bool>(out), ErrorKind::io, "write failed: " + path);
}

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      double v = 0.0;
      if (!parse_double(trim(tok), v)) {
        fail(ErrorKind::parse, "CSV " + where(line_no) + ": bad number '" + trim(tok) + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorKind::parse, "CSV " + where(line_no) + ": expected " +
                                 std::to_string(rows.front().size()) + " columns, got " +
                                 std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorKind::parse, "CSV: no data rows");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  return m;
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path);
  try {
    return read_matrix_csv(in);
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

Matrix read_off_vertices(std::istream& in) {
  std::string line;
  long line_no = 0;
  auto next_content = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
      if (!t.empty()) {
        out = t;
        return true;
      }
    }
    return false;
  };

  std::string content;
  if (!next_content(content)) fail(ErrorKind::parse, "OFF: empty file");
  // The header keyword may share a line with the counts ("OFF 4 2 0").
  std::string counts = content;
  if (content.rfind("OFF", 0) == 0) {
    counts = trim(content.substr(3));
    if (counts.empty() && !next_content(counts)) {
      fail(ErrorKind::parse, "OFF " + where(line_no) + ": missing vertex/face counts");
    }
  } else {
    fail(ErrorKind::parse, "OFF " + where(line_no) + ": missing OFF header");
  }
  long n_vertices = -1, n_faces = -1;
  {
    std::istringstream cs(counts);
    if (!(cs >> n_vertices >> n_faces) || n_vertices < 0) {
      fail(ErrorKind::parse, "OFF " + where(line_no) + ": bad vertex/face counts");
    }
  }
  Matrix v(n_vertices, 3);
  for (long i = 0; i < n_vertices; ++i) {
    if (!next_content(content)) {
      fail(ErrorKind::parse, "OFF: expected " + std::to_string(n_vertices) +
                                 " vertices, file ended after " + std::to_string(i));
    }
    std::istringstream vs(content);
    double x = 0, y = 0, z = 0;
    if (!(vs >> x >> y >> z)) {
      fail(ErrorKind::parse, "OFF " + where(line_no) + ": bad vertex line");
    }
    v(i, 0) = x;
    v(i, 1) = y;
    v(i, 2) = z;
  }
  return v;
}

PointSet load_point_cloud(const std::string& path, PointFormat format) {
  if (format == PointFormat::infer) {
    const auto ext = extension(path);
    if (ext == "off") {
      format = PointFormat::off;
    } else if (ext == "csv" || ext == "txt") {
      format = PointFormat::csv;
    } else {
      fail(ErrorKind::parameter, "cannot infer point-cloud format of " + path);
    }
  }
  if (format == PointFormat::csv) return PointSet(read_matrix_csv(path));
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path);
  try {
    return PointSet(read_off_vertices(in));
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorKind::io, "write failed: " + path);
}

}  // namespace graphred
