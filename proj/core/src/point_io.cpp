#include "modehunt/point_io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace modehunt {

namespace {

struct Field {
  std::string_view text;
  int column;  // 1-based byte offset in the line
};

std::vector<Field> split_fields(std::string_view line, bool comma) {
  std::vector<Field> fields;
  if (comma) {
    std::size_t start = 0;
    while (true) {
      std::size_t end = line.find(',', start);
      std::string_view f = line.substr(start, end == std::string_view::npos ? end : end - start);
      // trim surrounding whitespace
      std::size_t b = f.find_first_not_of(" \t");
      std::size_t e = f.find_last_not_of(" \t");
      if (b == std::string_view::npos) {
        fields.push_back({std::string_view{}, static_cast<int>(start) + 1});
      } else {
        fields.push_back({f.substr(b, e - b + 1), static_cast<int>(start + b) + 1});
      }
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
  } else {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      fields.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
      i = j;
    }
  }
  return fields;
}

bool parse_field(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
  return ec == std::errc() && ptr == last;
}

}  // namespace

PointSet parse_points_text(std::string_view text, const std::string& origin) {
  std::vector<std::pair<int, std::string_view>> lines;  // (line number, content)
  {
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      std::string_view line = text.substr(
          start, end == std::string_view::npos ? text.size() - start : end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      if (!line.empty()) lines.emplace_back(line_no, line);
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
  }
  if (lines.empty()) throw std::runtime_error(origin + ": no data");

  const bool comma = lines.front().second.find(',') != std::string_view::npos;

  // a non-numeric first line is a header
  std::size_t first_row = 0;
  {
    auto fields = split_fields(lines.front().second, comma);
    double v;
    bool numeric = !fields.empty();
    for (const Field& f : fields) {
      if (!parse_field(f.text, v)) {
        numeric = false;
        break;
      }
    }
    if (!numeric) first_row = 1;
  }
  if (first_row >= lines.size()) throw std::runtime_error(origin + ": no data rows after header");

  int dim = -1;
  PointSet points(1);
  std::vector<double> row;
  for (std::size_t li = first_row; li < lines.size(); ++li) {
    const auto& [line_no, line] = lines[li];
    auto fields = split_fields(line, comma);
    if (dim == -1) {
      dim = static_cast<int>(fields.size());
      if (dim < 1 || dim > kMaxDim) {
        throw std::runtime_error(origin + ": line " + std::to_string(line_no) +
                                 ": expected between 1 and " + std::to_string(kMaxDim) +
                                 " columns, got " + std::to_string(fields.size()));
      }
      points = PointSet(dim);
    } else if (static_cast<int>(fields.size()) != dim) {
      throw std::runtime_error(origin + ": line " + std::to_string(line_no) + ": expected " +
                               std::to_string(dim) + " fields, got " +
                               std::to_string(fields.size()));
    }
    row.clear();
    for (const Field& f : fields) {
      double v;
      if (!parse_field(f.text, v)) {
        throw std::runtime_error(origin + ": line " + std::to_string(line_no) + ", column " +
                                 std::to_string(f.column) + ": invalid number '" +
                                 std::string(f.text) + "'");
      }
      if (!std::isfinite(v)) {
        throw std::runtime_error(origin + ": line " + std::to_string(line_no) + ", column " +
                                 std::to_string(f.column) + ": non-finite value");
      }
      row.push_back(v);
    }
    points.push_back(row);
  }
  return points;
}

PointSet parse_points(const std::string& path) {
  return parse_points_text(read_file(path), path);
}

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  (void)ec;
  if (s.find_first_of(".eEnN") == std::string::npos) s += ".0";
  return s;
}

std::string format_points(const PointSet& points, char delimiter) {
  std::string out;
  out.reserve(static_cast<std::size_t>(points.size()) * 20);
  for (std::int64_t i = 0; i < points.size(); ++i) {
    std::span<const double> p = points[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j > 0) out += delimiter;
      out += format_double(p[j]);
    }
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error(path + ": read error");
  return std::move(ss).str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error(tmp + ": write error");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error(path + ": cannot replace file");
  }
}

}  // namespace modehunt
