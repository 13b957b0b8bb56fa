#include "datacurv/cloud_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "datacurv/errors.hpp"

namespace datacurv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, std::size_t line_no) {
  std::string_view t = trim(token);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": non-numeric token '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_row(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  if (sep == ',') {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      out.push_back(line.substr(start, pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  } else {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) out.push_back(line.substr(start, i - start));
    }
  }
  return out;
}

PointCloud load_delimited(std::istream& in, char sep) {
  std::vector<double> coords;
  std::size_t arity = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto tokens = split_row(row, sep);
    if (arity == 0) {
      arity = tokens.size();
    } else if (tokens.size() != arity) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(arity) + " values, found " +
                       std::to_string(tokens.size()));
    }
    for (const auto token : tokens) coords.push_back(parse_number(token, line_no));
  }
  if (coords.empty()) throw ParseError("no points in input");
  try {
    return PointCloud(std::move(coords), static_cast<int>(arity));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> properties;
};

PointCloud load_ply_ascii(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };
  if (!next_line() || trim(line) != "ply") throw ParseError("missing 'ply' magic");

  std::vector<PlyElement> elements;
  bool ascii = false;
  while (true) {
    if (!next_line()) throw ParseError("unterminated PLY header");
    std::istringstream words{std::string(trim(line))};
    std::string keyword;
    words >> keyword;
    if (keyword == "end_header") break;
    if (keyword == "format") {
      std::string kind;
      words >> kind;
      if (kind != "ascii") throw ParseError("only ASCII PLY is supported");
      ascii = true;
    } else if (keyword == "element") {
      PlyElement e;
      if (!(words >> e.name >> e.count)) {
        throw ParseError("line " + std::to_string(line_no) + ": bad element");
      }
      elements.push_back(std::move(e));
    } else if (keyword == "property") {
      if (elements.empty()) throw ParseError("property before element");
      std::string type, name;
      words >> type;
      if (type == "list") {
        std::string count_type, item_type;
        words >> count_type >> item_type >> name;
      } else {
        words >> name;
      }
      elements.back().properties.push_back(type == "list" ? "" : name);
    }
  }
  if (!ascii) throw ParseError("PLY format line missing");

  std::vector<double> coords;
  for (const auto& element : elements) {
    if (element.name != "vertex") {
      for (std::size_t k = 0; k < element.count; ++k) {
        if (!next_line()) throw ParseError("truncated PLY body");
      }
      continue;
    }
    int axis_slot[3] = {-1, -1, -1};
    for (std::size_t k = 0; k < element.properties.size(); ++k) {
      const auto& name = element.properties[k];
      if (name == "x") axis_slot[0] = static_cast<int>(k);
      if (name == "y") axis_slot[1] = static_cast<int>(k);
      if (name == "z") axis_slot[2] = static_cast<int>(k);
    }
    for (int slot : axis_slot) {
      if (slot < 0) throw ParseError("PLY vertex element lacks x/y/z");
    }
    for (std::size_t k = 0; k < element.count; ++k) {
      if (!next_line()) throw ParseError("truncated PLY vertex list");
      const auto tokens = split_row(trim(line), ' ');
      if (tokens.size() < element.properties.size()) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": too few vertex properties");
      }
      for (int slot : axis_slot) coords.push_back(parse_number(tokens[slot], line_no));
    }
    break;
  }
  if (coords.empty()) throw ParseError("PLY file has no vertices");
  try {
    return PointCloud(std::move(coords), 3);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

CloudFormat parse_format(std::string_view name) {
  if (name == "xyz") return CloudFormat::xyz;
  if (name == "csv") return CloudFormat::csv;
  if (name == "ply" || name == "ply-ascii") return CloudFormat::ply_ascii;
  throw InvalidArgument("unknown point cloud format '" + std::string(name) + "'");
}

std::optional<CloudFormat> format_from_path(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  const auto ext = path.substr(dot + 1);
  if (ext == "xyz" || ext == "txt") return CloudFormat::xyz;
  if (ext == "csv") return CloudFormat::csv;
  if (ext == "ply") return CloudFormat::ply_ascii;
  return std::nullopt;
}

PointCloud load_cloud(std::istream& in, CloudFormat format) {
  switch (format) {
    case CloudFormat::xyz: return load_delimited(in, ' ');
    case CloudFormat::csv: return load_delimited(in, ',');
    case CloudFormat::ply_ascii: return load_ply_ascii(in);
  }
  throw InvalidArgument("unknown format");
}

PointCloud load_cloud_file(const std::string& path,
                           std::optional<CloudFormat> format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  if (!format) format = format_from_path(path);
  return load_cloud(in, format.value_or(CloudFormat::xyz));
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_cloud(std::ostream& out, const PointCloud& cloud, CloudFormat format,
                 const std::vector<int>* labels) {
  if (format == CloudFormat::ply_ascii) {
    throw InvalidArgument("writing PLY is not supported");
  }
  if (labels && labels->size() != cloud.size()) {
    throw DimensionMismatch("label count differs from point count");
  }
  const char sep = format == CloudFormat::csv ? ',' : ' ';
  std::string row;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    row.clear();
    const auto p = cloud.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) row += sep;
      row += format_double(p[k]);
    }
    if (labels) {
      row += sep;
      row += std::to_string((*labels)[i]);
    }
    row += '\n';
    out << row;
  }
}

}  // namespace datacurv
