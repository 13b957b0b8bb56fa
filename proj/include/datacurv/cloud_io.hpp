#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "datacurv/point_cloud.hpp"

namespace datacurv {

enum class CloudFormat { xyz, csv, ply_ascii };

/// Parses "xyz", "csv", "ply" / "ply-ascii". Throws InvalidArgument.
CloudFormat parse_format(std::string_view name);

/// Guesses the format from a file extension (.xyz/.txt, .csv, .ply).
std::optional<CloudFormat> format_from_path(std::string_view path);

/// Reads a cloud. xyz: whitespace-separated floats, one point per line; csv:
/// comma-separated; '#' starts a comment line in both, blank lines are
/// skipped. ply-ascii: only the x/y/z vertex properties are kept.
/// Throws ParseError on malformed rows, non-numeric tokens, inconsistent
/// arity or empty input.
PointCloud load_cloud(std::istream& in, CloudFormat format);
PointCloud load_cloud_file(const std::string& path,
                           std::optional<CloudFormat> format = std::nullopt);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Writes one point per line, optionally followed by an integer label column.
void write_cloud(std::ostream& out, const PointCloud& cloud, CloudFormat format,
                 const std::vector<int>* labels = nullptr);

}  // namespace datacurv
