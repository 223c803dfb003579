#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fdhomog/curves.hpp"
#include "fdhomog/error.hpp"

namespace fdhomog {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

std::optional<double> to_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
  return v;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

}  // namespace

FunctionalSample read_sample_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw Error(ErrorCode::Parse, "empty CSV input (no header row)");

  // Strip a UTF-8 byte order mark.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  auto header = split(line, schema.delimiter);
  bool labelled = false;
  switch (schema.label_column) {
    case CsvSchema::LabelColumn::Present: labelled = true; break;
    case CsvSchema::LabelColumn::Absent: labelled = false; break;
    case CsvSchema::LabelColumn::Auto: labelled = !header.empty() && !to_number(header.front()).has_value(); break;
  }

  std::vector<double> points;
  for (std::size_t c = labelled ? 1 : 0; c < header.size(); ++c) {
    auto v = to_number(header[c]);
    if (!v) throw Error(ErrorCode::Parse, "line 1: malformed grid value '" + std::string(header[c]) + "'");
    points.push_back(*v);
  }
  if (points.size() < 2) throw Error(ErrorCode::Grid, "header must contain at least 2 grid values");
  for (std::size_t j = 1; j < points.size(); ++j) {
    if (!(points[j - 1] < points[j]))
      throw Error(ErrorCode::Grid, "header grid is not strictly increasing at column " + std::to_string(j + 1));
  }
  Grid grid(points);

  const std::size_t expected = points.size() + (labelled ? 1 : 0);
  std::vector<double> values;
  std::vector<std::string> labels;
  while (next_line()) {
    auto cells = split(line, schema.delimiter);
    if (cells.size() != expected)
      throw Error(ErrorCode::Shape, "line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                                        " fields, found " + std::to_string(cells.size()));
    std::size_t c = 0;
    if (labelled) labels.emplace_back(cells[c++]);
    for (; c < cells.size(); ++c) {
      auto v = to_number(cells[c]);
      if (!v)
        throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": malformed number '" +
                                          std::string(cells[c]) + "'");
      values.push_back(*v);
    }
  }
  if (values.empty()) throw Error(ErrorCode::Shape, "CSV contains a header but no curves");
  return FunctionalSample(std::move(grid), std::move(values), std::move(labels));
}

FunctionalSample load_sample_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return read_sample_csv(in, schema);
}

void write_sample_csv(std::ostream& out, const FunctionalSample& sample) {
  const bool labelled = sample.has_labels();
  if (labelled) out << "label";
  for (std::size_t j = 0; j < sample.grid_size(); ++j) {
    if (labelled || j > 0) out << ',';
    out << format_number(sample.grid()[j]);
  }
  out << '\n';
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (labelled) out << sample.labels()[i];
    auto c = sample.curve(i);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (labelled || j > 0) out << ',';
      out << format_number(c[j]);
    }
    out << '\n';
  }
}

void write_sample_csv(const std::filesystem::path& path, const FunctionalSample& sample) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  write_sample_csv(out, sample);
  if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

std::pair<FunctionalSample, FunctionalSample> split_by_label(const FunctionalSample& sample, std::string_view label) {
  if (!sample.has_labels()) throw Error(ErrorCode::InvalidArgument, "sample carries no labels");
  std::vector<std::size_t> in_group, rest;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    (sample.labels()[i] == label ? in_group : rest).push_back(i);
  }
  if (in_group.empty()) throw Error(ErrorCode::EmptyGroup, "no curve is labelled '" + std::string(label) + "'");
  if (rest.empty()) throw Error(ErrorCode::EmptyGroup, "every curve is labelled '" + std::string(label) + "'");
  return {sample.subset(in_group), sample.subset(rest)};
}

}  // namespace fdhomog
