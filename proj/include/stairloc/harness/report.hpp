#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stairloc/harness/config.hpp"

namespace stairloc::harness {

using Json = nlohmann::ordered_json;

// %.17g, with "nan", "inf", "-inf" spelled out.
std::string format_double(double v);

using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string, bool>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  // Throws kDomain when the row width does not match the header.
  void add(const std::vector<Cell>& row);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

// Writes to path.tmp then renames over path.
void write_atomic(const std::string& path, const std::string& content);

Json to_json(const ExperimentSpec& spec);
Json to_json(const BinomialEstimate& e);
Json to_json(const std::vector<ValidationItem>& items);

struct RunReport {
  std::string kind;
  CsvTable table{{}};
  Json aggregates = Json::object();
  std::vector<ValidationItem> validation;
  // Extra plot-ready tables, written as <kind>_<name>.csv.
  std::vector<std::pair<std::string, CsvTable>> extra;
  double wall_seconds = 0.0;
};

// Everything except wall-clock time: spec echo, version, hash id, validation, aggregates.
Json summary_json(const ExperimentSpec& spec, const RunReport& report);

// <out>/<kind>.csv, <out>/<kind>_summary.json, extras, and <out>/<kind>_timing.json.
void write_report(const ExperimentSpec& spec, const RunReport& report);

}  // namespace stairloc::harness
