#pragma once

// Column-typed result tables and their CSV / JSON / schema writers.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qpe/experiment/config.hpp"

namespace qpe::experiment {

struct Column {
  std::string name;
  std::string unit;         // "1" for dimensionless, "photon" for energies in units of hbar omega
  std::string symbol;       // plotting label
  std::string description;
};

// Empty cells (monostate) mark quantities that do not apply to a row.
using Cell = std::variant<std::monostate, long long, double, std::string, bool>;

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;  // throws if absent
};

struct Result {
  std::string subcommand;
  std::vector<Table> tables;
  std::vector<std::string> warnings;
  nlohmann::json config;

  const Table& table(const std::string& name) const;
};

// Shortest round-trip representation.
std::string format_double(double v);

void write_csv(const Table& t, std::ostream& os);
nlohmann::json table_json(const Table& t);
nlohmann::json schema_json(const Table& t, const std::string& subcommand);
nlohmann::json result_json(const Result& r);

// Writes one data file plus a "<file>.schema.json" sidecar per table. A result
// with several tables goes to "<stem>_<table>.<ext>". Returns the data files.
std::vector<std::string> write_result(const Result& r, const std::string& path, Format format);

// Whole result as text, for standard output. CSV tables are separated by
// "# table: <name>" lines.
std::string render(const Result& r, Format format);

}  // namespace qpe::experiment
