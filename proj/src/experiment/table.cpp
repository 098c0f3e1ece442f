#include "qpe/experiment/table.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpe/errors.hpp"

namespace qpe::experiment {

using nlohmann::json;

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    raise(ErrorKind::Structure, "table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& col) const {
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k].name == col) return k;
  raise(ErrorKind::Structure, "table " + name + " has no column " + col);
}

const Table& Result::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  raise(ErrorKind::Structure, "result has no table " + name);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return csv_escape(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

json cell_json(const Cell& c) {
  struct Visitor {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(long long v) const { return v; }
    json operator()(double v) const { return std::isfinite(v) ? json(v) : json(nullptr); }
    json operator()(const std::string& v) const { return v; }
    json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

// Column type as declared in the schema; taken from the first non-empty cell.
std::string column_type(const Table& t, std::size_t k) {
  for (const auto& row : t.rows) {
    const Cell& c = row[k];
    if (std::holds_alternative<long long>(c)) return "integer";
    if (std::holds_alternative<double>(c)) return "number";
    if (std::holds_alternative<std::string>(c)) return "string";
    if (std::holds_alternative<bool>(c)) return "boolean";
  }
  return "number";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) raise(ErrorKind::Io, "cannot open " + path + " for writing");
  os << text;
  if (!os) raise(ErrorKind::Io, "failed writing " + path);
}

}  // namespace

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << csv_escape(t.columns[k].name);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << cell_text(row[k]);
    os << "\n";
  }
}

json table_json(const Table& t) {
  json cols = json::array();
  for (const auto& c : t.columns) cols.push_back(c.name);
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  return json{{"name", t.name}, {"columns", cols}, {"rows", rows}};
}

json schema_json(const Table& t, const std::string& subcommand) {
  json cols = json::array();
  for (std::size_t k = 0; k < t.columns.size(); ++k) {
    const Column& c = t.columns[k];
    cols.push_back(json{{"name", c.name},
                        {"unit", c.unit},
                        {"symbol", c.symbol},
                        {"description", c.description},
                        {"type", column_type(t, k)}});
  }
  return json{{"subcommand", subcommand}, {"table", t.name}, {"rows", t.rows.size()}, {"columns", cols}};
}

json result_json(const Result& r) {
  json tables = json::array();
  for (const auto& t : r.tables) tables.push_back(table_json(t));
  return json{{"subcommand", r.subcommand}, {"warnings", r.warnings}, {"config", r.config}, {"tables", tables}};
}

std::vector<std::string> write_result(const Result& r, const std::string& path, Format format) {
  namespace fs = std::filesystem;
  const fs::path base(path);
  if (base.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(base.parent_path(), ec);
    if (ec) raise(ErrorKind::Io, "cannot create directory " + base.parent_path().string());
  }
  const std::string ext = format == Format::Csv ? ".csv" : ".json";
  std::vector<std::string> written;
  for (const auto& t : r.tables) {
    fs::path file = base;
    if (r.tables.size() > 1) {
      file = base.parent_path() / (base.stem().string() + "_" + t.name + (base.has_extension() ? base.extension().string() : ext));
    }
    std::string text;
    if (format == Format::Csv) {
      std::ostringstream os;
      write_csv(t, os);
      text = os.str();
    } else {
      json doc = table_json(t);
      doc["subcommand"] = r.subcommand;
      doc["warnings"] = r.warnings;
      text = doc.dump(1) + "\n";
    }
    write_file(file.string(), text);
    write_file(file.string() + ".schema.json", schema_json(t, r.subcommand).dump(2) + "\n");
    written.push_back(file.string());
  }
  return written;
}

std::string render(const Result& r, Format format) {
  if (format == Format::Json) return result_json(r).dump(1) + "\n";
  std::ostringstream os;
  for (std::size_t k = 0; k < r.tables.size(); ++k) {
    if (r.tables.size() > 1) os << (k ? "\n" : "") << "# table: " << r.tables[k].name << "\n";
    write_csv(r.tables[k], os);
  }
  return os.str();
}

}  // namespace qpe::experiment
