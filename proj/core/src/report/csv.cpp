// SPDX-License-Identifier: Apache-2.0
#include "kdlca/report/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "kdlca/error.hpp"

namespace kdlca::report {

namespace {

[[noreturn]] void fail_at(std::string_view source, std::size_t line, std::size_t column,
                          std::string_view what) {
  throw Error(ErrorCode::ParseError,
              fmt::format("{}: line {}, column {}: {}", source, line, column, what));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

CsvTable parse_csv(std::string_view text, std::string_view source_name) {
  CsvTable table;
  std::vector<std::string> fields;
  std::string field;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool in_quotes = false;
  std::size_t quote_line = 1;
  std::size_t quote_column = 1;
  bool field_quoted = false;
  bool any_content = false;

  const auto end_field = [&] {
    fields.push_back(field_quoted ? field : std::string(trim(field)));
    field.clear();
    field_quoted = false;
  };
  const auto end_record = [&] {
    end_field();
    const bool blank = fields.size() == 1 && fields[0].empty() && !any_content;
    if (!blank) {
      if (table.header.empty()) {
        table.header = std::move(fields);
      } else {
        if (fields.size() != table.header.size()) {
          fail_at(source_name, record_line, std::min(fields.size(), table.header.size()) + 1,
                  fmt::format("expected {} fields, found {}", table.header.size(), fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(record_line);
      }
    }
    fields.clear();
    any_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!trim(field).empty()) {
          fail_at(source_name, line, fields.size() + 1, "quote inside an unquoted field");
        }
        field.clear();
        in_quotes = true;
        quote_line = line;
        quote_column = fields.size() + 1;
        field_quoted = true;
        any_content = true;
        break;
      case ',':
        end_field();
        any_content = true;
        break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        if (field_quoted && c != ' ' && c != '\r') {
          fail_at(source_name, line, fields.size() + 1, "text after a closing quote");
        }
        if (c != '\r') any_content = true;
        field += c;
    }
  }
  if (in_quotes) fail_at(source_name, quote_line, quote_column, "unterminated quoted field");
  if (!field.empty() || !fields.empty() || any_content) end_record();
  if (table.header.empty()) fail_at(source_name, 1, 1, "missing header row");
  return table;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace {

class Columns {
 public:
  Columns(const CsvTable& table, std::string_view source) : table_(table), source_(source) {}

  std::size_t require(std::string_view name) const {
    const auto it = std::find(table_.header.begin(), table_.header.end(), name);
    if (it == table_.header.end()) {
      fail_at(source_, 1, table_.header.size() + 1, fmt::format("missing column '{}'", name));
    }
    return static_cast<std::size_t>(it - table_.header.begin());
  }

  [[noreturn]] void fail(std::size_t row, std::size_t col, std::string_view what) const {
    fail_at(source_, table_.line_numbers[row], col + 1, what);
  }

  const std::string& cell(std::size_t row, std::size_t col) const { return table_.rows[row][col]; }

  std::optional<double> real(std::size_t row, std::size_t col) const {
    const std::string& s = cell(row, col);
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
      fail(row, col, fmt::format("'{}' is not a finite number", s));
    }
    if (value < 0.0) {
      throw Error(ErrorCode::NegativeValue,
                  fmt::format("{}: line {}, column {}: negative value {} in '{}'", source_,
                              table_.line_numbers[row], col + 1, s, table_.header[col]));
    }
    return value;
  }

  std::optional<std::uint64_t> integer(std::size_t row, std::size_t col) const {
    const std::string& s = cell(row, col);
    if (s.empty()) return std::nullopt;
    if (s.front() == '-') {
      throw Error(ErrorCode::NegativeValue,
                  fmt::format("{}: line {}, column {}: negative value {} in '{}'", source_,
                              table_.line_numbers[row], col + 1, s, table_.header[col]));
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      fail(row, col, fmt::format("'{}' is not a nonnegative integer", s));
    }
    return value;
  }

 private:
  const CsvTable& table_;
  std::string_view source_;
};

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<MeasurementRecord> parse_records_csv(std::string_view text,
                                                 std::string_view source_name) {
  const CsvTable table = parse_csv(text, source_name);
  const Columns cols(table, source_name);
  const std::size_t c_system = cols.require("system");
  const std::size_t c_phase = cols.require("phase");
  const std::size_t c_device = cols.require("device_id");
  const std::size_t c_energy = cols.require("energy_kwh");
  const std::size_t c_power = cols.require("avg_power_kw");
  const std::size_t c_runtime = cols.require("runtime_hours");
  const std::size_t c_tokens = cols.require("tokens");
  const std::size_t c_batch = cols.require("batch_size");
  const std::size_t c_repeat = cols.require("repeat");

  std::vector<MeasurementRecord> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    MeasurementRecord rec;
    rec.system = cols.cell(r, c_system);
    if (rec.system.empty()) cols.fail(r, c_system, "empty system name");
    try {
      rec.phase = parse_phase(cols.cell(r, c_phase));
    } catch (const Error& e) {
      cols.fail(r, c_phase, e.what());
    }
    rec.device_id = cols.cell(r, c_device);
    if (rec.device_id.empty()) cols.fail(r, c_device, "empty device_id");
    rec.energy_kwh = cols.real(r, c_energy);
    rec.avg_power_kw = cols.real(r, c_power);
    const auto runtime = cols.real(r, c_runtime);
    if (!runtime) cols.fail(r, c_runtime, "runtime_hours is required");
    rec.runtime_hours = *runtime;
    rec.tokens_processed = cols.integer(r, c_tokens);
    if (const auto batch = cols.integer(r, c_batch)) {
      if (*batch == 0 || *batch > std::numeric_limits<std::uint32_t>::max()) {
        cols.fail(r, c_batch, "batch_size must be a positive 32-bit integer");
      }
      rec.batch_size = static_cast<std::uint32_t>(*batch);
    }
    const auto repeat = cols.integer(r, c_repeat);
    if (repeat && *repeat > std::numeric_limits<std::uint32_t>::max()) {
      cols.fail(r, c_repeat, "repeat index out of range");
    }
    rec.repeat_index = static_cast<std::uint32_t>(repeat.value_or(0));
    try {
      validate_record(rec);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("{}: line {}: {}", source_name, table.line_numbers[r],
                                        e.what()));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<MeasurementRecord> read_records_csv(const std::filesystem::path& path) {
  return parse_records_csv(read_text_file(path), path.filename().string());
}

std::string write_records_csv(std::span<const MeasurementRecord> records) {
  std::string out = "system,phase,device_id,energy_kwh,avg_power_kw,runtime_hours,tokens,batch_size,repeat\n";
  const auto opt = [](const auto& v) { return v ? fmt::format("{}", *v) : std::string(); };
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", csv_escape(r.system), to_string(r.phase),
                       csv_escape(r.device_id), opt(r.energy_kwh), opt(r.avg_power_kw),
                       r.runtime_hours, opt(r.tokens_processed), opt(r.batch_size),
                       r.repeat_index);
  }
  return out;
}

bool ScoreTable::has(std::string_view system) const {
  return scores.find(std::string(system)) != scores.end();
}

const std::vector<double>& ScoreTable::of(std::string_view system) const {
  const auto it = scores.find(std::string(system));
  if (it == scores.end()) {
    throw Error(ErrorCode::MissingScores, fmt::format("no scores for system '{}'", system));
  }
  return it->second;
}

ScoreTable parse_scores_csv(std::string_view text, std::string_view source_name) {
  const CsvTable table = parse_csv(text, source_name);
  const Columns cols(table, source_name);
  const std::size_t c_system = cols.require("system");
  const std::size_t c_doc = cols.require("doc_id");
  const std::size_t c_score = cols.require("score");

  std::vector<std::string> doc_order;
  std::map<std::string, std::size_t> doc_index;
  std::map<std::string, std::map<std::size_t, double>> by_system;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& system = cols.cell(r, c_system);
    const std::string& doc = cols.cell(r, c_doc);
    if (system.empty()) cols.fail(r, c_system, "empty system name");
    if (doc.empty()) cols.fail(r, c_doc, "empty doc_id");
    const std::string& raw = cols.cell(r, c_score);
    double score = 0.0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), score);
    if (raw.empty() || ec != std::errc{} || ptr != raw.data() + raw.size() ||
        !std::isfinite(score)) {
      cols.fail(r, c_score, fmt::format("'{}' is not a finite number", raw));
    }
    const auto [it, fresh] = doc_index.try_emplace(doc, doc_order.size());
    if (fresh) doc_order.push_back(doc);
    if (!by_system[system].emplace(it->second, score).second) {
      cols.fail(r, c_doc, fmt::format("duplicate score for system '{}' document '{}'", system, doc));
    }
  }

  ScoreTable out;
  out.documents = doc_order;
  for (auto& [system, docs] : by_system) {
    if (docs.size() != doc_order.size()) {
      throw Error(ErrorCode::RaggedMatrix,
                  fmt::format("{}: system '{}' scores {} of {} documents", source_name, system,
                              docs.size(), doc_order.size()));
    }
    std::vector<double> row;
    row.reserve(docs.size());
    for (const auto& [index, score] : docs) row.push_back(score);
    out.scores.emplace(system, std::move(row));
  }
  return out;
}

ScoreTable read_scores_csv(const std::filesystem::path& path) {
  return parse_scores_csv(read_text_file(path), path.filename().string());
}

}  // namespace kdlca::report
