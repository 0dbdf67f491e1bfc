// SPDX-License-Identifier: Apache-2.0
//
// records.csv: system,phase,device_id,energy_kwh,avg_power_kw,runtime_hours,tokens,batch_size,repeat
// scores.csv:  system,doc_id,score
//
// Columns may appear in any order; empty cells mean absent optionals.
// Fields may be double-quoted with "" escaping a quote.
#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kdlca/bootstrap.hpp"
#include "kdlca/units.hpp"

namespace kdlca::report {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  ///< 1-based source line of each row
};

/// Throws ParseError with line and column on malformed quoting or ragged rows.
CsvTable parse_csv(std::string_view text, std::string_view source_name);

std::string read_text_file(const std::filesystem::path& path);

std::vector<MeasurementRecord> parse_records_csv(std::string_view text,
                                                 std::string_view source_name = "records.csv");
std::vector<MeasurementRecord> read_records_csv(const std::filesystem::path& path);
/// Doubles use the shortest representation that parses back to the same value.
std::string write_records_csv(std::span<const MeasurementRecord> records);

/// Per-document scores aligned across systems on one shared document order.
struct ScoreTable {
  std::vector<std::string> documents;  ///< first-appearance order
  std::map<std::string, std::vector<double>> scores;

  [[nodiscard]] bool has(std::string_view system) const;
  [[nodiscard]] const std::vector<double>& of(std::string_view system) const;
};

/// Throws RaggedMatrix when systems do not share one document set.
ScoreTable parse_scores_csv(std::string_view text, std::string_view source_name = "scores.csv");
ScoreTable read_scores_csv(const std::filesystem::path& path);

}  // namespace kdlca::report
