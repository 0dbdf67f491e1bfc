// SPDX-License-Identifier: Apache-2.0
#include "kdlca/report/format.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kdlca/error.hpp"

namespace kdlca::report {

std::string format_tokens(std::optional<double> tokens) {
  if (!tokens) return std::string(kNoCrossing);
  const double x = *tokens;
  const double mag = std::fabs(x);
  if (mag >= 1e9) return fmt::format("{:.2f}B", x / 1e9);
  if (mag >= 1e6) return fmt::format("{:.2f}M", x / 1e6);
  if (mag >= 1e3) return fmt::format("{:.2f}K", x / 1e3);
  return fmt::format("{:.2f}", x);
}

std::string format_kg(double kgco2e) { return fmt::format("{:.6g}", kgco2e); }

std::size_t display_width(std::string_view text) noexcept {
  return static_cast<std::size_t>(std::count_if(
      text.begin(), text.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

TextTable::TextTable(std::vector<std::string> headers, std::vector<Align> aligns)
    : headers_(std::move(headers)), aligns_(std::move(aligns)) {
  aligns_.resize(headers_.size(), Align::Left);
}

void TextTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != headers_.size()) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("table row has {} cells, expected {}", cells.size(), headers_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string TextTable::render() const {
  std::vector<std::size_t> widths(headers_.size());
  for (std::size_t c = 0; c < headers_.size(); ++c) {
    widths[c] = display_width(headers_[c]);
    for (const auto& row : rows_) widths[c] = std::max(widths[c], display_width(row[c]));
  }
  std::string out;
  const auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) line += "  ";
      const std::string pad(widths[c] - display_width(cells[c]), ' ');
      line += aligns_[c] == Align::Right ? pad + cells[c] : cells[c] + pad;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  };
  emit(headers_);
  std::string rule;
  for (std::size_t c = 0; c < widths.size(); ++c) {
    if (c > 0) rule += "  ";
    rule += std::string(widths[c], '-');
  }
  out += rule + '\n';
  for (const auto& row : rows_) emit(row);
  return out;
}

}  // namespace kdlca::report
