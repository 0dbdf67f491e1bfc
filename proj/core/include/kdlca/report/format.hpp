// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kdlca::report {

inline constexpr std::string_view kNoCrossing = "—";

/// Two decimals with a K/M/B suffix: 285070000 -> "285.07M". Absent -> "—".
std::string format_tokens(std::optional<double> tokens);

/// Six significant digits, no exponent for ordinary magnitudes.
std::string format_kg(double kgco2e);

class TextTable {
 public:
  enum class Align { Left, Right };

  explicit TextTable(std::vector<std::string> headers, std::vector<Align> aligns = {});

  void add_row(std::vector<std::string> cells);
  [[nodiscard]] std::string render() const;

 private:
  std::vector<std::string> headers_;
  std::vector<Align> aligns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Display width in code points, so "—" counts as one column.
std::size_t display_width(std::string_view text) noexcept;

}  // namespace kdlca::report
