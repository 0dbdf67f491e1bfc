// SPDX-License-Identifier: Apache-2.0
// Typed field access for input documents; every failure is a ParseError
// naming the offending path.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "kdlca/error.hpp"

namespace kdlca::detail {

inline constexpr int kSchemaVersion = 1;

[[noreturn]] inline void parse_fail(std::string_view path, std::string_view what) {
  throw Error(ErrorCode::ParseError, fmt::format("{}: {}", path, what));
}

inline void require_schema_version(const nlohmann::json& doc, std::string_view what) {
  if (!doc.is_object()) parse_fail(what, "expected a JSON object");
  const auto it = doc.find("schema_version");
  if (it == doc.end() || !it->is_number_integer()) {
    throw Error(ErrorCode::SchemaVersionMismatch,
                fmt::format("{}: missing integer schema_version", what));
  }
  if (it->get<int>() != kSchemaVersion) {
    throw Error(ErrorCode::SchemaVersionMismatch,
                fmt::format("{}: schema_version {} is not supported (expected {})", what,
                            it->get<int>(), kSchemaVersion));
  }
}

template <typename T>
std::optional<T> optional_field(const nlohmann::json& obj, std::string_view key,
                                std::string_view path) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) parse_fail(fmt::format("{}.{}", path, key), "expected a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) {
        parse_fail(fmt::format("{}.{}", path, key), "expected an integer");
      }
      if constexpr (std::is_unsigned_v<T>) {
        if (it->get<long long>() < 0) {
          parse_fail(fmt::format("{}.{}", path, key), "expected a nonnegative integer");
        }
      }
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) parse_fail(fmt::format("{}.{}", path, key), "expected a string");
    }
    return it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_fail(fmt::format("{}.{}", path, key), e.what());
  }
}

template <typename T>
T required_field(const nlohmann::json& obj, std::string_view key, std::string_view path) {
  auto value = optional_field<T>(obj, key, path);
  if (!value) parse_fail(fmt::format("{}.{}", path, key), "required field is missing");
  return *value;
}

template <typename T>
T field_or(const nlohmann::json& obj, std::string_view key, std::string_view path, T fallback) {
  return optional_field<T>(obj, key, path).value_or(std::move(fallback));
}

}  // namespace kdlca::detail
