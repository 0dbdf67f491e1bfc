// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "kdlca/token_distribution.hpp"

namespace kdlca::kd {

/// Next-token model p(y_t | x, y_<t). Implementations must be safe to call
/// concurrently through a const reference.
class Scorer {
 public:
  virtual ~Scorer() = default;

  [[nodiscard]] virtual std::size_t vocab_size() const = 0;
  [[nodiscard]] virtual std::optional<TokenId> eos() const = 0;
  [[nodiscard]] virtual TokenDistribution next(std::span<const TokenId> source,
                                               std::span<const TokenId> prefix) const = 0;
  [[nodiscard]] virtual double per_token_cost_units() const { return 1.0; }
};

}  // namespace kdlca::kd
