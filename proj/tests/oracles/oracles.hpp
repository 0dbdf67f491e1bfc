// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used as test oracles. They share no
// code with the library: long double arithmetic, brute force enumeration and
// uncentered normal equations.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using real = long double;

// MLCA per-record footprint: PUE * E * EGM + F * t / (L * AUR).
struct MlcaInput {
  real pue, egm, aur, lifetime_hours, manufacturing_kg;
  std::optional<real> energy_kwh, power_kw;
  real runtime_hours;
};

inline std::pair<real, real> mlca(const MlcaInput& in) {
  const real energy = in.energy_kwh ? *in.energy_kwh : *in.power_kw * in.runtime_hours;
  return {in.pue * energy * in.egm,
          in.manufacturing_kg * in.runtime_hours / (in.lifetime_hours * in.aur)};
}

// Break-even between totals Ia + X ca and Ib + X cb.
inline std::optional<real> crossing(real ia, real ca, real ib, real cb) {
  if (ca == cb) return std::nullopt;
  const real x = (ia - ib) / (cb - ca);
  if (x < 0) return std::nullopt;
  return x;
}

enum class Relation { Crosses, ADominates, BDominates, Identical };

// Classifies by the sign pattern of (A - B) on `n` grid points over [0, x_max].
inline Relation grid_relation(real ia, real ca, real ib, real cb, real x_max, int n = 1000) {
  bool a_below = false, b_below = false, all_equal = true;
  for (int i = 0; i < n; ++i) {
    const real x = x_max * static_cast<real>(i) / static_cast<real>(n - 1);
    const real d = (ia + x * ca) - (ib + x * cb);
    if (d < 0) a_below = true;
    if (d > 0) b_below = true;
    if (d != 0) all_equal = false;
  }
  if (all_equal) return Relation::Identical;
  if (a_below && b_below) return Relation::Crosses;
  return a_below ? Relation::ADominates : Relation::BDominates;
}

// O(n^2) dominance filter: i survives iff no j is at least as good in both
// coordinates and strictly better in one.
inline std::vector<bool> brute_force_frontier(const std::vector<std::pair<double, double>>& pts) {
  std::vector<bool> keep(pts.size(), true);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const auto [fi, qi] = pts[i];
      const auto [fj, qj] = pts[j];
      if (fj <= fi && qj >= qi && (fj < fi || qj > qi)) {
        keep[i] = false;
        break;
      }
    }
  }
  return keep;
}

// OLS through the normal equations in long double.
inline std::pair<real, real> ols(const std::vector<std::pair<real, real>>& pts) {
  real n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const real slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - slope * sx) / n, slope};
}

// Exhaustive decoder search over every token sequence up to max_len.
// next(prefix) returns the next-token distribution. Sequences end at `eos`;
// when none finishes, the best length-max_len sequence is returned.
struct Decoded {
  std::vector<std::uint32_t> tokens;
  double log_prob = -std::numeric_limits<double>::infinity();
  bool finished = false;
};

inline Decoded exhaustive_decode(
    const std::function<std::vector<double>(const std::vector<std::uint32_t>&)>& next,
    std::size_t vocab, std::uint32_t eos, std::size_t max_len, double length_penalty) {
  Decoded best_finished, best_open;
  bool have_finished = false, have_open = false;
  const auto score = [&](const Decoded& d) {
    if (length_penalty == 0.0) return d.log_prob;
    return d.log_prob / std::pow(static_cast<double>(d.tokens.size()), length_penalty);
  };
  const auto better = [&](const Decoded& a, const Decoded& b) {
    const double sa = score(a), sb = score(b);
    if (sa != sb) return sa > sb;
    return a.tokens < b.tokens;
  };
  std::function<void(Decoded&)> walk = [&](Decoded& cur) {
    if (cur.tokens.size() == max_len) {
      if (!have_open || better(cur, best_open)) best_open = cur, have_open = true;
      return;
    }
    const auto probs = next(cur.tokens);
    for (std::uint32_t v = 0; v < vocab; ++v) {
      if (probs[v] <= 0.0) continue;
      Decoded child = cur;
      child.tokens.push_back(v);
      child.log_prob = cur.log_prob + std::log(probs[v]);
      if (v == eos) {
        child.finished = true;
        if (!have_finished || better(child, best_finished)) best_finished = child, have_finished = true;
      } else {
        walk(child);
      }
    }
  };
  Decoded root;
  root.log_prob = 0.0;
  walk(root);
  return have_finished ? best_finished : best_open;
}

}  // namespace oracle
