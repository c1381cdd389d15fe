#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cluerag {

struct KnapsackItem {
  std::string id;
  std::size_t weight = 0;   // tokens
  double value = 0.0;       // relevance in [0, 1]
};

enum class SolverMode {
  kAuto,    // exact when the DP table fits in 1e7 cells, greedy otherwise
  kExact,
  kGreedy,
};

struct KnapsackResult {
  std::vector<std::string> selected;  // sorted by id
  std::size_t total_weight = 0;
  double total_value = 0.0;           // sum of the input (unscaled) values
  std::string mode;                   // "exact" or "greedy"
};

// 0-1 knapsack under Σ weight ≤ budget. Exact mode scales values to
// integers (×1e4, rounded; positive values never round to zero) and runs a
// suffix DP, returning the lexicographically smallest id set among optima.
// Greedy mode packs by value density and falls back to the single best
// fitting item when that beats the packing, the classical 1/2-approximation.
// A budget covering every item short-circuits to all items in either mode.
KnapsackResult knapsack_select(const std::vector<KnapsackItem>& items, std::size_t budget,
                               SolverMode mode = SolverMode::kAuto);

// Integer value scaling used by exact mode; exposed for tests.
std::int64_t scale_value(double value);

inline constexpr std::size_t kExactCellLimit = 10'000'000;

}  // namespace cluerag
