#include "cluerag/selection/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cluerag/error.hpp"

namespace cluerag {

namespace {

KnapsackResult finalize(const std::vector<KnapsackItem>& items, std::vector<std::size_t> chosen,
                        std::string mode) {
  KnapsackResult out;
  out.mode = std::move(mode);
  std::vector<std::string> ids;
  ids.reserve(chosen.size());
  for (const std::size_t i : chosen) {
    ids.push_back(items[i].id);
    out.total_weight += items[i].weight;
    out.total_value += items[i].value;
  }
  std::sort(ids.begin(), ids.end());
  out.selected = std::move(ids);
  return out;
}

KnapsackResult solve_exact(const std::vector<KnapsackItem>& items, std::size_t budget) {
  const std::size_t n = items.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return items[a].id < items[b].id; });

  std::vector<std::int64_t> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = scale_value(items[i].value);
  }

  // best[i][w]: optimum over items order[i..] with capacity w.
  const std::size_t width = budget + 1;
  std::vector<std::int64_t> best((n + 1) * width, 0);
  auto cell = [&](std::size_t i, std::size_t w) -> std::int64_t& {
    return best[i * width + w];
  };
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t w_i = items[order[i]].weight;
    const std::int64_t v_i = scaled[order[i]];
    for (std::size_t w = 0; w < width; ++w) {
      std::int64_t keep = cell(i + 1, w);
      if (w_i <= w) {
        keep = std::max(keep, v_i + cell(i + 1, w - w_i));
      }
      cell(i, w) = keep;
    }
  }

  // Walking in ascending id order and taking every item that still permits
  // the optimum yields the lexicographically smallest optimal id set.
  // Zero-value items are never taken; dropping one gives an equal-value set
  // that compares smaller.
  std::vector<std::size_t> chosen;
  std::size_t w = budget;
  for (std::size_t i = 0; i < n && cell(i, w) > 0; ++i) {
    const std::size_t w_i = items[order[i]].weight;
    const std::int64_t v_i = scaled[order[i]];
    if (v_i > 0 && w_i <= w && v_i + cell(i + 1, w - w_i) == cell(i, w)) {
      chosen.push_back(order[i]);
      w -= w_i;
    }
  }
  return finalize(items, std::move(chosen), "exact");
}

KnapsackResult solve_greedy(const std::vector<KnapsackItem>& items, std::size_t budget) {
  const std::size_t n = items.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = items[a].value * static_cast<double>(items[b].weight);
    const double db = items[b].value * static_cast<double>(items[a].weight);
    if (da != db) {
      return da > db;  // density descending, cross-multiplied to dodge w=0
    }
    return items[a].id < items[b].id;
  });

  std::vector<std::size_t> packed;
  std::size_t used = 0;
  double packed_value = 0.0;
  for (const std::size_t i : order) {
    if (used + items[i].weight <= budget) {
      packed.push_back(i);
      used += items[i].weight;
      packed_value += items[i].value;
    }
  }

  // The density packing alone can be arbitrarily bad; comparing against the
  // best single fitting item restores the 1/2 bound.
  std::size_t best_single = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (items[i].weight > budget) {
      continue;
    }
    if (best_single == n || items[i].value > items[best_single].value ||
        (items[i].value == items[best_single].value && items[i].id < items[best_single].id)) {
      best_single = i;
    }
  }
  if (best_single < n && items[best_single].value > packed_value) {
    return finalize(items, {best_single}, "greedy");
  }
  return finalize(items, std::move(packed), "greedy");
}

}  // namespace

std::int64_t scale_value(double value) {
  if (value <= 0.0) {
    return 0;
  }
  return std::max<std::int64_t>(1, std::llround(value * 1e4));
}

KnapsackResult knapsack_select(const std::vector<KnapsackItem>& items, std::size_t budget,
                               SolverMode mode) {
  for (const auto& item : items) {
    if (item.value < 0.0 || item.value > 1.0) {
      throw ParseError("knapsack item '" + item.id + "' has value outside [0, 1]");
    }
  }
  std::size_t total_weight = 0;
  for (const auto& item : items) {
    total_weight += item.weight;
  }
  if (total_weight <= budget) {
    std::vector<std::size_t> all(items.size());
    std::iota(all.begin(), all.end(), 0);
    return finalize(items, std::move(all),
                    mode == SolverMode::kGreedy ? "greedy" : "exact");
  }
  const std::size_t effective_budget = std::min(budget, total_weight);
  const bool exact_fits =
      items.size() * (effective_budget + 1) <= kExactCellLimit;
  const bool exact = mode == SolverMode::kExact || (mode == SolverMode::kAuto && exact_fits);
  return exact ? solve_exact(items, effective_budget) : solve_greedy(items, effective_budget);
}

}  // namespace cluerag
