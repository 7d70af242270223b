#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cvx {

// Thrown when an exhaustive search would exceed its configured node budget.
// Callers that can degrade gracefully (sampling, closed-form fallbacks)
// catch it; the CLI maps it to its own exit code.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint64_t kDefaultBudget = 1'000'000'000;

// Shared between worker threads; callers tick in batches so the atomic
// traffic stays negligible.
struct BudgetCounter {
  std::uint64_t limit = kDefaultBudget;
  std::atomic<std::uint64_t> used{0};

  BudgetCounter() = default;
  explicit BudgetCounter(std::uint64_t lim) : limit(lim) {}
  BudgetCounter(const BudgetCounter&) = delete;

  void tick(std::uint64_t n, const char* what) {
    std::uint64_t total = used.fetch_add(n, std::memory_order_relaxed) + n;
    if (total > limit)
      throw budget_error(std::string(what) + ": search budget of " + std::to_string(limit) +
                         " nodes exceeded");
  }
};

}  // namespace cvx
