#pragma once

// Tverberg partitions and Radon-type numbers of a finite convexity space.
// All searches are exhaustive: a negative answer is a certificate, not a
// heuristic failure.

#include <optional>
#include <vector>

#include "cvx/budget.hpp"
#include "cvx/space.hpp"

namespace cvx {

struct TverbergPartition {
  std::vector<SubsetMask> parts;  // pairwise disjoint, union = input set
  int witness = -1;               // a point in the hull of every part
};

struct RadonNumberResult {
  int k = 0;
  // 1 + the maximum size of a non-partitionable point set. When the full
  // ground set itself has no k-partition this is n + 1 (the bound holds
  // vacuously on the finite ground) and `attained` is false.
  int value = 0;
  bool attained = false;
  SubsetMask certificate = 0;  // largest point set with no k-partition (0 if none)
};

// Exhaustive search over unordered partitions of `points` into exactly k
// non-empty parts; returns the first partition (in canonical enumeration
// order) whose part hulls share a point. `hulls` may supply a precomputed
// table from all_hulls to speed up repeated queries.
std::optional<TverbergPartition> tverberg_partition(const ConvexitySpace& space, SubsetMask points,
                                                    int k, BudgetCounter* budget = nullptr,
                                                    const std::vector<SubsetMask>* hulls = nullptr);

// Scans subset sizes downward from n; sound because partitionability is
// preserved under adding points.
RadonNumberResult radon_number(const ConvexitySpace& space, int k, BudgetCounter* budget = nullptr);

struct RecurrenceCheck {
  std::string name;
  int lhs_k = 0;
  int lhs = 0;
  int rhs = 0;
  bool holds = false;
};

struct RecurrenceReport {
  std::vector<RadonNumberResult> numbers;  // k = 2 .. k_max
  std::vector<RecurrenceCheck> checks;     // only combinations where all inputs are attained
  bool all_hold = true;
};

// Computes r_k for k = 2..k_max and evaluates, on the attained values:
// submultiplicativity r_{ab} <= r_a * r_b, the odd-step bound
// r_{2k+1} <= (r_2 - 1)(r_{k+1} - 1) + r_k + 1, and the power bound
// r_k <= k^ceil(log2 r_2).
RecurrenceReport check_recurrences(const ConvexitySpace& space, int k_max,
                                   BudgetCounter* budget = nullptr);

struct CentrepointResult {
  int r2 = 0;
  std::optional<int> point;  // first ground point lying in every heavy convex set
  // threshold: a convex set is heavy when |C ∩ P| > (1 - 1/(r2-1)) |P|
};

// Requires r_2 of the space to be attained (throws std::invalid_argument
// otherwise). A point must lie in every convex set containing strictly more
// than (1 - 1/(r2-1))|P| points of P.
CentrepointResult centrepoint(const ConvexitySpace& space, SubsetMask pts,
                              BudgetCounter* budget = nullptr);

// Minimum-cardinality set of ground points hitting every convex set C with
// |C ∩ P| > eps * |P|, by exhaustive search (iterative deepening on the net
// size). eps >= 1 yields the empty net; eps <= 0 is rejected.
SubsetMask weak_epsilon_net(const ConvexitySpace& space, SubsetMask pts, double eps,
                            BudgetCounter* budget = nullptr);

}  // namespace cvx
