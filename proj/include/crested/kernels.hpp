#pragma once

#include <cstdint>
#include <vector>

#include "crested/types.hpp"

namespace crested::kernels {

/// Every kernel comes in two variants selected at the call site: a serial
/// reference and an OpenMP one. Results are bitwise identical: parallel
/// variants never reassociate floating-point reductions per output entry.
enum class ExecPolicy { Serial, Parallel };

ExecPolicy default_policy();
int max_threads();

Matrix kron(const Matrix& a, const Matrix& b, ExecPolicy policy = default_policy());

Matrix matmul(const Matrix& a, const Matrix& b, ExecPolicy policy = default_policy());

Matrix matrix_power(const Matrix& a, long k, ExecPolicy policy = default_policy());

double max_detailed_balance_violation(const Matrix& p, const Vector& pi,
                                      ExecPolicy policy = default_policy());

/// Batch of independent stopped walks on a graph whose first `leaf_count`
/// vertices are absorbing after step 0. Returns per-leaf hit counts.
/// Trajectory t draws from stream (seed, t), so the histogram does not
/// depend on the thread count.
std::vector<long long> walk_histogram(const std::vector<std::vector<int>>& adjacency,
                                      long leaf_count, long start_leaf, long trials,
                                      std::uint64_t seed,
                                      ExecPolicy policy = default_policy());

}  // namespace crested::kernels
