#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace crested {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Elements of a poset are 0-based indices into {0..n-1}; subsets are bitmasks.
using IndexSet = std::uint32_t;

inline bool set_contains(IndexSet s, int i) { return (s >> i) & 1u; }
inline IndexSet set_with(IndexSet s, int i) { return s | (IndexSet{1} << i); }
inline int set_size(IndexSet s) { return __builtin_popcount(s); }
inline IndexSet full_set(int n) { return n == 32 ? ~IndexSet{0} : (IndexSet{1} << n) - 1u; }

}  // namespace crested
