#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "crested/errors.hpp"
#include "crested/types.hpp"

namespace crested {

struct AncestralPoset;

/// Finite partial order on {0..n-1}, stored as its reflexive-transitive
/// closure. Built from cover pairs; rejects cycles and out-of-range labels.
class Poset {
public:
    Poset() = default;  // empty poset; fill through from_covers

    /// covers: (lower, upper) pairs, 0-based, meaning lower < upper.
    static Poset from_covers(int n, const std::vector<std::pair<int, int>>& covers);

    static Poset chain(int n);      // 0 > 1 > ... > n-1
    static Poset antichain(int n);  // no relations

    int size() const { return n_; }
    bool leq(int i, int j) const;  // i <= j in the order
    bool comparable(int i, int j) const { return leq(i, j) || leq(j, i); }

    /// Canonical cover pairs (lower, upper), recomputed from the closure,
    /// sorted lexicographically.
    const std::vector<std::pair<int, int>>& covers() const { return covers_; }

    IndexSet ancestral(int i) const;         // A(i) = {j : j > i}
    IndexSet hereditary(int i) const;        // H(i) = {j : j < i}
    IndexSet ancestral_closed(int i) const;  // A[i]
    IndexSet hereditary_closed(int i) const; // H[i]

    // subset versions, extended by union; empty set maps to empty set
    IndexSet ancestral(IndexSet j) const;
    IndexSet hereditary(IndexSet j) const;
    IndexSet ancestral_closed(IndexSet j) const;
    IndexSet hereditary_closed(IndexSet j) const;

    bool is_antichain(IndexSet s) const;
    bool is_ancestral(IndexSet s) const;  // up-closed

    /// All antichains including the empty one, ordered by size then
    /// lexicographically on the sorted member lists.
    std::vector<IndexSet> antichains() const;

    IndexSet maximal_elements() const;  // S-bar = {j : A(j) empty}

    IndexSet ancestral_of_antichain(IndexSet s) const;   // A_S = I \ H[S]
    IndexSet antichain_of_ancestral(IndexSet a) const;   // inverse; throws NotAncestralError

    AncestralPoset ancestral_poset() const;

    /// All permutations of {0..n-1} preserving the order in both directions.
    /// Guarded by a factorial bound (n <= 10).
    std::vector<std::vector<int>> automorphisms() const;

private:
    int n_ = 0;
    std::vector<IndexSet> up_;    // up_[i] = {j : i <= j}, includes i
    std::vector<IndexSet> down_;  // down_[i] = {j : j <= i}, includes i
    std::vector<std::pair<int, int>> covers_;
};

/// Ancestral sets A_i of the singleton antichains plus the full set I,
/// ordered by reversed containment (A <= B iff A contains B). Node 0 is I,
/// node i+1 is A_i.
struct AncestralPoset {
    std::vector<IndexSet> nodes;
    std::vector<int> origin;                    // -1 for I, else the element index
    std::vector<std::pair<int, int>> covers;    // (below, above) node ids

    int size() const { return static_cast<int>(nodes.size()); }
    bool less(int a, int b) const;  // strict order: nodes[a] strictly contains nodes[b]

    std::vector<int> covers_above(int node) const;
    std::vector<int> covers_below(int node) const;

    /// Saturated chains from node 0 (the set I) to a maximal node, each
    /// listed bottom-up, in deterministic DFS order.
    std::vector<std::vector<int>> maximal_chains() const;
};

std::vector<int> sorted_members(IndexSet s);
std::string format_set(IndexSet s);  // "{1,3}" with 1-based labels, "{}" for empty

}  // namespace crested
