#pragma once

#include <cstdint>
#include <vector>

#include "crested/crested.hpp"

namespace crested {

/// The glued level graph T. Vertices are (ancestral node, class) pairs;
/// the leaf level is X itself, identified with the equality relation, and
/// leaf v < leaf_count() has linear index v.
struct TreeGraph {
    struct Vertex {
        int level = 0;       // ancestral-poset node id
        long class_key = 0;  // mixed-radix key over the node's coordinates
    };

    AncestralPoset levels;
    ProductShape shape;
    std::vector<Vertex> vertices;
    std::vector<std::vector<int>> adjacency;  // sorted neighbor lists

    long leaf_count() const { return shape.total(); }
    bool is_leaf(int v) const { return v < leaf_count(); }
    int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
    long level_vertex_count(int node) const;
};

/// Partition of X into classes of the relation x ~_A y (equality on the
/// coordinates in A), classes ordered by their smallest member.
std::vector<std::vector<long>> ancestral_classes(IndexSet a, const Poset& poset,
                                                 const ProductShape& shape);

TreeGraph build_tree(const Poset& poset, const std::vector<int>& sizes);

/// Ascent coefficients alpha, one per ancestral node with an upper cover
/// (identical toward every upper cover). Bottom-up closed form: the leaf
/// level contributes no return term, so alpha_I = 1/#covers(I) enters only
/// the chain products, never the fixed-point correction.
std::vector<double> solve_alphas(const TreeGraph& tree);

/// Level weights p: per ancestral node, the probability of topping out
/// there; saturated-chain products of alphas with the stay factor
/// (1 - sum of outgoing alphas), dropped at maximal nodes. Node 0 (the set
/// I) always gets weight 0.
std::vector<double> level_weights(const TreeGraph& tree, const std::vector<double>& alpha);

struct InsectCoefficients {
    std::vector<double> alpha;
    std::vector<double> p;
};

InsectCoefficients insect_coefficients(const TreeGraph& tree);

/// The insect chain as a crested product: p_i^0 = p_i and P_i = J_i.
CrestedSpec to_crested(const Poset& poset, const std::vector<int>& sizes);

/// Direct transition formula: p(x,y) = sum over ancestral nodes A_i with
/// x ~_{A_i} y of p_i / prod_{h not in A_i} m_h.
Matrix insect_direct_matrix(const Poset& poset, const std::vector<int>& sizes);

struct InsectEigenspace {
    IndexSet antichain = 0;
    double eigenvalue = 0.0;  // sum of p_i over I \ A[S]
    long dimension = 0;
};

std::vector<InsectEigenspace> insect_eigenstructure(const Poset& poset,
                                                    const std::vector<int>& sizes);

/// One stopped walk: uniform steps over neighbors from a leaf, stopping at
/// the first time >= 1 the walk occupies any leaf. Deterministic given
/// (seed, stream).
long walk(const TreeGraph& tree, long start_leaf, std::uint64_t seed,
          std::uint64_t stream = 0);

std::vector<long long> walk_histogram(const TreeGraph& tree, long start_leaf, long trials,
                                      std::uint64_t seed,
                                      kernels::ExecPolicy policy = kernels::default_policy());

struct EigenvalueSymmetryReport {
    long automorphism_count = 0;
    long forced_pairs = 0;  // (S, phi(S)) index-sum identities verified
    std::vector<std::pair<IndexSet, IndexSet>> equal_without_automorphism;
};

/// Checks lambda_S = lambda_{phi(S)} for every automorphism phi as an exact
/// index-set identity, and reports antichain pairs with equal eigenvalues
/// that no automorphism connects.
EigenvalueSymmetryReport eigenvalue_symmetry_check(const Poset& poset,
                                                   const std::vector<int>& sizes);

}  // namespace crested
