#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crested/kron.hpp"
#include "crested/markov.hpp"
#include "crested/poset.hpp"

namespace crested {

/// One coordinate chain P_i with its detailed-balance measure sigma_i and
/// eigenstructure. Eigenvalue groups: group 0 is the simple eigenvalue 1
/// (constants); groups 1..r are the remaining distinct eigenvalues in
/// descending order, grouped within `group_tol`.
struct ComponentChain {
    int index = 0;
    Chain chain;
    Measure sigma;
    SpectralData spectral;
    std::vector<double> group_values;            // [0] == 1.0
    std::vector<std::vector<int>> group_columns; // columns of spectral.U per group

    int state_count() const { return chain.size(); }
    int nontrivial_groups() const { return static_cast<int>(group_values.size()) - 1; }

    static ComponentChain analyze(int index, Chain chain, Measure sigma,
                                  double group_tol = tol::pipeline);
    static ComponentChain uniform(int index, int m);  // P_i = J_i
};

struct CrestedSpec {
    Poset poset;
    std::vector<ComponentChain> components;
    Vector p0;

    CrestedSpec(Poset poset, std::vector<ComponentChain> components, Vector p0);

    int rank() const { return poset.size(); }
    ProductShape shape() const;
};

/// Eigenspace W_{S,j} of the assembled operator: antichain S, one component
/// eigenvalue group j_i per i in S.
struct EigenBlock {
    IndexSet antichain = 0;
    std::vector<int> multi_index;  // per member of S in ascending element order
    double eigenvalue = 0.0;
    long dimension = 0;
    Matrix basis;  // |X| x dimension, pi-orthonormal columns
};

/// P = sum_i p_i^0 (P_i at i) x (J on H(i)) x (identity elsewhere)
Chain assemble(const CrestedSpec& spec);

struct ReversibilityReport {
    bool reversible = false;
    std::optional<Measure> pi;
    std::vector<int> violating;  // indices k in I \ S-bar with nonsymmetric P_k
};

ReversibilityReport reversibility(const CrestedSpec& spec);

std::vector<EigenBlock> eigenblocks(const CrestedSpec& spec);

/// Full structured matrices U, D, Delta for the assembled operator.
SpectralData spectral_matrices(const CrestedSpec& spec);

struct FirstCrestedPartition {
    std::vector<int> relabeling;  // new label of each element; identity when unchanged
    IndexSet crossed = 0;         // C
    IndexSet nested = 0;          // N = {i : H(i) nonempty} under the relabeling
    bool identity_labeling() const;
};

/// Detects the labeling condition "H(i) nonempty implies H(i) = {j : j after i}".
/// Searches all relabelings for n <= 8 (identity first, lexicographic order);
/// beyond that only the identity labeling is tested.
std::optional<FirstCrestedPartition> first_crested_partition(const Poset& poset);

/// Direct two-sum construction for a partition C/N under the identity
/// labeling; used to cross-check the reduction.
Chain first_crested_direct(const CrestedSpec& spec, IndexSet crossed, IndexSet nested);

struct ErgodicityReport {
    std::vector<bool> component_ergodic;
    bool all_components_ergodic = false;
    bool product_ergodic = false;  // eigenvalue 1 simple and -1 absent, from the analytic spectrum
};

ErgodicityReport ergodicity(const CrestedSpec& spec);

/// k-step transition probabilities evaluated through the structured
/// eigenvector entries, without materializing U. The origin state
/// (0,...,0) takes the reduced path with at most
/// 1 + sum_{S nonempty} prod_{i in S}(m_i - 1) terms.
class KStepEvaluator {
public:
    explicit KStepEvaluator(const CrestedSpec& spec);

    double operator()(std::span<const int> x, std::span<const int> y, long k) const;
    double general(std::span<const int> x, std::span<const int> y, long k) const;
    double from_origin(std::span<const int> y, long k) const;

    const Vector& pi() const { return pi_; }
    const Vector& eigenvalue_diagonal() const { return lambda_; }

private:
    double u_entry(std::span<const int> x, std::span<const int> z, IndexSet s) const;
    IndexSet antichain_of_column(std::span<const int> z) const;

    const Poset poset_;
    ProductShape shape_;
    std::vector<Matrix> u_;        // component eigenvector matrices
    std::vector<Vector> sigma_;
    Vector p0_;
    Vector pi_;
    Vector lambda_;                // Delta diagonal over X
    std::vector<IndexSet> antichains_;
};

double kstep(const CrestedSpec& spec, std::span<const int> x, std::span<const int> y, long k);

}  // namespace crested
