#pragma once

#include <optional>
#include <utility>

#include "crested/errors.hpp"
#include "crested/types.hpp"

namespace crested {

namespace tol {
inline constexpr double exact = 1e-12;     // identities exact by construction
inline constexpr double residual = 1e-10;  // after one eigensolve
inline constexpr double pipeline = 1e-9;   // composed pipelines
}  // namespace tol

/// Row-stochastic transition matrix.
struct Chain {
    Matrix P;

    int size() const { return static_cast<int>(P.rows()); }
    static Chain from_matrix(Matrix p, double tolerance = tol::exact);
};

/// Strict probability measure: positive entries summing to 1.
struct Measure {
    Vector pi;

    int size() const { return static_cast<int>(pi.size()); }
    static Measure from_vector(Vector pi, double tolerance = tol::exact);
    static Measure uniform(int m);
};

struct DetailedBalanceReport {
    bool holds = false;
    double max_violation = 0.0;
    int x = -1, y = -1;  // a maximizing pair
};

/// Eigendecomposition of a reversible chain. Columns of U are eigenvectors,
/// pi-orthonormal (U^T D U = I with D = diag(pi)); eigenvalues descending,
/// the eigenvalue-1 column first and normalized to all ones.
struct SpectralData {
    Matrix U;
    Vector pi;
    Vector eigenvalues;
    int one_index = 0;

    Matrix D() const { return Matrix(pi.asDiagonal()); }
    Matrix Delta() const { return Matrix(eigenvalues.asDiagonal()); }
};

struct WeightedGraph {
    Matrix w;  // symmetric, nonnegative; edge iff positive

    int size() const { return static_cast<int>(w.rows()); }
    double vertex_weight(int x) const { return w.row(x).sum(); }
    double total_weight() const { return w.sum(); }
};

struct Classification {
    bool irreducible = false;
    bool ergodic = false;
    bool bipartite = false;
};

Vector apply(const Chain& chain, const Vector& f);

DetailedBalanceReport check_detailed_balance(const Chain& chain, const Measure& measure,
                                             double tolerance = tol::residual);

/// Unique stationary measure of an irreducible chain (left fixed vector).
Measure stationary(const Chain& chain);

/// Dense symmetric eigensolve through the D^{1/2} P D^{-1/2} similarity
/// transform. Requires detailed balance.
SpectralData spectral_oracle(const Chain& chain, const Measure& measure);

/// p^(k)(x,y) = pi(y) sum_z u(x,z) lambda_z^k u(y,z)
double kstep_spectral(const SpectralData& spectral, int x, int y, long k);

WeightedGraph to_weighted_graph(const Chain& chain, const Measure& measure);
std::pair<Chain, Measure> from_weighted_graph(const WeightedGraph& graph);

Classification classify(const Chain& chain);

double ipow(double base, long k);

}  // namespace crested
