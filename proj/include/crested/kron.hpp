#pragma once

#include <span>
#include <vector>

#include "crested/kernels.hpp"
#include "crested/types.hpp"

namespace crested {

/// Hard cap on the dense product-state count.
inline constexpr long kDenseCap = 65536;

enum class FactorKind { Identity, Uniform, Custom };

/// One tensor-factor slot: the identity I_m, the uniform averaging operator
/// J_m, or an arbitrary m x m matrix.
struct Factor {
    FactorKind kind = FactorKind::Identity;
    int size = 0;
    Matrix matrix;  // Custom only

    static Factor identity(int m) { return {FactorKind::Identity, m, {}}; }
    static Factor uniform(int m) { return {FactorKind::Uniform, m, {}}; }
    static Factor custom(Matrix m);

    Matrix dense() const;
};

/// Mixed-radix indexing of X = X_1 x ... x X_n, index 1 most significant.
struct ProductShape {
    std::vector<int> sizes;

    int rank() const { return static_cast<int>(sizes.size()); }
    long total() const;
    long linearize(std::span<const int> x) const;
    std::vector<int> delinearize(long k) const;
};

/// Kronecker product of the factors taken in canonical order 1..n.
Matrix assemble_term(const std::vector<Factor>& factors,
                     kernels::ExecPolicy policy = kernels::default_policy());

/// A_i: first column all ones, the rest zero.
Matrix special_factor_a(int m);

/// I^{sigma-norm}: diagonal of 1/sqrt(sigma(x)).
Matrix sigma_norm_identity(const Vector& sigma);

/// J^{diag}: diagonal (1, 0, ..., 0).
Matrix uniform_diag(int m);

}  // namespace crested
