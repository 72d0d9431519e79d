#pragma once

#include <span>
#include <vector>

#include "crested/poset.hpp"
#include "crested/kron.hpp"

namespace crested {

struct ModuleDimension {
    IndexSet antichain = 0;
    long dimension = 0;  // prod_{A(S)} m_i * prod_S (m_i - 1)
};

/// Irreducible-submodule dimensions of L(X) indexed by antichains; they sum
/// to prod m_i.
std::vector<ModuleDimension> module_decomposition(const Poset& poset,
                                                  const std::vector<int>& sizes);

struct SphericalFunction {
    IndexSet antichain = 0;
    std::vector<int> base_point;
    Vector values;  // over X in linear order
};

/// phi_S = (indicator of x0_i on A(S)) x (psi_i on S) x (1 elsewhere),
/// psi_i = 1 at x0_i and -1/(m_i - 1) elsewhere.
SphericalFunction spherical(IndexSet s, std::span<const int> base_point, const Poset& poset,
                            const std::vector<int>& sizes);

struct SphericalReport {
    double eigen_residual = 0.0;  // max |P phi - lambda phi|
    double value_at_base = 0.0;
    double eigenvalue = 0.0;
};

SphericalReport verify_spherical(const SphericalFunction& phi, const Matrix& insect_operator,
                                 double eigenvalue, const ProductShape& shape);

}  // namespace crested
