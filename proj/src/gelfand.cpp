#include "crested/gelfand.hpp"

#include <cmath>

#include "crested/errors.hpp"

namespace crested {

std::vector<ModuleDimension> module_decomposition(const Poset& poset,
                                                  const std::vector<int>& sizes) {
    std::vector<ModuleDimension> out;
    for (const IndexSet s : poset.antichains()) {
        ModuleDimension d;
        d.antichain = s;
        d.dimension = 1;
        for (int i : sorted_members(poset.ancestral(s))) d.dimension *= sizes[i];
        for (int i : sorted_members(s)) d.dimension *= sizes[i] - 1;
        out.push_back(d);
    }
    return out;
}

SphericalFunction spherical(IndexSet s, std::span<const int> base_point, const Poset& poset,
                            const std::vector<int>& sizes) {
    if (!poset.is_antichain(s))
        throw InvalidSpecError("spherical functions are indexed by antichains");
    const ProductShape shape{sizes};
    const int n = shape.rank();
    if (static_cast<int>(base_point.size()) != n)
        throw DimensionMismatchError("base point length mismatch");
    shape.linearize(base_point);  // range check

    const IndexSet above = poset.ancestral(s);
    const long total = shape.total();
    SphericalFunction phi;
    phi.antichain = s;
    phi.base_point.assign(base_point.begin(), base_point.end());
    phi.values = Vector(total);
    for (long z = 0; z < total; ++z) {
        const auto x = shape.delinearize(z);
        double v = 1.0;
        for (int i = 0; i < n; ++i) {
            if (set_contains(above, i)) {
                if (x[i] != base_point[i]) {
                    v = 0.0;
                    break;
                }
            } else if (set_contains(s, i)) {
                if (x[i] != base_point[i]) v *= -1.0 / (sizes[i] - 1);
            }
        }
        phi.values(z) = v;
    }
    return phi;
}

SphericalReport verify_spherical(const SphericalFunction& phi, const Matrix& insect_operator,
                                 double eigenvalue, const ProductShape& shape) {
    SphericalReport report;
    report.eigenvalue = eigenvalue;
    report.value_at_base = phi.values(shape.linearize(phi.base_point));
    report.eigen_residual =
        (insect_operator * phi.values - eigenvalue * phi.values).cwiseAbs().maxCoeff();
    return report;
}

}  // namespace crested
