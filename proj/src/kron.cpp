#include "crested/kron.hpp"

#include <sstream>

#include "crested/errors.hpp"

namespace crested {

Factor Factor::custom(Matrix m) {
    if (m.rows() != m.cols()) throw DimensionMismatchError("custom factor must be square");
    Factor f{FactorKind::Custom, static_cast<int>(m.rows()), std::move(m)};
    return f;
}

Matrix Factor::dense() const {
    switch (kind) {
        case FactorKind::Identity:
            return Matrix::Identity(size, size);
        case FactorKind::Uniform:
            return Matrix::Constant(size, size, 1.0 / size);
        case FactorKind::Custom:
            return matrix;
    }
    throw Error("unreachable");
}

long ProductShape::total() const {
    long t = 1;
    for (int m : sizes) {
        if (m < 1) throw InvalidSpecError("component sizes must be positive");
        t *= m;
        if (t > kDenseCap) {
            std::ostringstream os;
            os << "product state space exceeds the dense cap " << kDenseCap;
            throw SizeCapError(os.str());
        }
    }
    return t;
}

long ProductShape::linearize(std::span<const int> x) const {
    if (static_cast<int>(x.size()) != rank())
        throw DimensionMismatchError("state tuple length mismatch");
    long k = 0;
    for (int i = 0; i < rank(); ++i) {
        if (x[i] < 0 || x[i] >= sizes[i]) throw IndexError("state coordinate out of range");
        k = k * sizes[i] + x[i];
    }
    return k;
}

std::vector<int> ProductShape::delinearize(long k) const {
    std::vector<int> x(rank());
    for (int i = rank() - 1; i >= 0; --i) {
        x[i] = static_cast<int>(k % sizes[i]);
        k /= sizes[i];
    }
    return x;
}

Matrix assemble_term(const std::vector<Factor>& factors, kernels::ExecPolicy policy) {
    ProductShape shape;
    for (const auto& f : factors) {
        if (f.kind == FactorKind::Custom && f.matrix.rows() != f.size)
            throw DimensionMismatchError("factor size does not match its matrix");
        shape.sizes.push_back(f.size);
    }
    shape.total();  // enforces the cap
    Matrix out = Matrix::Identity(1, 1);
    for (const auto& f : factors) out = kernels::kron(out, f.dense(), policy);
    return out;
}

Matrix special_factor_a(int m) {
    Matrix a = Matrix::Zero(m, m);
    a.col(0).setOnes();
    return a;
}

Matrix sigma_norm_identity(const Vector& sigma) {
    const long m = sigma.size();
    Matrix out = Matrix::Zero(m, m);
    for (long x = 0; x < m; ++x) {
        if (sigma(x) <= 0.0) throw InvalidMeasureError("sigma must be strictly positive");
        out(x, x) = 1.0 / std::sqrt(sigma(x));
    }
    return out;
}

Matrix uniform_diag(int m) {
    Matrix out = Matrix::Zero(m, m);
    out(0, 0) = 1.0;
    return out;
}

}  // namespace crested
