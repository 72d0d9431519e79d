#include "crested/crested.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace crested {

namespace {

std::vector<Factor> term_factors(const CrestedSpec& spec, int i) {
    std::vector<Factor> factors;
    const IndexSet h = spec.poset.hereditary(i);
    for (int j = 0; j < spec.rank(); ++j) {
        const int m = spec.components[j].state_count();
        if (j == i)
            factors.push_back(Factor::custom(spec.components[i].chain.P));
        else if (set_contains(h, j))
            factors.push_back(Factor::uniform(m));
        else
            factors.push_back(Factor::identity(m));
    }
    return factors;
}

}  // namespace

ComponentChain ComponentChain::analyze(int index, Chain chain, Measure sigma, double group_tol) {
    if (!classify(chain).irreducible)
        throw NotIrreducibleError("component chain must be irreducible");
    ComponentChain c;
    c.index = index;
    c.spectral = spectral_oracle(chain, sigma);
    c.chain = std::move(chain);
    c.sigma = std::move(sigma);

    const int m = c.chain.size();
    if (m > 1 && c.spectral.eigenvalues(1) > 1.0 - group_tol)
        throw NotIrreducibleError("eigenvalue 1 is not simple");
    c.group_values.push_back(1.0);
    c.group_columns.push_back({0});
    for (int col = 1; col < m; ++col) {
        const double v = c.spectral.eigenvalues(col);
        if (c.group_values.size() > 1 && std::abs(v - c.group_values.back()) <= group_tol)
            c.group_columns.back().push_back(col);
        else {
            c.group_values.push_back(v);
            c.group_columns.push_back({col});
        }
    }
    return c;
}

ComponentChain ComponentChain::uniform(int index, int m) {
    ComponentChain c;
    c.index = index;
    c.chain = Chain{Matrix::Constant(m, m, 1.0 / m)};
    c.sigma = Measure::uniform(m);

    // exact spectral data: eigenvalue 1 on the constants, 0 on the zero-sum
    // space, with a Helmert basis orthonormal under the uniform measure
    c.spectral.pi = c.sigma.pi;
    c.spectral.eigenvalues = Vector::Zero(m);
    c.spectral.eigenvalues(0) = 1.0;
    c.spectral.one_index = 0;
    c.spectral.U = Matrix::Zero(m, m);
    c.spectral.U.col(0).setOnes();
    for (int col = 1; col < m; ++col) {
        const double scale = std::sqrt(static_cast<double>(m) / (col * (col + 1.0)));
        for (int x = 0; x < col; ++x) c.spectral.U(x, col) = scale;
        c.spectral.U(col, col) = -scale * col;
    }
    c.group_values = {1.0};
    c.group_columns = {{0}};
    if (m > 1) {
        c.group_values.push_back(0.0);
        std::vector<int> rest(m - 1);
        std::iota(rest.begin(), rest.end(), 1);
        c.group_columns.push_back(std::move(rest));
    }
    return c;
}

CrestedSpec::CrestedSpec(Poset poset_in, std::vector<ComponentChain> components_in, Vector p0_in)
    : poset(std::move(poset_in)), components(std::move(components_in)), p0(std::move(p0_in)) {
    const int n = poset.size();
    if (static_cast<int>(components.size()) != n)
        throw InvalidSpecError("one component chain required per poset element");
    if (p0.size() != n) throw InvalidSpecError("selection distribution length mismatch");
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (p0(i) <= 0.0) throw InvalidSpecError("selection probabilities must be positive");
        sum += p0(i);
    }
    if (std::abs(sum - 1.0) > tol::exact)
        throw InvalidSpecError("selection distribution does not sum to 1");
    shape().total();  // dense cap
}

ProductShape CrestedSpec::shape() const {
    ProductShape s;
    for (const auto& c : components) s.sizes.push_back(c.state_count());
    return s;
}

Chain assemble(const CrestedSpec& spec) {
    const long total = spec.shape().total();
    Matrix p = Matrix::Zero(total, total);
    for (int i = 0; i < spec.rank(); ++i)
        p += spec.p0(i) * assemble_term(term_factors(spec, i));
    return Chain::from_matrix(std::move(p));
}

ReversibilityReport reversibility(const CrestedSpec& spec) {
    ReversibilityReport report;
    const IndexSet maximal = spec.poset.maximal_elements();
    for (int k = 0; k < spec.rank(); ++k) {
        if (set_contains(maximal, k)) continue;
        const Matrix& pk = spec.components[k].chain.P;
        if ((pk - pk.transpose()).cwiseAbs().maxCoeff() > tol::exact)
            report.violating.push_back(k);
    }
    report.reversible = report.violating.empty();
    if (!report.reversible) return report;

    const ProductShape shape = spec.shape();
    const long total = shape.total();
    double free_states = 1.0;
    for (int i = 0; i < spec.rank(); ++i)
        if (!set_contains(maximal, i)) free_states *= shape.sizes[i];
    Vector pi(total);
    for (long z = 0; z < total; ++z) {
        const auto x = shape.delinearize(z);
        double v = 1.0;
        for (int i : sorted_members(maximal)) v *= spec.components[i].sigma.pi(x[i]);
        pi(z) = v / free_states;
    }
    report.pi = Measure::from_vector(std::move(pi), 1e-9);
    return report;
}

std::vector<EigenBlock> eigenblocks(const CrestedSpec& spec) {
    const int n = spec.rank();
    std::vector<EigenBlock> blocks;
    for (const IndexSet s : spec.poset.antichains()) {
        const IndexSet above = spec.poset.ancestral(s);
        const IndexSet closed = above | s;
        const auto members = sorted_members(s);

        double base = 0.0;
        for (int i = 0; i < n; ++i)
            if (!set_contains(closed, i)) base += spec.p0(i);

        // multi-index j ranges over the nontrivial eigenvalue groups of each
        // member; the empty antichain yields exactly one block
        std::vector<int> j(members.size(), 1);
        bool more = true;
        for (int i : members)
            if (spec.components[i].nontrivial_groups() == 0) more = false;
        while (more) {
            EigenBlock block;
            block.antichain = s;
            block.multi_index.assign(j.begin(), j.end());
            block.eigenvalue = base;
            for (std::size_t idx = 0; idx < members.size(); ++idx)
                block.eigenvalue +=
                    spec.p0(members[idx]) * spec.components[members[idx]].group_values[j[idx]];

            std::vector<Matrix> mats;
            for (int i = 0; i < n; ++i) {
                const auto& comp = spec.components[i];
                if (set_contains(s, i)) {
                    const auto pos = std::find(members.begin(), members.end(), i);
                    const auto& cols = comp.group_columns[j[pos - members.begin()]];
                    Matrix sub(comp.state_count(), cols.size());
                    for (std::size_t c = 0; c < cols.size(); ++c)
                        sub.col(c) = comp.spectral.U.col(cols[c]);
                    mats.push_back(std::move(sub));
                } else if (set_contains(above, i)) {
                    mats.push_back(sigma_norm_identity(comp.sigma.pi));
                } else {
                    mats.push_back(Matrix::Ones(comp.state_count(), 1));
                }
            }
            Matrix basis = Matrix::Identity(1, 1);
            for (const auto& m : mats) basis = kernels::kron(basis, m);
            block.basis = std::move(basis);
            block.dimension = block.basis.cols();
            blocks.push_back(std::move(block));

            // lexicographic advance of the multi-index
            int pos = static_cast<int>(members.size()) - 1;
            while (pos >= 0) {
                if (j[pos] < spec.components[members[pos]].nontrivial_groups()) {
                    ++j[pos];
                    break;
                }
                j[pos] = 1;
                --pos;
            }
            if (pos < 0) more = false;
        }
    }
    return blocks;
}

SpectralData spectral_matrices(const CrestedSpec& spec) {
    if (!reversibility(spec).reversible)
        throw NotReversibleError("structured spectral matrices require a reversible product");
    const int n = spec.rank();
    const long total = spec.shape().total();

    Matrix u = Matrix::Zero(total, total);
    for (const IndexSet s : spec.poset.antichains()) {
        const IndexSet above = spec.poset.ancestral(s);
        Matrix term = Matrix::Identity(1, 1);
        for (int i = 0; i < n; ++i) {
            const auto& comp = spec.components[i];
            Matrix f;
            if (set_contains(s, i))
                f = comp.spectral.U - special_factor_a(comp.state_count());
            else if (set_contains(above, i))
                f = sigma_norm_identity(comp.sigma.pi);
            else
                f = special_factor_a(comp.state_count());
            term = kernels::kron(term, f);
        }
        u += term;
    }

    Matrix dd = Matrix::Identity(1, 1);
    for (int i = 0; i < n; ++i)
        dd = kernels::kron(dd, Matrix(spec.components[i].sigma.pi.asDiagonal()));

    Matrix delta = Matrix::Zero(total, total);
    for (int i = 0; i < n; ++i) {
        const IndexSet h = spec.poset.hereditary(i);
        Matrix term = Matrix::Identity(1, 1);
        for (int j = 0; j < n; ++j) {
            const int m = spec.components[j].state_count();
            Matrix f;
            if (j == i)
                f = Matrix(spec.components[i].spectral.eigenvalues.asDiagonal());
            else if (set_contains(h, j))
                f = uniform_diag(m);
            else
                f = Matrix::Identity(m, m);
            term = kernels::kron(term, f);
        }
        delta += spec.p0(i) * term;
    }

    SpectralData out;
    out.U = std::move(u);
    out.pi = dd.diagonal();
    out.eigenvalues = delta.diagonal();
    out.one_index = 0;

    const Matrix p = assemble(spec).P;
    const double r1 = (p * out.U - out.U * out.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
    const double r2 =
        (out.U.transpose() * out.pi.asDiagonal() * out.U - Matrix::Identity(total, total))
            .cwiseAbs()
            .maxCoeff();
    if (r1 > tol::pipeline || r2 > tol::pipeline) {
        std::ostringstream os;
        os << "spectral matrix contracts violated: |PU-UD|=" << r1 << " |UtDU-I|=" << r2;
        throw Error(os.str());
    }
    return out;
}

bool FirstCrestedPartition::identity_labeling() const {
    for (std::size_t i = 0; i < relabeling.size(); ++i)
        if (relabeling[i] != static_cast<int>(i)) return false;
    return true;
}

std::optional<FirstCrestedPartition> first_crested_partition(const Poset& poset) {
    const int n = poset.size();
    auto admissible = [&](const std::vector<int>& label) {
        for (int i = 0; i < n; ++i) {
            const IndexSet h = poset.hereditary(i);
            if (h == 0) continue;
            IndexSet after = 0;
            for (int j = 0; j < n; ++j)
                if (j != i && label[j] > label[i]) after = set_with(after, j);
            if (after != h) return false;
        }
        return true;
    };
    auto make = [&](std::vector<int> label) {
        FirstCrestedPartition part;
        part.relabeling = std::move(label);
        for (int i = 0; i < n; ++i) {
            if (poset.hereditary(i) != 0)
                part.nested = set_with(part.nested, i);
            else
                part.crossed = set_with(part.crossed, i);
        }
        return part;
    };

    std::vector<int> label(n);
    std::iota(label.begin(), label.end(), 0);
    if (n > 8) {
        if (admissible(label)) return make(std::move(label));
        return std::nullopt;
    }
    do {
        if (admissible(label)) return make(std::move(label));
    } while (std::next_permutation(label.begin(), label.end()));
    return std::nullopt;
}

Chain first_crested_direct(const CrestedSpec& spec, IndexSet crossed, IndexSet nested) {
    const int n = spec.rank();
    if ((crossed | nested) != full_set(n) || (crossed & nested) != 0)
        throw InvalidSpecError("C and N must partition the index set");
    const long total = spec.shape().total();
    Matrix p = Matrix::Zero(total, total);
    for (int i = 0; i < n; ++i) {
        std::vector<Factor> factors;
        for (int j = 0; j < n; ++j) {
            const int m = spec.components[j].state_count();
            if (j == i)
                factors.push_back(Factor::custom(spec.components[i].chain.P));
            else if (set_contains(nested, i) && j > i)
                factors.push_back(Factor::uniform(m));
            else
                factors.push_back(Factor::identity(m));
        }
        p += spec.p0(i) * assemble_term(factors);
    }
    return Chain::from_matrix(std::move(p));
}

ErgodicityReport ergodicity(const CrestedSpec& spec) {
    ErgodicityReport report;
    report.all_components_ergodic = true;
    for (const auto& comp : spec.components) {
        const bool e = classify(comp.chain).ergodic;
        report.component_ergodic.push_back(e);
        report.all_components_ergodic = report.all_components_ergodic && e;
    }
    long ones = 0;
    bool minus_one = false;
    for (const auto& block : eigenblocks(spec)) {
        if (std::abs(block.eigenvalue - 1.0) < tol::pipeline) ones += block.dimension;
        if (std::abs(block.eigenvalue + 1.0) < tol::pipeline) minus_one = true;
    }
    report.product_ergodic = (ones == 1) && !minus_one;
    return report;
}

KStepEvaluator::KStepEvaluator(const CrestedSpec& spec)
    : poset_(spec.poset), shape_(spec.shape()) {
    auto rev = reversibility(spec);
    if (!rev.reversible)
        throw NotReversibleError("k-step formula requires a reversible product");
    pi_ = rev.pi->pi;
    p0_ = spec.p0;
    for (const auto& comp : spec.components) {
        u_.push_back(comp.spectral.U);
        sigma_.push_back(comp.sigma.pi);
    }
    antichains_ = poset_.antichains();

    const long total = shape_.total();
    lambda_ = Vector(total);
    for (long z = 0; z < total; ++z) {
        const auto zt = shape_.delinearize(z);
        const IndexSet s = antichain_of_column(zt);
        const IndexSet closed = poset_.ancestral_closed(s);
        double lam = 0.0;
        for (int i = 0; i < poset_.size(); ++i) {
            if (set_contains(s, i))
                lam += p0_(i) * spec.components[i].spectral.eigenvalues(zt[i]);
            else if (!set_contains(closed, i))
                lam += p0_(i);
        }
        lambda_(z) = lam;
    }
}

IndexSet KStepEvaluator::antichain_of_column(std::span<const int> z) const {
    IndexSet support = 0;
    for (int i = 0; i < poset_.size(); ++i)
        if (z[i] != 0) support = set_with(support, i);
    IndexSet s = 0;
    for (int i : sorted_members(support))
        if ((poset_.hereditary(i) & support) == 0) s = set_with(s, i);  // minimal in the support
    return s;
}

double KStepEvaluator::u_entry(std::span<const int> x, std::span<const int> z, IndexSet s) const {
    const IndexSet above = poset_.ancestral(s);
    double prod = 1.0;
    for (int i = 0; i < poset_.size() && prod != 0.0; ++i) {
        if (set_contains(s, i)) {
            prod *= u_[i](x[i], z[i]) - (z[i] == 0 ? 1.0 : 0.0);
        } else if (set_contains(above, i)) {
            prod *= (x[i] == z[i]) ? 1.0 / std::sqrt(sigma_[i](x[i])) : 0.0;
        } else {
            prod *= (z[i] == 0) ? 1.0 : 0.0;
        }
    }
    return prod;
}

double KStepEvaluator::general(std::span<const int> x, std::span<const int> y, long k) const {
    const long total = shape_.total();
    double acc = 0.0;
    for (long z = 0; z < total; ++z) {
        const auto zt = shape_.delinearize(z);
        const IndexSet s = antichain_of_column(zt);
        acc += u_entry(x, zt, s) * ipow(lambda_(z), k) * u_entry(y, zt, s);
    }
    return pi_(shape_.linearize(y)) * acc;
}

double KStepEvaluator::from_origin(std::span<const int> y, long k) const {
    double acc = 0.0;
    std::vector<int> z(shape_.rank(), 0);
    for (const IndexSet s : antichains_) {
        const auto members = sorted_members(s);
        const IndexSet above = poset_.ancestral(s);
        double head = 1.0;  // prod over A(S) of 1/sqrt(sigma(0))
        for (int i : sorted_members(above)) head /= std::sqrt(sigma_[i](0));

        std::fill(z.begin(), z.end(), 0);
        for (int i : members) z[i] = 1;
        bool more = true;
        for (int i : members)
            if (shape_.sizes[i] < 2) more = false;
        if (members.empty()) {
            // the S = empty term: z = 0
            acc += head * ipow(lambda_(0), k) * u_entry(y, z, s);
            continue;
        }
        while (more) {
            double term = head;
            for (int i : members) term *= u_[i](0, z[i]);
            term *= ipow(lambda_(shape_.linearize(z)), k);
            term *= u_entry(y, z, s);
            acc += term;

            int pos = static_cast<int>(members.size()) - 1;
            while (pos >= 0) {
                const int i = members[pos];
                if (z[i] < shape_.sizes[i] - 1) {
                    ++z[i];
                    break;
                }
                z[i] = 1;
                --pos;
            }
            if (pos < 0) more = false;
        }
    }
    return pi_(shape_.linearize(y)) * acc;
}

double KStepEvaluator::operator()(std::span<const int> x, std::span<const int> y, long k) const {
    const bool origin = std::all_of(x.begin(), x.end(), [](int v) { return v == 0; });
    return origin ? from_origin(y, k) : general(x, y, k);
}

double kstep(const CrestedSpec& spec, std::span<const int> x, std::span<const int> y, long k) {
    return KStepEvaluator(spec)(x, y, k);
}

}  // namespace crested
