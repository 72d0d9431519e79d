#pragma once

// Shared fixtures and independent oracles. Everything here recomputes
// expected values from first principles (subset filters, dense solves,
// absorbing-chain algebra) and never calls the code path it checks.

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "crested/crested.hpp"
#include "crested/insect.hpp"
#include "crested/markov.hpp"
#include "crested/poset.hpp"

namespace testing {

using crested::Chain;
using crested::ComponentChain;
using crested::CrestedSpec;
using crested::IndexSet;
using crested::Matrix;
using crested::Measure;
using crested::Poset;
using crested::Vector;

// ---------------------------------------------------------------- posets

inline Poset diamond3() { return Poset::from_covers(3, {{1, 0}, {2, 0}}); }  // 0 above 1,2
inline Poset vee3() { return Poset::from_covers(3, {{2, 0}, {2, 1}}); }      // 0,1 above 2
inline Poset diamond4() {
    return Poset::from_covers(4, {{1, 0}, {2, 0}, {3, 1}, {3, 2}});  // 0 > {1,2} > 3
}
// the 4-element poset with H(1)={2,4}, H(3)={4} (1-based labels)
inline Poset example4() { return Poset::from_covers(4, {{1, 0}, {3, 0}, {3, 2}}); }
// the 8-element poset: 1>2>3>8, 4>{5,6}>7>8 (1-based labels)
inline Poset example8() {
    return Poset::from_covers(
        8, {{1, 0}, {2, 1}, {7, 2}, {4, 3}, {5, 3}, {6, 4}, {6, 5}, {7, 6}});
}

inline std::vector<Poset> poset_zoo() {
    return {Poset::antichain(1), Poset::antichain(2), Poset::antichain(3), Poset::chain(2),
            Poset::chain(3),     diamond3(),          vee3(),              diamond4(),
            example4()};
}

// ---------------------------------------------------------------- chains

/// random symmetric irreducible stochastic matrix (positive off-diagonals)
inline Matrix random_symmetric_stochastic(int m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    Matrix w(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            w(i, j) = unif(rng);
            w(j, i) = w(i, j);
        }
    Matrix off = w;
    off.diagonal().setZero();
    const double scale = 1.25 * off.rowwise().sum().maxCoeff();
    off /= scale;
    Matrix p = off;
    for (int i = 0; i < m; ++i) p(i, i) = 1.0 - off.row(i).sum();
    return p;
}

/// random reversible (generally nonsymmetric) chain from a weighted graph
inline std::pair<Matrix, Vector> random_reversible(int m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    Matrix w(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            w(i, j) = unif(rng);
            w(j, i) = w(i, j);
        }
    Vector wx = w.rowwise().sum();
    Matrix p(m, m);
    for (int i = 0; i < m; ++i) p.row(i) = w.row(i) / wx(i);
    Vector pi = wx / wx.sum();
    return {p, pi};
}

inline ComponentChain random_symmetric_component(int index, int m, std::mt19937_64& rng) {
    return ComponentChain::analyze(index, Chain::from_matrix(random_symmetric_stochastic(m, rng)),
                                   Measure::uniform(m));
}

inline Vector random_p0(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    Vector p0(n);
    for (int i = 0; i < n; ++i) p0(i) = unif(rng);
    return p0 / p0.sum();
}

inline CrestedSpec random_spec(const Poset& poset, const std::vector<int>& sizes,
                               std::mt19937_64& rng) {
    std::vector<ComponentChain> comps;
    for (int i = 0; i < poset.size(); ++i)
        comps.push_back(random_symmetric_component(i, sizes[i], rng));
    return CrestedSpec(poset, std::move(comps), random_p0(poset.size(), rng));
}

// ---------------------------------------------------------------- oracles

/// subset-filter antichain enumeration
inline std::vector<IndexSet> antichains_bruteforce(const Poset& poset) {
    std::vector<IndexSet> out;
    const IndexSet all = crested::full_set(poset.size());
    for (IndexSet s = 0;; ++s) {
        bool ok = true;
        const auto members = crested::sorted_members(s);
        for (std::size_t a = 0; a < members.size() && ok; ++a)
            for (std::size_t b = a + 1; b < members.size() && ok; ++b)
                if (poset.comparable(members[a], members[b])) ok = false;
        if (ok) out.push_back(s);
        if (s == all) break;
    }
    return out;
}

/// dense spectrum of a reversible chain through the symmetrized form
inline std::vector<double> dense_spectrum(const Matrix& p, const Vector& pi) {
    const Vector d = pi.cwiseSqrt();
    Matrix sym(p.rows(), p.cols());
    for (long x = 0; x < p.rows(); ++x)
        for (long y = 0; y < p.cols(); ++y) sym(x, y) = d(x) * p(x, y) / d(y);
    sym = 0.5 * (sym + sym.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    std::vector<double> out(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.begin(), out.end());
    return out;
}

/// multiset comparison after sorting; returns the max absolute deviation
inline double multiset_deviation(std::vector<double> a, std::vector<double> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

/// analytic eigenvalues with multiplicity, from eigenblocks
inline std::vector<double> analytic_spectrum(const CrestedSpec& spec) {
    std::vector<double> out;
    for (const auto& block : crested::eigenblocks(spec))
        out.insert(out.end(), block.dimension, block.eigenvalue);
    return out;
}

/// absorption distribution over leaves for a walk started at `from`
/// (a non-leaf vertex) on the glued level graph
inline Vector absorption_row(const crested::TreeGraph& tree, int from) {
    const long nl = tree.leaf_count();
    const long nv = static_cast<long>(tree.vertices.size());
    const long nt = nv - nl;
    Matrix q = Matrix::Zero(nt, nt);
    Matrix r = Matrix::Zero(nt, nl);
    for (long v = nl; v < nv; ++v) {
        const auto& nb = tree.adjacency[v];
        const double step = 1.0 / nb.size();
        for (int w : nb) {
            if (w < nl)
                r(v - nl, w) += step;
            else
                q(v - nl, w - nl) += step;
        }
    }
    const Matrix b = (Matrix::Identity(nt, nt) - q).fullPivLu().solve(r);
    return b.row(from - nl);
}

/// exact first-leaf-hit distribution of the stopped walk from a leaf
inline Vector walk_row_oracle(const crested::TreeGraph& tree, long leaf) {
    const long nl = tree.leaf_count();
    Vector row = Vector::Zero(nl);
    const auto& nb = tree.adjacency[leaf];
    const double step = 1.0 / nb.size();
    for (int w : nb) {
        if (w < nl)
            row(w) += step;
        else
            row += step * absorption_row(tree, w);
    }
    return row;
}

/// first-passage probability: from vertex `src`, hit `target` before any leaf
inline double first_passage_oracle(const crested::TreeGraph& tree, int src, int target) {
    const long nl = tree.leaf_count();
    const long nv = static_cast<long>(tree.vertices.size());
    std::vector<long> id(nv, -1);
    long nt = 0;
    for (long v = nl; v < nv; ++v)
        if (v != target) id[v] = nt++;
    Matrix q = Matrix::Zero(nt, nt);
    Vector r = Vector::Zero(nt);
    for (long v = nl; v < nv; ++v) {
        if (v == target) continue;
        const auto& nb = tree.adjacency[v];
        const double step = 1.0 / nb.size();
        for (int w : nb) {
            if (w == target)
                r(id[v]) += step;
            else if (w >= nl)
                q(id[v], id[w]) += step;
        }
    }
    const Vector h = (Matrix::Identity(nt, nt) - q).fullPivLu().solve(r);
    return h(id[src]);
}

/// tree vertex holding a given leaf at a given level
inline int class_vertex_of(const crested::TreeGraph& tree, int level, long leaf) {
    const auto x = tree.shape.delinearize(leaf);
    long key = 0;
    for (int i : crested::sorted_members(tree.levels.nodes[level]))
        key = key * tree.shape.sizes[i] + x[i];
    for (std::size_t v = 0; v < tree.vertices.size(); ++v)
        if (tree.vertices[v].level == level && tree.vertices[v].class_key == key)
            return static_cast<int>(v);
    return -1;
}

}  // namespace testing
