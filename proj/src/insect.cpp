#include "crested/insect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "crested/rng.hpp"

namespace crested {

namespace {

long class_key(const std::vector<int>& x, IndexSet node, const ProductShape& shape) {
    long key = 0;
    for (int i : sorted_members(node)) key = key * shape.sizes[i] + x[i];
    return key;
}

}  // namespace

long TreeGraph::level_vertex_count(int node) const {
    long count = 0;
    for (const auto& v : vertices)
        if (v.level == node) ++count;
    return count;
}

std::vector<std::vector<long>> ancestral_classes(IndexSet a, const Poset& poset,
                                                 const ProductShape& shape) {
    if (!poset.is_ancestral(a))
        throw NotAncestralError("classes require an ancestral set, got " + format_set(a));
    const long total = shape.total();
    std::map<long, std::size_t> index_of;
    std::vector<std::vector<long>> classes;
    for (long z = 0; z < total; ++z) {
        const long key = class_key(shape.delinearize(z), a, shape);
        auto [it, fresh] = index_of.try_emplace(key, classes.size());
        if (fresh) classes.emplace_back();
        classes[it->second].push_back(z);
    }
    return classes;
}

TreeGraph build_tree(const Poset& poset, const std::vector<int>& sizes) {
    TreeGraph tree;
    tree.levels = poset.ancestral_poset();
    tree.shape = ProductShape{sizes};
    const long total = tree.shape.total();

    std::map<std::pair<int, long>, int> vertex_id;
    auto intern = [&](int level, long key) {
        auto [it, fresh] = vertex_id.try_emplace({level, key},
                                                 static_cast<int>(tree.vertices.size()));
        if (fresh) tree.vertices.push_back({level, key});
        return it->second;
    };
    // the leaf level is X itself: node 0 keys every coordinate, so the class
    // key equals the linear index
    for (long z = 0; z < total; ++z) intern(0, z);

    std::set<std::pair<int, int>> edges;
    for (const auto& chain : tree.levels.maximal_chains()) {
        for (std::size_t step = 0; step + 1 < chain.size(); ++step) {
            const int below = chain[step], above = chain[step + 1];
            for (long z = 0; z < total; ++z) {
                const auto x = tree.shape.delinearize(z);
                const int vb = intern(below, class_key(x, tree.levels.nodes[below], tree.shape));
                const int va = intern(above, class_key(x, tree.levels.nodes[above], tree.shape));
                edges.emplace(vb, va);
            }
        }
    }
    tree.adjacency.assign(tree.vertices.size(), {});
    for (auto [a, b] : edges) {
        tree.adjacency[a].push_back(b);
        tree.adjacency[b].push_back(a);
    }
    for (auto& nb : tree.adjacency) std::sort(nb.begin(), nb.end());
    return tree;
}

std::vector<double> solve_alphas(const TreeGraph& tree) {
    const auto& lv = tree.levels;
    const int count = lv.size();
    std::vector<double> alpha(count, std::numeric_limits<double>::quiet_NaN());

    auto child_multiplicity = [&](int node, int child) {
        double m = 1.0;
        const IndexSet extra = lv.nodes[child] & ~lv.nodes[node];
        for (int h : sorted_members(extra)) m *= tree.shape.sizes[h];
        return m;
    };

    // bottom-up: larger node sets sit lower in the ancestral order
    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return set_size(lv.nodes[a]) > set_size(lv.nodes[b]); });

    for (int node : order) {
        const auto ups = lv.covers_above(node);
        if (ups.empty()) continue;  // maximal: no ascent coefficient
        if (node == 0) {
            // a leaf has one father per cover of I and nothing below
            alpha[0] = 1.0 / static_cast<double>(ups.size());
            continue;
        }
        double down = 0.0;
        double correction = 0.0;
        for (int child : lv.covers_below(node)) {
            const double mult = child_multiplicity(node, child);
            down += mult;
            // a descent to the leaf level stops the walk; only higher
            // children can return
            if (child != 0) correction += mult * alpha[child];
        }
        const double denom = down + static_cast<double>(ups.size());
        const double b = correction / denom;
        if (1.0 - b <= 0.0) throw DegenerateError("ascent fixed point is not contracting");
        alpha[node] = (1.0 / denom) / (1.0 - b);
    }
    return alpha;
}

std::vector<double> level_weights(const TreeGraph& tree, const std::vector<double>& alpha) {
    const auto& lv = tree.levels;
    std::vector<double> p(lv.size(), 0.0);
    auto dfs = [&](auto&& self, int node, double prod) -> void {
        const auto ups = lv.covers_above(node);
        if (ups.empty()) {
            p[node] += prod;
            return;
        }
        p[node] += prod * (1.0 - static_cast<double>(ups.size()) * alpha[node]);
        for (int up : ups) self(self, up, prod * alpha[node]);
    };
    dfs(dfs, 0, 1.0);
    return p;
}

InsectCoefficients insect_coefficients(const TreeGraph& tree) {
    InsectCoefficients c;
    c.alpha = solve_alphas(tree);
    c.p = level_weights(tree, c.alpha);
    return c;
}

CrestedSpec to_crested(const Poset& poset, const std::vector<int>& sizes) {
    const TreeGraph tree = build_tree(poset, sizes);
    const auto coeffs = insect_coefficients(tree);
    const int n = poset.size();
    Vector p0(n);
    for (int node = 1; node < tree.levels.size(); ++node)
        p0(tree.levels.origin[node]) = coeffs.p[node];
    p0 /= p0.sum();  // sheds the O(eps) leftover mass on the leaf node
    std::vector<ComponentChain> comps;
    for (int i = 0; i < n; ++i) comps.push_back(ComponentChain::uniform(i, sizes[i]));
    return CrestedSpec(poset, std::move(comps), std::move(p0));
}

Matrix insect_direct_matrix(const Poset& poset, const std::vector<int>& sizes) {
    const TreeGraph tree = build_tree(poset, sizes);
    const auto coeffs = insect_coefficients(tree);
    const ProductShape shape{sizes};
    const long total = shape.total();
    const int n = poset.size();

    double mass = 0.0;
    for (int node = 1; node < tree.levels.size(); ++node) mass += coeffs.p[node];

    Matrix p = Matrix::Zero(total, total);
    for (long zx = 0; zx < total; ++zx) {
        const auto x = shape.delinearize(zx);
        for (long zy = 0; zy < total; ++zy) {
            const auto y = shape.delinearize(zy);
            double acc = 0.0;
            for (int node = 1; node < tree.levels.size(); ++node) {
                const IndexSet a = tree.levels.nodes[node];
                bool related = true;
                for (int i : sorted_members(a))
                    if (x[i] != y[i]) {
                        related = false;
                        break;
                    }
                if (!related) continue;
                double cls = 1.0;
                for (int h = 0; h < n; ++h)
                    if (!set_contains(a, h)) cls *= sizes[h];
                acc += (coeffs.p[node] / mass) / cls;
            }
            p(zx, zy) = acc;
        }
    }
    return p;
}

std::vector<InsectEigenspace> insect_eigenstructure(const Poset& poset,
                                                    const std::vector<int>& sizes) {
    const TreeGraph tree = build_tree(poset, sizes);
    const auto coeffs = insect_coefficients(tree);
    const int n = poset.size();
    double mass = 0.0;
    for (int node = 1; node < tree.levels.size(); ++node) mass += coeffs.p[node];
    std::vector<double> p_elem(n);
    for (int node = 1; node < tree.levels.size(); ++node)
        p_elem[tree.levels.origin[node]] = coeffs.p[node] / mass;

    std::vector<InsectEigenspace> out;
    for (const IndexSet s : poset.antichains()) {
        InsectEigenspace e;
        e.antichain = s;
        const IndexSet closed = poset.ancestral_closed(s);
        for (int i = 0; i < n; ++i)
            if (!set_contains(closed, i)) e.eigenvalue += p_elem[i];
        e.dimension = 1;
        for (int i : sorted_members(poset.ancestral(s))) e.dimension *= sizes[i];
        for (int i : sorted_members(s)) e.dimension *= sizes[i] - 1;
        out.push_back(e);
    }
    return out;
}

long walk(const TreeGraph& tree, long start_leaf, std::uint64_t seed, std::uint64_t stream) {
    if (start_leaf < 0 || start_leaf >= tree.leaf_count())
        throw IndexError("walk must start at a leaf");
    StreamRng rng(seed, stream);
    long cur = start_leaf;
    do {
        const auto& nb = tree.adjacency[static_cast<std::size_t>(cur)];
        cur = nb[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(nb.size())))];
    } while (cur >= tree.leaf_count());
    return cur;
}

std::vector<long long> walk_histogram(const TreeGraph& tree, long start_leaf, long trials,
                                      std::uint64_t seed, kernels::ExecPolicy policy) {
    return kernels::walk_histogram(tree.adjacency, tree.leaf_count(), start_leaf, trials, seed,
                                   policy);
}

EigenvalueSymmetryReport eigenvalue_symmetry_check(const Poset& poset,
                                                   const std::vector<int>& sizes) {
    EigenvalueSymmetryReport report;
    const auto autos = poset.automorphisms();
    report.automorphism_count = static_cast<long>(autos.size());
    const auto spaces = insect_eigenstructure(poset, sizes);
    const auto antichains = poset.antichains();

    std::map<IndexSet, double> lambda;
    for (const auto& e : spaces) lambda[e.antichain] = e.eigenvalue;

    auto apply_perm = [](const std::vector<int>& phi, IndexSet s) {
        IndexSet out = 0;
        for (int i : sorted_members(s)) out = set_with(out, phi[i]);
        return out;
    };

    const int n = poset.size();
    std::set<std::pair<IndexSet, IndexSet>> connected;
    for (const auto& phi : autos) {
        for (const IndexSet s : antichains) {
            const IndexSet image = apply_perm(phi, s);
            if (!poset.is_antichain(image))
                throw Error("automorphism image of an antichain is not an antichain");
            // exact index identity: phi maps I \ A[S] onto I \ A[phi(S)]
            const IndexSet lhs = full_set(n) & ~poset.ancestral_closed(s);
            const IndexSet rhs = full_set(n) & ~poset.ancestral_closed(image);
            if (apply_perm(phi, lhs) != rhs)
                throw Error("automorphism does not map eigenvalue index sums");
            if (image != s) {
                ++report.forced_pairs;
                connected.emplace(std::min(s, image), std::max(s, image));
            }
        }
    }

    for (std::size_t a = 0; a < antichains.size(); ++a) {
        for (std::size_t b = a + 1; b < antichains.size(); ++b) {
            const IndexSet sa = antichains[a], sb = antichains[b];
            if (std::abs(lambda[sa] - lambda[sb]) > 1e-12) continue;
            const auto key = std::make_pair(std::min(sa, sb), std::max(sa, sb));
            if (!connected.count(key)) report.equal_without_automorphism.push_back(key);
        }
    }
    return report;
}

}  // namespace crested
