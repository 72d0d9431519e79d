#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "crested/insect.hpp"
#include "helpers.hpp"

using namespace crested;

TEST_CASE("ancestral classes") {
    const Poset poset = testing::diamond3();
    const ProductShape shape{{2, 2, 2}};

    SUBCASE("A_2 = {1,3} groups states by coordinates 1 and 3") {
        const IndexSet a2 = set_with(set_with(0u, 0), 2);
        const auto classes = ancestral_classes(a2, poset, shape);
        REQUIRE(classes.size() == 4);
        CHECK(classes[0] == std::vector<long>{0, 2});  // 000, 010
        CHECK(classes[1] == std::vector<long>{1, 3});  // 001, 011
        CHECK(classes[2] == std::vector<long>{4, 6});  // 100, 110
        CHECK(classes[3] == std::vector<long>{5, 7});  // 101, 111
    }
    SUBCASE("the full set gives singletons") {
        const auto classes = ancestral_classes(full_set(3), poset, shape);
        REQUIRE(classes.size() == 8);
        for (long z = 0; z < 8; ++z) CHECK(classes[z] == std::vector<long>{z});
    }
    SUBCASE("the empty set is the universal relation") {
        const auto classes = ancestral_classes(0u, poset, shape);
        REQUIRE(classes.size() == 1);
        CHECK(classes[0].size() == 8);
    }
    SUBCASE("non-ancestral sets are rejected") {
        CHECK_THROWS_AS(ancestral_classes(set_with(0u, 1), poset, shape), NotAncestralError);
    }
}

TEST_CASE("glued tree of the diamond poset") {
    const TreeGraph tree = build_tree(testing::diamond3(), {2, 2, 2});
    CHECK(tree.leaf_count() == 8);
    REQUIRE(tree.levels.size() == 4);
    // 8 leaves + two mid levels of 4 + root
    CHECK(tree.vertices.size() == 17);
    CHECK(tree.level_vertex_count(0) == 8);
    CHECK(tree.level_vertex_count(1) == 1);  // A_1 = {}
    CHECK(tree.level_vertex_count(2) == 4);  // A_2
    CHECK(tree.level_vertex_count(3) == 4);  // A_3
    for (long v = 0; v < 8; ++v) CHECK(tree.degree(v) == 2);
    for (std::size_t v = 8; v < tree.vertices.size(); ++v) {
        if (tree.vertices[v].level == 1)
            CHECK(tree.degree(v) == 8);  // root joins all mid vertices
        else
            CHECK(tree.degree(v) == 3);  // two leaf children + the root
    }
}

TEST_CASE("glued tree of a chain poset is the plain rooted tree") {
    const TreeGraph tree = build_tree(Poset::chain(2), {2, 3});
    // 6 leaves, 2 mid vertices (coordinate 1 fixed), 1 root
    CHECK(tree.vertices.size() == 9);
    for (long v = 0; v < 6; ++v) CHECK(tree.degree(v) == 1);
    CHECK(tree.levels.maximal_chains().size() == 1);
}

TEST_CASE("tree vertices and edges match the set-based gluing oracle") {
    for (const Poset& poset : testing::poset_zoo()) {
        std::vector<int> sizes(poset.size(), 2);
        const TreeGraph tree = build_tree(poset, sizes);

        // oracle: hash every (node, class) pair over all cover relations
        const AncestralPoset ap = poset.ancestral_poset();
        const ProductShape shape{sizes};
        std::set<std::pair<int, long>> verts;
        std::set<std::pair<std::pair<int, long>, std::pair<int, long>>> edges;
        auto key = [&](int node, long z) {
            const auto x = shape.delinearize(z);
            long k = 0;
            for (int i : sorted_members(ap.nodes[node])) k = k * sizes[i] + x[i];
            return k;
        };
        for (long z = 0; z < shape.total(); ++z)
            for (int node = 0; node < ap.size(); ++node) verts.insert({node, key(node, z)});
        for (auto [lo, hi] : ap.covers)
            for (long z = 0; z < shape.total(); ++z)
                edges.insert({{lo, key(lo, z)}, {hi, key(hi, z)}});

        CHECK(tree.vertices.size() == verts.size());
        std::size_t edge_count = 0;
        for (const auto& nb : tree.adjacency) edge_count += nb.size();
        CHECK(edge_count == 2 * edges.size());
    }
}

TEST_CASE("ascent coefficients on the diamond") {
    const TreeGraph tree = build_tree(testing::diamond3(), {2, 2, 2});
    const auto alpha = solve_alphas(tree);
    CHECK(alpha[0] == 0.5);  // two covers of I
    CHECK(alpha[2] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(alpha[3] == doctest::Approx(1.0 / 3).epsilon(1e-15));

    // the absorbing-chain oracle agrees on every cover above a non-leaf node
    for (auto [lo, hi] : tree.levels.covers) {
        if (lo == 0) continue;
        const int src = testing::class_vertex_of(tree, lo, 0);
        const int tgt = testing::class_vertex_of(tree, hi, 0);
        CHECK(std::abs(alpha[lo] - testing::first_passage_oracle(tree, src, tgt)) < 1e-10);
    }
}

TEST_CASE("ascent coefficients on chains match the first-passage oracle") {
    for (int n : {2, 3}) {
        for (int m : {2, 3}) {
            std::vector<int> sizes(n, m);
            const TreeGraph tree = build_tree(Poset::chain(n), sizes);
            const auto alpha = solve_alphas(tree);
            CHECK(alpha[0] == 1.0);  // single cover of I
            for (auto [lo, hi] : tree.levels.covers) {
                if (lo == 0) continue;
                const int src = testing::class_vertex_of(tree, lo, 0);
                const int tgt = testing::class_vertex_of(tree, hi, 0);
                CHECK(std::abs(alpha[lo] - testing::first_passage_oracle(tree, src, tgt)) <
                      1e-10);
            }
        }
    }
}

TEST_CASE("the fixed-point coefficients are not first passages on glued posets") {
    // V poset: cross-level cycles let the walk reach a father sideways, so
    // the closed-form coefficient undercounts; the analytic chain is defined
    // by the recursion, and walk equivalence holds only where tested above
    const TreeGraph tree = build_tree(testing::vee3(), {2, 2, 2});
    const auto alpha = solve_alphas(tree);
    // node of A_3 = {1,2} (origin element 2): recursion gives 1/4
    const int node = 3;
    REQUIRE(tree.levels.origin[node] == 2);
    CHECK(alpha[node] == doctest::Approx(0.25).epsilon(1e-15));
    const auto ups = tree.levels.covers_above(node);
    REQUIRE(!ups.empty());
    const int src = testing::class_vertex_of(tree, node, 0);
    const int tgt = testing::class_vertex_of(tree, ups[0], 0);
    const double oracle = testing::first_passage_oracle(tree, src, tgt);
    CHECK(oracle == doctest::Approx(5.0 / 17).epsilon(1e-10));
    CHECK(std::abs(oracle - alpha[node]) > 0.04);
}

TEST_CASE("level weights") {
    SUBCASE("chain 1>2: classical weights and the stopping oracle") {
        for (int m2 : {2, 3, 4}) {
            const TreeGraph tree = build_tree(Poset::chain(2), {2, m2});
            const auto coeffs = insect_coefficients(tree);
            // mid level keeps m2/(m2+1), the root takes 1/(m2+1)
            const double root = 1.0 / (m2 + 1);
            double psum = 0.0;
            for (int node = 1; node < tree.levels.size(); ++node) psum += coeffs.p[node];
            CHECK(std::abs(psum - 1.0) < tol::exact);
            CHECK(coeffs.p[1] == doctest::Approx(root).epsilon(1e-14));          // A_1 = {}
            CHECK(coeffs.p[2] == doctest::Approx(1.0 - root).epsilon(1e-14));    // A_2 = {1}

            // stopping-distribution oracle: from a mid vertex the walk tops
            // out at the root iff it hits the root before any leaf
            const int mid = testing::class_vertex_of(tree, 2, 0);
            const int root_v = testing::class_vertex_of(tree, 1, 0);
            CHECK(std::abs(coeffs.p[1] -
                           testing::first_passage_oracle(tree, mid, root_v)) < 1e-10);
        }
    }
    SUBCASE("diamond weights are uniform and sum to 1") {
        const TreeGraph tree = build_tree(testing::diamond3(), {2, 2, 2});
        const auto coeffs = insect_coefficients(tree);
        double psum = 0.0;
        for (int node = 1; node < tree.levels.size(); ++node) {
            psum += coeffs.p[node];
            CHECK(coeffs.p[node] == doctest::Approx(1.0 / 3).epsilon(1e-14));
        }
        CHECK(std::abs(psum - 1.0) < tol::exact);
    }
    SUBCASE("singleton poset sends everything to the root") {
        const TreeGraph tree = build_tree(Poset::antichain(1), {4});
        const auto coeffs = insect_coefficients(tree);
        CHECK(coeffs.p[1] == 1.0);
    }
    SUBCASE("weights sum to 1 across the zoo") {
        for (const Poset& poset : testing::poset_zoo()) {
            std::vector<int> sizes(poset.size(), 2);
            const TreeGraph tree = build_tree(poset, sizes);
            const auto coeffs = insect_coefficients(tree);
            double psum = 0.0;
            for (int node = 1; node < tree.levels.size(); ++node) {
                CHECK(coeffs.p[node] > 0.0);
                psum += coeffs.p[node];
            }
            CHECK(std::abs(psum - 1.0) < tol::exact);
            for (int node = 0; node < tree.levels.size(); ++node) {
                if (tree.levels.covers_above(node).empty()) continue;
                CHECK(coeffs.alpha[node] > 0.0);
                CHECK(coeffs.alpha[node] <= 1.0);
            }
        }
    }
}

TEST_CASE("insect as a crested product") {
    SUBCASE("diamond: assembled matrix equals the direct formula") {
        const Poset poset = testing::diamond3();
        const Matrix direct = insect_direct_matrix(poset, {2, 2, 2});
        const Matrix assembled = assemble(to_crested(poset, {2, 2, 2})).P;
        CHECK((assembled - direct).cwiseAbs().maxCoeff() < tol::exact);
        for (long r = 0; r < direct.rows(); ++r)
            CHECK(direct.row(r).sum() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK((direct - direct.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("the equality holds across the zoo") {
        for (const Poset& poset : testing::poset_zoo()) {
            std::vector<int> sizes(poset.size(), 2);
            const Matrix direct = insect_direct_matrix(poset, sizes);
            const Matrix assembled = assemble(to_crested(poset, sizes)).P;
            CHECK((assembled - direct).cwiseAbs().maxCoeff() < tol::exact);
        }
    }
    SUBCASE("totally ordered poset reproduces the classical chain: walk oracle") {
        // on chains the glued tree is a plain rooted tree and the stopped
        // walk distribution is exactly the assembled matrix
        const Poset poset = Poset::chain(3);
        const std::vector<int> sizes{2, 2, 2};
        const TreeGraph tree = build_tree(poset, sizes);
        const Matrix assembled = assemble(to_crested(poset, sizes)).P;
        for (long leaf = 0; leaf < tree.leaf_count(); ++leaf) {
            const Vector row = testing::walk_row_oracle(tree, leaf);
            for (long y = 0; y < tree.leaf_count(); ++y)
                CHECK(std::abs(assembled(leaf, y) - row(y)) < 1e-12);
        }
    }
    SUBCASE("diamond: walk oracle agrees too") {
        const TreeGraph tree = build_tree(testing::diamond3(), {2, 2, 2});
        const Matrix assembled = assemble(to_crested(testing::diamond3(), {2, 2, 2})).P;
        const Vector row = testing::walk_row_oracle(tree, 0);
        CHECK(row(0) == doctest::Approx(3.0 / 8).epsilon(1e-12));
        for (long y = 0; y < 8; ++y) CHECK(std::abs(assembled(0, y) - row(y)) < 1e-12);
    }
    SUBCASE("uniform stationary measure") {
        const CrestedSpec spec = to_crested(testing::diamond3(), {2, 2, 2});
        const auto pi = stationary(assemble(spec));
        CHECK(pi.pi.isApproxToConstant(1.0 / 8, 1e-12));
    }
}

TEST_CASE("insect eigenstructure") {
    SUBCASE("empty antichain carries eigenvalue 1") {
        const auto spaces = insect_eigenstructure(testing::diamond3(), {2, 2, 2});
        CHECK(spaces.front().antichain == 0u);
        CHECK(spaces.front().eigenvalue == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("agrees with the crested eigenblocks of the uniform spec") {
        for (const Poset& poset : testing::poset_zoo()) {
            std::vector<int> sizes(poset.size(), 2);
            const auto spaces = insect_eigenstructure(poset, sizes);
            const auto blocks = eigenblocks(to_crested(poset, sizes));
            REQUIRE(spaces.size() == blocks.size());
            for (std::size_t i = 0; i < spaces.size(); ++i) {
                CHECK(spaces[i].antichain == blocks[i].antichain);
                CHECK(spaces[i].dimension == blocks[i].dimension);
                CHECK(spaces[i].eigenvalue ==
                      doctest::Approx(blocks[i].eigenvalue).epsilon(1e-12));
            }
        }
    }
    SUBCASE("analytic spectrum equals the dense spectrum") {
        for (const Poset& poset : testing::poset_zoo()) {
            std::vector<int> sizes(poset.size(), 2);
            const CrestedSpec spec = to_crested(poset, sizes);
            std::vector<double> analytic;
            for (const auto& e : insect_eigenstructure(poset, sizes))
                analytic.insert(analytic.end(), e.dimension, e.eigenvalue);
            const auto rev = reversibility(spec);
            REQUIRE(rev.reversible);
            const double dev = testing::multiset_deviation(
                analytic, testing::dense_spectrum(assemble(spec).P, rev.pi->pi));
            CHECK(dev < tol::pipeline);
        }
    }
}

TEST_CASE("eigenvalue equalities on the 8-element poset") {
    const Poset poset = testing::example8();
    for (int m : {2, 3}) {
        std::vector<int> sizes(8, m);
        const auto spaces = insect_eigenstructure(poset, sizes);
        std::map<IndexSet, double> lambda;
        for (const auto& e : spaces) lambda[e.antichain] = e.eigenvalue;
        auto at = [&](std::initializer_list<int> elems) {
            IndexSet s = 0;
            for (int e : elems) s = set_with(s, e - 1);  // 1-based labels
            return lambda.at(s);
        };
        CHECK(std::abs(at({3}) - at({7})) < tol::exact);
        CHECK(std::abs(at({3, 5}) - at({3, 6})) < tol::exact);
        CHECK(std::abs(at({2, 5}) - at({2, 6})) < tol::exact);
        CHECK(std::abs(at({1, 5}) - at({1, 6})) < tol::exact);
        if (m == 2) CHECK(at({3}) == doctest::Approx(0.75).epsilon(1e-12));
    }
}

TEST_CASE("eigenvalue symmetry report") {
    SUBCASE("diamond: the swap automorphism forces lambda_{2} = lambda_{3}") {
        const auto report = eigenvalue_symmetry_check(testing::diamond3(), {2, 2, 2});
        CHECK(report.automorphism_count == 2);
        CHECK(report.forced_pairs > 0);
    }
    SUBCASE("8-element poset: pair ({3},{7}) has no connecting automorphism") {
        const auto report = eigenvalue_symmetry_check(testing::example8(), {2, 2, 2, 2, 2, 2, 2, 2});
        const IndexSet s3 = set_with(0u, 2), s7 = set_with(0u, 6);
        bool found = false;
        for (const auto& [a, b] : report.equal_without_automorphism)
            if ((a == s3 && b == s7) || (a == s7 && b == s3)) found = true;
        CHECK(found);
    }
    SUBCASE("chain: only the trivial automorphism, no forced equalities") {
        const auto report = eigenvalue_symmetry_check(Poset::chain(3), {2, 2, 2});
        CHECK(report.automorphism_count == 1);
        CHECK(report.forced_pairs == 0);
    }
}

TEST_CASE("stopped walks") {
    SUBCASE("singleton poset: star graph, uniform return") {
        const TreeGraph tree = build_tree(Poset::antichain(1), {2});
        const auto counts = walk_histogram(tree, 0, 40000, 7);
        const double freq0 = counts[0] / 40000.0;
        CHECK(std::abs(freq0 - 0.5) < 3.0 * std::sqrt(0.25 / 40000.0));
    }
    SUBCASE("identical seeds give identical trajectories") {
        const TreeGraph tree = build_tree(testing::diamond3(), {2, 2, 2});
        for (int t = 0; t < 32; ++t)
            CHECK(walk(tree, 0, 99, t) == walk(tree, 0, 99, t));
        const auto a = walk_histogram(tree, 0, 5000, 123);
        const auto b = walk_histogram(tree, 0, 5000, 123);
        CHECK(a == b);
    }
    SUBCASE("walks start only at leaves") {
        const TreeGraph tree = build_tree(testing::diamond3(), {2, 2, 2});
        CHECK_THROWS_AS(walk(tree, 8, 1), IndexError);
    }
    SUBCASE("diamond empirical row matches the analytic row at 3 sigma") {
        const Poset poset = testing::diamond3();
        const TreeGraph tree = build_tree(poset, {2, 2, 2});
        const Matrix analytic = assemble(to_crested(poset, {2, 2, 2})).P;
        const long trials = 100000;
        const auto counts = walk_histogram(tree, 0, trials, 2024);
        for (long y = 0; y < 8; ++y) {
            const double p = analytic(0, y);
            const double se = std::sqrt(p * (1.0 - p) / trials);
            CHECK(std::abs(counts[y] / double(trials) - p) <= 3.0 * se);
        }
    }
}
