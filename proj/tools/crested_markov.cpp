// crested-markov: build generalized crested products of finite Markov
// chains, inspect their spectra, evaluate k-step probabilities, and run or
// simulate the insect chain of a poset. See README.md for the document
// format.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "crested/gelfand.hpp"
#include "crested/insect.hpp"
#include "crested/kernels.hpp"
#include "crested/rng.hpp"
#include "crested/spec_io.hpp"

using namespace crested;

namespace {

struct Output {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit Output(const std::string& path) {
        if (path != "-") {
            file.open(path);
            if (!file) throw SchemaError("cannot write " + path);
            stream = &file;
        }
    }
    std::ostream& out() { return *stream; }
};

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return hash_hex(fnv1a(buf.str()));
}

void print_header(std::ostream& os, const std::string& spec_path) {
    os << "# crested-markov v" << kToolVersion << " hash=" << file_hash(spec_path) << "\n";
}

std::string sizes_string(const std::vector<int>& sizes) {
    std::ostringstream os;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i) os << ',';
        os << sizes[i];
    }
    return os.str();
}

std::string format_multi_index(const std::vector<int>& j) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        os << j[i];
    }
    os << ')';
    return os.str();
}

std::string lambda12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int cmd_build(const std::string& spec_path, const std::string& out_path) {
    const SpecDocument doc = SpecDocument::load(spec_path);
    const CrestedSpec spec = doc.to_crested_spec();
    const Chain chain = assemble(spec);
    Output output(out_path);
    print_header(output.out(), spec_path);
    output.out() << "# mode=" << doc.mode << " sizes=" << sizes_string(doc.sizes)
                 << " states=" << spec.shape().total() << "\n";
    write_matrix_csv(output.out(), chain.P);
    return 0;
}

int cmd_spectrum(const std::string& spec_path) {
    const SpecDocument doc = SpecDocument::load(spec_path);
    const CrestedSpec spec = doc.to_crested_spec();
    print_header(std::cout, spec_path);
    const auto rev = reversibility(spec);
    if (!rev.reversible) {
        std::cout << "not reversible: component";
        for (int k : rev.violating) std::cout << ' ' << (k + 1);
        std::cout << " below a maximal element must be symmetric (k in I \\ S-bar)\n";
        std::cerr << "spectrum requires a reversible product\n";
        return 3;
    }
    const auto blocks = eigenblocks(spec);
    for (const auto& block : blocks)
        std::cout << "S=" << format_set(block.antichain)
                  << " j=" << format_multi_index(block.multi_index)
                  << " lambda=" << lambda12(block.eigenvalue) << " dim=" << block.dimension
                  << "\n";

    std::vector<double> analytic;
    for (const auto& block : blocks)
        analytic.insert(analytic.end(), block.dimension, block.eigenvalue);
    std::sort(analytic.begin(), analytic.end());
    const auto dense = spectral_oracle(assemble(spec), *rev.pi);
    std::vector<double> reference(dense.eigenvalues.data(),
                                  dense.eigenvalues.data() + dense.eigenvalues.size());
    std::sort(reference.begin(), reference.end());
    double deviation = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i)
        deviation = std::max(deviation, std::abs(analytic[i] - reference[i]));
    std::cout << "# oracle: max multiset deviation = " << lambda12(deviation) << " "
              << (deviation <= 1e-9 ? "(OK)" : "(MISMATCH)") << "\n";
    return deviation <= 1e-9 ? 0 : 3;
}

int cmd_kstep(const std::string& spec_path, const std::string& from_s, const std::string& to_s,
              long k, bool verify) {
    const SpecDocument doc = SpecDocument::load(spec_path);
    const CrestedSpec spec = doc.to_crested_spec();
    const auto shape = spec.shape();
    const auto x = parse_state(from_s, shape);
    const auto y = parse_state(to_s, shape);
    const KStepEvaluator eval(spec);
    const double p = eval(x, y, k);
    print_header(std::cout, spec_path);
    std::cout << "p^(" << k << ")(" << format_state(x) << " -> " << format_state(y)
              << ") = " << format_probability(p) << "\n";
    if (verify) {
        const Matrix pk = kernels::matrix_power(assemble(spec).P, k);
        const double want = pk(shape.linearize(x), shape.linearize(y));
        const double dev = std::abs(p - want);
        std::cout << "# power oracle deviation = " << lambda12(dev) << " "
                  << (dev <= 1e-9 ? "(OK)" : "(MISMATCH)") << "\n";
        if (dev > 1e-9) return 3;
    }
    return 0;
}

int cmd_insect(const std::string& spec_path) {
    const SpecDocument doc = SpecDocument::load(spec_path);
    const TreeGraph tree = build_tree(doc.poset, doc.sizes);
    const auto coeffs = insect_coefficients(tree);
    print_header(std::cout, spec_path);
    std::cout << "# levels=" << tree.levels.size() << " vertices=" << tree.vertices.size()
              << " leaves=" << tree.leaf_count() << "\n";
    for (int node = 0; node < tree.levels.size(); ++node) {
        std::cout << "level " << node << " A=" << format_set(tree.levels.nodes[node])
                  << " origin=";
        if (tree.levels.origin[node] < 0)
            std::cout << "I";
        else
            std::cout << (tree.levels.origin[node] + 1);
        std::cout << " vertices=" << tree.level_vertex_count(node);
        if (!tree.levels.covers_above(node).empty())
            std::cout << " alpha=" << format_probability(coeffs.alpha[node]);
        if (node > 0) std::cout << " p=" << format_probability(coeffs.p[node]);
        std::cout << "\n";
    }
    for (const auto& space : insect_eigenstructure(doc.poset, doc.sizes))
        std::cout << "S=" << format_set(space.antichain) << " lambda=" << lambda12(space.eigenvalue)
                  << " dim=" << space.dimension << "\n";
    return 0;
}

int cmd_simulate(const std::string& spec_path, long trials, std::uint64_t seed, bool seed_set,
                 const std::string& start_s, const std::string& out_path) {
    const SpecDocument doc = SpecDocument::load(spec_path);
    const TreeGraph tree = build_tree(doc.poset, doc.sizes);
    std::vector<int> start(doc.poset.size(), 0);
    if (!start_s.empty()) start = parse_state(start_s, tree.shape);
    if (!seed_set) {
        if (const char* env = std::getenv("CRESTED_MARKOV_SEED"))
            seed = std::strtoull(env, nullptr, 10);
    }
    const long leaf = tree.shape.linearize(start);
    Output output(out_path);
    print_header(output.out(), spec_path);
    output.out() << "# trials=" << trials << " seed=" << seed << " start=" << format_state(start)
                 << " rng=" << StreamRng::algorithm_id << "\n";
    output.out() << "state,count,frequency\n";
    if (trials <= 0) return 0;
    const auto counts = walk_histogram(tree, leaf, trials, seed);
    for (long y = 0; y < tree.leaf_count(); ++y) {
        const auto tuple = tree.shape.delinearize(y);
        std::string label;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i) label += '-';
            label += std::to_string(tuple[i]);
        }
        output.out() << label << ',' << counts[y] << ','
                     << format_probability(counts[y] / static_cast<double>(trials)) << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& spec_path) {
    print_header(std::cout, spec_path);
    int failures = 0;
    int checks = 0;
    auto report = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok) ++failures;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << what << "\n";
    };

    SpecDocument doc = SpecDocument::load(spec_path);
    report(true, "document parses and the poset relation is a partial order");

    if (doc.mode == "crested") {
        bool rows_ok = true;
        std::string detail = "component matrices are row-stochastic";
        for (int i = 0; i < doc.poset.size() && rows_ok; ++i) {
            try {
                (void)Chain::from_matrix(*doc.matrices[i]);
            } catch (const InvalidSpecError& e) {
                rows_ok = false;
                detail = "component " + std::to_string(i + 1) + ": " + e.what();
            }
        }
        report(rows_ok, detail);
        if (!rows_ok) {
            std::cout << "verdict: FAIL (" << failures << " of " << checks
                      << " checks failed)\n";
            return 3;
        }
    }

    const CrestedSpec spec = doc.to_crested_spec();
    report(true, "components are irreducible and in detailed balance with sigma");
    report(std::abs(spec.p0.sum() - 1.0) <= tol::exact && spec.p0.minCoeff() > 0.0,
           "selection distribution is a strict probability");

    const Chain product = assemble(spec);
    {
        double worst = 0.0;
        for (long r = 0; r < product.P.rows(); ++r)
            worst = std::max(worst, std::abs(product.P.row(r).sum() - 1.0));
        report(worst <= 1e-12, "assembled operator is row-stochastic");
    }

    const auto rev = reversibility(spec);
    if (rev.reversible) {
        const double viol = kernels::max_detailed_balance_violation(product.P, rev.pi->pi);
        report(viol <= tol::exact,
               "detailed balance against the product measure (exhaustive scan)");
    } else {
        std::ostringstream os;
        os << "not reversible: nonsymmetric component(s)";
        for (int k : rev.violating) os << ' ' << (k + 1);
        os << " below maximal elements";
        report(true, os.str());
    }

    const auto blocks = eigenblocks(spec);
    {
        long total = 0;
        for (const auto& b : blocks) total += b.dimension;
        report(total == spec.shape().total(), "eigenspace dimensions sum to the state count");
    }
    {
        double worst = 0.0;
        for (const auto& b : blocks)
            worst = std::max(
                worst, (product.P * b.basis - b.eigenvalue * b.basis).cwiseAbs().maxCoeff());
        report(worst <= 1e-9,
               "eigenblock bases satisfy P v = lambda v (max residual " + lambda12(worst) + ")");
    }

    if (rev.reversible) {
        const auto sd = spectral_matrices(spec);
        const long total = spec.shape().total();
        const double r1 = (product.P * sd.U - sd.U * sd.Delta()).cwiseAbs().maxCoeff();
        const double r2 = (sd.U.transpose() * sd.D() * sd.U - Matrix::Identity(total, total))
                              .cwiseAbs()
                              .maxCoeff();
        report(r1 <= 1e-9, "PU = U Delta (max residual " + lambda12(r1) + ")");
        report(r2 <= 1e-9, "U^T D U = I (max residual " + lambda12(r2) + ")");

        const auto dense = spectral_oracle(product, *rev.pi);
        std::vector<double> analytic, reference;
        for (const auto& b : blocks) analytic.insert(analytic.end(), b.dimension, b.eigenvalue);
        reference.assign(dense.eigenvalues.data(),
                         dense.eigenvalues.data() + dense.eigenvalues.size());
        std::sort(analytic.begin(), analytic.end());
        std::sort(reference.begin(), reference.end());
        double dev = 0.0;
        for (std::size_t i = 0; i < analytic.size(); ++i)
            dev = std::max(dev, std::abs(analytic[i] - reference[i]));
        report(dev <= 1e-9,
               "analytic spectrum equals the dense spectrum (deviation " + lambda12(dev) + ")");

        const KStepEvaluator eval(spec);
        const Matrix p5 = kernels::matrix_power(product.P, 5);
        double kdev = 0.0;
        const auto shape = spec.shape();
        for (long zx = 0; zx < std::min<long>(shape.total(), 4); ++zx) {
            const auto x = shape.delinearize(zx);
            for (long zy = 0; zy < shape.total(); ++zy) {
                const auto y = shape.delinearize(zy);
                kdev = std::max(kdev, std::abs(eval(x, y, 5) - p5(zx, zy)));
            }
        }
        report(kdev <= 1e-9,
               "k-step formula matches the 5th matrix power (deviation " + lambda12(kdev) + ")");
    }

    {
        const auto part = first_crested_partition(spec.poset);
        if (part && part->identity_labeling()) {
            const Chain direct = first_crested_direct(spec, part->crossed, part->nested);
            const double dev = (product.P - direct.P).cwiseAbs().maxCoeff();
            report(dev == 0.0, "first crested reduction: C=" + format_set(part->crossed) +
                                   " N=" + format_set(part->nested) + " (entrywise equal)");
        } else if (part) {
            report(true, "first crested reduction exists under relabeling; C=" +
                             format_set(part->crossed) + " N=" + format_set(part->nested));
        } else {
            report(true, "first crested reduction: not reducible under any labeling");
        }
    }

    {
        const auto erg = ergodicity(spec);
        report(!erg.all_components_ergodic || erg.product_ergodic,
               "ergodic components give an ergodic product");
    }

    if (doc.mode == "insect") {
        const TreeGraph tree = build_tree(doc.poset, doc.sizes);
        const auto coeffs = insect_coefficients(tree);
        double psum = 0.0;
        bool alpha_ok = true;
        for (int node = 1; node < tree.levels.size(); ++node) psum += coeffs.p[node];
        for (int node = 0; node < tree.levels.size(); ++node) {
            if (tree.levels.covers_above(node).empty()) continue;
            alpha_ok = alpha_ok && coeffs.alpha[node] > 0.0 && coeffs.alpha[node] <= 1.0;
        }
        report(std::abs(psum - 1.0) <= tol::exact, "level weights sum to 1");
        report(alpha_ok, "ascent coefficients lie in (0, 1]");
        const Matrix direct = insect_direct_matrix(doc.poset, doc.sizes);
        report((product.P - direct).cwiseAbs().maxCoeff() <= tol::exact,
               "crested assembly equals the direct insect transition formula");

        std::vector<int> base(doc.poset.size(), 0);
        if (doc.base_point) base = *doc.base_point;
        double worst = 0.0;
        for (const auto& space : insect_eigenstructure(doc.poset, doc.sizes)) {
            const auto phi = spherical(space.antichain, base, doc.poset, doc.sizes);
            const auto sph = verify_spherical(phi, product.P, space.eigenvalue, spec.shape());
            worst = std::max(worst, sph.eigen_residual);
            worst = std::max(worst, std::abs(sph.value_at_base - 1.0));
        }
        report(worst <= 1e-9,
               "spherical functions are unit-normalized eigenfunctions (residual " +
                   lambda12(worst) + ")");
    }

    std::cout << "verdict: " << (failures == 0 ? "PASS" : "FAIL") << " (" << (checks - failures)
              << "/" << checks << " checks)\n";
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized crested products of finite Markov chains"};
    app.set_version_flag("--version", std::string("crested-markov v") + kToolVersion);
    app.require_subcommand(1);

    std::string spec_path, out_path = "-", from_s, to_s, start_s;
    long k = 1, trials = 100000;
    std::uint64_t seed = 1;
    bool verify_flag = false;

    auto add_spec = [&](CLI::App* cmd) {
        cmd->add_option("spec", spec_path, "problem document (JSON)")->required();
    };

    auto* build = app.add_subcommand("build", "assemble the transition matrix and emit CSV");
    add_spec(build);
    build->add_option("-o,--output", out_path, "output path ('-' for stdout)");

    auto* spectrum = app.add_subcommand(
        "spectrum", "list eigenspaces (antichain, multi-index, eigenvalue, dimension)");
    add_spec(spectrum);

    auto* kstep_cmd = app.add_subcommand("kstep", "evaluate the k-step transition probability");
    add_spec(kstep_cmd);
    kstep_cmd->add_option("--from", from_s, "source state, comma-separated coordinates")
        ->required();
    kstep_cmd->add_option("--to", to_s, "target state, comma-separated coordinates")->required();
    kstep_cmd->add_option("--k", k, "number of steps")->required();
    kstep_cmd->add_flag("--verify", verify_flag, "cross-check against the dense matrix power");

    auto* insect_cmd =
        app.add_subcommand("insect", "report the level graph, ascent coefficients and weights");
    add_spec(insect_cmd);

    auto* simulate = app.add_subcommand("simulate", "run stopped walks and emit a histogram CSV");
    add_spec(simulate);
    simulate->add_option("--trials", trials, "number of walks");
    auto* seed_opt = simulate->add_option(
        "--seed", seed, "RNG seed (overrides the CRESTED_MARKOV_SEED environment variable)");
    simulate->add_option("--start", start_s, "starting state (default all zeros)");
    simulate->add_option("-o,--output", out_path, "output path ('-' for stdout)");

    auto* verify = app.add_subcommand("verify", "run the full invariant battery on one document");
    add_spec(verify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build(spec_path, out_path);
        if (spectrum->parsed()) return cmd_spectrum(spec_path);
        if (kstep_cmd->parsed()) return cmd_kstep(spec_path, from_s, to_s, k, verify_flag);
        if (insect_cmd->parsed()) return cmd_insect(spec_path);
        if (simulate->parsed())
            return cmd_simulate(spec_path, trials, seed, !seed_opt->empty(), start_s, out_path);
        if (verify->parsed()) return cmd_verify(spec_path);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const IndexError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const SizeCapError& e) {
        std::cerr << "size cap: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
