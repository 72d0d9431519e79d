#include "crested/markov.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "crested/kernels.hpp"

namespace crested {

double ipow(double base, long k) {
    double out = 1.0;
    for (long i = 0; i < k; ++i) out *= base;
    return out;
}

Chain Chain::from_matrix(Matrix p, double tolerance) {
    if (p.rows() != p.cols()) throw DimensionMismatchError("transition matrix must be square");
    for (long x = 0; x < p.rows(); ++x) {
        double row = 0.0;
        for (long y = 0; y < p.cols(); ++y) {
            if (p(x, y) < 0.0) {
                std::ostringstream os;
                os << "negative entry at row " << (x + 1) << ", column " << (y + 1);
                throw InvalidSpecError(os.str());
            }
            row += p(x, y);
        }
        if (std::abs(row - 1.0) > tolerance) {
            std::ostringstream os;
            os << "row " << (x + 1) << " sums to " << row << ", not 1";
            throw InvalidSpecError(os.str());
        }
    }
    return Chain{std::move(p)};
}

Measure Measure::from_vector(Vector pi, double tolerance) {
    for (long i = 0; i < pi.size(); ++i)
        if (pi(i) <= 0.0) throw InvalidMeasureError("measure entries must be positive");
    if (std::abs(pi.sum() - 1.0) > tolerance)
        throw InvalidMeasureError("measure does not sum to 1");
    return Measure{std::move(pi)};
}

Measure Measure::uniform(int m) { return Measure{Vector::Constant(m, 1.0 / m)}; }

Vector apply(const Chain& chain, const Vector& f) {
    if (f.size() != chain.size()) throw DimensionMismatchError("apply: vector length mismatch");
    return chain.P * f;
}

DetailedBalanceReport check_detailed_balance(const Chain& chain, const Measure& measure,
                                             double tolerance) {
    if (measure.size() != chain.size())
        throw DimensionMismatchError("detailed balance: measure length mismatch");
    DetailedBalanceReport report;
    const int m = chain.size();
    for (int x = 0; x < m; ++x) {
        for (int y = 0; y < m; ++y) {
            const double v =
                std::abs(measure.pi(x) * chain.P(x, y) - measure.pi(y) * chain.P(y, x));
            if (v > report.max_violation) {
                report.max_violation = v;
                report.x = x;
                report.y = y;
            }
        }
    }
    report.holds = report.max_violation <= tolerance;
    return report;
}

namespace {

// reachability over the positive-entry digraph
std::vector<bool> reachable_from(const Matrix& p, int start, bool transpose) {
    const int m = static_cast<int>(p.rows());
    std::vector<bool> seen(m, false);
    std::vector<int> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (int y = 0; y < m; ++y) {
            const double v = transpose ? p(y, x) : p(x, y);
            if (v > 0.0 && !seen[y]) {
                seen[y] = true;
                stack.push_back(y);
            }
        }
    }
    return seen;
}

bool is_irreducible(const Matrix& p) {
    const auto fwd = reachable_from(p, 0, false);
    const auto bwd = reachable_from(p, 0, true);
    for (std::size_t i = 0; i < fwd.size(); ++i)
        if (!fwd[i] || !bwd[i]) return false;
    return true;
}

// 2-coloring of the undirected support; self-loops are odd cycles
bool is_bipartite(const Matrix& p) {
    const int m = static_cast<int>(p.rows());
    for (int x = 0; x < m; ++x)
        if (p(x, x) > 0.0) return false;
    std::vector<int> color(m, -1);
    for (int start = 0; start < m; ++start) {
        if (color[start] != -1) continue;
        color[start] = 0;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int y = 0; y < m; ++y) {
                if (p(x, y) <= 0.0 && p(y, x) <= 0.0) continue;
                if (color[y] == -1) {
                    color[y] = 1 - color[x];
                    stack.push_back(y);
                } else if (color[y] == color[x]) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace

Measure stationary(const Chain& chain) {
    if (!is_irreducible(chain.P)) throw NotIrreducibleError("chain is not irreducible");
    const int m = chain.size();
    Matrix a = chain.P.transpose() - Matrix::Identity(m, m);
    a.row(m - 1).setOnes();  // replace one equation by the normalization
    Vector b = Vector::Zero(m);
    b(m - 1) = 1.0;
    Vector pi = a.fullPivLu().solve(b);
    return Measure::from_vector(std::move(pi), 1e-9);
}

SpectralData spectral_oracle(const Chain& chain, const Measure& measure) {
    const auto db = check_detailed_balance(chain, measure);
    if (!db.holds) {
        std::ostringstream os;
        os << "detailed balance fails by " << db.max_violation;
        throw NotReversibleError(os.str());
    }
    const int m = chain.size();
    const Vector d = measure.pi.cwiseSqrt();
    Matrix sym(m, m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) sym(x, y) = d(x) * chain.P(x, y) / d(y);
    sym = 0.5 * (sym + sym.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw Error("dense eigensolver failed");

    SpectralData out;
    out.pi = measure.pi;
    out.eigenvalues = Vector(m);
    out.U = Matrix(m, m);
    // the solver returns ascending eigenvalues; store descending
    for (int c = 0; c < m; ++c) {
        out.eigenvalues(c) = solver.eigenvalues()(m - 1 - c);
        out.U.col(c) = solver.eigenvectors().col(m - 1 - c).cwiseQuotient(d);
    }
    // deterministic signs: first nonvanishing component positive
    for (int c = 0; c < m; ++c) {
        for (int x = 0; x < m; ++x) {
            if (std::abs(out.U(x, c)) > 1e-12) {
                if (out.U(x, c) < 0) out.U.col(c) = -out.U.col(c);
                break;
            }
        }
    }
    out.one_index = 0;
    const bool one_simple = m == 1 || out.eigenvalues(1) < 1.0 - 1e-8;
    if (std::abs(out.eigenvalues(0) - 1.0) < 1e-8 && one_simple) {
        // the simple 1-eigenvector is +-sqrt(pi), which has unit 2-norm;
        // mapped back it is a constant vector, pinned here to exactly ones
        out.U.col(0).setOnes();
        out.eigenvalues(0) = 1.0;
    }
    return out;
}

double kstep_spectral(const SpectralData& spectral, int x, int y, long k) {
    const int m = static_cast<int>(spectral.pi.size());
    double acc = 0.0;
    for (int z = 0; z < m; ++z)
        acc += spectral.U(x, z) * ipow(spectral.eigenvalues(z), k) * spectral.U(y, z);
    return spectral.pi(y) * acc;
}

WeightedGraph to_weighted_graph(const Chain& chain, const Measure& measure) {
    const auto db = check_detailed_balance(chain, measure);
    if (!db.holds) throw NotReversibleError("weights require detailed balance");
    const int m = chain.size();
    Matrix w(m, m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) w(x, y) = measure.pi(x) * chain.P(x, y);
    return WeightedGraph{std::move(w)};
}

std::pair<Chain, Measure> from_weighted_graph(const WeightedGraph& graph) {
    const int m = graph.size();
    if ((graph.w - graph.w.transpose()).cwiseAbs().maxCoeff() > tol::exact ||
        graph.w.minCoeff() < 0.0)
        throw InvalidSpecError("weights must be symmetric and nonnegative");
    Vector wx(m);
    for (int x = 0; x < m; ++x) {
        wx(x) = graph.w.row(x).sum();
        if (wx(x) <= 0.0) {
            std::ostringstream os;
            os << "vertex " << (x + 1) << " is isolated";
            throw IsolatedVertexError(os.str());
        }
    }
    Matrix p(m, m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) p(x, y) = graph.w(x, y) / wx(x);
    const double total = wx.sum();
    return {Chain::from_matrix(std::move(p), 1e-9), Measure::from_vector(wx / total, 1e-9)};
}

Classification classify(const Chain& chain) {
    Classification out;
    out.irreducible = is_irreducible(chain.P);
    out.bipartite = is_bipartite(chain.P);
    const bool graph_ergodic = out.irreducible && !out.bipartite;
    out.ergodic = graph_ergodic;
    if (out.irreducible) {
        // spectral route when the chain is reversible: 1 simple, -1 absent
        Measure pi = stationary(chain);
        if (check_detailed_balance(chain, pi).holds) {
            const auto spec = spectral_oracle(chain, pi);
            int ones = 0;
            bool minus_one = false;
            for (long z = 0; z < spec.eigenvalues.size(); ++z) {
                if (std::abs(spec.eigenvalues(z) - 1.0) < 1e-9) ++ones;
                if (std::abs(spec.eigenvalues(z) + 1.0) < 1e-9) minus_one = true;
            }
            out.ergodic = (ones == 1) && !minus_one;
            if (out.ergodic != graph_ergodic)
                throw Error("spectral and graph ergodicity tests disagree");
        }
    }
    return out;
}

}  // namespace crested
