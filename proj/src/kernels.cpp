#include "crested/kernels.hpp"

#include <stdexcept>

#include "crested/errors.hpp"
#include "crested/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crested::kernels {

ExecPolicy default_policy() {
#ifdef _OPENMP
    return ExecPolicy::Parallel;
#else
    return ExecPolicy::Serial;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

void kron_rows(const Matrix& a, const Matrix& b, Matrix& c, long row_begin, long row_end) {
    const long br = b.rows(), bc = b.cols(), ac = a.cols();
    for (long r = row_begin; r < row_end; ++r) {
        const long ia = r / br, ib = r % br;
        for (long ja = 0; ja < ac; ++ja) {
            const double av = a(ia, ja);
            if (av == 0.0) {
                c.block(r, ja * bc, 1, bc).setZero();
                continue;
            }
            for (long jb = 0; jb < bc; ++jb) {
                c(r, ja * bc + jb) = av * b(ib, jb);
            }
        }
    }
}

void matmul_rows(const Matrix& a, const Matrix& b, Matrix& c, long row_begin, long row_end) {
    const long n = a.cols(), m = b.cols();
    for (long i = row_begin; i < row_end; ++i) {
        for (long j = 0; j < m; ++j) {
            double acc = 0.0;
            for (long k = 0; k < n; ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    }
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b, ExecPolicy policy) {
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    const long rows = c.rows();
    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
        for (long r = 0; r < rows; ++r) kron_rows(a, b, c, r, r + 1);
    } else {
        kron_rows(a, b, c, 0, rows);
    }
    return c;
}

Matrix matmul(const Matrix& a, const Matrix& b, ExecPolicy policy) {
    if (a.cols() != b.rows()) throw DimensionMismatchError("matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    const long rows = c.rows();
    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < rows; ++i) matmul_rows(a, b, c, i, i + 1);
    } else {
        matmul_rows(a, b, c, 0, rows);
    }
    return c;
}

Matrix matrix_power(const Matrix& a, long k, ExecPolicy policy) {
    if (a.rows() != a.cols()) throw DimensionMismatchError("matrix_power: matrix not square");
    if (k < 0) throw DimensionMismatchError("matrix_power: negative exponent");
    // plain repeated multiplication: the k-step oracle must be the obvious product
    Matrix r = Matrix::Identity(a.rows(), a.cols());
    for (long i = 0; i < k; ++i) r = matmul(r, a, policy);
    return r;
}

double max_detailed_balance_violation(const Matrix& p, const Vector& pi, ExecPolicy policy) {
    const long m = p.rows();
    double worst = 0.0;
    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static) reduction(max : worst)
        for (long x = 0; x < m; ++x) {
            for (long y = 0; y < m; ++y) {
                const double v = std::abs(pi(x) * p(x, y) - pi(y) * p(y, x));
                if (v > worst) worst = v;
            }
        }
    } else {
        for (long x = 0; x < m; ++x) {
            for (long y = 0; y < m; ++y) {
                const double v = std::abs(pi(x) * p(x, y) - pi(y) * p(y, x));
                if (v > worst) worst = v;
            }
        }
    }
    return worst;
}

namespace {

long one_walk(const std::vector<std::vector<int>>& adjacency, long leaf_count, long start,
              StreamRng& rng) {
    long cur = start;
    do {
        const auto& nb = adjacency[static_cast<std::size_t>(cur)];
        cur = nb[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(nb.size())))];
    } while (cur >= leaf_count);
    return cur;
}

}  // namespace

std::vector<long long> walk_histogram(const std::vector<std::vector<int>>& adjacency,
                                      long leaf_count, long start_leaf, long trials,
                                      std::uint64_t seed, ExecPolicy policy) {
    if (start_leaf < 0 || start_leaf >= leaf_count)
        throw DimensionMismatchError("walk_histogram: start vertex is not a leaf");
    std::vector<long long> counts(static_cast<std::size_t>(leaf_count), 0);
    if (policy == ExecPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            std::vector<long long> local(counts.size(), 0);
#pragma omp for schedule(static)
            for (long t = 0; t < trials; ++t) {
                StreamRng rng(seed, static_cast<std::uint64_t>(t));
                ++local[static_cast<std::size_t>(one_walk(adjacency, leaf_count, start_leaf, rng))];
            }
#pragma omp critical
            for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += local[i];
        }
        return counts;
#endif
    }
    for (long t = 0; t < trials; ++t) {
        StreamRng rng(seed, static_cast<std::uint64_t>(t));
        ++counts[static_cast<std::size_t>(one_walk(adjacency, leaf_count, start_leaf, rng))];
    }
    return counts;
}

}  // namespace crested::kernels
