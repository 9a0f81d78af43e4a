#include "tb/kernels.hpp"

#include <atomic>
#include <cstring>

namespace tb::kern {

namespace {
std::atomic<Exec> g_mode{Exec::parallel};

inline std::ptrdiff_t sdiff(std::size_t v) { return static_cast<std::ptrdiff_t>(v); }
}  // namespace

Exec execution_mode() { return g_mode.load(std::memory_order_relaxed); }
void set_execution_mode(Exec mode) { g_mode.store(mode, std::memory_order_relaxed); }

// ---------------------------------------------------------------------------
// matmul: ikj order, row i owned by one thread.

void matmul_serial(const double* a, const double* b, double* c, std::size_t m,
                   std::size_t k, std::size_t n, bool accumulate) {
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c + i * n;
        if (!accumulate) std::memset(ci, 0, n * sizeof(double));
        const double* ai = a + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = ai[p];
            const double* bp = b + p * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
}

void matmul_parallel(const double* a, const double* b, double* c, std::size_t m,
                     std::size_t k, std::size_t n, bool accumulate) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < sdiff(m); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double* ci = c + i * n;
        if (!accumulate) std::memset(ci, 0, n * sizeof(double));
        const double* ai = a + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = ai[p];
            const double* bp = b + p * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
}

void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
            std::size_t n, bool accumulate) {
    if (execution_mode() == Exec::parallel) {
        matmul_parallel(a, b, c, m, k, n, accumulate);
    } else {
        matmul_serial(a, b, c, m, k, n, accumulate);
    }
}

// ---------------------------------------------------------------------------
// matmul_nt: dot products of rows, (i,j) element owned by one thread via i.

void matmul_nt_serial(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n, bool accumulate) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b + j * k;
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
            ci[j] = accumulate ? ci[j] + s : s;
        }
    }
}

void matmul_nt_parallel(const double* a, const double* b, double* c, std::size_t m,
                        std::size_t k, std::size_t n, bool accumulate) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < sdiff(m); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b + j * k;
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
            ci[j] = accumulate ? ci[j] + s : s;
        }
    }
}

void matmul_nt(const double* a, const double* b, double* c, std::size_t m,
               std::size_t k, std::size_t n, bool accumulate) {
    if (execution_mode() == Exec::parallel) {
        matmul_nt_parallel(a, b, c, m, k, n, accumulate);
    } else {
        matmul_nt_serial(a, b, c, m, k, n, accumulate);
    }
}

// ---------------------------------------------------------------------------
// matmul_tn: output row p gathers column p of a; row p owned by one thread.

void matmul_tn_serial(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n, bool accumulate) {
    for (std::size_t p = 0; p < k; ++p) {
        double* cp = c + p * n;
        if (!accumulate) std::memset(cp, 0, n * sizeof(double));
        for (std::size_t i = 0; i < m; ++i) {
            const double aip = a[i * k + p];
            const double* bi = b + i * n;
            for (std::size_t j = 0; j < n; ++j) cp[j] += aip * bi[j];
        }
    }
}

void matmul_tn_parallel(const double* a, const double* b, double* c, std::size_t m,
                        std::size_t k, std::size_t n, bool accumulate) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t pp = 0; pp < sdiff(k); ++pp) {
        const std::size_t p = static_cast<std::size_t>(pp);
        double* cp = c + p * n;
        if (!accumulate) std::memset(cp, 0, n * sizeof(double));
        for (std::size_t i = 0; i < m; ++i) {
            const double aip = a[i * k + p];
            const double* bi = b + i * n;
            for (std::size_t j = 0; j < n; ++j) cp[j] += aip * bi[j];
        }
    }
}

void matmul_tn(const double* a, const double* b, double* c, std::size_t m,
               std::size_t k, std::size_t n, bool accumulate) {
    if (execution_mode() == Exec::parallel) {
        matmul_tn_parallel(a, b, c, m, k, n, accumulate);
    } else {
        matmul_tn_serial(a, b, c, m, k, n, accumulate);
    }
}

// ---------------------------------------------------------------------------

void axpy_serial(std::size_t n, double alpha, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpy_parallel(std::size_t n, double alpha, const double* x, double* y) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < sdiff(n); ++i) y[i] += alpha * x[i];
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
    if (execution_mode() == Exec::parallel) {
        axpy_parallel(n, alpha, x, y);
    } else {
        axpy_serial(n, alpha, x, y);
    }
}

void hadamard_serial(std::size_t n, const double* a, const double* b, double* out,
                     bool accumulate) {
    if (accumulate) {
        for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
    }
}

void hadamard_parallel(std::size_t n, const double* a, const double* b, double* out,
                       bool accumulate) {
    if (accumulate) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < sdiff(n); ++i) out[i] += a[i] * b[i];
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < sdiff(n); ++i) out[i] = a[i] * b[i];
    }
}

void hadamard(std::size_t n, const double* a, const double* b, double* out,
              bool accumulate) {
    if (execution_mode() == Exec::parallel) {
        hadamard_parallel(n, a, b, out, accumulate);
    } else {
        hadamard_serial(n, a, b, out, accumulate);
    }
}

}  // namespace tb::kern
