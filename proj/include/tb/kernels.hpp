#pragma once

#include <cstddef>

namespace tb::kern {

// Every hot loop ships in two versions: a plain serial reference and an
// OpenMP one parallelized over independent output elements. Both use the
// same per-element accumulation order, so results are bitwise identical
// regardless of thread count. The dispatchers below pick one via the
// process-wide mode (default: parallel).
enum class Exec { serial, parallel };

Exec execution_mode();
void set_execution_mode(Exec mode);

// c[m,n] (+)= a[m,k] * b[k,n]
void matmul_serial(const double* a, const double* b, double* c, std::size_t m,
                   std::size_t k, std::size_t n, bool accumulate);
void matmul_parallel(const double* a, const double* b, double* c, std::size_t m,
                     std::size_t k, std::size_t n, bool accumulate);
void matmul(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n, bool accumulate = false);

// c[m,n] (+)= a[m,k] * b[n,k]^T
void matmul_nt_serial(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n, bool accumulate);
void matmul_nt_parallel(const double* a, const double* b, double* c, std::size_t m,
                        std::size_t k, std::size_t n, bool accumulate);
void matmul_nt(const double* a, const double* b, double* c, std::size_t m,
               std::size_t k, std::size_t n, bool accumulate = false);

// c[k,n] (+)= a[m,k]^T * b[m,n]
void matmul_tn_serial(const double* a, const double* b, double* c, std::size_t m,
                      std::size_t k, std::size_t n, bool accumulate);
void matmul_tn_parallel(const double* a, const double* b, double* c, std::size_t m,
                        std::size_t k, std::size_t n, bool accumulate);
void matmul_tn(const double* a, const double* b, double* c, std::size_t m,
               std::size_t k, std::size_t n, bool accumulate = false);

// y[i] += alpha * x[i]
void axpy_serial(std::size_t n, double alpha, const double* x, double* y);
void axpy_parallel(std::size_t n, double alpha, const double* x, double* y);
void axpy(std::size_t n, double alpha, const double* x, double* y);

// out[i] (+)= a[i] * b[i]
void hadamard_serial(std::size_t n, const double* a, const double* b, double* out,
                     bool accumulate);
void hadamard_parallel(std::size_t n, const double* a, const double* b, double* out,
                       bool accumulate);
void hadamard(std::size_t n, const double* a, const double* b, double* out,
              bool accumulate = false);

}  // namespace tb::kern
