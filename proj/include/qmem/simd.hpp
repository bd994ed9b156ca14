#pragma once

// Data-parallel reductions used by the kernel tabulation and assembly loops.
//
// Every kernel has a scalar reference in qmem::simd::scalar. Vector variants
// (AVX2+FMA on x86-64, NEON on aarch64) are compiled into their own
// translation units and picked once at startup from CPU feature bits. The
// dispatched entry points in qmem::simd route to whichever is active.

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>

namespace qmem::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// ISA the dispatched entry points currently route to.
Isa active_isa();

/// True if `isa` was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

/// Route dispatched calls to `isa`. Returns false (and changes nothing) if it
/// is unavailable. Intended for tests and for reproducibility runs.
bool set_isa(Isa isa);

/// sum a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

/// sum a[i] * b[i] * c[i]
double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c);

/// {sum u[i] * r[i], sum v[i] * r[i]} in one pass over r.
std::pair<double, double> dot_pair(std::span<const double> u, std::span<const double> v,
                                   std::span<const double> r);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
std::pair<double, double> dot_pair(const double* u, const double* v, const double* r, std::size_t n);
}  // namespace scalar

#if defined(QMEM_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
std::pair<double, double> dot_pair(const double* u, const double* v, const double* r, std::size_t n);
}  // namespace avx2
#endif

#if defined(QMEM_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
std::pair<double, double> dot_pair(const double* u, const double* v, const double* r, std::size_t n);
}  // namespace neon
#endif

}  // namespace qmem::simd
