#ifndef BANET_KERNELS_HPP
#define BANET_KERNELS_HPP

#include <cstddef>

// Arm-indexed inner loops shared by the policies and the simulator.
// Every kernel has a scalar reference implementation; on x86 an AVX2
// variant is selected at runtime. The two paths are equivalence-tested
// against each other (tolerances only where reduction order or libm
// vectorization can differ in the last ulps).
namespace banet::kernels {

struct Ops {
  // out[i] = exp(logw[i] - max(logw)) / sum_j exp(logw[j] - max(logw))
  void (*softmax_from_logits)(const double* logw, double* out, std::size_t n);

  // p[i] = (1 - eta) * p[i] + eta / n
  void (*mix_uniform)(double* p, std::size_t n, double eta);

  // acc[i] *= (1 - q[i])
  void (*complement_multiply)(double* acc, const double* q, std::size_t n);

  // acc[i] += x[i]
  void (*vector_add)(double* acc, const double* x, std::size_t n);

  // sum_i p[i] / (p[i] + qsum[i]), terms with p[i] == 0 contribute 0
  double (*gamma_terms)(const double* p, const double* qsum, std::size_t n);

  // out[i] = sums[i]/counts[i] + sqrt(bonus_num/counts[i]); +inf when counts[i] == 0
  void (*ucb_indices)(const double* sums, const double* counts, double bonus_num,
                      double* out, std::size_t n);
};

// Scalar reference path, always available.
const Ops& scalar_ops();

// AVX2 path, or nullptr when the binary or CPU lacks it.
const Ops* avx2_ops();

// The runtime-selected path. Honors BANET_KERNELS=scalar|avx2 (falls back
// to scalar when a forced path is unavailable). Resolved once.
const Ops& active();
const char* active_name();

}  // namespace banet::kernels

#endif
