#include "banet/kernels.hpp"

#include <cmath>
#include <limits>

namespace banet::kernels {
namespace {

void softmax_from_logits_scalar(const double* logw, double* out, std::size_t n) {
  double m = logw[0];
  for (std::size_t i = 1; i < n; ++i)
    if (logw[i] > m) m = logw[i];
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(logw[i] - m);
    sum += out[i];
  }
  const double inv = 1.0 / sum;
  for (std::size_t i = 0; i < n; ++i) out[i] *= inv;
}

void mix_uniform_scalar(double* p, std::size_t n, double eta) {
  const double floor = eta / static_cast<double>(n);
  const double keep = 1.0 - eta;
  for (std::size_t i = 0; i < n; ++i) p[i] = keep * p[i] + floor;
}

void complement_multiply_scalar(double* acc, const double* q, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] *= (1.0 - q[i]);
}

void vector_add_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

double gamma_terms_scalar(const double* p, const double* qsum, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0) sum += p[i] / (p[i] + qsum[i]);
  }
  return sum;
}

void ucb_indices_scalar(const double* sums, const double* counts, double bonus_num,
                        double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] == 0.0) {
      out[i] = std::numeric_limits<double>::infinity();
    } else {
      out[i] = sums[i] / counts[i] + std::sqrt(bonus_num / counts[i]);
    }
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      softmax_from_logits_scalar, mix_uniform_scalar,  complement_multiply_scalar,
      vector_add_scalar,          gamma_terms_scalar,  ucb_indices_scalar,
  };
  return ops;
}

}  // namespace banet::kernels
