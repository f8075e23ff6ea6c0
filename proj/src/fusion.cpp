// Copyright 2026 The realite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "realite/fusion.hpp"

#include <cmath>

#include "realite/aggregation.hpp"

namespace realite {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_dims(std::span<const double> l_h, std::span<const double> r,
                std::span<const double> l_t, const FusionParams& p) {
  if (l_h.size() != p.num_attributes) {
    throw ShapeError("fuse: l_h has " + std::to_string(l_h.size()) + " entries, expected " +
                     std::to_string(p.num_attributes));
  }
  if (l_t.size() != p.num_attributes) {
    throw ShapeError("fuse: l_t has " + std::to_string(l_t.size()) + " entries, expected " +
                     std::to_string(p.num_attributes));
  }
  if (r.size() != p.dim) {
    throw ShapeError("fuse: r has " + std::to_string(r.size()) + " entries, expected " +
                     std::to_string(p.dim));
  }
}

// out[j] += sum_i x[i] * w[i, j], for w of shape [x.size(), out.size()].
void add_transposed_product(const Tensor& w, std::span<const double> x, std::size_t row0,
                            std::span<double> out) {
  const std::size_t cols = out.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* wr = w.row(row0 + i);
    for (std::size_t j = 0; j < cols; ++j) out[j] += xi * wr[j];
  }
}

// Gradients of out = W^T x for the block of rows [row0, row0 + x.size()).
void product_backward(const Tensor& w, std::span<const double> x, std::size_t row0,
                      std::span<const double> d_out, Tensor* d_w, std::span<double> d_x) {
  const std::size_t cols = d_out.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    double* gw = d_w->row(row0 + i);
    for (std::size_t j = 0; j < cols; ++j) gw[j] += x[i] * d_out[j];
    if (!d_x.empty()) {
      const double* wr = w.row(row0 + i);
      double acc = 0.0;
      for (std::size_t j = 0; j < cols; ++j) acc += wr[j] * d_out[j];
      d_x[i] += acc;
    }
  }
}

std::vector<double> concat_product(std::span<const double> l_h, std::span<const double> r,
                                   std::span<const double> l_t, const FusionParams& p) {
  std::vector<double> a(p.dim, 0.0);
  add_transposed_product(p.w_r, l_h, 0, a);
  add_transposed_product(p.w_r, r, p.num_attributes, a);
  add_transposed_product(p.w_r, l_t, p.num_attributes + p.dim, a);
  return a;
}

std::vector<double> gate_preactivation(std::span<const double> l_h, std::span<const double> r,
                                       std::span<const double> l_t, const FusionParams& p) {
  std::vector<double> z(p.b_3.data);
  add_transposed_product(p.w_zlh, l_h, 0, z);
  add_transposed_product(p.w_zr, r, 0, z);
  add_transposed_product(p.w_zlt, l_t, 0, z);
  return z;
}

void glorot(Tensor* t, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(t->rows() + t->cols()));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : t->data) v = dist(rng);
}

}  // namespace

std::string_view to_string(FusionKind kind) {
  return kind == FusionKind::kLinear ? "linear" : "gated";
}

FusionKind parse_fusion(std::string_view name) {
  if (name == "linear") return FusionKind::kLinear;
  if (name == "gated") return FusionKind::kGated;
  throw ValidationError("unknown fusion kind: " + std::string(name));
}

FusionParams FusionParams::zeros(FusionKind kind, std::size_t num_attributes,
                                 std::size_t dim) {
  FusionParams p;
  p.kind = kind;
  p.num_attributes = num_attributes;
  p.dim = dim;
  p.w_r = Tensor({2 * num_attributes + dim, dim});
  if (kind == FusionKind::kLinear) {
    p.b_2 = Tensor({dim});
  } else {
    p.w_zr = Tensor({dim, dim});
    p.w_zlh = Tensor({num_attributes, dim});
    p.w_zlt = Tensor({num_attributes, dim});
    p.b_3 = Tensor({dim});
  }
  return p;
}

std::size_t FusionParams::num_scalars() const {
  std::size_t n = 0;
  for_each([&n](const char*, const Tensor& t) { n += t.size(); });
  return n;
}

void init_fusion(FusionParams* params, std::mt19937_64& rng) {
  glorot(&params->w_r, rng);
  if (params->kind == FusionKind::kGated) {
    glorot(&params->w_zr, rng);
    // An empty attribute block has nothing to draw.
    if (params->num_attributes > 0) {
      glorot(&params->w_zlh, rng);
      glorot(&params->w_zlt, rng);
    }
  }
}

std::vector<double> fuse(std::span<const double> l_h, std::span<const double> r,
                         std::span<const double> l_t, const FusionParams& p) {
  check_dims(l_h, r, l_t, p);
  std::vector<double> a = concat_product(l_h, r, l_t, p);
  if (p.kind == FusionKind::kLinear) {
    for (std::size_t j = 0; j < p.dim; ++j) a[j] += p.b_2.data[j];
    return a;
  }
  std::vector<double> z = gate_preactivation(l_h, r, l_t, p);
  for (std::size_t j = 0; j < p.dim; ++j) {
    const double g = sigmoid(z[j]);
    a[j] = g * std::tanh(a[j]) + (1.0 - g) * r[j];
  }
  return a;
}

void fuse_backward(std::span<const double> l_h, std::span<const double> r,
                   std::span<const double> l_t, const FusionParams& p,
                   std::span<const double> d_out, FusionParams* grad,
                   std::span<double> d_l_h, std::span<double> d_r, std::span<double> d_l_t) {
  check_dims(l_h, r, l_t, p);
  if (d_out.size() != p.dim) throw ShapeError("fuse_backward: upstream gradient size");
  const std::size_t A = p.num_attributes;
  const std::size_t D = p.dim;

  std::vector<double> d_a(D);
  if (p.kind == FusionKind::kLinear) {
    for (std::size_t j = 0; j < D; ++j) {
      grad->b_2.data[j] += d_out[j];
      d_a[j] = d_out[j];
    }
  } else {
    std::vector<double> a = concat_product(l_h, r, l_t, p);
    std::vector<double> zpre = gate_preactivation(l_h, r, l_t, p);
    std::vector<double> d_zpre(D);
    for (std::size_t j = 0; j < D; ++j) {
      const double z = sigmoid(zpre[j]);
      const double h = std::tanh(a[j]);
      d_a[j] = d_out[j] * z * (1.0 - h * h);
      d_zpre[j] = d_out[j] * (h - r[j]) * z * (1.0 - z);
      if (!d_r.empty()) d_r[j] += d_out[j] * (1.0 - z);
      grad->b_3.data[j] += d_zpre[j];
    }
    product_backward(p.w_zlh, l_h, 0, d_zpre, &grad->w_zlh, d_l_h);
    product_backward(p.w_zr, r, 0, d_zpre, &grad->w_zr, d_r);
    product_backward(p.w_zlt, l_t, 0, d_zpre, &grad->w_zlt, d_l_t);
  }
  product_backward(p.w_r, l_h, 0, d_a, &grad->w_r, d_l_h);
  product_backward(p.w_r, r, A, d_a, &grad->w_r, d_r);
  product_backward(p.w_r, l_t, A + D, d_a, &grad->w_r, d_l_t);
}

std::size_t param_count(FusionKind kind, std::size_t dim, std::size_t num_attributes,
                        bool learnable_aggregation) {
  const std::size_t extra = learnable_aggregation ? kNumStatistics + 1 : 0;
  if (kind == FusionKind::kLinear) {
    return dim * dim + 2 * num_attributes * dim + dim + extra;
  }
  return 2 * dim * dim + 4 * num_attributes * dim + dim + extra;
}

}  // namespace realite
