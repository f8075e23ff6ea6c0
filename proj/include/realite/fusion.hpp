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

#ifndef REALITE_FUSION_HPP_
#define REALITE_FUSION_HPP_

#include <cstddef>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "realite/common.hpp"

namespace realite {

enum class FusionKind { kLinear, kGated };

std::string_view to_string(FusionKind kind);
FusionKind parse_fusion(std::string_view name);

// Parameters of g(l_h, r, l_t). The input x = [l_h, r, l_t] has length
// 2|A| + D; every weight matrix is stored input-major, so W^T x is the
// product used in the forward pass.
struct FusionParams {
  FusionKind kind = FusionKind::kLinear;
  std::size_t num_attributes = 0;
  std::size_t dim = 0;

  Tensor w_r;    // [2|A| + D, D]
  Tensor b_2;    // [D], linear only
  Tensor w_zr;   // [D, D], gated only
  Tensor w_zlh;  // [|A|, D], gated only
  Tensor w_zlt;  // [|A|, D], gated only
  Tensor b_3;    // [D], gated only

  static FusionParams zeros(FusionKind kind, std::size_t num_attributes, std::size_t dim);

  // Visits the trainable tensors of the active variant in a fixed order.
  template <typename Fn>
  void for_each(Fn&& fn) {
    fn("w_r", w_r);
    if (kind == FusionKind::kLinear) {
      fn("b_2", b_2);
    } else {
      fn("w_zr", w_zr);
      fn("w_zlh", w_zlh);
      fn("w_zlt", w_zlt);
      fn("b_3", b_3);
    }
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    const_cast<FusionParams*>(this)->for_each(
        [&fn](const char* name, Tensor& t) { fn(name, static_cast<const Tensor&>(t)); });
  }

  std::size_t num_scalars() const;
};

// Glorot-uniform weights, zero biases.
void init_fusion(FusionParams* params, std::mt19937_64& rng);

// r_lit = g(l_h, r, l_t). Linear: W_r^T x + b_2. Gated: z * tanh(W_r^T x) +
// (1 - z) * r with z = sigmoid(W_zlh^T l_h + W_zr^T r + W_zlt^T l_t + b_3).
std::vector<double> fuse(std::span<const double> l_h, std::span<const double> r,
                         std::span<const double> l_t, const FusionParams& params);

// Accumulates gradients of fuse() given d(loss)/d(r_lit). Any of the input
// gradient spans may be empty to skip them.
void fuse_backward(std::span<const double> l_h, std::span<const double> r,
                   std::span<const double> l_t, const FusionParams& params,
                   std::span<const double> d_out, FusionParams* grad,
                   std::span<double> d_l_h, std::span<double> d_r, std::span<double> d_l_t);

// Trainable scalars that fusion (plus learnable aggregation) adds on top of
// the base model.
std::size_t param_count(FusionKind kind, std::size_t dim, std::size_t num_attributes,
                        bool learnable_aggregation);

}  // namespace realite

#endif  // REALITE_FUSION_HPP_
