/* Copyright 2026 The amralign Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Guided cross-attention loss: scalar head mix plus alignment cross-entropy.

#ifndef AMRALIGN_GUIDED_LOSS_H_
#define AMRALIGN_GUIDED_LOSS_H_

#include <cstdint>
#include <vector>

#include "amralign/aam1.h"
#include "amralign/metrics.h"
#include "amralign/score_matrix.h"

namespace amralign {

struct LossInput {
  std::vector<Matrix> head_mats;  // index = head, each n_d x n_e
  MixWeights mix;
  Matrix align;                   // n_d x n_e, rows with zero mass are unsupervised
  aam1::Scale scale = aam1::Scale::kPreSoftmax;
};

// Masked entries become zero.
Matrix align_targets(const AlignMatrix& am);

struct LossResult {
  double value = 0.0;
  std::vector<double> grad_raw;        // aligned with mix.raw; zero outside the subset
  double grad_gamma = 0.0;
  std::vector<Matrix> grad_heads;      // aligned with head_mats
  std::size_t supervised_rows = 0;
};

// Sum over supervised decoder rows of the cross-entropy between the softmax
// of the mixed row (over encoder positions) and the normalized align row.
// Post-softmax inputs take the log of the mixed row directly, floored at
// 1e-12. Throws ValidationError on dimension mismatch and DegenerateError
// when no row is supervised.
LossResult guided_loss(const LossInput& inp);

// Largest relative error between analytic and central-difference gradients
// over every subset raw weight, gamma and `att_samples` head entries.
// Throws ValidationError unless eps is in [1e-6, 1e-3].
double grad_check(const LossInput& inp, double eps = 1e-5, std::uint64_t seed = 0,
                  std::size_t att_samples = 32);

// Full-batch gradient descent on raw weights and gamma minimizing the mean
// loss, starting from `init` (or the first input's weights).
MixWeights fit_mix(const std::vector<LossInput>& dataset, int steps, double lr);
MixWeights fit_mix(const std::vector<LossInput>& dataset, int steps, double lr, MixWeights init);

double mean_loss(const std::vector<LossInput>& dataset, const MixWeights& w);

}  // namespace amralign

#endif  // AMRALIGN_GUIDED_LOSS_H_
