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

#include "amralign/guided_loss.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "amralign/errors.h"

namespace amralign {

namespace {

constexpr double kLogFloor = 1e-12;

void check_dims(const LossInput& inp) {
  if (inp.head_mats.empty()) throw ValidationError("guided loss needs at least one head");
  const std::size_t rows = inp.align.rows(), cols = inp.align.cols();
  for (const Matrix& m : inp.head_mats) {
    if (m.rows() != rows || m.cols() != cols) {
      throw ValidationError("head matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            ", align matrix is " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  if (inp.mix.raw.size() != inp.head_mats.size()) {
    throw ValidationError("mix has " + std::to_string(inp.mix.raw.size()) + " weights for " +
                          std::to_string(inp.head_mats.size()) + " heads");
  }
}

}  // namespace

Matrix align_targets(const AlignMatrix& am) {
  Matrix out = am.values;
  for (std::size_t i = 0; i < am.masked.size(); ++i) {
    if (am.masked[i]) out.data()[i] = 0.0;
  }
  return out;
}

LossResult guided_loss(const LossInput& inp) {
  check_dims(inp);
  const std::size_t rows = inp.align.rows(), cols = inp.align.cols();
  const std::vector<int> heads = inp.mix.heads();
  const std::vector<double> s = inp.mix.softmax();
  const double gamma = inp.mix.gamma;

  Matrix unscaled(rows, cols);  // sum_h s_h A_h
  for (std::size_t k = 0; k < heads.size(); ++k) {
    auto a = inp.head_mats[static_cast<std::size_t>(heads[k])].data();
    auto u = unscaled.data();
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += s[k] * a[i];
  }

  LossResult res;
  Matrix g(rows, cols);  // dL / d mixed
  for (std::size_t r = 0; r < rows; ++r) {
    auto target = inp.align.row(r);
    double mass = 0.0;
    for (double v : target) {
      if (v < 0) throw ValidationError("align matrix has a negative entry");
      mass += v;
    }
    if (mass <= 0.0) continue;
    ++res.supervised_rows;
    std::vector<double> mixed(cols);
    for (std::size_t c = 0; c < cols; ++c) mixed[c] = gamma * unscaled(r, c);
    if (inp.scale == aam1::Scale::kPreSoftmax) {
      double peak = *std::max_element(mixed.begin(), mixed.end());
      double z = 0.0;
      for (double v : mixed) z += std::exp(v - peak);
      double log_z = peak + std::log(z);
      for (std::size_t c = 0; c < cols; ++c) {
        double q = target[c] / mass;
        double p = std::exp(mixed[c] - log_z);
        res.value -= q * (mixed[c] - log_z);
        g(r, c) = p - q;
      }
    } else {
      for (std::size_t c = 0; c < cols; ++c) {
        double q = target[c] / mass;
        if (q == 0.0) continue;
        if (mixed[c] > kLogFloor) {
          res.value -= q * std::log(mixed[c]);
          g(r, c) = -q / mixed[c];
        } else {
          res.value -= q * std::log(kLogFloor);
        }
      }
    }
  }
  if (res.supervised_rows == 0) throw DegenerateError("no supervised rows in the align matrix");

  auto gd = g.data();
  auto ud = unscaled.data();
  for (std::size_t i = 0; i < gd.size(); ++i) res.grad_gamma += gd[i] * ud[i];

  res.grad_heads.assign(inp.head_mats.size(), Matrix(rows, cols));
  std::vector<double> grad_s(heads.size(), 0.0);
  for (std::size_t k = 0; k < heads.size(); ++k) {
    auto h = static_cast<std::size_t>(heads[k]);
    auto a = inp.head_mats[h].data();
    auto out = res.grad_heads[h].data();
    for (std::size_t i = 0; i < gd.size(); ++i) {
      out[i] = gamma * s[k] * gd[i];
      grad_s[k] += gamma * gd[i] * a[i];
    }
  }
  double expected = 0.0;
  for (std::size_t k = 0; k < heads.size(); ++k) expected += s[k] * grad_s[k];
  res.grad_raw.assign(inp.mix.raw.size(), 0.0);
  for (std::size_t k = 0; k < heads.size(); ++k) {
    res.grad_raw[static_cast<std::size_t>(heads[k])] = s[k] * (grad_s[k] - expected);
  }
  return res;
}

double grad_check(const LossInput& inp, double eps, std::uint64_t seed, std::size_t att_samples) {
  if (!(eps >= 1e-6 && eps <= 1e-3)) throw ValidationError("grad_check eps must lie in [1e-6, 1e-3]");
  const LossResult analytic = guided_loss(inp);
  double worst = 0.0;
  auto compare = [&](double a, double n) {
    double denom = std::max({std::abs(a), std::abs(n), 1e-6});
    worst = std::max(worst, std::abs(a - n) / denom);
  };
  LossInput probe = inp;
  auto central = [&](double& slot) {
    const double saved = slot;
    slot = saved + eps;
    double up = guided_loss(probe).value;
    slot = saved - eps;
    double down = guided_loss(probe).value;
    slot = saved;
    return (up - down) / (2 * eps);
  };

  for (int h : inp.mix.heads()) {
    auto k = static_cast<std::size_t>(h);
    compare(analytic.grad_raw[k], central(probe.mix.raw[k]));
  }
  compare(analytic.grad_gamma, central(probe.mix.gamma));

  std::mt19937_64 rng(seed);
  const std::size_t per_head = inp.align.rows() * inp.align.cols();
  const std::size_t total = per_head * inp.head_mats.size();
  std::uniform_int_distribution<std::size_t> pick(0, total - 1);
  const std::size_t n = std::min(att_samples, total);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t flat = att_samples >= total ? t : pick(rng);
    std::size_t h = flat / per_head, i = flat % per_head;
    compare(analytic.grad_heads[h].data()[i], central(probe.head_mats[h].data()[i]));
  }
  return worst;
}

double mean_loss(const std::vector<LossInput>& dataset, const MixWeights& w) {
  if (dataset.empty()) throw ValidationError("empty dataset");
  double total = 0.0;
  for (const LossInput& inp : dataset) {
    LossInput copy = inp;
    copy.mix = w;
    total += guided_loss(copy).value;
  }
  return total / static_cast<double>(dataset.size());
}

MixWeights fit_mix(const std::vector<LossInput>& dataset, int steps, double lr) {
  if (dataset.empty()) throw ValidationError("empty dataset");
  return fit_mix(dataset, steps, lr, dataset.front().mix);
}

MixWeights fit_mix(const std::vector<LossInput>& dataset, int steps, double lr, MixWeights init) {
  if (dataset.empty()) throw ValidationError("empty dataset");
  MixWeights w = std::move(init);
  const double scale = 1.0 / static_cast<double>(dataset.size());
  for (int step = 0; step < steps; ++step) {
    std::vector<double> grad_raw(w.raw.size(), 0.0);
    double grad_gamma = 0.0;
    for (const LossInput& inp : dataset) {
      LossInput copy = inp;
      copy.mix = w;
      LossResult r = guided_loss(copy);
      for (std::size_t k = 0; k < grad_raw.size(); ++k) grad_raw[k] += scale * r.grad_raw[k];
      grad_gamma += scale * r.grad_gamma;
    }
    for (std::size_t k = 0; k < grad_raw.size(); ++k) w.raw[k] -= lr * grad_raw[k];
    w.gamma -= lr * grad_gamma;
  }
  return w;
}

}  // namespace amralign
