// Copyright 2026 The FogSpeech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small signal kernels shared by the pitch and intensity extractors.

#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace fogspeech::dsp {

template <typename Scalar>
using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Hann window sampled at bin centres, so no coefficient is exactly zero.
template <typename Scalar>
Array<Scalar> hann(Eigen::Index n) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  return (Scalar(0.5) -
          Scalar(0.5) * ((Array<Scalar>::LinSpaced(n, Scalar(0), Scalar(n - 1)) + Scalar(0.5)) *
                         (two_pi / Scalar(n)))
                            .cos())
      .eval();
}

/// Raw autocorrelation r(lag) = sum_t x(t) x(t + lag) for lag in [0, max_lag].
template <typename Derived>
Array<typename Derived::Scalar> autocorrelation(const Eigen::ArrayBase<Derived>& x,
                                                Eigen::Index max_lag) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = x.size();
  Array<Scalar> r = Array<Scalar>::Zero(max_lag + 1);
  for (Eigen::Index lag = 0; lag <= max_lag && lag < n; ++lag) {
    r[lag] = (x.head(n - lag) * x.tail(n - lag)).sum();
  }
  return r;
}

/// Vertex of the parabola through (-1, left), (0, centre), (1, right).
template <typename Scalar>
struct Vertex {
  Scalar offset;
  Scalar height;
};

template <typename Scalar>
Vertex<Scalar> parabolic_peak(Scalar left, Scalar centre, Scalar right) {
  const Scalar curvature = left - Scalar(2) * centre + right;
  if (!(curvature < Scalar(0))) return {Scalar(0), centre};
  const Scalar offset = Scalar(0.5) * (left - right) / curvature;
  const Scalar height = centre - Scalar(0.25) * (left - right) * offset;
  return {offset, height};
}

/// Unnormalised Gaussian weights exp(-0.5 ((t - centre) / sigma)^2) for
/// sample times t = (first + i) / rate.
template <typename Scalar>
Array<Scalar> gaussian_weights(Eigen::Index first, Eigen::Index count, Scalar rate,
                               Scalar centre_s, Scalar sigma_s) {
  const Array<Scalar> t =
      (Array<Scalar>::LinSpaced(count, Scalar(first), Scalar(first + count - 1)) / rate -
       centre_s) /
      sigma_s;
  return (Scalar(-0.5) * t.square()).exp();
}

}  // namespace fogspeech::dsp
