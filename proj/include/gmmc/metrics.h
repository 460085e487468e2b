// Copyright 2026 The GMMC Authors. All Rights Reserved.
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

// MS-SSIM quality metric and the rate-distortion objective built on it.

#ifndef GMMC_METRICS_H_
#define GMMC_METRICS_H_

#include <array>
#include <cstddef>

#include "gmmc/codec.h"

namespace gmmc {

struct MsSsimConfig {
  std::array<double, 5> scale_weights = {0.0448, 0.2856, 0.3001, 0.2363,
                                         0.1333};
  size_t window_size = 11;
  double window_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }

  // Normalized 1-D Gaussian taps.
  std::vector<double> Window() const;
};

// Per-channel MS-SSIM averaged over channels. Contrast-structure terms at
// the four finer scales and the full SSIM at the coarsest one are clamped at
// zero and combined as a weighted geometric product. Inputs must share a
// shape with min(H, W) >= window_size * 16.
double MsSsim(const ImagePlane& a, const ImagePlane& b,
              const MsSsimConfig& config = {});

// 1 - MS-SSIM.
double Distortion(const ImagePlane& a, const ImagePlane& b,
                  const MsSsimConfig& config = {});

// Rates in bits per pixel. Throws kInvalidInput for negative rates or
// non-positive lambda.
double RdLoss(double rate_y_bpp, double rate_z_bpp, double distortion,
              double lambda);

struct RdReport {
  double rate_y_bits = 0;
  double rate_z_bits = 0;
  double bpp = 0;
  double ms_ssim = 0;
  double distortion = 0;
  double lambda = 0;
  double loss = 0;
};

RdReport MakeRdReport(double rate_y_bits, double rate_z_bits, size_t pixels,
                      double ms_ssim, double lambda);

}  // namespace gmmc

#endif  // GMMC_METRICS_H_
