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

#include "gmmc/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace gmmc {
namespace {

struct Plane {
  size_t h = 0, w = 0;
  std::vector<double> v;

  Plane() = default;
  Plane(size_t hh, size_t ww) : h(hh), w(ww), v(hh * ww, 0.0) {}
  double& at(size_t y, size_t x) { return v[y * w + x]; }
  double at(size_t y, size_t x) const { return v[y * w + x]; }
};

Plane ChannelOf(const ImagePlane& img, size_t c) {
  Plane p(img.height(), img.width());
  std::copy(img.data().begin() + c * img.shape().plane(),
            img.data().begin() + (c + 1) * img.shape().plane(), p.v.begin());
  return p;
}

// Separable "valid" filtering: output shrinks by taps - 1 per axis.
Plane Filter(const Plane& in, const std::vector<double>& taps) {
  const size_t n = taps.size();
  Plane tmp(in.h, in.w - n + 1);
  for (size_t y = 0; y < in.h; ++y) {
    for (size_t x = 0; x < tmp.w; ++x) {
      double s = 0;
      for (size_t i = 0; i < n; ++i) s += taps[i] * in.at(y, x + i);
      tmp.at(y, x) = s;
    }
  }
  Plane out(in.h - n + 1, tmp.w);
  for (size_t y = 0; y < out.h; ++y) {
    for (size_t x = 0; x < out.w; ++x) {
      double s = 0;
      for (size_t i = 0; i < n; ++i) s += taps[i] * tmp.at(y + i, x);
      out.at(y, x) = s;
    }
  }
  return out;
}

Plane Product(const Plane& a, const Plane& b) {
  Plane p(a.h, a.w);
  for (size_t i = 0; i < p.v.size(); ++i) p.v[i] = a.v[i] * b.v[i];
  return p;
}

// 2x2 mean pooling; odd sizes repeat their last row or column first.
Plane Downsample(const Plane& in) {
  Plane out((in.h + 1) / 2, (in.w + 1) / 2);
  for (size_t y = 0; y < out.h; ++y) {
    const size_t y0 = 2 * y, y1 = std::min(2 * y + 1, in.h - 1);
    for (size_t x = 0; x < out.w; ++x) {
      const size_t x0 = 2 * x, x1 = std::min(2 * x + 1, in.w - 1);
      out.at(y, x) =
          0.25 * (in.at(y0, x0) + in.at(y0, x1) + in.at(y1, x0) + in.at(y1, x1));
    }
  }
  return out;
}

struct ScaleStats {
  double cs;    // mean contrast-structure term
  double ssim;  // mean luminance * contrast-structure
};

ScaleStats Ssim(const Plane& a, const Plane& b, const std::vector<double>& taps,
                double c1, double c2) {
  const Plane mu_a = Filter(a, taps);
  const Plane mu_b = Filter(b, taps);
  const Plane aa = Filter(Product(a, a), taps);
  const Plane bb = Filter(Product(b, b), taps);
  const Plane ab = Filter(Product(a, b), taps);
  double cs_sum = 0, ssim_sum = 0;
  for (size_t i = 0; i < mu_a.v.size(); ++i) {
    const double ma = mu_a.v[i], mb = mu_b.v[i];
    const double var_a = aa.v[i] - ma * ma;
    const double var_b = bb.v[i] - mb * mb;
    const double cov = ab.v[i] - ma * mb;
    const double lum = (2 * ma * mb + c1) / (ma * ma + mb * mb + c1);
    const double cs = (2 * cov + c2) / (var_a + var_b + c2);
    cs_sum += cs;
    ssim_sum += lum * cs;
  }
  const double n = static_cast<double>(mu_a.v.size());
  return {cs_sum / n, ssim_sum / n};
}

}  // namespace

std::vector<double> MsSsimConfig::Window() const {
  std::vector<double> taps(window_size);
  const double center = 0.5 * (static_cast<double>(window_size) - 1);
  double sum = 0;
  for (size_t i = 0; i < window_size; ++i) {
    const double d = static_cast<double>(i) - center;
    taps[i] = std::exp(-d * d / (2 * window_sigma * window_sigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

double MsSsim(const ImagePlane& a, const ImagePlane& b,
              const MsSsimConfig& config) {
  if (!(a.shape() == b.shape())) {
    throw Error(ErrorCode::kShapeError, "MS-SSIM inputs differ in shape: " +
                                            a.shape().ToString() + " vs " +
                                            b.shape().ToString());
  }
  const size_t scales = config.scale_weights.size();
  const size_t min_dim = config.window_size << (scales - 1);
  if (a.channels() == 0 || std::min(a.height(), a.width()) < min_dim) {
    throw Error(ErrorCode::kInvalidInput,
                "MS-SSIM needs min(H, W) >= " + std::to_string(min_dim) +
                    ", got " + a.shape().ToString());
  }
  const std::vector<double> taps = config.Window();
  double total = 0;
  for (size_t c = 0; c < a.channels(); ++c) {
    Plane pa = ChannelOf(a, c);
    Plane pb = ChannelOf(b, c);
    double score = 1;
    for (size_t s = 0; s < scales; ++s) {
      const ScaleStats st = Ssim(pa, pb, taps, config.c1(), config.c2());
      const double term = std::max(s + 1 == scales ? st.ssim : st.cs, 0.0);
      score *= std::pow(term, config.scale_weights[s]);
      if (s + 1 < scales) {
        pa = Downsample(pa);
        pb = Downsample(pb);
      }
    }
    total += score;
  }
  return total / static_cast<double>(a.channels());
}

double Distortion(const ImagePlane& a, const ImagePlane& b,
                  const MsSsimConfig& config) {
  return 1.0 - MsSsim(a, b, config);
}

double RdLoss(double rate_y_bpp, double rate_z_bpp, double distortion,
              double lambda) {
  if (rate_y_bpp < 0 || rate_z_bpp < 0) {
    throw Error(ErrorCode::kInvalidInput, "rates must be nonnegative");
  }
  if (!(lambda > 0)) {
    throw Error(ErrorCode::kInvalidInput, "lambda must be positive");
  }
  return rate_y_bpp + rate_z_bpp + lambda * distortion;
}

RdReport MakeRdReport(double rate_y_bits, double rate_z_bits, size_t pixels,
                      double ms_ssim, double lambda) {
  if (pixels == 0) {
    throw Error(ErrorCode::kInvalidInput, "pixel count must be positive");
  }
  RdReport r;
  r.rate_y_bits = rate_y_bits;
  r.rate_z_bits = rate_z_bits;
  const double px = static_cast<double>(pixels);
  r.bpp = (rate_y_bits + rate_z_bits) / px;
  r.ms_ssim = ms_ssim;
  r.distortion = 1.0 - ms_ssim;
  r.lambda = lambda;
  r.loss = RdLoss(rate_y_bits / px, rate_z_bits / px, r.distortion, lambda);
  return r;
}

}  // namespace gmmc
