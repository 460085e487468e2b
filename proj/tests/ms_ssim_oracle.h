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

// Brute-force MS-SSIM used as an independent reference in tests.

#ifndef GMMC_TESTS_MS_SSIM_ORACLE_H_
#define GMMC_TESTS_MS_SSIM_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <vector>

#include "gmmc/codec.h"

namespace gmmc {

// Full 2-D window sums and explicit pooling, one channel at a time.
using Grid = std::vector<std::vector<double>>;

inline Grid Pool(const Grid& g) {
  const size_t h = g.size(), w = g[0].size();
  auto at = [&](size_t y, size_t x) {
    return g[std::min(y, h - 1)][std::min(x, w - 1)];
  };
  Grid out((h + 1) / 2, std::vector<double>((w + 1) / 2));
  for (size_t y = 0; y < out.size(); ++y)
    for (size_t x = 0; x < out[0].size(); ++x)
      out[y][x] = 0.25 * (at(2 * y, 2 * x) + at(2 * y + 1, 2 * x) +
                          at(2 * y, 2 * x + 1) + at(2 * y + 1, 2 * x + 1));
  return out;
}

inline double OracleMsSsim(const ImagePlane& a, const ImagePlane& b) {
  const double weights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
  double win[11][11], wsum = 0;
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j)
      wsum += win[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / 4.5);
  const double c1 = 1e-4, c2 = 9e-4;
  double total = 0;
  for (size_t c = 0; c < a.channels(); ++c) {
    Grid ga(a.height(), std::vector<double>(a.width()));
    Grid gb = ga;
    for (size_t y = 0; y < a.height(); ++y)
      for (size_t x = 0; x < a.width(); ++x) {
        ga[y][x] = a.at(c, y, x);
        gb[y][x] = b.at(c, y, x);
      }
    double score = 1;
    for (int s = 0; s < 5; ++s) {
      const size_t oh = ga.size() - 10, ow = ga[0].size() - 10;
      double cs_sum = 0, ssim_sum = 0;
      for (size_t y = 0; y < oh; ++y) {
        for (size_t x = 0; x < ow; ++x) {
          double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
          for (int i = 0; i < 11; ++i) {
            for (int j = 0; j < 11; ++j) {
              const double w = win[i][j] / wsum;
              const double va = ga[y + i][x + j], vb = gb[y + i][x + j];
              ma += w * va;
              mb += w * vb;
              saa += w * va * va;
              sbb += w * vb * vb;
              sab += w * va * vb;
            }
          }
          const double cs = (2 * (sab - ma * mb) + c2) /
                            (saa - ma * ma + sbb - mb * mb + c2);
          cs_sum += cs;
          ssim_sum += cs * (2 * ma * mb + c1) / (ma * ma + mb * mb + c1);
        }
      }
      const double n = static_cast<double>(oh * ow);
      const double term = s == 4 ? ssim_sum / n : cs_sum / n;
      score *= std::pow(std::max(term, 0.0), weights[s]);
      ga = Pool(ga);
      gb = Pool(gb);
    }
    total += score;
  }
  return total / static_cast<double>(a.channels());
}

}  // namespace gmmc

#endif  // GMMC_TESTS_MS_SSIM_ORACLE_H_
