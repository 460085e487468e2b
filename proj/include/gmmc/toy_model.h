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

// Deterministic generator for the desk-scale model shipped with the codec.

#ifndef GMMC_TOY_MODEL_H_
#define GMMC_TOY_MODEL_H_

#include <cstddef>
#include <cstdint>

#include "gmmc/model_file.h"

namespace gmmc {

struct ToyModelConfig {
  size_t mixtures = 3;
  size_t latent_channels = 128;
  size_t hyper_latent_channels = 8;
  size_t context_channels = 16;
  size_t hyper_feature_channels = 16;
  size_t hidden = 32;
  double offset = 0.0;
  uint64_t seed = 2020;
};

// Basis rows are a color rotation times a 16x16 orthonormal DCT, ordered
// luma-first by frequency. Requires latent_channels <= 768,
// context_channels >= 4 and hidden >= 8 + hyper_feature_channels.
ModelFile MakeToyModel(const ToyModelConfig& config = {});

}  // namespace gmmc

#endif  // GMMC_TOY_MODEL_H_
