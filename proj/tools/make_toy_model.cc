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

// Writes the deterministic desk-scale model file.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gmmc/toy_model.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate a toy GMMP model file"};
  gmmc::ToyModelConfig cfg;
  std::string out;
  app.add_option("--out", out, "output path")->required();
  app.add_option("--k", cfg.mixtures)->capture_default_str();
  app.add_option("--n", cfg.latent_channels)->capture_default_str();
  app.add_option("--nz", cfg.hyper_latent_channels)->capture_default_str();
  app.add_option("--seed", cfg.seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    gmmc::MakeToyModel(cfg).Save(out);
  } catch (const std::exception& e) {
    std::cerr << "make_toy_model: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
