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

// gmmc: encode, decode, evaluate and allocate with the mixture codec.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 I/O failure,
// 3 model mismatch, 4 corrupt stream.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gmmc/codec.h"
#include "gmmc/error.h"
#include "gmmc/gmm_entropy.h"
#include "gmmc/image_io.h"
#include "gmmc/metrics.h"
#include "gmmc/model_file.h"
#include "gmmc/rate_allocator.h"
#include "json.hpp"

#ifndef GMMC_DEFAULT_MODEL
#define GMMC_DEFAULT_MODEL "models/toy-k3-n128.gmmp"
#endif

namespace {

using gmmc::Error;
using gmmc::ErrorCode;
using nlohmann::json;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError:
      return 2;
    case ErrorCode::kModelMismatch:
      return 3;
    case ErrorCode::kCorruptStream:
    case ErrorCode::kUnsupportedVersion:
    case ErrorCode::kTruncatedStream:
    case ErrorCode::kDecodeError:
      return 4;
    default:
      return 1;
  }
}

struct ModelArgs {
  std::string path = GMMC_DEFAULT_MODEL;
  std::optional<size_t> k;
  std::optional<size_t> n;
};

void AddModelArgs(CLI::App* cmd, ModelArgs& args) {
  cmd->add_option("--model", args.path, "model parameter file (GMMP)")
      ->capture_default_str();
  cmd->add_option("--k", args.k, "expected mixture count");
  cmd->add_option("--n", args.n, "expected latent channel count");
}

gmmc::CodecModel LoadModel(const ModelArgs& args) {
  gmmc::ModelFile file;
  gmmc::CodecModel model;
  try {
    file = gmmc::ModelFile::Load(args.path);
    model = gmmc::CodecModel::FromFile(file);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIoError) throw;
    throw Error(ErrorCode::kModelMismatch, args.path + ": " + e.what());
  }
  if (args.k && *args.k != model.mixtures()) {
    throw Error(ErrorCode::kModelMismatch,
                "--k " + std::to_string(*args.k) + " but model has K=" +
                    std::to_string(model.mixtures()));
  }
  if (args.n && *args.n != model.latent_channels()) {
    throw Error(ErrorCode::kModelMismatch,
                "--n " + std::to_string(*args.n) + " but model has N=" +
                    std::to_string(model.latent_channels()));
  }
  return model;
}

json LedgerJson(const gmmc::RateLedger& l) {
  return {{"estimated_bits", l.estimated_bits},
          {"quantized_bits", l.quantized_bits},
          {"actual_bits", l.actual_bits},
          {"symbols", l.symbols}};
}

void WriteJson(const std::string& path, const json& j) {
  const std::string text = j.dump(2) + "\n";
  gmmc::WriteFileBytes(path, {reinterpret_cast<const uint8_t*>(text.data()),
                              text.size()});
}

size_t DefaultThreads() {
  if (const char* env = std::getenv("GMMC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<size_t>(v);
    } catch (...) {
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned-image-compression entropy coder with discretized "
               "Gaussian mixture likelihoods"};
  app.require_subcommand(1);
  size_t threads = DefaultThreads();
  int verbosity = 0;
  app.add_option("--threads", threads, "worker threads (env GMMC_THREADS)")
      ->capture_default_str();
  app.add_flag("-v,--verbose", verbosity, "log progress to stderr");

  ModelArgs enc_model;
  std::string enc_in, enc_out, enc_report;
  size_t max_pixels = gmmc::EncodeOptions{}.max_pixels;
  auto* encode = app.add_subcommand("encode", "compress a PNG");
  AddModelArgs(encode, enc_model);
  encode->add_option("--in", enc_in, "input PNG")->required();
  encode->add_option("--out", enc_out, "output container")->required();
  encode->add_option("--report", enc_report, "JSON report path");
  encode->add_option("--max-pixels", max_pixels, "refuse larger images")
      ->capture_default_str();

  ModelArgs dec_model;
  std::string dec_in, dec_out, dec_report;
  auto* decode = app.add_subcommand("decode", "decompress to PNG");
  AddModelArgs(decode, dec_model);
  decode->add_option("--in", dec_in, "input container")->required();
  decode->add_option("--out", dec_out, "output PNG")->required();
  decode->add_option("--report", dec_report, "JSON report path");

  std::string orig, recon;
  std::optional<double> eval_lambda, eval_bits;
  auto* eval = app.add_subcommand("eval", "MS-SSIM and RD loss of a PNG pair");
  eval->add_option("--orig", orig, "reference PNG")->required();
  eval->add_option("--recon", recon, "reconstructed PNG")->required();
  eval->add_option("--lambda", eval_lambda, "rate-distortion multiplier");
  eval->add_option("--bits", eval_bits, "compressed size in bits");

  std::string table, alloc_out;
  double budget_bpp = 0.15;
  int64_t granularity = 1024;
  auto* allocate =
      app.add_subcommand("allocate", "choose one lambda per image under a budget");
  allocate->add_option("--table", table, "CSV image_id,pixels,lambda,bpp,ms_ssim")
      ->required();
  allocate->add_option("--budget-bpp", budget_bpp)->capture_default_str();
  allocate->add_option("--granularity", granularity, "DP cell size in bits")
      ->capture_default_str();
  allocate->add_option("--out", alloc_out, "assignment CSV (default stdout)");

  size_t dump_k = 1;
  std::vector<double> weights, means, scales;
  auto* pmf_dump = app.add_subcommand("pmf-dump", "print a mixture's 512-symbol pmf");
  pmf_dump->add_option("--k", dump_k, "mixture count")->required();
  pmf_dump->add_option("--weights", weights)->delimiter(',')->required();
  pmf_dump->add_option("--means", means)->delimiter(',')->required();
  pmf_dump->add_option("--scales", scales)->delimiter(',')->required();

  CLI11_PARSE(app, argc, argv);

  auto log = [&](const std::string& msg) {
    if (verbosity > 0) std::cerr << msg << '\n';
  };

  try {
    if (*encode) {
      const gmmc::CodecModel model = LoadModel(enc_model);
      const gmmc::ImagePlane image = gmmc::ReadPng(enc_in);
      gmmc::EncodeOptions options;
      options.threads = threads;
      options.max_pixels = max_pixels;
      const gmmc::EncodeResult r = gmmc::EncodeImage(image, model, options);
      gmmc::WriteFileBytes(enc_out, r.bytes);
      log("encoded " + std::to_string(r.bytes.size()) + " bytes, bpp " +
          std::to_string(r.bpp));
      if (!enc_report.empty()) {
        WriteJson(enc_report,
                  {{"schema", 1},
                   {"command", "encode"},
                   {"width", image.width()},
                   {"height", image.height()},
                   {"container_bytes", r.bytes.size()},
                   {"bpp", r.bpp},
                   {"zero_channels", r.zero_channels},
                   {"y", LedgerJson(r.y_rate)},
                   {"z", LedgerJson(r.z_rate)},
                   {"model_bits_y", r.model_bits_y},
                   {"estimated_bits", r.y_rate.estimated_bits + r.z_rate.estimated_bits},
                   {"actual_bits", r.y_rate.actual_bits + r.z_rate.actual_bits},
                   {"latent_checksum", gmmc::LatentChecksum(r.y_hat)},
                   {"hyper_checksum", gmmc::LatentChecksum(r.z_hat)}});
      }
    } else if (*decode) {
      const gmmc::CodecModel model = LoadModel(dec_model);
      const std::vector<uint8_t> bytes = gmmc::ReadFileBytes(dec_in);
      const gmmc::DecodeResult r = gmmc::DecodeImage(bytes, model);
      gmmc::WritePng(dec_out, r.image);
      log("decoded " + std::to_string(r.image.width()) + "x" +
          std::to_string(r.image.height()));
      if (!dec_report.empty()) {
        WriteJson(dec_report, {{"schema", 1},
                               {"command", "decode"},
                               {"width", r.image.width()},
                               {"height", r.image.height()},
                               {"latent_checksum", gmmc::LatentChecksum(r.y_hat)},
                               {"hyper_checksum", gmmc::LatentChecksum(r.z_hat)}});
      }
    } else if (*eval) {
      const gmmc::ImagePlane a = gmmc::ReadPng(orig);
      const gmmc::ImagePlane b = gmmc::ReadPng(recon);
      const double score = gmmc::MsSsim(a, b);
      json out = {{"schema", 1},
                  {"ms_ssim", score},
                  {"distortion", 1.0 - score}};
      if (eval_bits) {
        if (*eval_bits < 0) throw Error(ErrorCode::kInvalidInput, "--bits < 0");
        const double bpp =
            *eval_bits / static_cast<double>(a.width() * a.height());
        out["bpp"] = bpp;
        if (eval_lambda) {
          out["lambda"] = *eval_lambda;
          out["rd_loss"] = gmmc::RdLoss(bpp, 0.0, 1.0 - score, *eval_lambda);
        }
      }
      std::cout << out.dump(2) << '\n';
    } else if (*allocate) {
      std::ifstream in(table);
      if (!in) throw Error(ErrorCode::kIoError, "cannot open " + table);
      const gmmc::AllocationProblem problem(gmmc::ReadRdTable(in), budget_bpp);
      const gmmc::Allocation a = gmmc::AllocateDp(problem, granularity);
      if (alloc_out.empty()) {
        gmmc::WriteAllocationCsv(std::cout, a, problem);
      } else {
        std::ofstream out(alloc_out);
        if (!out) throw Error(ErrorCode::kIoError, "cannot create " + alloc_out);
        gmmc::WriteAllocationCsv(out, a, problem);
      }
      if (!a.feasible) log("budget infeasible; reporting minimum-rate assignment");
    } else if (*pmf_dump) {
      if (weights.size() != dump_k || means.size() != dump_k ||
          scales.size() != dump_k) {
        throw Error(ErrorCode::kInvalidInput,
                    "--weights, --means and --scales need K values each");
      }
      const gmmc::PmfTable t =
          gmmc::ComputePmfTable(gmmc::GmmParams::Create(weights, means, scales));
      std::string out = "symbol,probability\n";
      char line[64];
      for (size_t j = 0; j < t.size(); ++j) {
        std::snprintf(line, sizeof(line), "%d,%.17g\n",
                      gmmc::SymbolAlphabet::SymbolAt(j), t[j]);
        out += line;
      }
      std::cout << out;
    }
  } catch (const Error& e) {
    std::cerr << "gmmc: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "gmmc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
