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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Runtime limits are part of each criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gmmc/codec.h"
#include "gmmc/context_model.h"
#include "gmmc/error.h"
#include "gmmc/gmm_entropy.h"
#include "gmmc/image_io.h"
#include "gmmc/metrics.h"
#include "gmmc/model_file.h"
#include "gmmc/range_coder.h"
#include "gmmc/rate_allocator.h"
#include "gmmc/toy_model.h"
#include "ms_ssim_oracle.h"

namespace gmmc {
namespace {

const std::string kSourceDir = GMMC_SOURCE_DIR;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

GmmParams RandomParams(std::mt19937_64& rng, size_t k) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> w(k), m(k), s(k);
  double sum = 0;
  for (size_t i = 0; i < k; ++i) {
    w[i] = u(rng);
    sum += w[i];
    // Means reach past both alphabet edges; scales span the floor to wide.
    m[i] = -300 + 600 * u(rng);
    s[i] = std::exp(std::log(1e-3) + u(rng) * (std::log(300.0) - std::log(1e-3)));
  }
  if (sum == 0) w[0] = sum = 1;
  for (double& v : w) v /= sum;
  return GmmParams::Create(w, m, s);
}

double ErfCdf(double x, const GmmParams& p) {
  double c = 0;
  for (size_t k = 0; k < p.k(); ++k) {
    c += p.weight(k) * 0.5 * (1 + std::erf((x - p.mean(k)) / (p.scale(k) * std::sqrt(2.0))));
  }
  return c;
}

void LikelihoodNormalization(Outcome& out) {
  std::mt19937_64 rng(1);
  const size_t ks[] = {1, 2, 3, 5};
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const PmfTable t = ComputePmfTable(RandomParams(rng, ks[i % 4]));
    const double sum = std::accumulate(t.begin(), t.end(), 0.0);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  out.Require(worst <= 1e-9, "sum deviates");
  out.detail << "10000 mixtures, max |sum - 1| = " << worst;
}

void EdgeRuleExactness(Outcome& out) {
  std::mt19937_64 rng(2);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    GmmParams p = RandomParams(rng, 1 + i % 5);
    if (i % 2) {
      // Concentrate mass near the edges so both terms are sizable.
      std::vector<double> w, m, s;
      for (size_t k = 0; k < p.k(); ++k) {
        w.push_back(p.weight(k));
        m.push_back((k % 2 ? 255.0 : -255.0) + p.mean(k) / 100);
        s.push_back(std::min(p.scale(k), 5.0));
      }
      p = GmmParams::Create(w, m, s);
    }
    const double lo = DiscretizedPmf(SymbolAlphabet::kLo, p);
    const double hi = DiscretizedPmf(SymbolAlphabet::kHi, p);
    worst = std::max(worst, std::abs(lo - (ErfCdf(-254.5, p) - 0.0)));
    worst = std::max(worst, std::abs(hi - (1.0 - ErfCdf(255.5, p))));
  }
  out.Require(worst <= 1e-12, "edge mismatch");
  out.detail << "10000 mixtures, max edge error vs erf = " << worst;
}

// Deterministic providers; each instance must see the same call sequence on
// the encode and decode sides.
class ProviderFactory {
 public:
  ProviderFactory(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 48; ++i) {
      bank_.push_back(QuantizeCdf(ComputePmfTable(
          RandomParamsNear(rng, -30 + 60 * u(rng), 0.02 + 40 * u(rng) * u(rng)))));
    }
  }

  CdfProvider Static(size_t which) const {
    const QuantizedCdf cdf = bank_[which % bank_.size()];
    return [cdf](size_t, std::span<const int32_t>) { return cdf; };
  }

  // The table depends on the previous symbol.
  CdfProvider Contextual() const {
    const auto* bank = &bank_;
    return [bank](size_t, std::span<const int32_t> prev) {
      const size_t key = prev.empty() ? 0 : static_cast<size_t>(prev.back() + 255);
      return (*bank)[key % bank->size()];
    };
  }

  // Laplace-smoothed symbol counts, refreshed every 64 symbols.
  static CdfProvider Counting() {
    struct State {
      std::vector<double> counts = std::vector<double>(SymbolAlphabet::kSize, 1.0);
      size_t seen = 0;
      QuantizedCdf cdf;
    };
    auto st = std::make_shared<State>();
    st->cdf = Refresh(st->counts);
    return [st](size_t i, std::span<const int32_t> prev) {
      for (; st->seen < i; ++st->seen) {
        st->counts[SymbolAlphabet::IndexOf(prev[st->seen])] += 1;
      }
      if (i % 64 == 0 && i > 0) st->cdf = Refresh(st->counts);
      return st->cdf;
    };
  }

 private:
  static GmmParams RandomParamsNear(std::mt19937_64& rng, double mean, double scale) {
    std::uniform_real_distribution<double> u(0, 1);
    const double w[2] = {0.7, 0.3};
    const double m[2] = {mean, mean + 20 * (u(rng) - 0.5)};
    const double s[2] = {scale, 1 + 10 * u(rng)};
    return GmmParams::Create(w, m, s);
  }

  static QuantizedCdf Refresh(const std::vector<double>& counts) {
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    std::vector<double> pmf(counts.size());
    for (size_t j = 0; j < counts.size(); ++j) pmf[j] = counts[j] / total;
    return QuantizedCdf::FromPmf(pmf);
  }

  std::vector<QuantizedCdf> bank_;
};

void CoderRoundTrip(Outcome& out) {
  std::mt19937_64 rng(3);
  const ProviderFactory factory(rng);
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> noise(0, 1);
  size_t total_symbols = 0, longest = 0;
  double worst_margin = -std::numeric_limits<double>::infinity();
  for (int seq = 0; seq < 1000; ++seq) {
    // Log-uniform lengths in [1, 1e5]; every tenth sequence is full length.
    const size_t n = seq % 10 == 0 ? 100000
                                   : static_cast<size_t>(std::exp(u(rng) * std::log(1e5)));
    const double center = -40 + 80 * u(rng), spread = 0.1 + 30 * u(rng) * u(rng);
    std::vector<int32_t> symbols(n);
    for (auto& s : symbols) {
      s = u(rng) < 0.001 ? (rng() & 1 ? SymbolAlphabet::kHi : SymbolAlphabet::kLo)
                         : QuantizeValue(center + spread * noise(rng));
    }
    std::function<CdfProvider()> make;
    switch (seq % 3) {
      case 0: make = [&, seq] { return factory.Static(seq); }; break;
      case 1: make = [&] { return factory.Contextual(); }; break;
      default: make = [] { return ProviderFactory::Counting(); }; break;
    }
    const Bitstream stream = EncodeSymbols(symbols, make());
    const std::vector<int32_t> back = DecodeSymbols(stream, make(), n);
    out.Require(back == symbols, "sequence " + std::to_string(seq) + " differs");

    const CdfProvider oracle = make();
    double cross = 0;
    for (size_t i = 0; i < n; ++i) {
      const QuantizedCdf cdf = oracle(i, std::span<const int32_t>(symbols.data(), i));
      cross += 16.0 - std::log2(static_cast<double>(
                          cdf.freq(SymbolAlphabet::IndexOf(symbols[i]))));
    }
    const double bits = 8.0 * static_cast<double>(stream.bytes.size());
    out.Require(bits <= cross + 64, "sequence " + std::to_string(seq) + " over bound");
    worst_margin = std::max(worst_margin, bits - cross);
    total_symbols += n;
    longest = std::max(longest, n);
  }
  out.detail << "1000 sequences, " << total_symbols << " symbols, longest "
             << longest << ", max(actual - cross-entropy) = " << worst_margin
             << " bits";
}

ImagePlane RandomImage(std::mt19937_64& rng, size_t h, size_t w) {
  ImagePlane img(Shape3{3, h, w});
  std::uniform_real_distribution<double> u(0, 1);
  // Half the images are smooth so that zero channels and small symbols occur.
  const bool smooth = rng() & 1;
  const double fx = 0.02 + 0.2 * u(rng), fy = 0.02 + 0.2 * u(rng);
  for (size_t c = 0; c < 3; ++c) {
    const double ph = 6 * u(rng);
    for (size_t y = 0; y < h; ++y)
      for (size_t x = 0; x < w; ++x)
        img.at(c, y, x) = smooth ? 0.5 + 0.4 * std::sin(fx * x + ph) * std::cos(fy * y)
                                 : u(rng);
  }
  return img;
}

const CodecModel& ShippedModel() {
  static const CodecModel m = CodecModel::FromFile(
      ModelFile::Load(kSourceDir + "/models/toy-k3-n128.gmmp"));
  return m;
}

void LatentLosslessness(Outcome& out) {
  std::mt19937_64 rng(4);
  size_t bytes = 0, zero_channels = 0;
  for (int i = 0; i < 100; ++i) {
    const ImagePlane img = RandomImage(rng, 64, 64);
    const EncodeResult enc = EncodeImage(img, ShippedModel());
    const BitstreamContainer parsed = BitstreamContainer::Parse(enc.bytes);
    const uint32_t crc = Crc32(std::span(enc.bytes).first(enc.bytes.size() - 4));
    const uint8_t* t = enc.bytes.data() + enc.bytes.size() - 4;
    const uint32_t stored = t[0] | t[1] << 8 | t[2] << 16 | uint32_t{t[3]} << 24;
    out.Require(crc == stored && parsed.main_payload == enc.container.main_payload,
                "container " + std::to_string(i) + " crc");
    const DecodeResult dec = DecodeImage(enc.bytes, ShippedModel());
    out.Require(dec.y_hat == enc.y_hat && dec.z_hat == enc.z_hat,
                "image " + std::to_string(i) + " latents differ");
    bytes += enc.bytes.size();
    zero_channels += enc.zero_channels;
  }
  out.detail << "100 images 64x64, " << bytes << " container bytes, "
             << zero_channels << " skipped channels, all latents equal";
}

void AccelerationEquivalences(Outcome& out) {
  const CodecModel& model = ShippedModel();
  std::mt19937_64 rng(5);
  std::vector<ImagePlane> images = {ReadPng(kSourceDir + "/testdata/sample.png")};
  for (int i = 0; i < 8; ++i) images.push_back(RandomImage(rng, 64 * (1 + i % 3), 128));
  size_t positions = 0;
  for (const ImagePlane& img : images) {
    const EncodeResult enc = EncodeImage(img, model);
    const RealTensor hyper = model.HyperFeatures(enc.z_hat, enc.y_hat.shape());
    const GmmParamTensor full = ForwardParams(enc.y_hat, hyper, model.context());
    GmmParamTensor trace;
    const std::vector<bool> skip = UnpackChannelFlags(
        enc.container.zero_flags, model.latent_channels());
    Bitstream stream{enc.container.main_payload, 8 * enc.container.main_payload.size()};
    const LatentTensor y = SerialDecode(stream, hyper, model.context(),
                                        enc.y_hat.shape(), skip, &trace);
    out.Require(y == enc.y_hat, "serial decode differs");
    // Every double of every mixture must match.
    out.Require(trace == full, "window parameters differ from full forward");
    positions += full.height() * full.width();
  }
  out.detail << "(a) " << positions << " positions, window == full forward at 0 ulps; ";

  // A tensor with both zero and nonzero channels.
  ImagePlane img = RandomImage(rng, 64, 64);
  EncodeResult skip = EncodeImage(img, model);
  for (int tries = 0; skip.zero_channels == 0 && tries < 50; ++tries) {
    img = RandomImage(rng, 64, 64);
    skip = EncodeImage(img, model);
  }
  EncodeOptions no_skip;
  no_skip.skip_zero_channels = false;
  const EncodeResult plain = EncodeImage(img, model, no_skip);
  out.Require(plain.y_hat == skip.y_hat, "same tensor for both encodings");
  const size_t flag_bytes = skip.container.zero_flags.size();
  out.Require(model.latent_channels() == 128 && flag_bytes == 16,
              "flag header is not 16 bytes at N=128");
  out.Require(skip.container.main_payload.size() < plain.container.main_payload.size(),
              "skip did not shrink the main payload");
  out.detail << "(b) N=" << model.latent_channels() << ", fixed header "
             << BitstreamContainer::kFixedHeaderBytes << " bytes, flag bytes " << flag_bytes
             << ", " << skip.zero_channels << " zero channels, main payload "
             << skip.container.main_payload.size() << " < "
             << plain.container.main_payload.size() << " bytes unskipped";
}

void KnapsackCorrectness(Outcome& out) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  int agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 1 + rng() % 8;
    std::vector<ImageOptions> images;
    uint64_t px = 0;
    for (size_t i = 0; i < n; ++i) {
      ImageOptions im{"i" + std::to_string(i), 500 + rng() % 3000, {}};
      for (double lambda : {4.5, 6.0, 10.0, 14.0}) {
        im.options.push_back(RdPoint::FromBpp(lambda, 0.9 + 0.1 * u(rng),
                                              2.0 * u(rng), im.pixel_count));
      }
      px += im.pixel_count;
      images.push_back(im);
    }
    const AllocationProblem p(images, 2.0 * u(rng) * n * 2000 / static_cast<double>(px));
    const Allocation dp = AllocateDp(p, 1);
    const Allocation bf = AllocateBruteforce(p);
    const bool same = dp.feasible == bf.feasible &&
                      std::abs(dp.objective - bf.objective) <= 1e-12 &&
                      dp.total_bits == bf.total_bits;
    agree += same;
  }
  out.Require(agree == 1000, "DP differs from enumeration");
  out.detail << agree << "/1000 DP == brute force; ";

  std::ifstream in(kSourceDir + "/testdata/lambda_corpus.csv");
  const AllocationProblem corpus(ReadRdTable(in), 0.15);
  const double want[4][2] = {
      {0.9716, 0.1254}, {0.9755, 0.1487}, {0.9813, 0.1999}, {0.9845, 0.2424}};
  for (size_t o = 0; o < 4; ++o) {
    const AllocationSummary s =
        Summarize(Evaluate(corpus, std::vector<size_t>(corpus.images().size(), o)), corpus);
    out.Require(s.mean_ms_ssim == want[o][0] && s.aggregate_bpp == want[o][1],
                "uniform summary " + std::to_string(o));
    out.detail << "(" << s.mean_ms_ssim << ", " << s.aggregate_bpp << ") ";
  }
  const Allocation a = AllocateDp(corpus);
  const AllocationSummary s = Summarize(a, corpus);
  out.Require(a.feasible && s.mean_ms_ssim >= 0.9755, "0.15 bpp allocation");
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "; %zu images at 0.15 bpp: feasible=%d mean MS-SSIM %.6f at %.6f bpp",
                corpus.images().size(), a.feasible ? 1 : 0, s.mean_ms_ssim,
                s.aggregate_bpp);
  out.detail << buf;
}

ImagePlane AddNoise(const ImagePlane& img, double sigma, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0, sigma);
  ImagePlane out = img;
  for (double& v : out.data()) v = std::clamp(v + n(rng), 0.0, 1.0);
  return out;
}

void MsSsimSanity(Outcome& out) {
  const ImagePlane sample = ReadPng(kSourceDir + "/testdata/sample.png");
  const ImagePlane noisy = ReadPng(kSourceDir + "/testdata/sample_noisy.png");
  const ImagePlane nomid = ReadPng(kSourceDir + "/testdata/no_midgray.png");
  const double identity = MsSsim(sample, sample);
  out.Require(std::abs(identity - 1) <= 1e-9, "identity");

  const DecodeResult recon =
      DecodeImage(ReadFileBytes(kSourceDir + "/testdata/sample.gmc"), ShippedModel());
  const std::pair<const ImagePlane*, ImagePlane> pairs[] = {
      {&sample, noisy}, {&sample, recon.image}, {&nomid, AddNoise(nomid, 0.08, 7)}};
  double worst = 0;
  for (const auto& [a, b] : pairs) {
    worst = std::max(worst, std::abs(MsSsim(*a, b) - OracleMsSsim(*a, b)));
  }
  out.Require(worst <= 1e-4, "reference disagreement");

  double prev = identity;
  std::ostringstream curve;
  for (double sigma : {0.01, 0.05, 0.1}) {
    const double s = MsSsim(sample, AddNoise(sample, sigma, 9));
    out.Require(s < prev, "not monotone at sigma " + std::to_string(sigma));
    curve << " " << s;
    prev = s;
  }
  out.detail << "identity " << identity << ", max |impl - reference| = " << worst
             << " on 3 pairs, noise curve" << curve.str();
}

double Rms(const ImagePlane& a, const ImagePlane& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(a.size()));
}

void TransformFidelity(Outcome& out) {
  // A toy transform with a complete basis (N = 3 * 16 * 16) is invertible;
  // the shipped N = 128 basis is a projection and is reported separately.
  ToyModelConfig cfg;
  cfg.latent_channels = kBlockDim;
  const CodecModel full = CodecModel::FromFile(MakeToyModel(cfg));
  const CodecModel& shipped = ShippedModel();
  std::mt19937_64 rng(8);
  double worst_exact = 0, worst_q = 0, worst_latent_q = 0, projection = 0;
  for (int i = 0; i < 10; ++i) {
    const ImagePlane img = RandomImage(rng, 64 * (1 + i % 2), 128);
    const RealTensor y = AnalysisTransform(img, full).y;
    worst_exact = std::max(worst_exact, Rms(SynthesisTransform(y, full), img));
    worst_q = std::max(worst_q, Rms(SynthesisTransform(QuantizeLatent(y), full), img));
    const RealTensor ys = AnalysisTransform(img, shipped).y;
    projection = std::max(projection, Rms(SynthesisTransform(ys, shipped), img));
    // Latent-domain bound on the shipped basis.
    const LatentTensor q = QuantizeLatent(ys);
    RealTensor qr(q.shape());
    for (size_t j = 0; j < q.size(); ++j) qr.data()[j] = q.data()[j];
    worst_latent_q = std::max(worst_latent_q, Rms(SynthesisTransform(ys, shipped, false),
                                                  SynthesisTransform(qr, shipped, false)));
  }
  out.Require(worst_exact <= 1e-5, "unquantized roundtrip");
  out.Require(worst_q <= full.QuantizationErrorBound(), "quantized roundtrip");
  out.Require(worst_latent_q <= shipped.QuantizationErrorBound(), "shipped quantization");
  out.detail << "N=768: unquantized RMS " << worst_exact << " (<= 1e-5), quantized RMS "
             << worst_q << " (<= " << full.QuantizationErrorBound() << "); N=128: "
             << "quantization RMS " << worst_latent_q << " (<= "
             << shipped.QuantizationErrorBound() << "), projection residual "
             << projection << " (informational)";
}

}  // namespace
}  // namespace gmmc

int main() {
  using Fn = void (*)(gmmc::Outcome&);
  struct Criterion {
    int id;
    const char* name;
    Fn fn;
    double limit_seconds;
  };
  const Criterion criteria[] = {
      {1, "likelihood normalization", gmmc::LikelihoodNormalization, 10},
      {2, "edge-rule exactness", gmmc::EdgeRuleExactness, 0},
      {3, "coder roundtrip", gmmc::CoderRoundTrip, 60},
      {4, "end-to-end latent losslessness", gmmc::LatentLosslessness, 120},
      {5, "acceleration equivalences", gmmc::AccelerationEquivalences, 0},
      {6, "knapsack correctness", gmmc::KnapsackCorrectness, 0},
      {7, "MS-SSIM sanity", gmmc::MsSsimSanity, 0},
      {8, "toy transform fidelity", gmmc::TransformFidelity, 0},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    gmmc::Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.fn(out);
    } catch (const std::exception& e) {
      out.Require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      out.Require(false, "runtime limit " + std::to_string(c.limit_seconds) + " s");
    }
    failed += !out.pass;
    std::printf("[%s] criterion %d: %s (%.2f s) %s\n", out.pass ? "PASS" : "FAIL",
                c.id, c.name, secs, out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
