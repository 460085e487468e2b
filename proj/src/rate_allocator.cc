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

#include "gmmc/rate_allocator.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "gmmc/error.h"

namespace gmmc {
namespace {

constexpr double kTieEpsilon = 1e-12;
constexpr uint64_t kMaxDpCells = 500'000'000;
constexpr uint64_t kMaxEnumeration = 10'000'000;

struct Score {
  double objective = -std::numeric_limits<double>::infinity();
  int64_t bits = 0;

  bool reachable() const { return std::isfinite(objective); }
};

bool Better(const Score& a, const Score& b) {
  if (!b.reachable()) return a.reachable();
  if (a.objective > b.objective + kTieEpsilon) return true;
  if (a.objective < b.objective - kTieEpsilon) return false;
  return a.bits < b.bits;
}

int64_t CeilDiv(int64_t a, int64_t b) { return (a + b - 1) / b; }

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double ParseDouble(const std::string& s, size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidInput,
                "line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

uint64_t ParseCount(const std::string& s, size_t line) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "line " + std::to_string(line) + ": bad pixel count '" + s + "'");
  }
  return v;
}

}  // namespace

RdPoint RdPoint::FromBpp(double lambda, double ms_ssim, double bpp,
                         uint64_t pixel_count) {
  RdPoint p;
  p.lambda = lambda;
  p.ms_ssim = ms_ssim;
  p.bpp = bpp;
  p.rate_bits = std::llround(bpp * static_cast<double>(pixel_count));
  return p;
}

AllocationProblem::AllocationProblem(std::vector<ImageOptions> images,
                                     double budget_bpp)
    : images_(std::move(images)), budget_bpp_(budget_bpp) {
  if (images_.empty()) {
    throw Error(ErrorCode::kInvalidInput, "allocation problem has no images");
  }
  if (!(budget_bpp >= 0) || !std::isfinite(budget_bpp)) {
    throw Error(ErrorCode::kInvalidInput, "budget must be a nonnegative bpp");
  }
  for (auto& img : images_) {
    if (img.options.empty() ||
        img.options.size() > std::numeric_limits<int16_t>::max()) {
      throw Error(ErrorCode::kInvalidInput,
                  "image '" + img.id + "' needs 1..32767 options");
    }
    if (img.pixel_count == 0) {
      throw Error(ErrorCode::kInvalidInput, "image '" + img.id + "' has no pixels");
    }
    for (const auto& o : img.options) {
      if (o.rate_bits < 0 || !(o.ms_ssim >= 0 && o.ms_ssim <= 1)) {
        throw Error(ErrorCode::kInvalidInput,
                    "image '" + img.id + "' has an invalid RD point");
      }
    }
    std::stable_sort(img.options.begin(), img.options.end(),
                     [](const RdPoint& a, const RdPoint& b) {
                       return a.lambda < b.lambda;
                     });
    total_pixels_ += img.pixel_count;
  }
  budget_bits_ = static_cast<int64_t>(
      std::floor(budget_bpp * static_cast<double>(total_pixels_)));
}

Allocation Evaluate(const AllocationProblem& problem,
                    std::vector<size_t> choice) {
  Allocation a;
  for (size_t i = 0; i < choice.size(); ++i) {
    const RdPoint& o = problem.images()[i].options.at(choice[i]);
    a.objective += o.ms_ssim;
    a.total_bits += o.rate_bits;
  }
  a.choice = std::move(choice);
  a.feasible = a.total_bits <= problem.budget_bits();
  return a;
}

Allocation MinimumRateAllocation(const AllocationProblem& problem) {
  std::vector<size_t> choice;
  for (const auto& img : problem.images()) {
    size_t best = 0;
    for (size_t o = 1; o < img.options.size(); ++o) {
      if (img.options[o].rate_bits < img.options[best].rate_bits) best = o;
    }
    choice.push_back(best);
  }
  return Evaluate(problem, std::move(choice));
}

Allocation AllocateDp(const AllocationProblem& problem,
                      int64_t granularity_bits) {
  if (granularity_bits < 1) {
    throw Error(ErrorCode::kInvalidInput, "granularity must be >= 1 bit");
  }
  const auto& images = problem.images();
  // Costs round up to whole cells, so the top cell can hold assignments that
  // exceed the budget in exact bits; those are filtered as they are formed.
  const int64_t budget = problem.budget_bits();
  const int64_t cap = CeilDiv(budget, granularity_bits);
  const size_t cells = static_cast<size_t>(cap) + 1;
  if (static_cast<uint64_t>(cells) * images.size() > kMaxDpCells) {
    throw Error(ErrorCode::kResourceLimit,
                "DP table too large; raise the granularity");
  }

  // best[c]: optimum over the images so far using at most c cells.
  std::vector<Score> best(cells, Score{0.0, 0});
  std::vector<Score> next(cells);
  std::vector<int16_t> choice(images.size() * cells, -1);
  for (size_t i = 0; i < images.size(); ++i) {
    const auto& opts = images[i].options;
    std::fill(next.begin(), next.end(), Score{});
    for (size_t o = 0; o < opts.size(); ++o) {
      const int64_t cost = CeilDiv(opts[o].rate_bits, granularity_bits);
      for (int64_t c = cost; c <= cap; ++c) {
        const Score& prev = best[static_cast<size_t>(c - cost)];
        if (!prev.reachable()) continue;
        const Score cand{prev.objective + opts[o].ms_ssim,
                         prev.bits + opts[o].rate_bits};
        if (cand.bits > budget) continue;
        if (Better(cand, next[static_cast<size_t>(c)])) {
          next[static_cast<size_t>(c)] = cand;
          choice[i * cells + static_cast<size_t>(c)] = static_cast<int16_t>(o);
        }
      }
    }
    best.swap(next);
  }

  if (!best[static_cast<size_t>(cap)].reachable()) {
    return MinimumRateAllocation(problem);
  }
  std::vector<size_t> picked(images.size());
  int64_t c = cap;
  for (size_t i = images.size(); i-- > 0;) {
    const int16_t o = choice[i * cells + static_cast<size_t>(c)];
    picked[i] = static_cast<size_t>(o);
    c -= CeilDiv(images[i].options[static_cast<size_t>(o)].rate_bits,
                 granularity_bits);
  }
  return Evaluate(problem, std::move(picked));
}

Allocation AllocateBruteforce(const AllocationProblem& problem) {
  const auto& images = problem.images();
  uint64_t total = 1;
  for (const auto& img : images) {
    total *= img.options.size();
    if (total > kMaxEnumeration) {
      throw Error(ErrorCode::kResourceLimit,
                  "more than 1e7 assignments to enumerate");
    }
  }
  std::vector<size_t> current(images.size(), 0);
  std::vector<size_t> best_choice;
  Score best;
  for (uint64_t step = 0; step < total; ++step) {
    Score s{0.0, 0};
    for (size_t i = 0; i < images.size(); ++i) {
      s.objective += images[i].options[current[i]].ms_ssim;
      s.bits += images[i].options[current[i]].rate_bits;
    }
    if (s.bits <= problem.budget_bits() && Better(s, best)) {
      best = s;
      best_choice = current;
    }
    // Odometer with image 0 most significant.
    for (size_t i = images.size(); i-- > 0;) {
      if (++current[i] < images[i].options.size()) break;
      current[i] = 0;
    }
  }
  if (best_choice.empty()) return MinimumRateAllocation(problem);
  return Evaluate(problem, std::move(best_choice));
}

AllocationSummary Summarize(const Allocation& allocation,
                            const AllocationProblem& problem) {
  AllocationSummary s;
  // Running mean: exact when all chosen values coincide.
  double mean = 0;
  for (size_t i = 0; i < allocation.choice.size(); ++i) {
    const double q = problem.images()[i].options[allocation.choice[i]].ms_ssim;
    mean += (q - mean) / static_cast<double>(i + 1);
  }
  s.mean_ms_ssim = mean;
  s.aggregate_bpp = static_cast<double>(allocation.total_bits) /
                    static_cast<double>(problem.total_pixels());
  return s;
}

std::vector<ImageOptions> ReadRdTable(std::istream& in) {
  std::string line;
  size_t line_no = 1;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kInvalidInput, "empty RD table");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "image_id,pixels,lambda,bpp,ms_ssim") {
    throw Error(ErrorCode::kInvalidInput, "unexpected RD table header: " + line);
  }
  std::vector<ImageOptions> images;
  std::unordered_map<std::string, size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = SplitCsv(line);
    if (f.size() != 5 || f[0].empty()) {
      throw Error(ErrorCode::kInvalidInput,
                  "line " + std::to_string(line_no) + ": expected 5 fields");
    }
    const uint64_t pixels = ParseCount(f[1], line_no);
    const double lambda = ParseDouble(f[2], line_no);
    const double bpp = ParseDouble(f[3], line_no);
    const double q = ParseDouble(f[4], line_no);
    auto [it, inserted] = index.emplace(f[0], images.size());
    if (inserted) images.push_back({f[0], pixels, {}});
    ImageOptions& img = images[it->second];
    if (img.pixel_count != pixels) {
      throw Error(ErrorCode::kInvalidInput,
                  "line " + std::to_string(line_no) +
                      ": pixel count disagrees for image '" + f[0] + "'");
    }
    if (bpp < 0) {
      throw Error(ErrorCode::kInvalidInput,
                  "line " + std::to_string(line_no) + ": negative bpp");
    }
    img.options.push_back(RdPoint::FromBpp(lambda, q, bpp, pixels));
  }
  return images;
}

void WriteAllocationCsv(std::ostream& out, const Allocation& allocation,
                        const AllocationProblem& problem) {
  out << "image_id,lambda\n";
  for (size_t i = 0; i < allocation.choice.size(); ++i) {
    out << problem.images()[i].id << ','
        << FormatDouble(allocation.lambda(problem, i)) << '\n';
  }
  const AllocationSummary s = Summarize(allocation, problem);
  out << "# summary mean_ms_ssim=" << FormatDouble(s.mean_ms_ssim)
      << ",aggregate_bpp=" << FormatDouble(s.aggregate_bpp)
      << ",total_bits=" << allocation.total_bits
      << ",budget_bits=" << problem.budget_bits()
      << ",feasible=" << (allocation.feasible ? "true" : "false") << '\n';
}

}  // namespace gmmc
