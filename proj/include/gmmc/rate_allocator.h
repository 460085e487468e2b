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

// Per-image model selection under a global rate budget (multiple-choice
// knapsack): pick one (lambda, rate, quality) option per image to maximize
// the summed MS-SSIM subject to the summed rate fitting the budget.

#ifndef GMMC_RATE_ALLOCATOR_H_
#define GMMC_RATE_ALLOCATOR_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace gmmc {

struct RdPoint {
  double lambda = 0;
  double ms_ssim = 0;
  int64_t rate_bits = 0;
  double bpp = 0;

  // rate_bits = round(bpp * pixel_count).
  static RdPoint FromBpp(double lambda, double ms_ssim, double bpp,
                         uint64_t pixel_count);
};

struct ImageOptions {
  std::string id;
  uint64_t pixel_count = 0;
  std::vector<RdPoint> options;
};

class AllocationProblem {
 public:
  // Validates the input and sorts every option list by ascending lambda.
  // Throws kInvalidInput for an empty image list, an image without options,
  // zero pixel counts, negative rates or qualities outside [0, 1].
  AllocationProblem(std::vector<ImageOptions> images, double budget_bpp);

  const std::vector<ImageOptions>& images() const { return images_; }
  double budget_bpp() const { return budget_bpp_; }
  uint64_t total_pixels() const { return total_pixels_; }
  // floor(budget_bpp * total_pixels).
  int64_t budget_bits() const { return budget_bits_; }

 private:
  std::vector<ImageOptions> images_;
  double budget_bpp_;
  uint64_t total_pixels_ = 0;
  int64_t budget_bits_ = 0;
};

struct Allocation {
  std::vector<size_t> choice;  // option index per image
  double objective = 0;        // sum of chosen ms_ssim
  int64_t total_bits = 0;
  bool feasible = false;       // total_bits <= budget_bits

  double lambda(const AllocationProblem& p, size_t image) const {
    return p.images()[image].options[choice[image]].lambda;
  }
};

// Dynamic program over the budget split into floor(budget / granularity)
// cells, with option costs rounded up to whole cells so the result is
// feasible in exact bits. Ties prefer fewer bits, then lower lambda.
// Infeasible problems yield the minimum-rate assignment with
// feasible == false.
Allocation AllocateDp(const AllocationProblem& problem,
                      int64_t granularity_bits = 1024);

// Exhaustive search with the same objective and tie-breaks, preferring the
// lexicographically smallest assignment. Throws kResourceLimit beyond 1e7
// assignments.
Allocation AllocateBruteforce(const AllocationProblem& problem);

Allocation MinimumRateAllocation(const AllocationProblem& problem);

// Scores a given choice vector.
Allocation Evaluate(const AllocationProblem& problem,
                    std::vector<size_t> choice);

struct AllocationSummary {
  double mean_ms_ssim = 0;
  double aggregate_bpp = 0;
};

AllocationSummary Summarize(const Allocation& allocation,
                            const AllocationProblem& problem);

// Rows of `image_id,pixels,lambda,bpp,ms_ssim` after that exact header;
// images keep first-appearance order.
std::vector<ImageOptions> ReadRdTable(std::istream& in);

// `image_id,lambda` rows followed by a `# summary` line.
void WriteAllocationCsv(std::ostream& out, const Allocation& allocation,
                        const AllocationProblem& problem);

}  // namespace gmmc

#endif  // GMMC_RATE_ALLOCATOR_H_
