// Copyright 2026 The curvature-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Deterministic minimisation of a four-point functional over the 4-subsets
// of a precomputed distance matrix. Shared by the macroscopic scanners and
// the normalised (infinitesimal) estimators.

#ifndef CURVLAB_SRC_QUADRUPLE_KERNEL_HPP_
#define CURVLAB_SRC_QUADRUPLE_KERNEL_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "curvlab/four_point.hpp"
#include "curvlab/parallel.hpp"
#include "curvlab/random.hpp"

namespace curvlab::internal {

using Tuple = std::array<std::uint32_t, 4>;

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  Tuple tuple{};
  bool valid = false;
};

inline bool Better(const Candidate& a, const Candidate& b) {
  if (!a.valid) return false;
  if (!b.valid) return true;
  if (a.value != b.value) return a.value < b.value;
  return a.tuple < b.tuple;
}

inline std::uint64_t Choose4(std::uint64_t n) {
  if (n < 4) return 0;
  return n * (n - 1) / 2 * (n - 2) / 3 * (n - 3) / 4;
}

// Built-in defect functionals on a row-major n x n matrix. With `base`
// non-empty every value is divided by max(base[a..d])², and subsets whose
// points all sit at the base point evaluate to 0.
class DefectEvaluator {
 public:
  DefectEvaluator(Functional f, std::span<const double> dist, std::size_t n,
                  std::span<const double> base = {})
      : f_(f), d_(dist.data()), n_(n), base_(base) {}

  int orderings() const { return orderings_per_subset(f_); }

  // a < b < c < d; returns the minimum over the distinct orderings.
  Candidate operator()(std::uint32_t a, std::uint32_t b, std::uint32_t c,
                       std::uint32_t d) const {
    const double ab = D(a, b), ac = D(a, c), ad = D(a, d);
    const double bc = D(b, c), bd = D(b, d), cd = D(c, d);
    double scale = 1.0;
    if (!base_.empty()) {
      const double delta =
          std::max(std::max(base_[a], base_[b]), std::max(base_[c], base_[d]));
      if (delta == 0.0) return {0.0, {a, b, c, d}, true};
      scale = 1.0 / (delta * delta);
    }
    Candidate best;
    auto offer = [&](double v, Tuple t) {
      Candidate c2{v * scale, t, true};
      if (Better(c2, best)) best = c2;
    };
    switch (f_) {
      case Functional::kQuadrilateral:
        // Cyclic orders (a,b,c,d), (a,b,d,c), (a,c,b,d).
        offer(quadrilateral_defect({ab, ac, ad, bc, bd, cd}), {a, b, c, d});
        offer(quadrilateral_defect({ab, ad, ac, bd, bc, cd}), {a, b, d, c});
        offer(quadrilateral_defect({ac, ab, ad, bc, cd, bd}), {a, c, b, d});
        break;
      case Functional::kLebedevaPetrunin:
        offer(lp_defect({ab, ac, ad, bc, bd, cd}), {a, b, c, d});
        offer(lp_defect({ab, bc, bd, ac, ad, cd}), {b, a, c, d});
        offer(lp_defect({ac, bc, cd, ab, ad, bd}), {c, a, b, d});
        offer(lp_defect({ad, bd, cd, ab, ac, bc}), {d, a, b, c});
        break;
      case Functional::kPtolemy:
        // The subtracted pair of pairs: {ab,cd}, {ac,bd}, {ad,bc}.
        offer(ptolemy_defect({ab, ac, ad, bc, bd, cd}), {a, b, c, d});
        offer(ptolemy_defect({ac, ab, ad, bc, cd, bd}), {a, c, b, d});
        offer(ptolemy_defect({ad, ab, ac, bd, cd, bc}), {a, d, b, c});
        break;
    }
    return best;
  }

 private:
  double D(std::uint32_t i, std::uint32_t j) const { return d_[i * n_ + j]; }
  Functional f_;
  const double* d_;
  std::size_t n_;
  std::span<const double> base_;
};

struct KernelResult {
  Candidate best;
  std::uint64_t examined = 0;
  bool truncated = false;
};

// Exhaustive when C(n,4) * orderings <= budget (or budget == 0), otherwise a
// seeded sample of budget / orderings random subsets. The outcome is
// independent of `threads`: subset streams are keyed by subset number and
// the reduction is a total order.
template <class Eval>
KernelResult ScanQuadruples(std::size_t n, const Eval& eval,
                            std::uint64_t budget, std::uint64_t seed,
                            unsigned threads) {
  KernelResult result;
  const std::uint64_t subsets = Choose4(n);
  if (subsets == 0) return result;
  const auto k = static_cast<std::uint64_t>(eval.orderings());
  const std::uint32_t nn = static_cast<std::uint32_t>(n);

  if (budget == 0 || subsets * k <= budget) {
    std::vector<std::array<std::uint32_t, 2>> pairs;
    for (std::uint32_t a = 0; a + 3 < nn; ++a) {
      for (std::uint32_t b = a + 1; b + 2 < nn; ++b) pairs.push_back({a, b});
    }
    auto states = parallel_workers(
        pairs.size(), threads, Candidate{},
        [&](Candidate& best, std::size_t i) {
          const auto [a, b] = pairs[i];
          for (std::uint32_t c = b + 1; c + 1 < nn; ++c) {
            for (std::uint32_t d = c + 1; d < nn; ++d) {
              const Candidate cand = eval(a, b, c, d);
              if (Better(cand, best)) best = cand;
            }
          }
        },
        8);
    for (const auto& s : states) {
      if (Better(s, result.best)) result.best = s;
    }
    result.examined = subsets * k;
    return result;
  }

  const std::uint64_t draws = std::max<std::uint64_t>(1, budget / k);
  auto states = parallel_workers(
      static_cast<std::size_t>(draws), threads, Candidate{},
      [&](Candidate& best, std::size_t s) {
        Rng rng(seed, "quadruple-subset", s);
        std::array<std::uint32_t, 4> idx{};
        int filled = 0;
        while (filled < 4) {
          const auto v = static_cast<std::uint32_t>(rng.index(n));
          if (std::find(idx.begin(), idx.begin() + filled, v) ==
              idx.begin() + filled) {
            idx[filled++] = v;
          }
        }
        std::sort(idx.begin(), idx.end());
        const Candidate cand = eval(idx[0], idx[1], idx[2], idx[3]);
        if (Better(cand, best)) best = cand;
      },
      256);
  for (const auto& s : states) {
    if (Better(s, result.best)) result.best = s;
  }
  result.examined = draws * k;
  result.truncated = true;
  return result;
}

}  // namespace curvlab::internal

#endif  // CURVLAB_SRC_QUADRUPLE_KERNEL_HPP_
