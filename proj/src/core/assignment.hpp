// Copyright 2026 The BiVert Authors.
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

// Cosine cost matrices and an exact rectangular linear sum assignment solver
// (shortest augmenting paths with dual potentials, Jonker-Volgenant style).

#ifndef BIVERT_CORE_ASSIGNMENT_HPP
#define BIVERT_CORE_ASSIGNMENT_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "corpus.hpp"

namespace bivert {

class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : CostMatrix(rows, cols, std::vector<double>(rows * cols, fill)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const std::vector<double>& entries() const { return entries_; }

  CostMatrix transposed() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

struct Assignment {
  // Sorted by row.
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;

  double total_cost(const CostMatrix& m) const;
};

// Throws Error(kZeroVector) when either vector is all zeros and SchemaError
// when dimensions differ. The result is clamped to [-1, 1].
double cosine_similarity(std::span<const double> u, std::span<const double> v);

// entry(i, j) = 1 - cos(a[i], b[j]). Zero vectors count as cosine 0.
CostMatrix build_cost_matrix(const EmbeddingTable& a, const EmbeddingTable& b);

// Minimum-cost injective matching of size min(rows, cols). Deterministic:
// rows are inserted in ascending order and, among equally short augmenting
// paths, a free column wins over an assigned one and then the lowest index.
Assignment solve_lsap(const CostMatrix& m);

}  // namespace bivert

#endif  // BIVERT_CORE_ASSIGNMENT_HPP
