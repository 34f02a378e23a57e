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

#include "assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"

namespace bivert {

namespace {

constexpr std::ptrdiff_t kNone = -1;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Solves the case rows <= cols. Returns the column assigned to each row.
std::vector<std::ptrdiff_t> augment_rows(const CostMatrix& m) {
  const std::size_t nr = m.rows();
  const std::size_t nc = m.cols();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(nr, 0.0), v(nc, 0.0), shortest(nc);
  std::vector<std::ptrdiff_t> col4row(nr, kNone), row4col(nc, kNone), path(nc);
  std::vector<char> seen_row(nr), seen_col(nc);

  for (std::size_t cur = 0; cur < nr; ++cur) {
    std::fill(shortest.begin(), shortest.end(), inf);
    std::fill(path.begin(), path.end(), kNone);
    std::fill(seen_row.begin(), seen_row.end(), 0);
    std::fill(seen_col.begin(), seen_col.end(), 0);

    double min_val = 0.0;
    std::size_t i = cur;
    std::ptrdiff_t sink = kNone;
    while (sink == kNone) {
      seen_row[i] = 1;
      double lowest = inf;
      std::ptrdiff_t best = kNone;
      for (std::size_t j = 0; j < nc; ++j) {
        if (seen_col[j]) continue;
        const double reduced = min_val + m(i, j) - u[i] - v[j];
        if (reduced < shortest[j]) {
          path[j] = static_cast<std::ptrdiff_t>(i);
          shortest[j] = reduced;
        }
        if (best == kNone || shortest[j] < lowest ||
            (shortest[j] == lowest && row4col[j] == kNone && row4col[best] != kNone)) {
          lowest = shortest[j];
          best = static_cast<std::ptrdiff_t>(j);
        }
      }
      min_val = lowest;
      if (best == kNone || !std::isfinite(min_val))
        throw Error(ErrorKind::kInvalidArgument, "cost matrix admits no finite assignment");
      seen_col[best] = 1;
      if (row4col[best] == kNone)
        sink = best;
      else
        i = static_cast<std::size_t>(row4col[best]);
    }

    u[cur] += min_val;
    for (std::size_t r = 0; r < nr; ++r)
      if (seen_row[r] && r != cur)
        u[r] += min_val - shortest[static_cast<std::size_t>(col4row[r])];
    for (std::size_t j = 0; j < nc; ++j)
      if (seen_col[j]) v[j] -= min_val - shortest[j];

    std::ptrdiff_t j = sink;
    while (true) {
      const std::ptrdiff_t r = path[j];
      row4col[j] = r;
      std::swap(col4row[r], j);
      if (static_cast<std::size_t>(r) == cur) break;
    }
  }
  return col4row;
}

}  // namespace

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_)
    throw Error(ErrorKind::kInvalidArgument, "cost matrix entry count mismatch");
}

CostMatrix CostMatrix::transposed() const {
  CostMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Assignment::total_cost(const CostMatrix& m) const {
  double total = 0.0;
  for (auto [r, c] : matches) total += m(r, c);
  return total;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw SchemaError("cosine of vectors with dims " + std::to_string(u.size()) + " and " +
                      std::to_string(v.size()));
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw Error(ErrorKind::kZeroVector, "cosine of a zero vector");
  double dot = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) dot += u[k] * v[k];
  return std::clamp(dot / (nu * nv), -1.0, 1.0);
}

CostMatrix build_cost_matrix(const EmbeddingTable& a, const EmbeddingTable& b) {
  if (a.dim() != b.dim())
    throw SchemaError("embedding dims differ: " + std::to_string(a.dim()) + " vs " +
                      std::to_string(b.dim()));
  CostMatrix m(a.size(), b.size());
  std::vector<double> nb(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) nb[j] = norm(b.row(j));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double na = norm(a.row(i));
    for (std::size_t j = 0; j < b.size(); ++j) {
      double sim = 0.0;
      if (na != 0.0 && nb[j] != 0.0) sim = cosine_similarity(a.row(i), b.row(j));
      m(i, j) = 1.0 - sim;
    }
  }
  return m;
}

Assignment solve_lsap(const CostMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    throw Error(ErrorKind::kInvalidArgument, "assignment needs a non-empty matrix");
  for (double x : m.entries())
    if (!std::isfinite(x)) throw Error(ErrorKind::kInvalidArgument, "non-finite cost");

  Assignment out;
  const bool transpose = m.rows() > m.cols();
  const std::vector<std::ptrdiff_t> col4row = augment_rows(transpose ? m.transposed() : m);
  for (std::size_t r = 0; r < col4row.size(); ++r) {
    const auto c = static_cast<std::size_t>(col4row[r]);
    if (transpose)
      out.matches.emplace_back(c, r);
    else
      out.matches.emplace_back(r, c);
  }
  std::sort(out.matches.begin(), out.matches.end());

  std::vector<char> row_used(m.rows()), col_used(m.cols());
  for (auto [r, c] : out.matches) {
    row_used[r] = 1;
    col_used[c] = 1;
  }
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!row_used[r]) out.unmatched_rows.push_back(r);
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!col_used[c]) out.unmatched_cols.push_back(c);
  return out;
}

}  // namespace bivert
