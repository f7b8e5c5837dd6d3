#include "tomolearn/types.hpp"

#include <algorithm>
#include <numeric>

namespace tomolearn {

AngleSet::AngleSet(std::vector<int> indices, int n_theta)
    : indices_(std::move(indices)), n_theta_(n_theta) {
  if (n_theta_ <= 0) throw std::invalid_argument("AngleSet: n_theta must be positive");
  if (indices_.empty() || static_cast<int>(indices_.size()) > n_theta_)
    throw std::invalid_argument("AngleSet: need between 1 and n_theta indices");
  std::vector<char> seen(static_cast<std::size_t>(n_theta_), 0);
  for (int k : indices_) {
    if (k < 0 || k >= n_theta_) throw std::invalid_argument("AngleSet: index out of range");
    if (seen[static_cast<std::size_t>(k)]) throw std::invalid_argument("AngleSet: duplicate index");
    seen[static_cast<std::size_t>(k)] = 1;
  }
}

AngleSet AngleSet::full(int n_theta) {
  std::vector<int> idx(static_cast<std::size_t>(n_theta));
  std::iota(idx.begin(), idx.end(), 0);
  return AngleSet(std::move(idx), n_theta);
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  return a.dot(b);
}

double weighted_residual_norm_sq(const SinogramBlock& r) {
  if (r.n_angles() < 1 || r.size() == 0)
    throw DimensionError("weighted_residual_norm_sq: empty block");
  return r.data().squaredNorm() / r.n_angles();
}

}  // namespace tomolearn
