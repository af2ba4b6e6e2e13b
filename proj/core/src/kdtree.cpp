#include "kerr/kdtree.hpp"

#include <algorithm>
#include <numeric>

#include "kerr/error.hpp"

namespace kerr {

KdTree::KdTree(std::vector<double> points, std::size_t dim, std::size_t leaf_size)
    : points_(std::move(points)), dim_(dim), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  if (dim_ == 0) throw InvalidArgument("KdTree: dim must be >= 1");
  if (points_.size() % dim_ != 0) throw InvalidArgument("KdTree: ragged point array");
  count_ = points_.size() / dim_;
  if (count_ == 0) throw InvalidArgument("KdTree: no points");
  perm_.resize(count_);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  nodes_.reserve(2 * count_ / leaf_size_ + 1);
  build(0, count_);
}

int KdTree::build(std::size_t begin, std::size_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= leaf_size_) return id;

  std::size_t best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    double lo = points_[perm_[begin] * dim_ + d];
    double hi = lo;
    for (std::size_t i = begin + 1; i < end; ++i) {
      const double v = points_[perm_[i] * dim_ + d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = d;
    }
  }
  if (best_spread <= 0.0) return id;  // all points coincide: keep as a leaf

  const std::size_t mid = begin + (end - begin) / 2;
  auto coord = [&](std::size_t p) { return points_[p * dim_ + best_dim]; };
  std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(begin),
                   perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                   perm_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) { return coord(a) < coord(b); });
  const double split = coord(perm_[mid]);
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].split_dim = best_dim;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

Neighbor KdTree::nearest(std::span<const double> query, std::size_t center,
                         std::size_t window) const {
  if (query.size() != dim_) throw InvalidArgument("KdTree::nearest: query dimension mismatch");
  Neighbor best;
  search(0, query, center, window, best);
  return best;
}

void KdTree::search(int id, std::span<const double> q, std::size_t center,
                    std::size_t window, Neighbor& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const std::size_t p = perm_[i];
      const std::size_t gap = p > center ? p - center : center - p;
      if (gap <= window) continue;
      const double* x = points_.data() + p * dim_;
      double d2 = 0.0;
      for (std::size_t d = 0; d < dim_; ++d) {
        const double diff = x[d] - q[d];
        d2 += diff * diff;
        if (d2 > best.dist2) break;
      }
      const Neighbor cand{p, d2};
      if (cand.better_than(best)) best = cand;
    }
    return;
  }
  // Points with coord < split went left, >= split right (up to ties at the
  // median, which may land on either side); visiting the far side whenever
  // its slab distance is <= best keeps the search exact.
  const double diff = q[node.split_dim] - node.split;
  const int near = diff < 0.0 ? node.left : node.right;
  const int far = diff < 0.0 ? node.right : node.left;
  search(near, q, center, window, best);
  if (diff * diff <= best.dist2) search(far, q, center, window, best);
}

}  // namespace kerr
