#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace kerr {

struct Neighbor {
  std::size_t index = std::numeric_limits<std::size_t>::max();
  double dist2 = std::numeric_limits<double>::infinity();

  bool found() const { return index != std::numeric_limits<std::size_t>::max(); }
  /// Strict order used for tie-breaking: smaller distance, then smaller index.
  bool better_than(const Neighbor& o) const {
    return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index);
  }
};

/// Static kd-tree over a row-major point set (count x dim) for exact
/// Euclidean nearest-neighbour queries. Equal distances resolve to the
/// smallest point index, so results coincide with a brute-force scan.
class KdTree {
 public:
  KdTree(std::vector<double> points, std::size_t dim, std::size_t leaf_size = 16);

  std::size_t size() const { return count_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> point(std::size_t i) const { return {points_.data() + i * dim_, dim_}; }

  /// Nearest point to `query` whose index j satisfies |j - center| > window.
  /// Pass window = 0 to exclude only `center` itself.
  Neighbor nearest(std::span<const double> query, std::size_t center,
                   std::size_t window) const;

  /// Nearest neighbour of stored point i outside the temporal window.
  Neighbor nearest_to(std::size_t i, std::size_t window) const {
    return nearest(point(i), i, window);
  }

 private:
  struct Node {
    std::size_t begin = 0, end = 0;
    std::size_t split_dim = 0;
    double split = 0.0;
    int left = -1, right = -1;
  };

  int build(std::size_t begin, std::size_t end);
  void search(int node, std::span<const double> q, std::size_t center, std::size_t window,
              Neighbor& best) const;

  std::vector<double> points_;
  std::size_t dim_;
  std::size_t count_;
  std::size_t leaf_size_;
  std::vector<std::size_t> perm_;
  std::vector<Node> nodes_;
};

}  // namespace kerr
