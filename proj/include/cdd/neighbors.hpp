#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cdd/pointcloud.hpp"
#include "cdd/threading.hpp"

namespace cdd {

// Per-point nearest-neighbor results in both directions between two clouds.
// min_distance is the Euclidean norm computed as sqrt((dx^2 + dy^2) + dz^2);
// ties go to the smallest index.
struct NearestAssignment {
    struct Pair {
        double min_distance = 0.0;
        std::size_t argmin_index = 0;
    };
    std::vector<Pair> forward;   // one per source point, indexes into target
    std::vector<Pair> backward;  // one per target point, indexes into source
};

namespace detail {

inline double coord(const Vec3& p, int axis) {
    return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

inline void brute_nearest(const Vec3& q, const std::vector<Vec3>& pts, double& best_sq,
                          std::size_t& best_idx) {
    best_sq = std::numeric_limits<double>::infinity();
    best_idx = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double sq = squared_dist(q, pts[k]);
        if (sq < best_sq) {  // strict: earlier index wins exact ties
            best_sq = sq;
            best_idx = k;
        }
    }
}

}  // namespace detail

inline NearestAssignment assign_brute(const PointCloud& source, const PointCloud& target) {
    validate(source);
    validate(target);
    NearestAssignment out;
    out.forward.resize(source.size());
    out.backward.resize(target.size());
    parallel_for(source.size(), [&](std::size_t i) {
        double sq;
        std::size_t idx;
        detail::brute_nearest(source[i], target.points, sq, idx);
        out.forward[i] = {std::sqrt(sq), idx};
    });
    parallel_for(target.size(), [&](std::size_t k) {
        double sq;
        std::size_t idx;
        detail::brute_nearest(target[k], source.points, sq, idx);
        out.backward[k] = {std::sqrt(sq), idx};
    });
    return out;
}

// Exact kd-tree: median split on the widest axis, leaf size 16. Queries
// compare squared distances in the same accumulation order as the brute-force
// scan and prune only on strictly-greater box distances, so reported
// distances (and, with the smallest-index tie rule, indices) match the
// brute-force scan exactly.
class KdTree {
public:
    static constexpr std::size_t leaf_size = 16;

    explicit KdTree(const PointCloud& cloud) : pts_(cloud.points) {
        validate(cloud);
        order_.resize(pts_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        nodes_.reserve(2 * pts_.size() / leaf_size + 2);
        build(0, pts_.size());
    }

    // Returns (squared distance, index) of the nearest point; smallest index
    // on exact ties.
    void nearest(const Vec3& q, double& best_sq, std::size_t& best_idx) const {
        best_sq = std::numeric_limits<double>::infinity();
        best_idx = 0;
        search(0, q, best_sq, best_idx);
    }

private:
    struct Node {
        double lo[3], hi[3];
        std::size_t begin = 0, count = 0;  // leaf payload (count > 0 for leaves)
        std::size_t left = 0, right = 0;   // child node ids (0 = none; root is 0 but never a child)
    };

    std::vector<Vec3> pts_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;

    std::size_t build(std::size_t begin, std::size_t end) {
        const std::size_t id = nodes_.size();
        nodes_.push_back(Node{});
        Node n;
        for (int a = 0; a < 3; ++a) {
            n.lo[a] = std::numeric_limits<double>::infinity();
            n.hi[a] = -std::numeric_limits<double>::infinity();
        }
        for (std::size_t i = begin; i < end; ++i) {
            const Vec3& p = pts_[order_[i]];
            for (int a = 0; a < 3; ++a) {
                const double c = detail::coord(p, a);
                n.lo[a] = std::min(n.lo[a], c);
                n.hi[a] = std::max(n.hi[a], c);
            }
        }
        if (end - begin <= leaf_size) {
            n.begin = begin;
            n.count = end - begin;
            nodes_[id] = n;
            return id;
        }
        int axis = 0;
        double widest = -1.0;
        for (int a = 0; a < 3; ++a) {
            const double w = n.hi[a] - n.lo[a];
            if (w > widest) {
                widest = w;
                axis = a;
            }
        }
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::size_t a, std::size_t b) {
                             const double ca = detail::coord(pts_[a], axis);
                             const double cb = detail::coord(pts_[b], axis);
                             return ca < cb || (ca == cb && a < b);
                         });
        const std::size_t left = build(begin, mid);
        const std::size_t right = build(mid, end);
        n.left = left;
        n.right = right;
        nodes_[id] = n;
        return id;
    }

    // Squared distance from q to the node's bounding box, same accumulation
    // order as squared_dist. Never exceeds the squared distance to any point
    // inside the box, so strict-greater pruning cannot drop an exact tie.
    double box_sq(const Node& n, const Vec3& q) const {
        double e[3];
        const double qc[3] = {q.x, q.y, q.z};
        for (int a = 0; a < 3; ++a) {
            if (qc[a] < n.lo[a]) {
                e[a] = n.lo[a] - qc[a];
            } else if (qc[a] > n.hi[a]) {
                e[a] = qc[a] - n.hi[a];
            } else {
                e[a] = 0.0;
            }
        }
        return (e[0] * e[0] + e[1] * e[1]) + e[2] * e[2];
    }

    void search(std::size_t id, const Vec3& q, double& best_sq, std::size_t& best_idx) const {
        const Node& n = nodes_[id];
        if (n.count > 0) {
            for (std::size_t i = n.begin; i < n.begin + n.count; ++i) {
                const std::size_t idx = order_[i];
                const double sq = squared_dist(q, pts_[idx]);
                if (sq < best_sq || (sq == best_sq && idx < best_idx)) {
                    best_sq = sq;
                    best_idx = idx;
                }
            }
            return;
        }
        const double dl = box_sq(nodes_[n.left], q);
        const double dr = box_sq(nodes_[n.right], q);
        const std::size_t first = dl <= dr ? n.left : n.right;
        const std::size_t second = dl <= dr ? n.right : n.left;
        const double dfirst = std::min(dl, dr);
        const double dsecond = std::max(dl, dr);
        if (!(dfirst > best_sq)) search(first, q, best_sq, best_idx);
        if (!(dsecond > best_sq)) search(second, q, best_sq, best_idx);
    }
};

inline NearestAssignment assign_kdtree(const PointCloud& source, const PointCloud& target) {
    validate(source);
    validate(target);
    const KdTree target_tree(target);
    const KdTree source_tree(source);
    NearestAssignment out;
    out.forward.resize(source.size());
    out.backward.resize(target.size());
    parallel_for(source.size(), [&](std::size_t i) {
        double sq;
        std::size_t idx;
        target_tree.nearest(source[i], sq, idx);
        out.forward[i] = {std::sqrt(sq), idx};
    });
    parallel_for(target.size(), [&](std::size_t k) {
        double sq;
        std::size_t idx;
        source_tree.nearest(target[k], sq, idx);
        out.backward[k] = {std::sqrt(sq), idx};
    });
    return out;
}

// Default assignment used by the loss/metric layer.
inline NearestAssignment assign(const PointCloud& source, const PointCloud& target) {
    return assign_kdtree(source, target);
}

}  // namespace cdd
