#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cdd/neighbors.hpp"
#include "cdd/pointcloud.hpp"
#include "cdd/weightfns.hpp"

namespace cdd {

// Loss family over nearest-neighbor assignments:
//   cd_l1       per-pair term d             (Euclidean norm)
//   cd_l2       per-pair term d^2
//   hypercd     per-pair term arccosh(1 + alpha d^2)
//   weighted_cd per-pair term f(m + d) * d  (m = mode of f, optional shift)
// Every variant averages the forward terms over |pred| and the backward terms
// over |gt| and sums the two directions.
enum class LossKind { cd_l1, cd_l2, hypercd, weighted_cd };

struct LossSpec {
    LossKind kind = LossKind::cd_l1;
    double alpha = 1.0;                          // hypercd only
    std::optional<WeightingFunction> weighting;  // weighted_cd only
    bool mode_shift = true;                      // weighted_cd only
};

struct LossGradient {
    double value = 0.0;
    std::vector<Vec3> grad;  // d value / d pred[i]
};

// Gradient weight of the arccosh distance: z(d) = 2 alpha d / sqrt((1+alpha d^2)^2 - 1).
// The radicand is evaluated as u(u+2) with u = alpha d^2 — algebraically
// identical but free of the catastrophic cancellation the squared form
// suffers for small d. Limit sqrt(2 alpha) at d = 0.
inline double z_hyper(double alpha, double d) {
    if (d == 0.0) return std::sqrt(2.0 * alpha);
    const double u = alpha * d * d;
    return 2.0 * alpha * d / std::sqrt(u * (u + 2.0));
}

// Minimal weighting interface used by the weighted evaluator: pdf(x),
// pdf_prime(x), mode(). This view adapts a WeightingFunction.
struct WeightingView {
    const WeightingFunction* f;
    double pdf(double x) const { return cdd::pdf(*f, x); }
    double pdf_prime(double x) const { return cdd::pdf_prime(*f, x); }
    double mode() const { return cdd::mode(*f); }
};

// Constant weighting f == 1: plugging it into the weighted evaluator
// recovers the plain L1 Chamfer distance (term 1 * d, gradient weight 1).
// Exposed for that equivalence check.
struct ConstantWeighting {
    double pdf(double) const { return 1.0; }
    double pdf_prime(double) const { return 0.0; }
    double mode() const { return 0.0; }
};

namespace detail {

// Shared accumulation engine. per_pair(d) returns (term, z) for a pair at
// distance d > 0; pairs at distance exactly 0 contribute nothing (their term
// is 0 for every loss kind and the gradient direction is undefined, so the
// bounded subgradient 0 is used). Directional sums are accumulated in index
// order and divided once, which makes evaluate(a, b) == evaluate(b, a)
// bitwise. Gradient writes are sequential for determinism.
template <class PairFn>
LossGradient accumulate_pairs(const PointCloud& pred, const PointCloud& gt, PairFn&& per_pair,
                              bool want_grad) {
    validate(pred);
    validate(gt);
    const NearestAssignment na = assign(pred, gt);
    const double inv_pred = 1.0 / static_cast<double>(pred.size());
    const double inv_gt = 1.0 / static_cast<double>(gt.size());

    LossGradient out;
    if (want_grad) out.grad.assign(pred.size(), Vec3{});

    double sum_forward = 0.0;
    for (std::size_t j = 0; j < pred.size(); ++j) {
        const double d = na.forward[j].min_distance;
        if (d > 0.0) {
            const auto [term, z] = per_pair(d);
            sum_forward += term;
            if (want_grad) {
                const Vec3 diff = pred[j] - gt[na.forward[j].argmin_index];
                out.grad[j] += diff * (inv_pred * z / d);
            }
        }
    }
    double sum_backward = 0.0;
    for (std::size_t k = 0; k < gt.size(); ++k) {
        const double d = na.backward[k].min_distance;
        if (d > 0.0) {
            const auto [term, z] = per_pair(d);
            sum_backward += term;
            if (want_grad) {
                const std::size_t j = na.backward[k].argmin_index;
                const Vec3 diff = pred[j] - gt[k];
                out.grad[j] += diff * (inv_gt * z / d);
            }
        }
    }
    out.value = sum_forward * inv_pred + sum_backward * inv_gt;
    return out;
}

}  // namespace detail

// Weighted Chamfer evaluation over any weighting W (pdf / pdf_prime / mode).
template <class W>
LossGradient evaluate_weighted(const W& w, bool mode_shift, const PointCloud& pred,
                               const PointCloud& gt, bool want_grad = true) {
    const double m = mode_shift ? w.mode() : 0.0;
    return detail::accumulate_pairs(
        pred, gt,
        [&](double d) {
            const double fx = w.pdf(m + d);
            const double z = w.pdf_prime(m + d) * d + fx;
            return std::pair<double, double>(fx * d, z);
        },
        want_grad);
}

namespace detail {

inline LossGradient dispatch(const LossSpec& spec, const PointCloud& pred, const PointCloud& gt,
                             bool want_grad) {
    switch (spec.kind) {
        case LossKind::cd_l1:
            return accumulate_pairs(
                pred, gt, [](double d) { return std::pair<double, double>(d, 1.0); }, want_grad);
        case LossKind::cd_l2:
            return accumulate_pairs(
                pred, gt, [](double d) { return std::pair<double, double>(d * d, 2.0 * d); },
                want_grad);
        case LossKind::hypercd: {
            if (!(spec.alpha > 0.0)) throw std::invalid_argument("hypercd: alpha must be > 0");
            const double alpha = spec.alpha;
            return accumulate_pairs(
                pred, gt,
                [alpha](double d) {
                    return std::pair<double, double>(std::acosh(1.0 + alpha * d * d),
                                                     z_hyper(alpha, d));
                },
                want_grad);
        }
        case LossKind::weighted_cd: {
            if (!spec.weighting) {
                throw std::invalid_argument("weighted_cd: weighting function required");
            }
            WeightingView view{&*spec.weighting};
            return evaluate_weighted(view, spec.mode_shift, pred, gt, want_grad);
        }
    }
    throw std::invalid_argument("unknown loss kind");
}

}  // namespace detail

inline double evaluate(const LossSpec& spec, const PointCloud& pred, const PointCloud& gt) {
    return detail::dispatch(spec, pred, gt, /*want_grad=*/false).value;
}

// Value plus exact subgradient with nearest-neighbor assignments held fixed
// at their current argmin (ties to the smallest index).
inline LossGradient evaluate_with_grad(const LossSpec& spec, const PointCloud& pred,
                                       const PointCloud& gt) {
    return detail::dispatch(spec, pred, gt, /*want_grad=*/true);
}

// F-score at distance threshold tau (default 1% in normalized coordinates):
// harmonic mean of the fraction of pred points within tau of gt and the
// fraction of gt points within tau of pred.
inline double f1_score(const PointCloud& pred, const PointCloud& gt, double tau = 0.01) {
    if (!(tau > 0.0)) throw std::invalid_argument("f1_score: tau must be > 0");
    validate(pred);
    validate(gt);
    const NearestAssignment na = assign(pred, gt);
    std::size_t hit_p = 0, hit_g = 0;
    for (const auto& pr : na.forward) {
        if (pr.min_distance <= tau) ++hit_p;
    }
    for (const auto& pr : na.backward) {
        if (pr.min_distance <= tau) ++hit_g;
    }
    const double precision = static_cast<double>(hit_p) / static_cast<double>(pred.size());
    const double recall = static_cast<double>(hit_g) / static_cast<double>(gt.size());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace cdd
