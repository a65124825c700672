#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdd/io.hpp"
#include "cdd/losses.hpp"
#include "cdd/pointcloud.hpp"
#include "cdd/rng.hpp"

namespace cdd {

// Free-point completion model: the trainable parameters are the output point
// coordinates themselves, so the full loss/gradient path of first-order
// completion training is exercised without any network machinery.
struct FreePointModel {
    PointCloud points;
};

enum class InitKind {
    jitter,       // sample from partial with replacement + Gaussian jitter
    uniform_box,  // uniform in [-1, 1]^3
    copy_partial, // exact copy of the partial cloud
};

enum class OptimizerKind { sgd, adam };

struct TrainConfig {
    LossSpec loss;
    int iters = 1000;
    double lr = 0.01;
    OptimizerKind optimizer = OptimizerKind::adam;
    std::uint64_t seed = 0;
    int eval_every = 100;
    std::size_t output_size = 0;  // 0 -> |gt| (|partial| for copy_partial)
    InitKind init = InitKind::jitter;
    double jitter_sigma = 0.05;
    int snapshot_every = 0;  // 0 -> no snapshots
};

struct TrainRow {
    long long iter = 0;
    double loss = 0.0;
    double grad_norm = 0.0;
    double l1cd = 0.0;
    double l2cd = 0.0;
    double f1 = 0.0;
    long long elapsed_ms = 0;  // kept at 0: log bytes are part of the determinism contract
};

struct TrainLog {
    std::vector<TrainRow> rows;

    static const char* csv_header() { return "iter,loss,grad_norm,l1cd,l2cd,f1,elapsed_ms"; }

    void write_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open for writing: " + path);
        out << csv_header() << '\n';
        for (const TrainRow& r : rows) {
            out << r.iter << ',' << format_double(r.loss) << ',' << format_double(r.grad_norm)
                << ',' << format_double(r.l1cd) << ',' << format_double(r.l2cd) << ','
                << format_double(r.f1) << ',' << r.elapsed_ms << '\n';
        }
        if (!out) throw std::runtime_error("write failed: " + path);
    }
};

// Training aborts carry the iteration at which the loss or gradient became
// non-finite.
struct DivergenceError : std::runtime_error {
    long long iteration;

    explicit DivergenceError(long long iter)
        : std::runtime_error("training diverged at iteration " + std::to_string(iter) +
                             " (non-finite loss or gradient)"),
          iteration(iter) {}
};

// Snapshot naming shared by the trainer's callers.
inline std::string snapshot_filename(long long iter) {
    return "snap_" + std::to_string(iter) + ".xyz";
}

using SnapshotSink = std::function<void(long long iter, const PointCloud&)>;

namespace detail {

inline PointCloud init_model(const PointCloud& partial, const PointCloud& gt,
                             const TrainConfig& cfg) {
    if (cfg.init == InitKind::copy_partial) {
        if (cfg.output_size != 0 && cfg.output_size != partial.size()) {
            throw std::invalid_argument("copy_partial init requires output_size == |partial|");
        }
        return partial;
    }
    const std::size_t n = cfg.output_size != 0 ? cfg.output_size : gt.size();
    if (n == 0) throw std::invalid_argument("output_size must be >= 1");
    PointCloud out;
    out.points.reserve(n);
    SplitMix64 rng(cfg.seed);
    if (cfg.init == InitKind::uniform_box) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = 2.0 * rng.uniform() - 1.0;
            const double y = 2.0 * rng.uniform() - 1.0;
            const double z = 2.0 * rng.uniform() - 1.0;
            out.points.push_back({x, y, z});
        }
        return out;
    }
    // jitter: pick a partial point (uniform, with replacement), perturb each
    // coordinate with Gaussian noise of scale jitter_sigma.
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(partial.size()));
        if (j >= partial.size()) j = partial.size() - 1;
        Vec3 p = partial[j];
        p.x += cfg.jitter_sigma * rng.normal();
        p.y += cfg.jitter_sigma * rng.normal();
        p.z += cfg.jitter_sigma * rng.normal();
        out.points.push_back(p);
    }
    return out;
}

inline double grad_norm(const std::vector<Vec3>& g) {
    double sum = 0.0;
    for (const Vec3& v : g) sum += (v.x * v.x + v.y * v.y) + v.z * v.z;
    return std::sqrt(sum);
}

inline bool all_finite(const LossGradient& lg) {
    if (!std::isfinite(lg.value)) return false;
    for (const Vec3& v : lg.grad) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) return false;
    }
    return true;
}

}  // namespace detail

// First-order training loop: recompute nearest assignments and the loss
// gradient every iteration, then take an SGD or Adam step. Fully
// deterministic for a given config (optimizer state included). Logged rows
// cover iterations 0, eval_every, 2*eval_every, ... plus the final iterate;
// snapshots follow the same pattern with snapshot_every.
inline std::pair<FreePointModel, TrainLog> train(const PointCloud& partial, const PointCloud& gt,
                                                 const TrainConfig& cfg,
                                                 const SnapshotSink& sink = nullptr) {
    validate(partial);
    validate(gt);
    if (cfg.iters < 1) throw std::invalid_argument("iters must be >= 1");
    if (!(cfg.lr > 0.0)) throw std::invalid_argument("lr must be > 0");
    if (cfg.eval_every < 1) throw std::invalid_argument("eval_every must be >= 1");

    FreePointModel model{detail::init_model(partial, gt, cfg)};
    const std::size_t n = model.points.size();

    std::vector<Vec3> m_state, v_state;
    if (cfg.optimizer == OptimizerKind::adam) {
        m_state.assign(n, Vec3{});
        v_state.assign(n, Vec3{});
    }
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    TrainLog log;
    const LossSpec l1{LossKind::cd_l1};
    const LossSpec l2{LossKind::cd_l2};

    auto record = [&](long long iter, const LossGradient& lg) {
        TrainRow row;
        row.iter = iter;
        row.loss = lg.value;
        row.grad_norm = detail::grad_norm(lg.grad);
        row.l1cd = evaluate(l1, model.points, gt);
        row.l2cd = evaluate(l2, model.points, gt);
        row.f1 = f1_score(model.points, gt);
        log.rows.push_back(row);
    };

    long long adam_t = 0;
    for (int it = 1; it <= cfg.iters; ++it) {
        const long long here = it - 1;  // iteration index of the current parameters
        const LossGradient lg = evaluate_with_grad(cfg.loss, model.points, gt);
        if (!detail::all_finite(lg)) throw DivergenceError(here);
        if (here % cfg.eval_every == 0) record(here, lg);
        if (sink && cfg.snapshot_every > 0 && here % cfg.snapshot_every == 0) {
            sink(here, model.points);
        }
        if (cfg.optimizer == OptimizerKind::sgd) {
            for (std::size_t i = 0; i < n; ++i) {
                model.points[i].x -= cfg.lr * lg.grad[i].x;
                model.points[i].y -= cfg.lr * lg.grad[i].y;
                model.points[i].z -= cfg.lr * lg.grad[i].z;
            }
        } else {
            ++adam_t;
            const double c1 = 1.0 - std::pow(beta1, static_cast<double>(adam_t));
            const double c2 = 1.0 - std::pow(beta2, static_cast<double>(adam_t));
            for (std::size_t i = 0; i < n; ++i) {
                double* mm[3] = {&m_state[i].x, &m_state[i].y, &m_state[i].z};
                double* vv[3] = {&v_state[i].x, &v_state[i].y, &v_state[i].z};
                const double gg[3] = {lg.grad[i].x, lg.grad[i].y, lg.grad[i].z};
                double* pp[3] = {&model.points[i].x, &model.points[i].y, &model.points[i].z};
                for (int c = 0; c < 3; ++c) {
                    *mm[c] = beta1 * *mm[c] + (1.0 - beta1) * gg[c];
                    *vv[c] = beta2 * *vv[c] + (1.0 - beta2) * gg[c] * gg[c];
                    const double mhat = *mm[c] / c1;
                    const double vhat = *vv[c] / c2;
                    *pp[c] -= cfg.lr * mhat / (std::sqrt(vhat) + eps);
                }
            }
        }
    }
    const LossGradient final_lg = evaluate_with_grad(cfg.loss, model.points, gt);
    if (!detail::all_finite(final_lg)) throw DivergenceError(cfg.iters);
    record(cfg.iters, final_lg);
    if (sink && cfg.snapshot_every > 0) sink(cfg.iters, model.points);
    return {std::move(model), std::move(log)};
}

// Frobenius distance between two snapshot sequences of the same run setup
// (same output size, seed, and init policy, so coordinates correspond).
inline std::vector<std::pair<long long, double>> compare_runs(
    const std::vector<std::pair<long long, PointCloud>>& a,
    const std::vector<std::pair<long long, PointCloud>>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("snapshot sets differ in length");
    std::vector<std::pair<long long, double>> out;
    out.reserve(a.size());
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a[s].first != b[s].first) {
            throw std::invalid_argument("snapshot iterations do not match");
        }
        const PointCloud& pa = a[s].second;
        const PointCloud& pb = b[s].second;
        if (pa.size() != pb.size()) throw std::invalid_argument("snapshot sizes do not match");
        double sum = 0.0;
        for (std::size_t i = 0; i < pa.size(); ++i) sum += squared_dist(pa[i], pb[i]);
        out.emplace_back(a[s].first, std::sqrt(sum));
    }
    return out;
}

}  // namespace cdd
