// Free-point completion demo: crop half of a synthetic sphere away, then
// recover it by directly optimizing output point coordinates under three
// different Chamfer-family losses and comparing the final metrics.

#include <cstdio>
#include <utility>
#include <vector>

#include "cdd/cdd.hpp"

int main() {
    const cdd::PointCloud gt = cdd::generate({cdd::ShapeKind::sphere, 256, 42});
    const cdd::PointCloud partial = cdd::crop(gt, {{1.0, 0.0, 0.0}, 0.5});
    std::printf("ground truth: %zu points on the unit sphere; partial input: %zu points\n\n",
                gt.size(), partial.size());

    const std::vector<std::pair<const char*, cdd::LossSpec>> losses = {
        {"cd_l1", {cdd::LossKind::cd_l1}},
        {"hypercd(alpha=1)", {cdd::LossKind::hypercd, 1.0}},
        {"weighted landau",
         {cdd::LossKind::weighted_cd, 1.0, cdd::reference_point(cdd::WeightKind::landau)}},
    };

    std::printf("%-18s %-12s %-12s %-12s %s\n", "loss", "l1cd start", "l1cd final",
                "l2cd final", "f1 final");
    for (const auto& [name, loss] : losses) {
        cdd::TrainConfig cfg;
        cfg.loss = loss;
        cfg.iters = 800;
        cfg.lr = 0.01;
        cfg.seed = 7;
        cfg.eval_every = 800;
        const auto [model, log] = cdd::train(partial, gt, cfg);
        const cdd::TrainRow& first = log.rows.front();
        const cdd::TrainRow& last = log.rows.back();
        std::printf("%-18s %-12.6f %-12.6f %-12.6f %.4f\n", name, first.l1cd, last.l1cd,
                    last.l2cd, last.f1);
    }

    std::printf("\nevery run starts from the same jittered-partial initialization (seed 7),\n");
    std::printf("so the rows differ only through the loss that drove the optimization.\n");
    return 0;
}
