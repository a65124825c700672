#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdd/io.hpp"
#include "cdd/losses.hpp"
#include "cdd/trainer.hpp"
#include "cdd/weightfns.hpp"

namespace cdd {

// Loss distillation via gradient matching: pick the weighting parameters
// whose rescaled gradient-weight curve z(d), evaluated on a short distance
// window near 0, best matches the rescaled arccosh reference curve under a
// reference distance distribution p(d).

struct DistillConfig {
    double alpha = 1.0;   // reference curve parameter
    double d_max = 0.01;  // window end
    double step = 2e-4;   // window step (default grid: 51 samples)
    enum class Approx { dominant, finite_diff } approx = Approx::dominant;
    double delta = 1e-4;  // finite_diff forward-difference step

    std::vector<double> grid() const {
        if (!(step > 0.0) || step > d_max) {
            throw std::invalid_argument("distill: need 0 < step <= d_max");
        }
        const std::size_t n = static_cast<std::size_t>(std::floor(d_max / step + 0.5));
        std::vector<double> d(n + 1);
        for (std::size_t i = 0; i <= n; ++i) d[i] = static_cast<double>(i) * step;
        return d;
    }
};

struct GradientWeightCurve {
    std::vector<double> d_values;
    std::vector<double> z_values;
    bool rescaled = false;
};

// Sampled reference distance distribution: strictly increasing d, p summing
// to 1.
struct ReferenceDistribution {
    std::vector<double> d_values;
    std::vector<double> p_values;
};

inline void validate(const ReferenceDistribution& dist) {
    if (dist.d_values.size() != dist.p_values.size() || dist.d_values.empty()) {
        throw std::invalid_argument("reference distribution: size mismatch or empty");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < dist.d_values.size(); ++i) {
        if (i > 0 && !(dist.d_values[i] > dist.d_values[i - 1])) {
            throw std::invalid_argument("reference distribution: d must be strictly increasing");
        }
        if (dist.p_values[i] < 0.0) {
            throw std::invalid_argument("reference distribution: p must be nonnegative");
        }
        sum += dist.p_values[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("reference distribution: probabilities must sum to 1");
    }
}

// Reference gradient-weight curve z(d) = 2 alpha d / sqrt((1+alpha d^2)^2 - 1)
// on the config window, with the analytic limit sqrt(2 alpha) at d = 0.
// Returned unrescaled.
inline GradientWeightCurve reference_curve(const DistillConfig& cfg) {
    if (!(cfg.alpha > 0.0)) throw std::invalid_argument("distill: alpha must be > 0");
    GradientWeightCurve c;
    c.d_values = cfg.grid();
    c.z_values.reserve(c.d_values.size());
    for (double d : c.d_values) c.z_values.push_back(z_hyper(cfg.alpha, d));
    return c;
}

// Candidate gradient-weight curve of a weighting f with mode m:
//   dominant:    z(d) = f(m + d)
//   finite_diff: z(d) = [(f(m + d + delta) - f(m + d)) / delta] * d + f(m + d)
// Both agree at d = 0 exactly (the difference quotient is multiplied by d).
inline GradientWeightCurve candidate_curve(const WeightingFunction& f, const DistillConfig& cfg) {
    GradientWeightCurve c;
    c.d_values = cfg.grid();
    c.z_values.reserve(c.d_values.size());
    const double m = mode(f);
    for (double d : c.d_values) {
        const double fx = pdf(f, m + d);
        if (cfg.approx == DistillConfig::Approx::dominant) {
            c.z_values.push_back(fx);
        } else {
            if (!(cfg.delta > 0.0)) throw std::invalid_argument("distill: delta must be > 0");
            const double slope = (pdf(f, m + d + cfg.delta) - fx) / cfg.delta;
            c.z_values.push_back(slope * d + fx);
        }
    }
    return c;
}

// Divides by the maximum z value; idempotent.
inline GradientWeightCurve rescale(GradientWeightCurve curve) {
    double max_z = 0.0;
    for (double z : curve.z_values) max_z = std::max(max_z, std::abs(z));
    if (!(max_z > 0.0)) throw std::invalid_argument("rescale: curve is identically zero");
    for (double& z : curve.z_values) z /= max_z;
    curve.rescaled = true;
    return curve;
}

// Distillation objective: sum_i p(d_i) |z_ref(d_i) - z_cand(d_i)| over the
// shared grid. Both curves must already be rescaled.
inline double objective(const GradientWeightCurve& ref, const GradientWeightCurve& cand,
                        const ReferenceDistribution& dist) {
    if (!ref.rescaled || !cand.rescaled) {
        throw std::invalid_argument("objective: curves must be rescaled");
    }
    const std::size_t n = ref.d_values.size();
    if (cand.d_values.size() != n || dist.d_values.size() != n) {
        throw std::invalid_argument("objective: grids do not match");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (ref.d_values[i] != cand.d_values[i] || ref.d_values[i] != dist.d_values[i]) {
            throw std::invalid_argument("objective: grids do not match");
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += dist.p_values[i] * std::abs(ref.z_values[i] - cand.z_values[i]);
    }
    return sum;
}

// ---- reference distribution builders ------------------------------------

inline ReferenceDistribution uniform_distribution(const DistillConfig& cfg) {
    ReferenceDistribution dist;
    dist.d_values = cfg.grid();
    const double p = 1.0 / static_cast<double>(dist.d_values.size());
    dist.p_values.assign(dist.d_values.size(), p);
    return dist;
}

// p_i proportional to exp(-rate * d_i); rate 0 degenerates to uniform.
inline ReferenceDistribution exp_decay_distribution(const DistillConfig& cfg, double rate) {
    if (rate < 0.0) throw std::invalid_argument("exp_decay: rate must be >= 0");
    if (rate == 0.0) return uniform_distribution(cfg);
    ReferenceDistribution dist;
    dist.d_values = cfg.grid();
    dist.p_values.reserve(dist.d_values.size());
    double sum = 0.0;
    for (double d : dist.d_values) {
        const double w = std::exp(-rate * d);
        dist.p_values.push_back(w);
        sum += w;
    }
    for (double& p : dist.p_values) p /= sum;
    return dist;
}

// Default: heavy mass near zero (most nearest-neighbor distances observed in
// normalized-coordinate training sit well below the window end).
inline ReferenceDistribution default_distribution(const DistillConfig& cfg) {
    return exp_decay_distribution(cfg, 300.0);
}

namespace detail {

// Bins raw (d, weight) samples onto the config grid by nearest grid point;
// samples outside the window are dropped.
inline ReferenceDistribution bin_onto_grid(const DistillConfig& cfg,
                                           const std::vector<std::pair<double, double>>& samples,
                                           const std::string& what) {
    ReferenceDistribution dist;
    dist.d_values = cfg.grid();
    dist.p_values.assign(dist.d_values.size(), 0.0);
    for (const auto& [d, w] : samples) {
        const double pos = d / cfg.step;
        const long long i = static_cast<long long>(std::floor(pos + 0.5));
        if (i < 0 || i >= static_cast<long long>(dist.d_values.size())) continue;
        dist.p_values[static_cast<std::size_t>(i)] += w;
    }
    double sum = 0.0;
    for (double p : dist.p_values) sum += p;
    if (!(sum > 0.0)) {
        throw std::invalid_argument(what + ": no probability mass falls inside the window");
    }
    for (double& p : dist.p_values) p /= sum;
    return dist;
}

}  // namespace detail

// Two-column CSV with header "d,p": distance and count (or probability) per
// row. Rows are binned onto the config grid and normalized.
inline ReferenceDistribution empirical_file_distribution(const DistillConfig& cfg,
                                                         const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(path, 0, "empty file");
    ++lineno;
    detail::strip_cr(line);
    if (line != "d,p") throw ParseError(path, lineno, "expected header 'd,p'");
    std::vector<std::pair<double, double>> samples;
    double prev_d = -1.0;
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_cr(line);
        if (detail::blank_or_comment(line)) continue;
        const auto fields = detail::split_char(line, ',');
        if (fields.size() != 2) {
            throw ParseError(path, lineno, "expected 2 fields, got " + std::to_string(fields.size()));
        }
        double d = 0.0, p = 0.0;
        if (!parse_double_token(fields[0], d) || !parse_double_token(fields[1], p)) {
            throw ParseError(path, lineno, "invalid number");
        }
        if (d < 0.0 || p < 0.0) throw ParseError(path, lineno, "negative value");
        if (!(d > prev_d)) throw ParseError(path, lineno, "d must be strictly increasing");
        prev_d = d;
        samples.emplace_back(d, p);
    }
    if (samples.empty()) throw ParseError(path, 0, "no data rows");
    return detail::bin_onto_grid(cfg, samples, path);
}

// Runs a short arccosh-distance toy training and histograms the
// nearest-neighbor distances of its final iterate (both directions) onto the
// config grid.
inline ReferenceDistribution self_generated_distribution(const DistillConfig& cfg,
                                                         const PointCloud& partial,
                                                         const PointCloud& gt,
                                                         TrainConfig train_cfg) {
    train_cfg.loss = LossSpec{LossKind::hypercd, cfg.alpha};
    auto [model, log] = train(partial, gt, train_cfg);
    const NearestAssignment na = assign(model.points, gt);
    std::vector<std::pair<double, double>> samples;
    samples.reserve(na.forward.size() + na.backward.size());
    for (const auto& pr : na.forward) samples.emplace_back(pr.min_distance, 1.0);
    for (const auto& pr : na.backward) samples.emplace_back(pr.min_distance, 1.0);
    return detail::bin_onto_grid(cfg, samples, "self-generated distribution");
}

// ---- grid search ---------------------------------------------------------

struct DistillResult {
    WeightKind kind = WeightKind::landau;
    std::vector<std::string> param_names;
    std::vector<double> best_params;
    double objective = 0.0;
    GradientWeightCurve reference;  // rescaled
    GradientWeightCurve fitted;     // rescaled, at best_params
};

// Exhaustive search over the parameter grid; ties keep the first point in
// lexicographic grid order.
inline DistillResult grid_search(WeightKind kind, const ParamGrid& grid, const DistillConfig& cfg,
                                 const ReferenceDistribution& dist) {
    validate(dist);
    const auto points = grid_points(grid);
    if (points.empty()) throw std::invalid_argument("grid_search: empty grid");
    const GradientWeightCurve ref = rescale(reference_curve(cfg));

    DistillResult best;
    best.kind = kind;
    best.param_names = grid.names;
    bool have_best = false;
    for (const auto& params : points) {
        const WeightingFunction f = make_weighting(kind, params);
        const GradientWeightCurve cand = rescale(candidate_curve(f, cfg));
        const double obj = objective(ref, cand, dist);
        if (!have_best || obj < best.objective) {
            have_best = true;
            best.best_params = params;
            best.objective = obj;
            best.fitted = cand;
        }
    }
    best.reference = ref;
    return best;
}

// ---- result export -------------------------------------------------------

// Writes the fitted and reference curves: header "d,z_ref,z_fit".
inline void write_curves_csv(const DistillResult& res, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "d,z_ref,z_fit\n";
    for (std::size_t i = 0; i < res.reference.d_values.size(); ++i) {
        out << format_double(res.reference.d_values[i]) << ','
            << format_double(res.reference.z_values[i]) << ','
            << format_double(res.fitted.z_values[i]) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Writes the fitted parameters: header "kind,param_names,param_values,objective",
// names/values joined with ';' (empty for the parameter-free kind).
inline void write_summary_csv(const DistillResult& res, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "kind,param_names,param_values,objective\n";
    std::string names, values;
    for (std::size_t i = 0; i < res.param_names.size(); ++i) {
        if (i > 0) {
            names += ';';
            values += ';';
        }
        names += res.param_names[i];
        values += format_double(res.best_params[i]);
    }
    out << kind_name(res.kind) << ',' << names << ',' << values << ','
        << format_double(res.objective) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace cdd
