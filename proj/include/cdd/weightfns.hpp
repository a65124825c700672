#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdd/gammafn.hpp"

namespace cdd {

// The eight weighting distributions: each supplies a probability density f,
// its analytic derivative f', and a closed-form mode m. Distances enter the
// weighted Chamfer loss through f(m + d), so only values at and right of the
// mode matter during training, but the densities are implemented on their
// full support.
enum class WeightKind {
    chi_squared,    // k
    extreme_value,  // beta (Gumbel scale)
    weibull,        // k, lambda
    log_logistic,   // alpha, beta
    gamma,          // k (shape), theta (scale)
    logistic,       // sigma
    normal,         // sigma
    landau,         // parameter-free (Moyal form)
};

inline const char* kind_name(WeightKind k) {
    switch (k) {
        case WeightKind::chi_squared: return "chi_squared";
        case WeightKind::extreme_value: return "extreme_value";
        case WeightKind::weibull: return "weibull";
        case WeightKind::log_logistic: return "log_logistic";
        case WeightKind::gamma: return "gamma";
        case WeightKind::logistic: return "logistic";
        case WeightKind::normal: return "normal";
        case WeightKind::landau: return "landau";
    }
    return "?";
}

inline const std::vector<std::string>& param_names(WeightKind k) {
    static const std::vector<std::string> none{};
    static const std::vector<std::string> k_only{"k"};
    static const std::vector<std::string> beta_only{"beta"};
    static const std::vector<std::string> k_lambda{"k", "lambda"};
    static const std::vector<std::string> alpha_beta{"alpha", "beta"};
    static const std::vector<std::string> k_theta{"k", "theta"};
    static const std::vector<std::string> sigma_only{"sigma"};
    switch (k) {
        case WeightKind::chi_squared: return k_only;
        case WeightKind::extreme_value: return beta_only;
        case WeightKind::weibull: return k_lambda;
        case WeightKind::log_logistic: return alpha_beta;
        case WeightKind::gamma: return k_theta;
        case WeightKind::logistic: return sigma_only;
        case WeightKind::normal: return sigma_only;
        case WeightKind::landau: return none;
    }
    return none;
}

// True for kinds whose support is x > 0 (the others live on all of R).
inline bool positive_support(WeightKind k) {
    switch (k) {
        case WeightKind::chi_squared:
        case WeightKind::weibull:
        case WeightKind::log_logistic:
        case WeightKind::gamma: return true;
        default: return false;
    }
}

struct WeightingFunction {
    WeightKind kind = WeightKind::landau;
    std::vector<double> params;  // ordered per param_names(kind)
};

inline WeightingFunction make_weighting(WeightKind kind, std::vector<double> params) {
    const auto& names = param_names(kind);
    if (params.size() != names.size()) {
        throw std::invalid_argument(std::string(kind_name(kind)) + ": expected " +
                                    std::to_string(names.size()) + " parameter(s), got " +
                                    std::to_string(params.size()));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!(params[i] > 0.0)) {
            throw std::invalid_argument(std::string(kind_name(kind)) + ": parameter '" +
                                        names[i] + "' must be strictly positive");
        }
    }
    return WeightingFunction{kind, std::move(params)};
}

namespace detail {
inline constexpr double pi_const = 3.14159265358979323846;
inline const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi_const);
}  // namespace detail

// Density value. Outside the support the density is 0; on the support
// boundary it is the continuous limit where finite, else 0.
inline double pdf(const WeightingFunction& f, double x) {
    switch (f.kind) {
        case WeightKind::chi_squared: {
            const double k = f.params[0];
            if (x < 0.0) return 0.0;
            if (x == 0.0) return k == 2.0 ? 0.5 : 0.0;
            const double half_k = 0.5 * k;
            return std::pow(x, half_k - 1.0) * std::exp(-0.5 * x) /
                   (std::pow(2.0, half_k) * gamma_fn(half_k));
        }
        case WeightKind::extreme_value: {
            const double beta = f.params[0];
            const double z = x / beta;
            return std::exp(-(z + std::exp(-z))) / beta;
        }
        case WeightKind::weibull: {
            const double k = f.params[0], lambda = f.params[1];
            if (x < 0.0) return 0.0;
            if (x == 0.0) return k == 1.0 ? 1.0 / lambda : 0.0;
            const double t = x / lambda;
            return (k / lambda) * std::pow(t, k - 1.0) * std::exp(-std::pow(t, k));
        }
        case WeightKind::log_logistic: {
            const double alpha = f.params[0], beta = f.params[1];
            if (x < 0.0) return 0.0;
            if (x == 0.0) return beta == 1.0 ? 1.0 / alpha : 0.0;
            const double t = x / alpha;
            const double u = std::pow(t, beta);
            const double denom = 1.0 + u;
            return (beta / alpha) * std::pow(t, beta - 1.0) / (denom * denom);
        }
        case WeightKind::gamma: {
            const double k = f.params[0], theta = f.params[1];
            if (x < 0.0) return 0.0;
            if (x == 0.0) return k == 1.0 ? 1.0 / theta : 0.0;
            return std::pow(x, k - 1.0) * std::exp(-x / theta) /
                   (gamma_fn(k) * std::pow(theta, k));
        }
        case WeightKind::logistic: {
            const double sigma = f.params[0];
            // Symmetric, overflow-safe form.
            const double e = std::exp(-std::abs(x) / sigma);
            const double denom = 1.0 + e;
            return e / (sigma * denom * denom);
        }
        case WeightKind::normal: {
            const double sigma = f.params[0];
            const double z = x / sigma;
            return detail::inv_sqrt_2pi / sigma * std::exp(-0.5 * z * z);
        }
        case WeightKind::landau: {
            return detail::inv_sqrt_2pi * std::exp(-(x + std::exp(-x)) / 2.0);
        }
    }
    return 0.0;
}

// Closed-form mode.
inline double mode(const WeightingFunction& f) {
    switch (f.kind) {
        case WeightKind::chi_squared: return std::max(f.params[0] - 2.0, 0.0);
        case WeightKind::weibull: {
            const double k = f.params[0], lambda = f.params[1];
            if (k <= 1.0) return 0.0;
            return lambda * std::pow((k - 1.0) / k, 1.0 / k);
        }
        case WeightKind::log_logistic: {
            const double alpha = f.params[0], beta = f.params[1];
            if (beta <= 1.0) return 0.0;
            return alpha * std::pow((beta - 1.0) / (beta + 1.0), 1.0 / beta);
        }
        case WeightKind::gamma: {
            const double k = f.params[0], theta = f.params[1];
            if (k < 1.0) return 0.0;
            return (k - 1.0) * theta;
        }
        case WeightKind::extreme_value:
        case WeightKind::logistic:
        case WeightKind::normal:
        case WeightKind::landau: return 0.0;
    }
    return 0.0;
}

// Analytic derivative d pdf / dx, via the logarithmic derivative of each
// density. x must be strictly inside the support; a positive-support kind
// evaluated exactly at 0 is a domain error (the derivative may be unbounded
// there), and x < 0 returns 0 (the density is identically zero).
inline double pdf_prime(const WeightingFunction& f, double x) {
    if (positive_support(f.kind)) {
        if (x < 0.0) return 0.0;
        if (x == 0.0) {
            throw std::domain_error(std::string(kind_name(f.kind)) +
                                    ": pdf_prime undefined on the support boundary x = 0");
        }
    }
    const double value = pdf(f, x);
    switch (f.kind) {
        case WeightKind::chi_squared: {
            const double k = f.params[0];
            return value * ((0.5 * k - 1.0) / x - 0.5);
        }
        case WeightKind::extreme_value: {
            const double beta = f.params[0];
            const double z = x / beta;
            return value * (std::exp(-z) - 1.0) / beta;
        }
        case WeightKind::weibull: {
            const double k = f.params[0], lambda = f.params[1];
            return value * ((k - 1.0) / x - (k / lambda) * std::pow(x / lambda, k - 1.0));
        }
        case WeightKind::log_logistic: {
            const double alpha = f.params[0], beta = f.params[1];
            const double u = std::pow(x / alpha, beta);
            return value * ((beta - 1.0) - 2.0 * beta * u / (1.0 + u)) / x;
        }
        case WeightKind::gamma: {
            const double k = f.params[0], theta = f.params[1];
            return value * ((k - 1.0) / x - 1.0 / theta);
        }
        case WeightKind::logistic: {
            const double sigma = f.params[0];
            return -value * std::tanh(x / (2.0 * sigma)) / sigma;
        }
        case WeightKind::normal: {
            const double sigma = f.params[0];
            return value * (-x / (sigma * sigma));
        }
        case WeightKind::landau: {
            return value * (std::exp(-x) - 1.0) / 2.0;
        }
    }
    return 0.0;
}

// Candidate parameter grids for the distillation search, enumerated in
// lexicographic order (first parameter varies slowest). Values are built from
// integer numerators so reference points like 1.4 or 2.5 appear exactly.
struct ParamGrid {
    std::vector<std::string> names;
    std::vector<std::vector<double>> axes;  // one list per parameter
};

namespace detail {
inline std::vector<double> scaled_range(int lo, int hi, double denom) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int i = lo; i <= hi; ++i) out.push_back(static_cast<double>(i) / denom);
    return out;
}
}  // namespace detail

inline ParamGrid default_grid(WeightKind kind) {
    ParamGrid g;
    g.names = param_names(kind);
    switch (kind) {
        case WeightKind::chi_squared:  // k in 0.5..10 step 0.5
            g.axes = {detail::scaled_range(1, 20, 2.0)};
            break;
        case WeightKind::extreme_value:  // beta in 0.2..5 step 0.2
            g.axes = {detail::scaled_range(1, 25, 5.0)};
            break;
        case WeightKind::weibull:  // k in 1..5 step 0.5, lambda in 0.5..10 step 0.5
            g.axes = {detail::scaled_range(2, 10, 2.0), detail::scaled_range(1, 20, 2.0)};
            break;
        case WeightKind::log_logistic:  // alpha in 1..10 step 1, beta in 1..5 step 0.5
            g.axes = {detail::scaled_range(1, 10, 1.0), detail::scaled_range(2, 10, 2.0)};
            break;
        case WeightKind::gamma:  // k in 1..5 step 0.5, theta in 0.5..5 step 0.5
            g.axes = {detail::scaled_range(2, 10, 2.0), detail::scaled_range(1, 10, 2.0)};
            break;
        case WeightKind::logistic:  // sigma in 0.2..5 step 0.2
        case WeightKind::normal:
            g.axes = {detail::scaled_range(1, 25, 5.0)};
            break;
        case WeightKind::landau:
            g.axes = {};
            break;
    }
    return g;
}

// All grid points in lexicographic order. landau yields a single empty point.
inline std::vector<std::vector<double>> grid_points(const ParamGrid& g) {
    std::vector<std::vector<double>> pts;
    if (g.axes.empty()) {
        pts.push_back({});
        return pts;
    }
    std::size_t total = 1;
    for (const auto& axis : g.axes) {
        if (axis.empty()) throw std::invalid_argument("grid axis is empty");
        total *= axis.size();
    }
    pts.reserve(total);
    std::vector<std::size_t> cursor(g.axes.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        std::vector<double> p(g.axes.size());
        for (std::size_t a = 0; a < g.axes.size(); ++a) p[a] = g.axes[a][cursor[a]];
        pts.push_back(std::move(p));
        for (std::size_t a = g.axes.size(); a-- > 0;) {
            if (++cursor[a] < g.axes[a].size()) break;
            cursor[a] = 0;
        }
    }
    return pts;
}

// Reference parameter points (the settings the loss family is typically run
// at); every default grid contains its kind's point exactly.
inline WeightingFunction reference_point(WeightKind kind) {
    switch (kind) {
        case WeightKind::chi_squared: return make_weighting(kind, {3.0});
        case WeightKind::extreme_value: return make_weighting(kind, {1.4});
        case WeightKind::weibull: return make_weighting(kind, {2.0, 5.0});
        case WeightKind::log_logistic: return make_weighting(kind, {5.0, 2.0});
        case WeightKind::gamma: return make_weighting(kind, {2.0, 2.5});
        case WeightKind::logistic: return make_weighting(kind, {1.0});
        case WeightKind::normal: return make_weighting(kind, {1.4});
        case WeightKind::landau: return make_weighting(kind, {});
    }
    return make_weighting(WeightKind::landau, {});
}

inline const std::vector<WeightKind>& all_weight_kinds() {
    static const std::vector<WeightKind> kinds = {
        WeightKind::chi_squared, WeightKind::extreme_value, WeightKind::weibull,
        WeightKind::log_logistic, WeightKind::gamma,        WeightKind::logistic,
        WeightKind::normal,       WeightKind::landau,
    };
    return kinds;
}

inline WeightKind kind_from_name(const std::string& name) {
    for (WeightKind k : all_weight_kinds()) {
        if (name == kind_name(k)) return k;
    }
    std::string valid;
    for (WeightKind k : all_weight_kinds()) {
        if (!valid.empty()) valid += ", ";
        valid += kind_name(k);
    }
    throw std::invalid_argument("unknown weighting kind '" + name + "' (valid: " + valid + ")");
}

}  // namespace cdd
