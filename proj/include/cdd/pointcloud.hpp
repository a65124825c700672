#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdd/rng.hpp"

namespace cdd {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
};

inline double dot(const Vec3& a, const Vec3& b) { return (a.x * b.x + a.y * b.y) + a.z * b.z; }

// Fixed accumulation order (dx^2 + dy^2) + dz^2, shared by every distance
// computation in the library so independent implementations agree bitwise.
inline double squared_dist(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return (dx * dx + dy * dy) + dz * dz;
}

inline double dist(const Vec3& a, const Vec3& b) { return std::sqrt(squared_dist(a, b)); }

// Ordered, finite, non-empty set of 3D points. Shapes generated by this
// library live inside [-1, 1]^3.
struct PointCloud {
    std::vector<Vec3> points;

    std::size_t size() const { return points.size(); }
    const Vec3& operator[](std::size_t i) const { return points[i]; }
    Vec3& operator[](std::size_t i) { return points[i]; }
};

inline void validate(const PointCloud& pc) {
    if (pc.points.empty()) throw std::invalid_argument("point cloud is empty");
    for (const Vec3& p : pc.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
            throw std::invalid_argument("point cloud contains a non-finite coordinate");
        }
    }
}

enum class ShapeKind { sphere, cube, torus };

inline const char* shape_name(ShapeKind k) {
    switch (k) {
        case ShapeKind::sphere: return "sphere";
        case ShapeKind::cube: return "cube";
        case ShapeKind::torus: return "torus";
    }
    return "?";
}

struct ShapeSpec {
    ShapeKind kind = ShapeKind::sphere;
    std::size_t count = 0;
    std::uint64_t seed = 0;
};

struct CropSpec {
    Vec3 direction{1.0, 0.0, 0.0};  // must be unit length
    double keep_ratio = 1.0;        // in (0, 1]
};

// Uniform samples on the surface of the requested shape; deterministic per
// (kind, count, seed).
inline PointCloud generate(const ShapeSpec& spec) {
    if (spec.count == 0) throw std::invalid_argument("generate: count must be >= 1");
    PointCloud pc;
    pc.points.reserve(spec.count);
    SplitMix64 rng(spec.seed);
    switch (spec.kind) {
        case ShapeKind::sphere: {
            // Normalized isotropic Gaussian samples.
            while (pc.points.size() < spec.count) {
                const double gx = rng.normal();
                const double gy = rng.normal();
                const double gz = rng.normal();
                const double r = std::sqrt((gx * gx + gy * gy) + gz * gz);
                if (r == 0.0) continue;
                pc.points.push_back({gx / r, gy / r, gz / r});
            }
            break;
        }
        case ShapeKind::cube: {
            // Six faces of [-1,1]^3 have equal area, so a uniform face pick
            // plus two uniform in-face coordinates is area-weighted uniform.
            for (std::size_t i = 0; i < spec.count; ++i) {
                const std::uint64_t face = rng.next() % 6;
                const double a = 2.0 * rng.uniform() - 1.0;
                const double b = 2.0 * rng.uniform() - 1.0;
                switch (face) {
                    case 0: pc.points.push_back({1.0, a, b}); break;
                    case 1: pc.points.push_back({-1.0, a, b}); break;
                    case 2: pc.points.push_back({a, 1.0, b}); break;
                    case 3: pc.points.push_back({a, -1.0, b}); break;
                    case 4: pc.points.push_back({a, b, 1.0}); break;
                    default: pc.points.push_back({a, b, -1.0}); break;
                }
            }
            break;
        }
        case ShapeKind::torus: {
            // Major radius 0.7, minor radius 0.3 (fits [-1,1]^3). Rejection
            // sampling corrects for the non-uniform area element in the
            // poloidal angle: accept with probability (R + r cos v)/(R + r).
            const double R = 0.7, r = 0.3;
            const double pi = 3.14159265358979323846;
            while (pc.points.size() < spec.count) {
                const double u = 2.0 * pi * rng.uniform();
                const double v = 2.0 * pi * rng.uniform();
                const double w = rng.uniform();
                if (w * (R + r) > R + r * std::cos(v)) continue;
                const double ring = R + r * std::cos(v);
                pc.points.push_back({ring * std::cos(u), ring * std::sin(u), r * std::sin(v)});
            }
            break;
        }
    }
    return pc;
}

// Half-space crop: keeps the ceil(keep_ratio * n) points with the smallest
// projection onto direction, preserving their original order.
inline PointCloud crop(const PointCloud& pc, const CropSpec& spec) {
    validate(pc);
    const double norm = std::sqrt(dot(spec.direction, spec.direction));
    if (std::abs(norm - 1.0) > 1e-9) {
        throw std::invalid_argument("crop: direction must be unit length");
    }
    if (!(spec.keep_ratio > 0.0) || spec.keep_ratio > 1.0) {
        throw std::invalid_argument("crop: keep_ratio must be in (0, 1]");
    }
    const std::size_t n = pc.size();
    std::size_t keep = static_cast<std::size_t>(std::ceil(spec.keep_ratio * static_cast<double>(n)));
    keep = std::min(std::max<std::size_t>(keep, 1), n);

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return dot(pc[a], spec.direction) < dot(pc[b], spec.direction);
    });
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());

    PointCloud out;
    out.points.reserve(keep);
    for (std::size_t i : idx) out.points.push_back(pc[i]);
    return out;
}

}  // namespace cdd
