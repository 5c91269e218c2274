#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "tgeom/tgeom.hpp"

namespace tgeom::testkit {

/// Hand-rolled generators for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

    Point point(std::size_t dim, double half_width = 1.0) {
        Point p(dim);
        for (std::size_t i = 0; i < dim; ++i) p[i] = uniform(-half_width, half_width);
        return p;
    }
    std::vector<Point> cloud(std::size_t n, std::size_t dim, double half_width = 1.0) {
        std::vector<Point> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(point(dim, half_width));
        return out;
    }
    /// Future-pointing timelike 4-vector difference with Minkowski length^2 in [lo, hi].
    Point timelike_offset(double len_lo, double len_hi, double max_speed = 0.6) {
        const double len = uniform(len_lo, len_hi);
        double bx, by, bz;
        do {
            bx = uniform(-max_speed, max_speed);
            by = uniform(-max_speed, max_speed);
            bz = uniform(-max_speed, max_speed);
        } while (bx * bx + by * by + bz * bz >= max_speed * max_speed);
        const double gamma = 1.0 / std::sqrt(1.0 - bx * bx - by * by - bz * bz);
        return Point{len * gamma, len * gamma * bx, len * gamma * by, len * gamma * bz};
    }

private:
    std::mt19937_64 eng_;
};

/// Coordinate dot products used as independent oracles.
inline double euclid_dot(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}
inline double minkowski_dot(const Point& a, const Point& b, double c = 1.0) {
    double s = c * c * a[0] * b[0];
    for (std::size_t i = 1; i < a.dim(); ++i) s -= a[i] * b[i];
    return s;
}

/// Points that carry no coordinates at all: an index into a hidden table.
struct Handle {
    std::size_t index = 0;
    friend bool operator==(Handle a, Handle b) { return a.index == b.index; }
};

/// World function over opaque handles that counts its evaluations. Code that
/// compiles against it can only learn about points through sigma.
class OpaqueGeometry {
public:
    using point_type = Handle;
    using scalar_type = double;

    OpaqueGeometry(Geometry inner, std::vector<Point> hidden)
        : inner_(std::move(inner)), hidden_(std::move(hidden)), calls_(std::make_shared<std::size_t>(0)) {}

    double sigma(Handle a, Handle b) const {
        ++*calls_;
        return inner_.sigma(hidden_.at(a.index), hidden_.at(b.index));
    }

    Handle add(const Point& p) {
        hidden_.push_back(p);
        return {hidden_.size() - 1};
    }
    Handle handle(std::size_t i) const { return {i}; }
    std::size_t calls() const { return *calls_; }

private:
    Geometry inner_;
    std::vector<Point> hidden_;
    std::shared_ptr<std::size_t> calls_;
};

static_assert(WorldFunction<OpaqueGeometry>);

} // namespace tgeom::testkit
