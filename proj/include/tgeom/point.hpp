#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "tgeom/error.hpp"

namespace tgeom {

/// A carrier point, labelled by coordinates. The coordinates are a
/// computational label only; geometric relations go through the world function.
template <class T>
class BasicPoint {
public:
    using value_type = T;

    BasicPoint() = default;
    BasicPoint(std::initializer_list<T> coords) : coords_(coords) {}
    explicit BasicPoint(std::vector<T> coords) : coords_(std::move(coords)) {}
    explicit BasicPoint(std::size_t dim) : coords_(dim, T(0)) {}

    std::size_t dim() const noexcept { return coords_.size(); }
    const T& operator[](std::size_t i) const { return coords_[i]; }
    T& operator[](std::size_t i) { return coords_[i]; }
    std::span<const T> coords() const noexcept { return coords_; }

    bool is_finite() const {
        using std::isfinite;
        return std::all_of(coords_.begin(), coords_.end(),
                           [](const T& x) { return isfinite(x); });
    }

    friend bool operator==(const BasicPoint& a, const BasicPoint& b) { return a.coords_ == b.coords_; }

    friend bool operator<(const BasicPoint& a, const BasicPoint& b) {
        return std::lexicographical_compare(a.coords_.begin(), a.coords_.end(), b.coords_.begin(),
                                            b.coords_.end());
    }

    // Coordinate arithmetic. Only used by the explicitly coordinate-based probes
    // (ray marching, random sampling, chain construction), never by sigma-immanent code.
    friend BasicPoint operator+(BasicPoint a, const BasicPoint& b) {
        require_same_dim(a, b);
        for (std::size_t i = 0; i < a.dim(); ++i) a.coords_[i] += b.coords_[i];
        return a;
    }
    friend BasicPoint operator-(BasicPoint a, const BasicPoint& b) {
        require_same_dim(a, b);
        for (std::size_t i = 0; i < a.dim(); ++i) a.coords_[i] -= b.coords_[i];
        return a;
    }
    friend BasicPoint operator*(const T& s, BasicPoint a) {
        for (auto& x : a.coords_) x *= s;
        return a;
    }

    template <class U>
    BasicPoint<U> cast() const {
        std::vector<U> out;
        out.reserve(coords_.size());
        for (const auto& x : coords_) out.push_back(static_cast<U>(x));
        return BasicPoint<U>(std::move(out));
    }

private:
    static void require_same_dim(const BasicPoint& a, const BasicPoint& b) {
        if (a.dim() != b.dim())
            throw Error(Errc::dimension_mismatch, "point arithmetic on different dimensions");
    }

    std::vector<T> coords_;
};

using Point = BasicPoint<double>;

/// Euclidean coordinate distance. Used for clustering numeric solutions, not as geometry.
template <class T>
double coordinate_distance(const BasicPoint<T>& a, const BasicPoint<T>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = static_cast<double>(a[i] - b[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

} // namespace tgeom
