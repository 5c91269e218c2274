#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tgeom/error.hpp"
#include "tgeom/point.hpp"

namespace tgeom {

/// Anything that supplies a world function over its own point type. Every
/// sigma-immanent algorithm in the library is written against this concept,
/// so replacing one geometry by another is just passing a different object.
template <class G>
concept WorldFunction = requires(const G& g, const typename G::point_type& p) {
    typename G::scalar_type;
    { g.sigma(p, p) } -> std::convertible_to<typename G::scalar_type>;
};

enum class GeometryKind { euclidean, minkowski, distorted, tabulated };

inline std::string to_string(GeometryKind k) {
    switch (k) {
    case GeometryKind::euclidean: return "euclidean";
    case GeometryKind::minkowski: return "minkowski";
    case GeometryKind::distorted: return "distorted";
    case GeometryKind::tabulated: return "tabulated";
    }
    return "?";
}

enum class LengthClass { real, imaginary };

/// sqrt(2 sigma) with the sign of 2 sigma carried as a tag instead of a complex number.
struct TaggedLength {
    double magnitude = 0.0;
    LengthClass cls = LengthClass::real;

    bool is_real() const noexcept { return cls == LengthClass::real; }
    bool is_spacelike() const noexcept { return cls == LengthClass::imaginary; }
};

/// One sigma table entry as read from a file.
struct SigmaSample {
    std::string a;
    std::string b;
    double sigma = 0.0;
};

struct LabeledPoint {
    std::string id;
    Point point;
};

template <class T>
class BasicGeometry {
public:
    using scalar_type = T;
    using point_type = BasicPoint<T>;

    static BasicGeometry euclidean(std::size_t dim) {
        require_dim(dim);
        BasicGeometry g(GeometryKind::euclidean, dim);
        return g;
    }

    static BasicGeometry minkowski(std::size_t dim, T c = T(1)) {
        require_dim(dim);
        if (!(c > T(0))) throw Error(Errc::invalid_parameter, "light speed c must be > 0");
        BasicGeometry g(GeometryKind::minkowski, dim);
        g.c_ = c;
        return g;
    }

    static BasicGeometry distorted(std::size_t dim, T c, T d, T sigma0) {
        require_dim(dim);
        if (!(c > T(0))) throw Error(Errc::invalid_parameter, "light speed c must be > 0");
        if (!(d >= T(0))) throw Error(Errc::invalid_parameter, "distortion d must be >= 0");
        if (!(sigma0 > T(0))) throw Error(Errc::invalid_parameter, "threshold sigma0 must be > 0");
        BasicGeometry g(GeometryKind::distorted, dim);
        g.c_ = c;
        g.d_ = d;
        g.sigma0_ = sigma0;
        return g;
    }

    /// Finite geometry from an explicit sigma matrix, without any symmetrization
    /// or validation of the table beyond its shape. Use load_tabulated for file data.
    static BasicGeometry tabulated_unchecked(std::vector<point_type> points, std::vector<T> matrix,
                                             std::vector<std::string> ids = {}) {
        const std::size_t n = points.size();
        if (n == 0) throw Error(Errc::invalid_parameter, "tabulated geometry needs points");
        if (matrix.size() != n * n)
            throw Error(Errc::dimension_mismatch, "sigma matrix must be n x n");
        const std::size_t dim = points.front().dim();
        auto table = std::make_shared<Table>();
        for (std::size_t i = 0; i < n; ++i) {
            if (points[i].dim() != dim)
                throw Error(Errc::dimension_mismatch, "tabulated points of differing dimension");
            if (!table->index.emplace(points[i], i).second)
                throw Error(Errc::invalid_parameter, "duplicate tabulated point coordinates");
        }
        if (ids.empty())
            for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
        table->points = std::move(points);
        table->sigma = std::move(matrix);
        table->ids = std::move(ids);
        BasicGeometry g(GeometryKind::tabulated, dim);
        g.table_ = std::move(table);
        return g;
    }

    GeometryKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    T c() const noexcept { return c_; }
    T d() const noexcept { return d_; }
    T sigma0() const noexcept { return sigma0_; }
    bool is_discrete() const noexcept { return kind_ == GeometryKind::tabulated; }
    bool is_spacetime() const noexcept {
        return kind_ == GeometryKind::minkowski || kind_ == GeometryKind::distorted;
    }

    /// The carrier set of a tabulated geometry (empty for analytic kinds).
    const std::vector<point_type>& carrier() const {
        static const std::vector<point_type> empty;
        return table_ ? table_->points : empty;
    }
    const std::vector<std::string>& carrier_ids() const {
        static const std::vector<std::string> empty;
        return table_ ? table_->ids : empty;
    }

    T sigma(const point_type& p, const point_type& q) const {
        check_point(p);
        check_point(q);
        switch (kind_) {
        case GeometryKind::euclidean: return euclidean_sigma(p, q);
        case GeometryKind::minkowski: return minkowski_sigma_unchecked(p, q);
        case GeometryKind::distorted: return deform(minkowski_sigma_unchecked(p, q));
        case GeometryKind::tabulated: {
            const std::size_t n = table_->points.size();
            return table_->sigma[lookup(p) * n + lookup(q)];
        }
        }
        throw Error(Errc::internal, "unhandled geometry kind");
    }

    /// The undeformed Minkowski world function of a space-time geometry.
    T minkowski_sigma(const point_type& p, const point_type& q) const {
        if (!is_spacetime()) throw Error(Errc::invalid_parameter, "not a space-time geometry");
        check_point(p);
        check_point(q);
        return minkowski_sigma_unchecked(p, q);
    }

    /// The distortion map sigma_M -> sigma_d applied to a Minkowski value.
    T deform(T sigma_m) const {
        if (sigma_m > sigma0_) return sigma_m + d_;
        if (sigma_m >= T(0)) return (T(1) + d_ / sigma0_) * sigma_m;
        return sigma_m;
    }

    /// Index of a carrier point of a tabulated geometry.
    std::size_t lookup(const point_type& p) const {
        auto it = table_->index.find(p);
        if (it == table_->index.end()) throw Error(Errc::unknown_point, "point not in tabulated carrier");
        return it->second;
    }

private:
    struct Table {
        std::vector<point_type> points;
        std::vector<std::string> ids;
        std::vector<T> sigma;
        std::map<point_type, std::size_t> index;
    };

    BasicGeometry(GeometryKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

    static void require_dim(std::size_t dim) {
        if (dim == 0) throw Error(Errc::invalid_parameter, "dimension must be positive");
    }

    void check_point(const point_type& p) const {
        if (p.dim() != dim_)
            throw Error(Errc::dimension_mismatch,
                        "point has " + std::to_string(p.dim()) + " coordinates, geometry has " +
                            std::to_string(dim_));
        if (!p.is_finite()) throw Error(Errc::non_finite, "point coordinates must be finite");
    }

    static T euclidean_sigma(const point_type& p, const point_type& q) {
        T s(0);
        for (std::size_t i = 0; i < p.dim(); ++i) {
            const T d = p[i] - q[i];
            s += d * d;
        }
        return s / T(2);
    }

    T minkowski_sigma_unchecked(const point_type& p, const point_type& q) const {
        const T dt = c_ * (p[0] - q[0]);
        T space(0);
        for (std::size_t i = 1; i < p.dim(); ++i) {
            const T d = p[i] - q[i];
            space += d * d;
        }
        return (dt * dt - space) / T(2);
    }

    GeometryKind kind_;
    std::size_t dim_;
    T c_ = T(1);
    T d_ = T(0);
    T sigma0_ = T(1);
    std::shared_ptr<const Table> table_;
};

using Geometry = BasicGeometry<double>;

template <WorldFunction G>
TaggedLength distance(const G& g, const typename G::point_type& p, const typename G::point_type& q) {
    const double two_sigma = 2.0 * static_cast<double>(g.sigma(p, q));
    if (two_sigma >= 0.0) return {std::sqrt(two_sigma), LengthClass::real};
    return {std::sqrt(-two_sigma), LengthClass::imaginary};
}

/// Builds a finite geometry from labelled points and a table of sigma values.
/// Pairs may be given in either or both orders; both orders are averaged when
/// they agree to `tol` (relative), otherwise the table violates symmetry.
inline Geometry load_tabulated(const std::vector<LabeledPoint>& points,
                               const std::vector<SigmaSample>& samples, double tol = 1e-9) {
    const std::size_t n = points.size();
    if (n == 0) throw Error(Errc::invalid_parameter, "tabulated geometry needs points");
    std::map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < n; ++i)
        if (!by_id.emplace(points[i].id, i).second)
            throw Error(Errc::invalid_parameter, "duplicate point id '" + points[i].id + "'");

    std::vector<std::optional<double>> given(n * n);
    for (const auto& s : samples) {
        auto ia = by_id.find(s.a);
        auto ib = by_id.find(s.b);
        if (ia == by_id.end() || ib == by_id.end())
            throw Error(Errc::unknown_point, "sigma entry references unknown id '" +
                                                 (ia == by_id.end() ? s.a : s.b) + "'");
        if (!std::isfinite(s.sigma)) throw Error(Errc::non_finite, "sigma entry is not finite");
        auto& slot = given[ia->second * n + ib->second];
        if (slot && std::abs(*slot - s.sigma) > tol * std::max(1.0, std::abs(s.sigma)))
            throw Error(Errc::symmetry_violation, "conflicting duplicate entry " + s.a + "," + s.b);
        slot = s.sigma;
    }

    std::vector<double> matrix(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (const auto& diag = given[i * n + i]; diag && std::abs(*diag) > tol)
            throw Error(Errc::diagonal_violation,
                        "sigma(" + points[i].id + "," + points[i].id + ") = " + std::to_string(*diag));
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& ab = given[i * n + j];
            const auto& ba = given[j * n + i];
            if (!ab && !ba)
                throw Error(Errc::missing_pair, "no sigma for " + points[i].id + "," + points[j].id);
            double value = ab ? *ab : *ba;
            if (ab && ba) {
                const double scale = std::max({1.0, std::abs(*ab), std::abs(*ba)});
                if (std::abs(*ab - *ba) > tol * scale)
                    throw Error(Errc::symmetry_violation,
                                "sigma(" + points[i].id + "," + points[j].id + ") != sigma(" +
                                    points[j].id + "," + points[i].id + ")");
                value = 0.5 * (*ab + *ba);
            }
            matrix[i * n + j] = value;
            matrix[j * n + i] = value;
        }
    }

    std::vector<Point> pts;
    std::vector<std::string> ids;
    for (const auto& lp : points) {
        if (!lp.point.is_finite()) throw Error(Errc::non_finite, "point '" + lp.id + "' is not finite");
        pts.push_back(lp.point);
        ids.push_back(lp.id);
    }
    return Geometry::tabulated_unchecked(std::move(pts), std::move(matrix), std::move(ids));
}

} // namespace tgeom
