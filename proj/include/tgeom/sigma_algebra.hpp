#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tgeom/error.hpp"
#include "tgeom/worldfunc.hpp"

namespace tgeom {

/// The ordered pair {origin, end}.
template <class P>
struct BasicPointVector {
    P origin;
    P end;
};

using PointVector = BasicPointVector<Point>;

/// P0, P1, ..., Pn. The vectors P0Pi are the basic vectors of the frame.
template <class P>
class BasicSkeleton {
public:
    BasicSkeleton() = default;
    BasicSkeleton(std::initializer_list<P> pts) : BasicSkeleton(std::vector<P>(pts)) {}
    explicit BasicSkeleton(std::vector<P> pts) : points_(std::move(pts)) {
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = i + 1; j < points_.size(); ++j)
                if (points_[i] == points_[j])
                    throw Error(Errc::degenerate_skeleton, "skeleton points must be distinct");
    }

    std::size_t size() const noexcept { return points_.size(); }
    /// Number of basic vectors n.
    std::size_t order() const noexcept { return points_.empty() ? 0 : points_.size() - 1; }
    const P& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<P>& points() const noexcept { return points_; }

private:
    std::vector<P> points_;
};

using Skeleton = BasicSkeleton<Point>;

template <WorldFunction G>
using PointOf = typename G::point_type;
template <WorldFunction G>
using ScalarOf = typename G::scalar_type;

template <WorldFunction G>
ScalarOf<G> length_squared(const G& g, const BasicPointVector<PointOf<G>>& v) {
    return ScalarOf<G>(2) * g.sigma(v.origin, v.end);
}

/// (P0P1.P0P2) = sigma(P0,P1) + sigma(P0,P2) - sigma(P1,P2)
template <WorldFunction G>
ScalarOf<G> scalar_common_origin(const G& g, const PointOf<G>& p0, const PointOf<G>& p1,
                                 const PointOf<G>& p2) {
    return g.sigma(p0, p1) + g.sigma(p0, p2) - g.sigma(p1, p2);
}

/// (P0P1.Q0Q1) = sigma(P0,Q1) + sigma(P1,Q0) - sigma(P0,Q0) - sigma(P1,Q1)
template <WorldFunction G>
ScalarOf<G> scalar_general(const G& g, const BasicPointVector<PointOf<G>>& v,
                           const BasicPointVector<PointOf<G>>& w) {
    return g.sigma(v.origin, w.end) + g.sigma(v.end, w.origin) - g.sigma(v.origin, w.origin) -
           g.sigma(v.end, w.end);
}

/// Gram matrix g_ik = (P0Pi.P0Pk), i,k = 1..n.
template <WorldFunction G>
Eigen::MatrixXd gram_matrix(const G& g, const BasicSkeleton<PointOf<G>>& skel) {
    if (skel.size() < 2) throw Error(Errc::degenerate_skeleton, "skeleton needs at least two points");
    const auto n = static_cast<Eigen::Index>(skel.order());
    const auto& p0 = skel[0];
    // sigma(P0,Pi) is shared by the whole row/column.
    std::vector<double> s0(skel.size());
    for (std::size_t i = 1; i < skel.size(); ++i) s0[i] = static_cast<double>(g.sigma(p0, skel[i]));
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = 2.0 * s0[i + 1];
        for (Eigen::Index k = i + 1; k < n; ++k) {
            const double v =
                s0[i + 1] + s0[k + 1] -
                static_cast<double>(g.sigma(skel[static_cast<std::size_t>(i + 1)],
                                            skel[static_cast<std::size_t>(k + 1)]));
            m(i, k) = v;
            m(k, i) = v;
        }
    }
    return m;
}

/// F_n(P^n) = det ||(P0Pi.P0Pk)||
template <WorldFunction G>
double gram_determinant(const G& g, const BasicSkeleton<PointOf<G>>& skel) {
    return gram_matrix(g, skel).determinant();
}

/// |det M| scaled by the largest entry, so the test is independent of the
/// overall length scale of the skeleton.
inline double relative_determinant(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return 1.0;
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return std::abs((m / scale).determinant());
}

/// (P0Q.P0R)^2 = (P0Q.P0Q)(P0R.P0R)
template <WorldFunction G>
bool is_collinear(const G& g, const PointOf<G>& p0, const PointOf<G>& q, const PointOf<G>& r,
                  double tol = 1e-9) {
    if (tol < 0) throw Error(Errc::invalid_parameter, "tolerance must be >= 0");
    const double s = static_cast<double>(scalar_common_origin(g, p0, q, r));
    const double lhs = s * s;
    const double rhs = 4.0 * static_cast<double>(g.sigma(p0, q)) * static_cast<double>(g.sigma(p0, r));
    return std::abs(lhs - rhs) <= tol * std::max(1.0, std::abs(rhs));
}

/// (v.w) - |v||w| for two real-length vectors, (v.w) + |v|_s |w|_s for two
/// spacelike ones. Zero iff v and w point the same way.
template <WorldFunction G>
double parallelism_residual(const G& g, const BasicPointVector<PointOf<G>>& v,
                            const BasicPointVector<PointOf<G>>& w) {
    const double lv = static_cast<double>(length_squared(g, v));
    const double lw = static_cast<double>(length_squared(g, w));
    const double s = static_cast<double>(scalar_general(g, v, w));
    if (lv > 0 && lw > 0) return s - std::sqrt(lv) * std::sqrt(lw);
    if (lv < 0 && lw < 0) return s + std::sqrt(-lv) * std::sqrt(-lw);
    throw Error(Errc::undefined_direction, "vectors of different or null length class");
}

/// Same-direction parallelism of two real-length vectors: (v.w) = |v|.|w|.
template <WorldFunction G>
bool is_parallel_same_direction(const G& g, const BasicPointVector<PointOf<G>>& v,
                                const BasicPointVector<PointOf<G>>& w, double tol = 1e-9) {
    const double lv = static_cast<double>(length_squared(g, v));
    const double lw = static_cast<double>(length_squared(g, w));
    if (!(lv > 0) || !(lw > 0))
        throw Error(Errc::undefined_direction, "parallelism needs positive squared lengths");
    const double prod = std::sqrt(lv) * std::sqrt(lw);
    const double s = static_cast<double>(scalar_general(g, v, w));
    return std::abs(s - prod) <= tol * std::max(1.0, prod);
}

/// Covariant coordinates x_i(P) = (P0Pi.P0P), i = 1..n.
template <WorldFunction G>
std::vector<double> covariant_coordinates(const G& g, const BasicSkeleton<PointOf<G>>& skel,
                                          const PointOf<G>& p) {
    std::vector<double> x;
    x.reserve(skel.order());
    for (std::size_t i = 1; i < skel.size(); ++i)
        x.push_back(static_cast<double>(scalar_common_origin(g, skel[0], skel[i], p)));
    return x;
}

struct CollinearityFit {
    bool collinear = false;
    double a = 0.0;
    double max_residual = 0.0;

    explicit operator bool() const noexcept { return collinear; }
};

/// Collinearity of P0Q and P0R through frame components:
/// (P0Pi.P0Q) = a (P0Pi.P0R) for all i with one constant a != 0.
/// `require_positive` adds a > 0 (the same-direction form used in Minkowski frames).
template <WorldFunction G>
CollinearityFit coordinate_collinearity(const G& g, const BasicSkeleton<PointOf<G>>& frame,
                                        const PointOf<G>& q, const PointOf<G>& r, double tol = 1e-9,
                                        bool require_positive = false) {
    if (frame.size() < 2) throw Error(Errc::degenerate_skeleton, "frame needs at least two points");
    const auto y = covariant_coordinates(g, frame, q);
    const auto z = covariant_coordinates(g, frame, r);
    double yy = 0, zz = 0, yz = 0, ymax = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        yy += y[i] * y[i];
        zz += z[i] * z[i];
        yz += y[i] * z[i];
        ymax = std::max(ymax, std::abs(y[i]));
    }
    if (yy == 0.0) throw Error(Errc::degenerate_projection, "all projections (P0Pi.P0Q) vanish");
    CollinearityFit fit;
    if (zz == 0.0) {
        fit.max_residual = ymax;
        return fit;
    }
    fit.a = yz / zz;
    for (std::size_t i = 0; i < y.size(); ++i)
        fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.a * z[i]));
    const bool sign_ok = require_positive ? fit.a > 0 : fit.a != 0;
    fit.collinear = sign_ok && fit.max_residual <= tol * std::max(1.0, ymax);
    return fit;
}

template <class P>
struct BasicFrameData {
    BasicSkeleton<P> skeleton;
    Eigen::MatrixXd gram;
    Eigen::MatrixXd gram_inverse;
    /// Eigenvalues of the Gram matrix, largest first.
    std::vector<double> eigenvalues;
};

using FrameData = BasicFrameData<Point>;

template <WorldFunction G>
BasicFrameData<PointOf<G>> frame_data(const G& g, const BasicSkeleton<PointOf<G>>& skel,
                                      double tol = 1e-9) {
    BasicFrameData<PointOf<G>> fd;
    fd.skeleton = skel;
    fd.gram = gram_matrix(g, skel);
    if (!(relative_determinant(fd.gram) > tol))
        throw Error(Errc::degenerate_skeleton, "Gram determinant vanishes; basic vectors are dependent");
    fd.gram_inverse = fd.gram.inverse();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fd.gram, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    for (Eigen::Index i = ev.size(); i-- > 0;) fd.eigenvalues.push_back(ev(i));
    return fd;
}

} // namespace tgeom
