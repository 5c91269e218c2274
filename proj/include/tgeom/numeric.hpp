#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tgeom/error.hpp"
#include "tgeom/point.hpp"

namespace tgeom {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Counter-based generator: the value for (counter, lane) depends only on the
/// seed and those two numbers, so any element of a stream can be regenerated
/// without replaying the stream.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(splitmix64(seed ^ 0x6A09E667F3BCC909ull)) {}

    std::uint64_t bits(std::uint64_t counter, std::uint32_t lane = 0) const noexcept {
        return splitmix64(key_ ^ splitmix64(counter * 0x100000001B3ull + lane));
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform(std::uint64_t counter, std::uint32_t lane = 0) const noexcept {
        return static_cast<double>(bits(counter, lane) >> 11) * 0x1.0p-53;
    }

    /// Seed for an independent sub-stream, e.g. one restart of a search.
    std::uint64_t derive(std::uint64_t stream) const noexcept { return splitmix64(key_ + stream); }

private:
    std::uint64_t key_;
};

/// A sequential stream on top of CounterRng.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : rng_(seed) {}

    double uniform() noexcept { return rng_.uniform(counter_++); }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) noexcept {
        return static_cast<std::size_t>(rng_.bits(counter_++) % static_cast<std::uint64_t>(n));
    }

private:
    CounterRng rng_;
    std::uint64_t counter_ = 0;
};

/// Axis-aligned coordinate box used to bound numerical searches.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    static Box cube(std::size_t dim, double lo, double hi) {
        return {std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
    }
    static Box around(const Point& c, double half_width) {
        Box b;
        for (double x : c.coords()) {
            b.lo.push_back(x - half_width);
            b.hi.push_back(x + half_width);
        }
        return b;
    }

    std::size_t dim() const noexcept { return lo.size(); }

    bool contains(const Point& p, double slack = 0.0) const {
        for (std::size_t i = 0; i < dim(); ++i)
            if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
        return true;
    }
    Point center() const {
        Point c(dim());
        for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
        return c;
    }
    Point sample(RngStream& rng) const {
        Point p(dim());
        for (std::size_t i = 0; i < dim(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
        return p;
    }
    double diameter() const {
        double s = 0;
        for (std::size_t i = 0; i < dim(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
        return std::sqrt(s);
    }
    void validate() const {
        if (lo.size() != hi.size() || lo.empty())
            throw Error(Errc::invalid_parameter, "search box bounds malformed");
        for (std::size_t i = 0; i < dim(); ++i)
            if (!(lo[i] < hi[i])) throw Error(Errc::invalid_parameter, "search box has empty extent");
    }
};

using ResidualFn = std::function<Eigen::VectorXd(const Point&)>;

struct SolveOptions {
    int starts = 16;
    int max_iterations = 200;
    /// Accept a point when max |residual| <= residual_tol.
    double residual_tol = 1e-10;
    /// Relative finite-difference step for the Jacobian.
    double fd_step = 1e-6;
    std::uint64_t seed = 0;
    bool include_center = true;
};

struct SolveOutcome {
    std::vector<Point> solutions;
    int converged = 0;
    int attempted = 0;
};

namespace detail {

inline double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

inline Eigen::MatrixXd fd_jacobian(const ResidualFn& f, const Point& x, const Eigen::VectorXd& fx,
                                   double rel_step) {
    Eigen::MatrixXd J(fx.size(), static_cast<Eigen::Index>(x.dim()));
    for (std::size_t j = 0; j < x.dim(); ++j) {
        const double h = rel_step * std::max(1.0, std::abs(x[j]));
        Point xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(static_cast<Eigen::Index>(j)) = (f(xp) - f(xm)) / (xp[j] - xm[j]);    }
    return J;
}

} // namespace detail

/// Gauss-Newton with minimum-norm steps from a single start. Handles square,
/// over- and under-determined systems; for an under-determined system it lands
/// on a point of the solution set near the start.
inline std::optional<Point> gauss_newton(const ResidualFn& f, Point x, const SolveOptions& opt) {
    Eigen::VectorXd r = f(x);
    double best = detail::max_abs(r);
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (!std::isfinite(best)) return std::nullopt;
        const auto J = detail::fd_jacobian(f, x, r, opt.fd_step);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd step = svd.solve(-r);
        if (!step.allFinite()) break;

        // Backtrack until the residual does not grow.
        double lambda = 1.0;
        bool moved = false;
        for (int k = 0; k < 40; ++k) {
            Point trial = x;
            for (std::size_t j = 0; j < x.dim(); ++j) trial[j] += lambda * step(static_cast<Eigen::Index>(j));
            const Eigen::VectorXd rt = f(trial);
            const double m = detail::max_abs(rt);
            if (std::isfinite(m) && m <= best) {
                x = std::move(trial);
                r = rt;
                best = m;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!moved) break;
        double scale = 1.0;
        for (double c : x.coords()) scale = std::max(scale, std::abs(c));
        if (lambda * step.norm() <= 1e-15 * scale) break;
        if (best == 0.0) break;
    }
    if (best <= opt.residual_tol) return x;
    return std::nullopt;
}

/// Runs gauss_newton from the box center and `opt.starts` random points in the box,
/// keeping converged points that lie inside the box.
inline SolveOutcome multistart_solve(const ResidualFn& f, const Box& box, const SolveOptions& opt) {
    box.validate();
    SolveOutcome out;
    RngStream rng(opt.seed);
    std::vector<Point> starts;
    if (opt.include_center) starts.push_back(box.center());
    for (int i = 0; i < opt.starts; ++i) starts.push_back(box.sample(rng));
    const double slack = 1e-9 * std::max(1.0, box.diameter());
    for (const auto& s : starts) {
        ++out.attempted;
        if (auto sol = gauss_newton(f, s, opt); sol && box.contains(*sol, slack)) {
            ++out.converged;
            out.solutions.push_back(std::move(*sol));
        }
    }
    return out;
}

/// Greedy clustering by coordinate distance; returns one representative per cluster.
inline std::vector<Point> cluster_points(const std::vector<Point>& pts, double radius) {
    std::vector<Point> reps;
    for (const auto& p : pts) {
        const bool known = std::any_of(reps.begin(), reps.end(),
                                       [&](const Point& r) { return coordinate_distance(p, r) <= radius; });
        if (!known) reps.push_back(p);
    }
    return reps;
}

/// Bisection on a sign change of f over [a, b]; stops when the bracket is below tol.
template <class F>
double bisect(F&& f, double a, double b, double tol, int max_iter = 200) {
    double fa = f(a);
    for (int i = 0; i < max_iter && std::abs(b - a) > tol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0) == (fm < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace tgeom
