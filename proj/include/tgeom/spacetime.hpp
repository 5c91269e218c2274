#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <exception>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "tgeom/envelope.hpp"
#include "tgeom/error.hpp"
#include "tgeom/numeric.hpp"
#include "tgeom/sigma_algebra.hpp"
#include "tgeom/worldfunc.hpp"

namespace tgeom {

/// Working precision of world chains (100 decimal digits).
using ChainReal = boost::multiprecision::cpp_bin_float_100;
using ChainPoint = BasicPoint<ChainReal>;

struct DistortionParams {
    double d = 0.0;
    double sigma0 = 0.1;
    double c = 1.0;
    double mu_d = 1.0;

    double mu_m_sq() const noexcept { return mu_d * mu_d - 2.0 * d; }

    /// Parameter signs plus mu_d^2 > 2d.
    void validate_basic() const {
        if (!(d >= 0) || !std::isfinite(d)) throw Error(Errc::invalid_parameter, "d must be >= 0");
        if (!(sigma0 > 0) || !std::isfinite(sigma0)) throw Error(Errc::invalid_parameter, "sigma0 must be > 0");
        if (!(c > 0) || !std::isfinite(c)) throw Error(Errc::invalid_parameter, "c must be > 0");
        if (!(mu_d > 0) || !std::isfinite(mu_d)) throw Error(Errc::invalid_parameter, "mu_d must be > 0");
        if (!(mu_m_sq() > 0)) throw Error(Errc::parameter_regime, "mu_d^2 must exceed 2d");
    }

    /// Adds the link regime mu_M^2 > 2 sigma0: every link sits on the sigma_M > sigma0 branch.
    void validate() const {
        validate_basic();
        if (!(mu_m_sq() > 2.0 * sigma0))
            throw Error(Errc::parameter_regime, "mu_M^2 = mu_d^2 - 2d must exceed 2 sigma0");
    }

    Geometry geometry() const { return Geometry::distorted(4, c, d, sigma0); }
};

struct LinkRelations {
    double mu_M_sq = 0.0;
    /// (P_{i-1}P_i . P_iP_{i+1})_d - (P_{i-1}P_i . P_iP_{i+1})_M for adjacent links.
    double scalar_shift = 0.0;
};

/// All three sigma values entering an adjacent-link scalar product lie above
/// sigma0, so each picks up +d; the product sigma(A,C) - sigma(A,B) - sigma(B,C)
/// therefore shifts by -d.
inline LinkRelations link_relations(const DistortionParams& p) {
    p.validate();
    return {p.mu_m_sq(), -p.d};
}

/// Half-width of the outer branches of the segment profile, sqrt(2(sigma0+d))/mu_d.
inline double profile_branch_point(const DistortionParams& p) {
    return std::sqrt(2.0 * (p.sigma0 + p.d)) / p.mu_d;
}

/// Closed-form spatial radius r(tau) of the distorted segment of length mu_d.
inline double radius_closed_form(const DistortionParams& p, double tau) {
    p.validate_basic();
    if (!(tau >= 0.0 && tau <= 1.0)) throw Error(Errc::invalid_parameter, "tau must lie in [0,1]");
    const double b = profile_branch_point(p);
    if (!(b < 0.5)) throw Error(Errc::parameter_regime, "profile branches overlap: sqrt(2(sigma0+d))/mu_d >= 1/2");
    const double mu2 = p.mu_d * p.mu_d;
    const double k = 1.0 - 2.0 * p.d / mu2;
    const double sd = p.sigma0 + p.d;
    auto outer = [&](double s) {
        const double f = 1.0 - s * p.d / (2.0 * sd);
        return s * s * mu2 * (f * f / k - p.sigma0 / sd);
    };
    double r2;
    if (tau < b) {
        r2 = outer(tau);
    } else if (tau > 1.0 - b) {
        r2 = outer(1.0 - tau);
    } else {
        const double h = tau - 0.5;
        r2 = 1.5 * p.d + 2.0 * p.d * h * h / k;
    }
    if (r2 < 0.0) {
        if (r2 > -1e-12) return 0.0;
        throw Error(Errc::parameter_regime, "negative r^2 in closed-form radius");
    }
    return std::sqrt(r2);
}

struct WobbleAngle {
    double cosh_theta = 1.0;
    double theta = 0.0;
    double small_d_approx = 0.0;
};

/// cosh theta_dM = (mu_d^2 - d)/(mu_d^2 - 2d), theta ~ sqrt(2d)/mu_d for small d.
inline WobbleAngle wobble_angle_closed_form(const DistortionParams& p) {
    p.validate_basic();
    const double mu2 = p.mu_d * p.mu_d;
    WobbleAngle w;
    w.cosh_theta = (mu2 - p.d) / (mu2 - 2.0 * p.d);
    w.theta = std::acosh(w.cosh_theta);
    w.small_d_approx = std::sqrt(2.0 * p.d) / p.mu_d;
    return w;
}

/// Minkowski cosh of the angle between adjacent links that are exactly
/// parallel in sigma_d: (u.v)_M = mu_d^2 + d over mu_M^2.
inline double joint_cosh_from_parallelism(const DistortionParams& p) {
    p.validate_basic();
    const double mu2 = p.mu_d * p.mu_d;
    return (mu2 + p.d) / (mu2 - 2.0 * p.d);
}

inline double distortion_from_quantum(double hbar, double b, double c) {
    if (!(hbar > 0) || !(b > 0) || !(c > 0)) throw Error(Errc::invalid_parameter, "hbar, b, c must be > 0");
    return hbar / (2.0 * b * c);
}

// ---------------------------------------------------------------------------
// World chains

namespace detail {

template <class T>
struct FourVec {
    std::array<T, 4> v{};  // (c t, x, y, z)

    T minkowski_dot(const FourVec& o) const { return v[0] * o.v[0] - v[1] * o.v[1] - v[2] * o.v[2] - v[3] * o.v[3]; }
};

template <class T>
FourVec<T> difference(const BasicPoint<T>& a, const BasicPoint<T>& b, T c) {
    return {{c * (b[0] - a[0]), b[1] - a[1], b[2] - a[2], b[3] - a[3]}};
}

} // namespace detail

/// Next chain point P_next with |P_cur P_next|_d = mu_d and P_prev P_cur parallel to
/// P_cur P_next in sigma_d. In the rest frame of u = P_prev P_cur the new link
/// has time component (mu_d^2 + d)/mu_M and a spatial part of fixed length whose
/// direction is uniform on the 2-sphere (from the two uniforms u1, u2).
template <class T>
BasicPoint<T> extend_chain(const DistortionParams& p, const BasicPoint<T>& prev, const BasicPoint<T>& cur, double u1,
                           double u2) {
    using std::sqrt;
    p.validate();
    if (prev.dim() != 4 || cur.dim() != 4) throw Error(Errc::dimension_mismatch, "chain points need 4 coordinates");
    const T c(p.c);
    const auto u = detail::difference(prev, cur, c);
    const T uu = u.minkowski_dot(u);
    if (!(uu > 0) || !(u.v[0] > 0)) throw Error(Errc::invalid_parameter, "previous link is not future timelike");
    const T mu_m = sqrt(T(p.mu_m_sq()));
    const T norm = sqrt(uu);
    std::array<T, 4> U;
    for (int i = 0; i < 4; ++i) U[i] = u.v[i] / norm;

    const T mu2 = T(p.mu_d) * T(p.mu_d);
    const T v0 = (mu2 + T(p.d)) / mu_m;
    T vs2 = v0 * v0 - mu_m * mu_m;
    if (vs2 < 0) vs2 = 0;
    const T vs = sqrt(vs2);

    const double z = 2.0 * u1 - 1.0;
    const double phi = 2.0 * std::numbers::pi * u2;
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    std::array<T, 3> n{T(s * std::cos(phi)), T(s * std::sin(phi)), T(z)};
    // Unit length in T; a double-rounded direction would be amplified by the boost.
    const T nn = sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    for (auto& x : n) x /= nn;
    std::array<T, 3> vp{vs * n[0], vs * n[1], vs * n[2]};

    // Boost from the rest frame of U back to the coordinate frame.
    const T udotv = U[1] * vp[0] + U[2] * vp[1] + U[3] * vp[2];
    const T k = v0 + udotv / (U[0] + 1);
    std::array<T, 4> v{U[0] * v0 + udotv, vp[0] + U[1] * k, vp[1] + U[2] * k, vp[2] + U[3] * k};

    BasicPoint<T> next = cur;
    next[0] += v[0] / c;
    for (int i = 1; i < 4; ++i) next[i] += v[static_cast<std::size_t>(i)];
    return next;
}

struct WorldChain {
    DistortionParams params;
    std::uint64_t seed = 0;
    /// Stored in ChainReal precision: the chain's rapidity drifts, and double
    /// coordinates cannot resolve link lengths far along a long chain.
    std::vector<ChainPoint> points;
    /// Minkowski cosh of the angle at each joint i = 1..n-1.
    std::vector<double> cosh_theta_dM;

    double link_length_d() const noexcept { return params.mu_d; }
    std::size_t links() const noexcept { return points.empty() ? 0 : points.size() - 1; }
};

/// Counter-based draws keyed by (seed, joint index).
inline WorldChain simulate_chain(const DistortionParams& p, std::size_t n_links, std::uint64_t seed) {
    p.validate();
    if (n_links < 2) throw Error(Errc::invalid_parameter, "a chain needs at least 2 links");
    WorldChain ch{.params = p, .seed = seed};
    ch.points.reserve(n_links + 1);
    ch.points.push_back(ChainPoint{ChainReal(0), ChainReal(0), ChainReal(0), ChainReal(0)});
    using std::sqrt;
    ch.points.push_back(ChainPoint{sqrt(ChainReal(p.mu_m_sq())) / ChainReal(p.c), ChainReal(0), ChainReal(0), ChainReal(0)});
    const CounterRng rng(seed);
    for (std::size_t i = 1; i < n_links; ++i) {
        const auto& prev = ch.points[i - 1];
        const auto& cur = ch.points[i];
        ch.points.push_back(extend_chain<ChainReal>(p, prev, cur, rng.uniform(i, 0), rng.uniform(i, 1)));
    }
    const ChainReal c(p.c);
    for (std::size_t i = 1; i < n_links; ++i) {
        const auto u = detail::difference(ch.points[i - 1], ch.points[i], c);
        const auto v = detail::difference(ch.points[i], ch.points[i + 1], c);
        const ChainReal ch_theta = u.minkowski_dot(v) / sqrt(u.minkowski_dot(u) * v.minkowski_dot(v));
        ch.cosh_theta_dM.push_back(static_cast<double>(ch_theta));
    }
    return ch;
}

struct ChainCheck {
    /// max |rho_d(P_i,P_{i+1}) - mu_d| / mu_d
    double max_link_error = 0.0;
    /// max |(u.v)_d - |u|_d |v|_d| / mu_d^2 over joints
    double max_parallel_residual = 0.0;
    bool time_increasing = true;
    /// Whether any sigma_d evaluation fell in the band 0 <= sigma_M <= sigma0.
    bool touched_middle_branch = false;
};

/// Verifies a chain against sigma_d in ChainReal precision.
inline ChainCheck verify_chain(const WorldChain& ch) {
    const auto& p = ch.params;
    const auto g = BasicGeometry<ChainReal>::distorted(4, ChainReal(p.c), ChainReal(p.d), ChainReal(p.sigma0));
    ChainCheck out;
    using std::abs;
    using std::sqrt;
    auto sigma = [&](const ChainPoint& a, const ChainPoint& b) {
        const ChainReal sm = g.minkowski_sigma(a, b);
        if (sm >= 0 && sm <= ChainReal(p.sigma0)) out.touched_middle_branch = true;
        return g.deform(sm);
    };
    const ChainReal mu(p.mu_d);
    for (std::size_t i = 0; i + 1 < ch.points.size(); ++i) {
        const ChainReal len = sqrt(2 * sigma(ch.points[i], ch.points[i + 1]));
        out.max_link_error = std::max(out.max_link_error, static_cast<double>(abs(len - mu) / mu));
        if (!(ch.points[i + 1][0] > ch.points[i][0])) out.time_increasing = false;
    }
    for (std::size_t i = 1; i + 1 < ch.points.size(); ++i) {
        const auto &a = ch.points[i - 1], &b = ch.points[i], &c = ch.points[i + 1];
        // (AB.BC) = sigma(A,C) - sigma(A,B) - sigma(B,C)
        const ChainReal sab = sigma(a, b), sbc = sigma(b, c);
        const ChainReal s = sigma(a, c) - sab - sbc;
        const ChainReal res = s - sqrt(2 * sab) * sqrt(2 * sbc);
        out.max_parallel_residual = std::max(out.max_parallel_residual, static_cast<double>(abs(res) / (mu * mu)));
    }
    return out;
}

inline Point to_double(const ChainPoint& q) { return q.cast<double>(); }

/// Spatial distance of a chain point from the initial time axis.
inline double transverse_displacement(const WorldChain& ch, std::size_t i) {
    const auto& q = ch.points.at(i);
    const double x = static_cast<double>(q[1]), y = static_cast<double>(q[2]), z = static_cast<double>(q[3]);
    return std::sqrt(x * x + y * y + z * z);
}

struct TransverseRms {
    std::size_t n = 0;
    double rms = 0.0;
};

struct EnsembleSummary {
    DistortionParams params;
    std::size_t links = 0;
    std::vector<std::uint64_t> seeds;
    double mean_cosh = 0.0;
    double theta_exact = 0.0;
    double theta_small_d = 0.0;
    double max_link_error = 0.0;
    double max_parallel_residual = 0.0;
    std::vector<TransverseRms> transverse_rms_by_N;
};

/// Link counts 1, 2, 5, 10, 20, 50, ... up to n_links.
inline std::vector<std::size_t> checkpoint_links(std::size_t n_links) {
    std::vector<std::size_t> out;
    for (std::size_t dec = 1; dec <= n_links; dec *= 10)
        for (std::size_t m : {1, 2, 5})
            if (dec * m <= n_links) out.push_back(dec * m);
    if (out.empty() || out.back() != n_links) out.push_back(n_links);
    return out;
}

/// Runs one chain per seed. Chains are computed concurrently, results are
/// combined in seed order so the summary is independent of scheduling.
inline EnsembleSummary run_ensemble(const DistortionParams& p, std::size_t n_links,
                                    const std::vector<std::uint64_t>& seeds, std::vector<WorldChain>* keep = nullptr) {
    if (seeds.empty()) throw Error(Errc::invalid_parameter, "ensemble needs at least one seed");
    p.validate();
    std::vector<WorldChain> chains(seeds.size());
    std::vector<ChainCheck> checks(seeds.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(seeds.size(), std::thread::hardware_concurrency()));
    // A worker failure must reach the caller, not std::terminate.
    std::vector<std::exception_ptr> failures(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < seeds.size(); i += workers) {
                        chains[i] = simulate_chain(p, n_links, seeds[i]);
                        checks[i] = verify_chain(chains[i]);
                    }
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    EnsembleSummary s{.params = p, .links = n_links, .seeds = seeds};
    const auto w = wobble_angle_closed_form(p);
    s.theta_exact = w.theta;
    s.theta_small_d = w.small_d_approx;
    double sum = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < chains.size(); ++i) {
        for (double v : chains[i].cosh_theta_dM) {
            sum += v;
            ++count;
        }
        s.max_link_error = std::max(s.max_link_error, checks[i].max_link_error);
        s.max_parallel_residual = std::max(s.max_parallel_residual, checks[i].max_parallel_residual);
    }
    s.mean_cosh = sum / static_cast<double>(count);
    for (std::size_t n : checkpoint_links(n_links)) {
        double acc = 0;
        for (const auto& ch : chains) {
            const double r = transverse_displacement(ch, n);
            acc += r * r;
        }
        s.transverse_rms_by_N.push_back({n, std::sqrt(acc / static_cast<double>(chains.size()))});
    }
    if (keep) *keep = std::move(chains);
    return s;
}

// ---------------------------------------------------------------------------
// Segment profile

enum class Parametrization {
    /// tau = rho_d(P0, R) / mu_d for the boundary point R; P1 at Minkowski time mu_M.
    arc_fraction,
    /// tau = x0 / mu_d with P1 = (mu_d, 0, 0, 0).
    coordinate_time,
};

struct SegmentProfileOptions {
    std::size_t points = 101;
    Parametrization parametrization = Parametrization::arc_fraction;
    double tol = 1e-13;
};

struct SegmentProfile {
    TubeProfile profile;
    /// Axis time of each sample.
    std::vector<double> axis_time;
    /// max |r_numeric - r_closed| over the grid.
    double max_abs_deviation = 0.0;
    /// max |r_numeric - r_closed| / r_closed over interior points with r_closed > 0.
    double max_rel_deviation = 0.0;
};

/// Samples the radius of the distorted segment P0P1 by root finding on the
/// segment envelope along spatial rays, next to the closed form.
inline SegmentProfile segment_profile(const DistortionParams& p, const SegmentProfileOptions& opt = {}) {
    p.validate();
    if (opt.points < 2) throw Error(Errc::invalid_parameter, "profile needs at least 2 tau points");
    const Geometry g = p.geometry();
    const double T = opt.parametrization == Parametrization::arc_fraction ? std::sqrt(p.mu_m_sq()) : p.mu_d;
    const Point p0{0.0, 0.0, 0.0, 0.0};
    const Point p1{T / p.c, 0.0, 0.0, 0.0};
    const auto seg = segment(g, p0, p1);
    const Point normal{0.0, 1.0, 0.0, 0.0};
    const double rho01 = distance(g, p0, p1).magnitude;

    // Radius at axis time t (coordinate units); the ray stays inside both light cones.
    auto radius_at = [&](double t) {
        const double r_max = std::min(p.c * t, T - p.c * t);
        if (!(r_max > 0)) return 0.0;
        return cross_section_radius(g, seg, Point{t, 0.0, 0.0, 0.0}, normal, r_max, opt.tol).radius;
    };
    auto arc_tau = [&](double t) {
        const double r = radius_at(t);
        return distance(g, p0, Point{t, r, 0.0, 0.0}).magnitude / rho01;
    };

    SegmentProfile out;
    std::vector<double> closed;
    for (std::size_t k = 0; k < opt.points; ++k) {
        const double tau = static_cast<double>(k) / static_cast<double>(opt.points - 1);
        double t;
        if (k == 0) {
            t = 0.0;
        } else if (k + 1 == opt.points) {
            t = T / p.c;
        } else if (opt.parametrization == Parametrization::coordinate_time) {
            t = tau * T / p.c;
        } else {
            t = bisect([&](double x) { return arc_tau(x) - tau; }, 0.0, T / p.c, 1e-15 * T / p.c);
        }
        const double r = radius_at(t);
        const double rc = radius_closed_form(p, tau);
        out.profile.tau_grid.push_back(tau);
        out.profile.radius.push_back(r);
        out.axis_time.push_back(t);
        closed.push_back(rc);
        out.max_abs_deviation = std::max(out.max_abs_deviation, std::abs(r - rc));
        if (k > 0 && k + 1 < opt.points && rc > 0)
            out.max_rel_deviation = std::max(out.max_rel_deviation, std::abs(r - rc) / rc);
    }
    out.profile.radius_closed_form = std::move(closed);
    return out;
}

// ---------------------------------------------------------------------------

/// Pure Lorentz boost with velocity beta (in units of c) applied to event
/// coordinates (t, x, y, z), followed by a translation.
inline Point lorentz_transform(const Point& x, const std::array<double, 3>& beta, const Point& shift, double c = 1.0) {
    if (x.dim() != 4 || shift.dim() != 4) throw Error(Errc::dimension_mismatch, "boost needs 4 coordinates");
    const double b2 = beta[0] * beta[0] + beta[1] * beta[1] + beta[2] * beta[2];
    if (!(b2 < 1.0)) throw Error(Errc::invalid_parameter, "boost speed must be < c");
    const double gamma = 1.0 / std::sqrt(1.0 - b2);
    const double ct = c * x[0];
    const double bx = beta[0] * x[1] + beta[1] * x[2] + beta[2] * x[3];
    const double ct_new = gamma * (ct - bx);
    const double k = b2 > 0 ? (gamma - 1.0) * bx / b2 - gamma * ct : 0.0;
    Point out(4);
    out[0] = ct_new / c + shift[0];
    for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i + 1)] = x[static_cast<std::size_t>(i + 1)] + k * beta[static_cast<std::size_t>(i)] + shift[static_cast<std::size_t>(i + 1)];
    return out;
}

} // namespace tgeom
