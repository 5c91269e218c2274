#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tgeom/error.hpp"
#include "tgeom/sigma_algebra.hpp"
#include "tgeom/worldfunc.hpp"

namespace tgeom {

// Envelope functions are expression trees whose only leaves are constants and
// sigma(slot_i, slot_j). Slot 0 is the running point R, slots 1.. are the
// skeleton points. Nothing else about a point is reachable from an expression.

enum class ExprOp { sigma, constant, add, sub, mul, div, neg, sqrt, abs, max, det };

class Expr {
public:
    struct Node {
        ExprOp op;
        int slot_a = 0;
        int slot_b = 0;
        double value = 0.0;
        int det_order = 0;
        std::vector<Expr> args;
    };

    Expr() : Expr(constant(0.0)) {}

    static Expr sigma(int a, int b) {
        if (a < 0 || b < 0) throw Error(Errc::invalid_parameter, "sigma slot must be >= 0");
        return Expr(Node{.op = ExprOp::sigma, .slot_a = a, .slot_b = b});
    }
    static Expr constant(double v) { return Expr(Node{.op = ExprOp::constant, .value = v}); }
    static Expr unary(ExprOp op, Expr a) { return Expr(Node{.op = op, .args = {std::move(a)}}); }
    static Expr binary(ExprOp op, Expr a, Expr b) { return Expr(Node{.op = op, .args = {std::move(a), std::move(b)}}); }
    static Expr max_of(std::vector<Expr> args) {
        if (args.empty()) throw Error(Errc::invalid_parameter, "max needs at least one argument");
        return Expr(Node{.op = ExprOp::max, .args = std::move(args)});
    }
    /// Determinant of an n x n matrix given row-major.
    static Expr det(int n, std::vector<Expr> entries) {
        if (n <= 0 || entries.size() != static_cast<std::size_t>(n * n))
            throw Error(Errc::invalid_parameter, "det needs n*n entries");
        return Expr(Node{.op = ExprOp::det, .det_order = n, .args = std::move(entries)});
    }

    const Node& node() const noexcept { return *node_; }
    ExprOp op() const noexcept { return node_->op; }

    /// Highest slot index referenced (-1 for a constant expression).
    int max_slot() const {
        int m = node_->op == ExprOp::sigma ? std::max(node_->slot_a, node_->slot_b) : -1;
        for (const auto& a : node_->args) m = std::max(m, a.max_slot());
        return m;
    }

    friend Expr operator+(Expr a, Expr b) { return binary(ExprOp::add, std::move(a), std::move(b)); }
    friend Expr operator-(Expr a, Expr b) { return binary(ExprOp::sub, std::move(a), std::move(b)); }
    friend Expr operator*(Expr a, Expr b) { return binary(ExprOp::mul, std::move(a), std::move(b)); }
    friend Expr operator/(Expr a, Expr b) { return binary(ExprOp::div, std::move(a), std::move(b)); }
    friend Expr operator-(Expr a) { return unary(ExprOp::neg, std::move(a)); }

private:
    explicit Expr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
    std::shared_ptr<const Node> node_;
};

namespace ex {

inline Expr sig(int a, int b) { return Expr::sigma(a, b); }
inline Expr cst(double v) { return Expr::constant(v); }
inline Expr sqrt(Expr a) { return Expr::unary(ExprOp::sqrt, std::move(a)); }
inline Expr abs(Expr a) { return Expr::unary(ExprOp::abs, std::move(a)); }

/// (O A . O B) with a common origin.
inline Expr dot(int o, int a, int b) { return sig(o, a) + sig(o, b) - sig(a, b); }
/// (A0 A1 . B0 B1), general form.
inline Expr dot(int a0, int a1, int b0, int b1) { return sig(a0, b1) + sig(a1, b0) - sig(a0, b0) - sig(a1, b1); }
/// rho = sqrt(2 sigma); complex when sigma < 0.
inline Expr rho(int a, int b) { return sqrt(cst(2.0) * sig(a, b)); }
/// Second-order Gram determinant F2(O, A, B).
inline Expr gram2(int o, int a, int b) {
    return Expr::det(2, {dot(o, a, a), dot(o, a, b), dot(o, b, a), dot(o, b, b)});
}

} // namespace ex

struct EvalResult {
    double value = 0.0;
    /// A square root of a negative number was taken (complex distance).
    bool complex = false;
    bool zero_denominator = false;

    bool ok() const noexcept { return !complex && !zero_denominator && std::isfinite(value); }
};

namespace detail {

template <WorldFunction G>
double eval_node(const Expr& e, const G& g, const std::vector<const PointOf<G>*>& slots, EvalResult& flags) {
    const auto& n = e.node();
    auto arg = [&](std::size_t i) { return eval_node(n.args[i], g, slots, flags); };
    switch (n.op) {
    case ExprOp::sigma: {
        const auto a = static_cast<std::size_t>(n.slot_a);
        const auto b = static_cast<std::size_t>(n.slot_b);
        if (a >= slots.size() || b >= slots.size())
            throw Error(Errc::invalid_parameter, "expression references a missing skeleton slot");
        return static_cast<double>(g.sigma(*slots[a], *slots[b]));
    }
    case ExprOp::constant: return n.value;
    case ExprOp::add: return arg(0) + arg(1);
    case ExprOp::sub: return arg(0) - arg(1);
    case ExprOp::mul: return arg(0) * arg(1);
    case ExprOp::div: {
        const double num = arg(0);
        const double den = arg(1);
        if (den == 0.0) {
            flags.zero_denominator = true;
            return std::numeric_limits<double>::quiet_NaN();
        }
        return num / den;
    }
    case ExprOp::neg: return -arg(0);
    case ExprOp::sqrt: {
        const double v = arg(0);
        if (v < 0.0) {
            flags.complex = true;
            return std::numeric_limits<double>::quiet_NaN();
        }
        return std::sqrt(v);
    }
    case ExprOp::abs: return std::abs(arg(0));
    case ExprOp::max: {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            const double v = arg(i);
            if (std::isnan(v)) return v;
            m = std::max(m, v);
        }
        return m;
    }
    case ExprOp::det: {
        const int k = n.det_order;
        if (k == 1) return arg(0);
        if (k == 2) return arg(0) * arg(3) - arg(1) * arg(2);
        Eigen::MatrixXd m(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m(i, j) = arg(static_cast<std::size_t>(i * k + j));
        return m.determinant();
    }
    }
    throw Error(Errc::internal, "unhandled expression op");
}

} // namespace detail

/// Evaluates an expression with slot 0 = r and slots 1.. = skeleton.
template <WorldFunction G>
EvalResult evaluate(const Expr& e, const G& g, const PointOf<G>& r, const std::vector<PointOf<G>>& skeleton) {
    std::vector<const PointOf<G>*> slots;
    slots.reserve(skeleton.size() + 1);
    slots.push_back(&r);
    for (const auto& p : skeleton) slots.push_back(&p);
    EvalResult out;
    out.value = detail::eval_node(e, g, slots, out);
    if (!out.ok()) out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
}

struct Membership {
    bool member = false;
    EvalResult eval;
    double threshold = 0.0;
};

/// The zero set {R | f(R) = 0} of an envelope function over a fixed skeleton.
template <class P>
class BasicEnvelopeObject {
public:
    BasicEnvelopeObject(std::string name, std::vector<P> skeleton, Expr envelope, Expr scale = Expr::constant(1.0))
        : name_(std::move(name)), skeleton_(std::move(skeleton)), envelope_(std::move(envelope)),
          scale_(std::move(scale)) {
        if (envelope_.max_slot() > static_cast<int>(skeleton_.size()) ||
            scale_.max_slot() > static_cast<int>(skeleton_.size()))
            throw Error(Errc::invalid_parameter, "envelope references more points than the skeleton has");
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<P>& skeleton() const noexcept { return skeleton_; }
    const Expr& envelope() const noexcept { return envelope_; }
    const Expr& scale() const noexcept { return scale_; }

    template <WorldFunction G>
        requires std::same_as<PointOf<G>, P>
    EvalResult operator()(const G& g, const P& r) const {
        return evaluate(envelope_, g, r, skeleton_);
    }

    /// |f(R)| <= tol * max(1, |scale(R)|). Complex or singular values are never members.
    template <WorldFunction G>
        requires std::same_as<PointOf<G>, P>
    Membership member(const G& g, const P& r, double tol = 1e-9) const {
        Membership m;
        m.eval = (*this)(g, r);
        const auto s = evaluate(scale_, g, r, skeleton_);
        m.threshold = tol * std::max(1.0, s.ok() ? std::abs(s.value) : 1.0);
        m.member = m.eval.ok() && std::abs(m.eval.value) <= m.threshold;
        return m;
    }

private:
    std::string name_;
    std::vector<P> skeleton_;
    Expr envelope_;
    Expr scale_;
};

using EnvelopeObject = BasicEnvelopeObject<Point>;

// ---------------------------------------------------------------------------
// Built-in objects. Slot numbering: 0 = R, then skeleton points in order.

/// Cylinder: F2(P0,P1,Q) - F2(P0,P1,R).
template <WorldFunction G>
BasicEnvelopeObject<PointOf<G>> cylinder(const G&, const PointOf<G>& p0, const PointOf<G>& p1, const PointOf<G>& q) {
    if (p0 == p1) throw Error(Errc::degenerate_skeleton, "cylinder axis points coincide");
    using namespace ex;
    return {"cylinder", {p0, p1, q}, gram2(1, 2, 3) - gram2(1, 2, 0), abs(gram2(1, 2, 3))};
}

/// Ellipsoid: rho(P,R) + rho(R,Q) - 2a.
template <WorldFunction G>
BasicEnvelopeObject<PointOf<G>> ellipsoid(const G& g, const PointOf<G>& p, const PointOf<G>& q, double two_a) {
    if (!(two_a > 0)) throw Error(Errc::invalid_parameter, "2a must be > 0");
    if (static_cast<double>(g.sigma(p, q)) < 0)
        throw Error(Errc::undefined_distance_class, "ellipsoid foci are spacelike separated");
    using namespace ex;
    return {"ellipsoid", {p, q}, rho(1, 0) + rho(0, 2) - cst(two_a), cst(two_a)};
}

/// Segment: rho(P0,P1) - rho(P0,R) - rho(R,P1).
template <WorldFunction G>
BasicEnvelopeObject<PointOf<G>> segment(const G& g, const PointOf<G>& p0, const PointOf<G>& p1) {
    if (!(static_cast<double>(g.sigma(p0, p1)) > 0))
        throw Error(Errc::undefined_distance_class, "segment needs 2 sigma(P0,P1) > 0");
    using namespace ex;
    return {"segment", {p0, p1}, rho(1, 2) - rho(1, 0) - rho(0, 2), rho(1, 2)};
}

/// Straight (tube) through P0 and Q: (P0Q.P0R)^2 - (P0Q.P0Q)(P0R.P0R).
template <WorldFunction G>
BasicEnvelopeObject<PointOf<G>> tube_straight(const G&, const PointOf<G>& p0, const PointOf<G>& q) {
    if (p0 == q) throw Error(Errc::degenerate_skeleton, "tube needs P0 != Q");
    using namespace ex;
    const Expr s = dot(1, 2, 0);
    return {"tube_straight", {p0, q}, s * s - dot(1, 2, 2) * dot(1, 0, 0), abs(dot(1, 2, 2) * dot(1, 0, 0))};
}

/// Tube through a remote point Q0 parallel to P0Q (same direction):
/// (P0Q.Q0R) - |P0Q||Q0R| for a real-length direction, (P0Q.Q0R) + |P0Q|_s|Q0R|_s for a spacelike one.
template <WorldFunction G>
BasicEnvelopeObject<PointOf<G>> tube_remote(const G& g, const PointOf<G>& q0, const PointOf<G>& p0,
                                            const PointOf<G>& q) {
    if (p0 == q) throw Error(Errc::degenerate_skeleton, "tube needs P0 != Q");
    const double s = static_cast<double>(g.sigma(p0, q));
    if (s == 0.0) throw Error(Errc::undefined_direction, "direction P0Q has zero length");
    using namespace ex;
    // slots: 1 = Q0, 2 = P0, 3 = Q
    const Expr u_dot_v = dot(2, 3, 1, 0);
    const double sign = s > 0 ? 1.0 : -1.0;
    const Expr lengths = sqrt(cst(2.0 * sign) * sig(2, 3)) * sqrt(cst(2.0 * sign) * sig(1, 0));
    Expr f = s > 0 ? u_dot_v - lengths : u_dot_v + lengths;
    return {"tube_remote", {q0, p0, q}, std::move(f), lengths};
}

/// Frame tube T_{QP^n}: all ratios (P0Pi.P0R)/(P0P1.P0R) equal (P0Pi.P0Q)/(P0P1.P0Q), i = 2..n.
/// Envelope value is the largest ratio mismatch.
template <WorldFunction G>
BasicEnvelopeObject<PointOf<G>> tube_frame(const G& g, const BasicSkeleton<PointOf<G>>& frame, const PointOf<G>& q) {
    if (frame.order() < 2) throw Error(Errc::degenerate_skeleton, "frame tube needs n >= 2");
    if (static_cast<double>(scalar_common_origin(g, frame[0], frame[1], q)) == 0.0)
        throw Error(Errc::degenerate_projection, "(P0P1.P0Q) vanishes");
    using namespace ex;
    const int n = static_cast<int>(frame.order());
    const int q_slot = n + 2;
    std::vector<Expr> terms;
    for (int i = 2; i <= n; ++i) {
        const Expr r_ratio = dot(1, i + 1, 0) / dot(1, 2, 0);
        const Expr q_ratio = dot(1, i + 1, q_slot) / dot(1, 2, q_slot);
        terms.push_back(abs(r_ratio - q_ratio));
    }
    auto skel = frame.points();
    skel.push_back(q);
    return {"tube_frame", std::move(skel), Expr::max_of(std::move(terms))};
}

// ---------------------------------------------------------------------------

struct RadiusResult {
    double radius = 0.0;
    /// No sign change and no zero along the probed ray.
    bool no_zero = false;
};

/// Outermost r in [0, r_max] where the envelope vanishes on the ray
/// axis_point + r * normal. Complex or singular samples count as outside the
/// domain and never bracket a root.
inline RadiusResult cross_section_radius(const Geometry& g, const EnvelopeObject& obj, const Point& axis_point,
                                         const Point& normal, double r_max, double tol = 1e-12,
                                         int samples = 256) {
    if (!(r_max >= 0)) throw Error(Errc::invalid_parameter, "r_max must be >= 0");
    if (normal.dim() != axis_point.dim()) throw Error(Errc::dimension_mismatch, "normal dimension");
    auto f = [&](double r) {
        Point x = axis_point;
        for (std::size_t i = 0; i < x.dim(); ++i) x[i] += r * normal[i];
        return obj(g, x).value;
    };
    if (r_max == 0.0) {
        const double f0 = f(0.0);
        return {0.0, !(std::abs(f0) <= tol)};
    }
    std::vector<double> rs(static_cast<std::size_t>(samples) + 1), fs(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) {
        rs[k] = r_max * static_cast<double>(k) / samples;
        fs[k] = f(rs[k]);
    }
    for (std::size_t k = rs.size() - 1; k-- > 0;) {
        const double a = fs[k], b = fs[k + 1];
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        if (b == 0.0) return {rs[k + 1], false};
        if ((a < 0) != (b < 0) || a == 0.0) {
            if (a == 0.0) return {rs[k], false};
            return {bisect(f, rs[k], rs[k + 1], tol), false};
        }
    }
    return {0.0, true};
}

/// r(tau) sampled along a tube, with the closed form alongside when one exists.
struct TubeProfile {
    std::vector<double> tau_grid;
    std::vector<double> radius;
    std::optional<std::vector<double>> radius_closed_form;
};

} // namespace tgeom
