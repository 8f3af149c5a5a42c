#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <utility>
#include <vector>

#include "cyclicforge/errors.hpp"

namespace cyclicforge {

inline constexpr double kPi = 3.14159265358979323846;

// Global numeric policy: geometry is double precision. 1e-9 for assertions,
// 1e-6 to reject near-parallel side pairs, 1e-12 for degenerate vectors.
inline constexpr double kAssertTol = 1e-9;
inline constexpr double kParallelTol = 1e-6;
inline constexpr double kDegenerateTol = 1e-12;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

    double norm() const { return std::hypot(x, y); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline Vec2 unit_from_angle(double t) { return {std::cos(t), std::sin(t)}; }

inline Vec2 normalized(Vec2 v) {
    double n = v.norm();
    if (n < kDegenerateTol) throw DegenerateVector("cannot normalize near-zero vector");
    return {v.x / n, v.y / n};
}

/// Directed angle rotating u onto v, counterclockwise positive, in (-pi, pi].
/// The antipodal case returns +pi, never -pi, so cumulative position angles
/// are deterministic.
inline double directed_angle(Vec2 u, Vec2 v) {
    if (u.norm() < kDegenerateTol || v.norm() < kDegenerateTol)
        throw DegenerateVector("directed_angle: degenerate input vector");
    double a = std::atan2(cross(u, v), dot(u, v));
    if (a <= -kPi) a = kPi;
    return a;
}

/// Infinite line through `point` with direction `dir` (unit length).
struct Line {
    Vec2 point;
    Vec2 dir;
};

/// Intersection of two lines, or nullopt when |dir_a x dir_b| <= parallel_tol.
inline std::optional<Vec2> line_intersect(const Line& a, const Line& b,
                                          double parallel_tol = kParallelTol) {
    double d = cross(a.dir, b.dir);
    if (std::abs(d) <= parallel_tol) return std::nullopt;
    double t = cross(b.point - a.point, b.dir) / d;
    return a.point + t * a.dir;
}

/// Non-reflex undirected angle between two rays leaving a common point.
inline double ray_angle(Vec2 ray_a, Vec2 ray_b) {
    return std::atan2(std::abs(cross(ray_a, ray_b)), dot(ray_a, ray_b));
}

/// Polygon inscribed in the unit circle. Vertices are indexed 1..2n with
/// p_0 = p_{2n}; theta_i accumulates directed angles between consecutive
/// position vectors and phi_i is the half-sum direction of side i.
class CyclicPolygon {
public:
    int num_sides() const { return static_cast<int>(positions_.size()); }
    int half_n() const { return num_sides() / 2; }
    int winding() const { return winding_; }

    const std::vector<double>& positions() const { return positions_; }

    /// Vertex p_i for i in 0..2n (p_0 == p_{2n}).
    Vec2 vertex(int i) const {
        int m = num_sides();
        if (i < 0 || i > m) throw IndexOutOfRange("vertex index");
        return verts_[i == 0 ? m - 1 : i - 1];
    }

    double theta(int i) const {
        if (i < 0 || i >= static_cast<int>(theta_.size()))
            throw IndexOutOfRange("theta index");
        return theta_[i];
    }

    double phi(int i) const {
        if (i < 1 || i > num_sides()) throw IndexOutOfRange("phi index");
        return 0.5 * (theta_[i] + theta_[i - 1]);
    }

    /// delta_ij = phi_j - phi_i.
    double delta(int i, int j) const { return phi(j) - phi(i); }

    friend CyclicPolygon build_polygon(const std::vector<double>& positions);
    friend CyclicPolygon build_polygon_lenient(const std::vector<double>& positions);

private:
    CyclicPolygon(std::vector<double> positions, bool strict) {
        std::size_t m = positions.size();
        if (strict) {
            if (m < 4) throw OddVertexCount("need at least 4 vertices");
            if (m % 2 != 0) throw OddVertexCount("vertex count must be even");
        }
        positions_ = std::move(positions);
        verts_.reserve(m);
        for (double t : positions_) verts_.push_back(unit_from_angle(t));
        if (strict) {
            for (std::size_t i = 0; i < m; ++i) {
                Vec2 a = verts_[i];
                Vec2 b = verts_[(i + 1) % m];
                if ((a - b).norm() < kAssertTol)
                    throw DegenerateSide("consecutive vertices coincide");
            }
        }
        theta_.resize(m + 1);
        theta_[0] = 0.0;
        for (std::size_t i = 1; i <= m; ++i) {
            Vec2 prev = verts_[(i + m - 2) % m];  // p_{i-1}, with p_0 = p_m
            theta_[i] = theta_[i - 1] + directed_angle(prev, verts_[i - 1]);
        }
        winding_ = static_cast<int>(std::llround(theta_[m] / (2.0 * kPi)));
    }

    std::vector<double> positions_;
    std::vector<Vec2> verts_;
    std::vector<double> theta_;
    int winding_ = 0;
};

/// Build a polygon from 2n angular positions taken in traversal order.
inline CyclicPolygon build_polygon(const std::vector<double>& positions) {
    return CyclicPolygon(positions, /*strict=*/true);
}

/// Variant used for merged-point limit diagrams: coincident positions are
/// allowed and contribute a zero theta step.
inline CyclicPolygon build_polygon_lenient(const std::vector<double>& positions) {
    return CyclicPolygon(positions, /*strict=*/false);
}

/// Side i of the polygon: the line through p_{i-1} and p_i, directed from
/// p_{i-1} toward p_i.
struct SideLine {
    int index = 0;
    Vec2 from;  // p_{i-1}
    Vec2 to;    // p_i
    Vec2 dir;   // unit chord direction w_i
};

inline SideLine side_line(const CyclicPolygon& poly, int i) {
    if (i < 1 || i > poly.num_sides()) throw IndexOutOfRange("side index");
    Vec2 a = poly.vertex(i - 1);
    Vec2 b = poly.vertex(i);
    if ((a - b).norm() < kAssertTol)
        throw DegenerateSide("side has coincident endpoints");
    return {i, a, b, normalized(b - a)};
}

/// The measured angle between two polygon side lines at their intersection.
struct SidePairAngle {
    std::pair<int, int> pair;
    Vec2 intersection;
    double psi = 0.0;          // non-reflex, in (0, pi)
    int orientation_sign = 0;  // sgn(w_i ^ w_j)
};

/// psi_ij is the angle p_{i-1} q_ij p_j. When a defining point coincides with
/// q (side pairs sharing a vertex), the ray falls back to that side's other
/// endpoint, which is the geometric reading of the interior-angle cases.
inline SidePairAngle side_pair_angle(const CyclicPolygon& poly, int i, int j) {
    SideLine li = side_line(poly, i);
    SideLine lj = side_line(poly, j);
    double c = cross(li.dir, lj.dir);
    if (std::abs(c) <= kParallelTol)
        throw ParallelSides("side pair is (near-)parallel");
    Vec2 q = *line_intersect({li.from, li.dir}, {lj.from, lj.dir});

    auto ray_toward = [&](Vec2 primary, Vec2 fallback) -> Vec2 {
        Vec2 r = primary - q;
        if (r.norm() < kAssertTol) r = fallback - q;
        return normalized(r);
    };
    Vec2 ray_i = ray_toward(li.from, li.to);
    Vec2 ray_j = ray_toward(lj.to, lj.from);

    SidePairAngle out;
    out.pair = {i, j};
    out.intersection = q;
    out.psi = ray_angle(ray_i, ray_j);
    out.orientation_sign = c > 0 ? 1 : -1;
    return out;
}

}  // namespace cyclicforge
