#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cyclicforge/angle_expr.hpp"
#include "cyclicforge/diagram.hpp"
#include "cyclicforge/errors.hpp"
#include "cyclicforge/geometry.hpp"
#include "cyclicforge/rng.hpp"

namespace cyclicforge {

/// Deduction-facing view of a diagram: named points, drawn lines as ordered
/// point lists, circle membership, and the center. When the center is drawn,
/// radii to all circle points count as present segments (the worked proofs
/// use them without an explicit construction step).
class ProofGeometry {
public:
    std::map<std::string, Vec2> points;
    std::vector<std::vector<std::string>> lines;
    std::set<std::string> circle_points;
    bool has_center = false;

    static ProofGeometry from_diagram(const Diagram& d) {
        ProofGeometry g;
        for (const auto& p : d.points) {
            g.points[p.label] = p.pos;
            if (p.on_circle) g.circle_points.insert(p.label);
        }
        for (const auto& l : d.lines) g.lines.push_back(l.points);
        g.has_center = d.center_used;
        if (g.has_center) g.ensure_radius_lines();
        return g;
    }

    bool connected(const std::string& a, const std::string& b) const {
        for (const auto& l : lines) {
            bool ha = false, hb = false;
            for (const auto& p : l) {
                ha |= p == a;
                hb |= p == b;
            }
            if (ha && hb) return true;
        }
        return false;
    }

    /// Draw the segment a-b: a new line through both points picking up every
    /// collinear named point. No-op when they are already joined.
    bool add_segment(const std::string& a, const std::string& b) {
        if (connected(a, b)) return false;
        Vec2 pa = points.at(a), pb = points.at(b);
        Vec2 dir = normalized(pb - pa);
        std::vector<std::pair<double, std::string>> on_line;
        for (const auto& [label, pos] : points) {
            Vec2 rel = pos - pa;
            if (std::abs(cross(dir, rel)) < 1e-9)
                on_line.emplace_back(dot(dir, rel), label);
        }
        std::sort(on_line.begin(), on_line.end());
        std::vector<std::string> line;
        for (auto& [t, label] : on_line) line.push_back(label);
        lines.push_back(std::move(line));
        return true;
    }

    void ensure_radius_lines() {
        for (const auto& p : circle_points)
            add_segment("O", p);
    }

    /// Rays leaving `v` along drawn lines: direction, the points on the ray,
    /// and the lexicographically least label as canonical representative.
    struct Ray {
        Vec2 dir;
        std::vector<std::string> pts;
        std::string rep;
    };

    std::vector<Ray> rays_at(const std::string& v) const {
        Vec2 pv = points.at(v);
        std::vector<Ray> rays;
        auto add_ray = [&](Vec2 dir, std::vector<std::string> pts) {
            if (pts.empty()) return;
            std::sort(pts.begin(), pts.end());
            // Merge with an existing ray in the same direction (two drawn
            // lines can overlap only if identical, but segments added later
            // may duplicate a line).
            for (auto& r : rays) {
                if (std::abs(cross(r.dir, dir)) < 1e-9 && dot(r.dir, dir) > 0) {
                    for (auto& p : pts) r.pts.push_back(p);
                    std::sort(r.pts.begin(), r.pts.end());
                    r.pts.erase(std::unique(r.pts.begin(), r.pts.end()), r.pts.end());
                    r.rep = r.pts.front();
                    return;
                }
            }
            Ray r;
            r.dir = dir;
            r.pts = std::move(pts);
            r.rep = r.pts.front();
            rays.push_back(std::move(r));
        };
        for (const auto& l : lines) {
            bool contains = false;
            for (const auto& p : l) contains |= p == v;
            if (!contains) continue;
            // Direction from the line's own geometry.
            Vec2 da{0, 0};
            std::vector<std::string> forward, backward;
            for (const auto& p : l) {
                if (p == v) continue;
                Vec2 rel = points.at(p) - pv;
                if (rel.norm() < 1e-12) continue;
                if (da.norm() < 0.5) da = normalized(rel);
                if (dot(normalized(rel), da) > 0)
                    forward.push_back(p);
                else
                    backward.push_back(p);
            }
            if (!forward.empty()) add_ray(da, forward);
            if (!backward.empty()) add_ray({-da.x, -da.y}, backward);
        }
        std::sort(rays.begin(), rays.end(),
                  [](const Ray& a, const Ray& b) { return a.rep < b.rep; });
        return rays;
    }

    int side_of_chord(const std::string& x, const std::string& y,
                      const std::string& p) const {
        Vec2 a = points.at(x), b = points.at(y), c = points.at(p);
        double v = cross(b - a, c - a);
        if (v > 1e-9) return 1;
        if (v < -1e-9) return -1;
        return 0;
    }
};

/// One derived (or given) angle value.
struct AngleFact {
    std::string key;
    std::string display;                // point triple, vertex in the middle
    AngleExpr value;
    int rule = 0;                       // 0 = given, 1..7 = rule id
    std::vector<std::string> inputs;    // keys of argument facts
    std::string note;                   // rule-specific rendering payload
    int step_index = 0;
    double measured = 0.0;
};

struct DeductionState {
    ProofGeometry geom;
    std::map<std::string, AngleFact> facts;
    std::map<std::string, double> known_values;  // name -> measured radians
    std::vector<std::string> known_names;        // declaration order
    std::vector<std::string> helper_names;
    std::vector<std::pair<std::string, std::string>> drawn_segments;

    struct Conflict {
        AngleFact existing;
        AngleFact incoming;
        LinearRelation relation;
    };
    std::optional<Conflict> conflict;
    int steps_taken = 0;
    int insert_counter = 0;
};

namespace detail {

inline std::string angle_key(const std::string& vertex, const std::string& rep1,
                             const std::string& rep2) {
    if (rep2 < rep1) return rep2 + ":" + vertex + ":" + rep1;
    return rep1 + ":" + vertex + ":" + rep2;
}

/// Ray at v containing the point `target`, if any.
inline const ProofGeometry::Ray* ray_toward(const std::vector<ProofGeometry::Ray>& rays,
                                            const std::string& target) {
    for (const auto& r : rays)
        for (const auto& p : r.pts)
            if (p == target) return &r;
    return nullptr;
}

}  // namespace detail

/// Register a known (or helper) angle by the three points naming it. The
/// display name doubles as the coefficient-basis name.
inline void name_angle(DeductionState& st, const std::string& p1, const std::string& v,
                       const std::string& p2, bool helper = false) {
    auto rays = st.geom.rays_at(v);
    const auto* r1 = detail::ray_toward(rays, p1);
    const auto* r2 = detail::ray_toward(rays, p2);
    if (!r1 || !r2 || r1 == r2)
        throw Error("name_angle: rays not present for " + p1 + v + p2);
    std::string display = p2 < p1 ? p2 + v + p1 : p1 + v + p2;

    AngleFact f;
    f.key = detail::angle_key(v, r1->rep, r2->rep);
    f.display = display;
    f.value = AngleExpr::unit(display);
    f.rule = 0;
    f.measured = ray_angle(r1->dir, r2->dir);
    f.step_index = st.insert_counter++;
    if (st.facts.count(f.key))
        throw Error("name_angle: angle already has a value: " + display);
    st.facts[f.key] = f;
    st.known_values[display] = f.measured;
    if (helper)
        st.helper_names.push_back(display);
    else
        st.known_names.push_back(display);
}

/// Initial state: the diagram's marked angles as unit basis vectors.
inline DeductionState init_deduction(const Diagram& d) {
    DeductionState st;
    st.geom = ProofGeometry::from_diagram(d);
    for (const auto& m : d.marked)
        name_angle(st, m.ray1_label, m.at_label, m.ray2_label);
    return st;
}

namespace detail {

struct Firing {
    int rule = 0;
    std::string key;
    std::string display;
    AngleExpr value;
    std::vector<std::string> inputs;
    std::string note;
    double measured = 0.0;

    // Deterministic processing order.
    bool operator<(const Firing& o) const {
        if (rule != o.rule) return rule < o.rule;
        if (key != o.key) return key < o.key;
        return display < o.display;
    }
};

inline AngleExpr pi_minus(const AngleExpr& e) {
    AngleExpr out = AngleExpr::pi_multiple(Rational(1));
    return out - e;
}

class RuleEngine {
public:
    explicit RuleEngine(DeductionState& st) : st_(st) {}

    std::vector<Firing> enumerate() {
        firings_.clear();
        rule1_angle_addition();
        rule2_triangle_sum();
        rule3_linear_pair();
        rules45_chord_angles();
        if (st_.geom.has_center) {
            rule6_central_angle();
            rule7_isosceles_radii();
        }
        std::sort(firings_.begin(), firings_.end());
        return std::move(firings_);
    }

private:
    using Ray = ProofGeometry::Ray;

    const AngleFact* fact(const std::string& key) const {
        auto it = st_.facts.find(key);
        return it == st_.facts.end() ? nullptr : &it->second;
    }

    void emit(int rule, const std::string& key, const std::string& display,
              AngleExpr value, std::vector<std::string> inputs, std::string note,
              double measured) {
        const AngleFact* existing = fact(key);
        if (existing && existing->value == value) return;  // nothing new
        Firing f;
        f.rule = rule;
        f.key = key;
        f.display = display;
        f.value = std::move(value);
        f.inputs = std::move(inputs);
        f.note = std::move(note);
        f.measured = measured;
        firings_.push_back(std::move(f));
    }

    std::string disp(const std::string& p1, const std::string& v,
                     const std::string& p2) const {
        return p2 < p1 ? p2 + v + p1 : p1 + v + p2;
    }

    // Rule 1: a ray strictly inside an angle splits it additively.
    void rule1_angle_addition() {
        for (const auto& [v, pos] : st_.geom.points) {
            auto rays = st_.geom.rays_at(v);
            const int nr = static_cast<int>(rays.size());
            for (int xi = 0; xi < nr; ++xi) {
                for (int yi = xi + 1; yi < nr; ++yi) {
                    double det = cross(rays[xi].dir, rays[yi].dir);
                    if (std::abs(det) < 1e-9) continue;
                    for (int di = 0; di < nr; ++di) {
                        if (di == xi || di == yi) continue;
                        double a = cross(rays[di].dir, rays[yi].dir) / det;
                        double b = cross(rays[xi].dir, rays[di].dir) / det;
                        if (a < 1e-9 || b < 1e-9) continue;  // not inside
                        const Ray &rx = rays[xi], &rd = rays[di], &ry = rays[yi];
                        std::string k_whole = angle_key(v, rx.rep, ry.rep);
                        std::string k_1 = angle_key(v, rx.rep, rd.rep);
                        std::string k_2 = angle_key(v, rd.rep, ry.rep);
                        const AngleFact *whole = fact(k_whole), *f1 = fact(k_1),
                                        *f2 = fact(k_2);
                        if (f1 && f2)
                            emit(1, k_whole, disp(rx.rep, v, ry.rep), f1->value + f2->value,
                                 {k_1, k_2}, "", ray_angle(rx.dir, ry.dir));
                        if (whole && f2)
                            emit(1, k_1, disp(rx.rep, v, rd.rep), whole->value - f2->value,
                                 {k_whole, k_2}, "", ray_angle(rx.dir, rd.dir));
                        if (whole && f1)
                            emit(1, k_2, disp(rd.rep, v, ry.rep), whole->value - f1->value,
                                 {k_whole, k_1}, "", ray_angle(rd.dir, ry.dir));
                    }
                }
            }
        }
    }

    // Rule 2: angles of a triangle add to pi.
    void rule2_triangle_sum() {
        std::vector<std::string> labels;
        for (const auto& [label, pos] : st_.geom.points) labels.push_back(label);
        const int np = static_cast<int>(labels.size());
        for (int i = 0; i < np; ++i)
            for (int j = i + 1; j < np; ++j)
                for (int k = j + 1; k < np; ++k) {
                    const std::string &p = labels[i], &q = labels[j], &r = labels[k];
                    if (!st_.geom.connected(p, q) || !st_.geom.connected(q, r) ||
                        !st_.geom.connected(p, r))
                        continue;
                    Vec2 vp = st_.geom.points.at(p), vq = st_.geom.points.at(q),
                         vr = st_.geom.points.at(r);
                    if (std::abs(cross(vq - vp, vr - vp)) < 1e-9) continue;
                    triangle_fire(p, q, r);
                }
    }

    void triangle_fire(const std::string& p, const std::string& q, const std::string& r) {
        auto corner = [&](const std::string& at, const std::string& t1,
                          const std::string& t2) -> std::optional<std::pair<std::string, double>> {
            auto rays = st_.geom.rays_at(at);
            const Ray* r1 = ray_toward(rays, t1);
            const Ray* r2 = ray_toward(rays, t2);
            if (!r1 || !r2 || r1 == r2) return std::nullopt;
            return std::make_pair(angle_key(at, r1->rep, r2->rep),
                                  ray_angle(r1->dir, r2->dir));
        };
        auto cp = corner(p, q, r), cq = corner(q, p, r), cr = corner(r, p, q);
        if (!cp || !cq || !cr) return;
        const AngleFact *fp = fact(cp->first), *fq = fact(cq->first), *fr = fact(cr->first);
        std::string tri = p + q + r;
        if (fq && fr)
            emit(2, cp->first, disp(q, p, r), pi_minus(fq->value + fr->value),
                 {cq->first, cr->first}, tri, cp->second);
        if (fp && fr)
            emit(2, cq->first, disp(p, q, r), pi_minus(fp->value + fr->value),
                 {cp->first, cr->first}, tri, cq->second);
        if (fp && fq)
            emit(2, cr->first, disp(p, r, q), pi_minus(fp->value + fq->value),
                 {cp->first, cq->first}, tri, cr->second);
    }

    // Rule 3: two angles forming a line add to pi.
    void rule3_linear_pair() {
        for (const auto& [v, pos] : st_.geom.points) {
            auto rays = st_.geom.rays_at(v);
            const int nr = static_cast<int>(rays.size());
            for (int i = 0; i < nr; ++i)
                for (int j = i + 1; j < nr; ++j) {
                    // Opposite rays along one drawn line.
                    if (cross(rays[i].dir, rays[j].dir) > 1e-9 ||
                        cross(rays[i].dir, rays[j].dir) < -1e-9)
                        continue;
                    if (dot(rays[i].dir, rays[j].dir) > 0) continue;
                    for (int z = 0; z < nr; ++z) {
                        if (z == i || z == j) continue;
                        std::string k1 = angle_key(v, rays[i].rep, rays[z].rep);
                        std::string k2 = angle_key(v, rays[z].rep, rays[j].rep);
                        const AngleFact *f1 = fact(k1), *f2 = fact(k2);
                        if (f1)
                            emit(3, k2, disp(rays[z].rep, v, rays[j].rep),
                                 pi_minus(f1->value), {k1}, "",
                                 ray_angle(rays[z].dir, rays[j].dir));
                        if (f2)
                            emit(3, k1, disp(rays[i].rep, v, rays[z].rep),
                                 pi_minus(f2->value), {k2}, "",
                                 ray_angle(rays[i].dir, rays[z].dir));
                    }
                }
        }
    }

    // Rules 4 and 5: inscribed angles on a chord, same side equal, opposite
    // sides supplementary (the cyclic quadrilateral form).
    void rules45_chord_angles() {
        std::vector<std::string> circle(st_.geom.circle_points.begin(),
                                        st_.geom.circle_points.end());
        const int nc = static_cast<int>(circle.size());
        for (int xi = 0; xi < nc; ++xi)
            for (int yi = xi + 1; yi < nc; ++yi) {
                const std::string &x = circle[xi], &y = circle[yi];
                // Inscribed angle facts on chord (x, y).
                struct Inscribed {
                    std::string at, key;
                    int side;
                    double measured;
                };
                std::vector<Inscribed> on_chord;
                for (const auto& p : circle) {
                    if (p == x || p == y) continue;
                    int side = st_.geom.side_of_chord(x, y, p);
                    if (side == 0) continue;
                    auto rays = st_.geom.rays_at(p);
                    const Ray* r1 = ray_toward(rays, x);
                    const Ray* r2 = ray_toward(rays, y);
                    if (!r1 || !r2 || r1 == r2) continue;
                    on_chord.push_back({p, angle_key(p, r1->rep, r2->rep), side,
                                        ray_angle(r1->dir, r2->dir)});
                }
                for (const auto& a : on_chord)
                    for (const auto& b : on_chord) {
                        if (a.at == b.at) continue;
                        const AngleFact* fa = fact(a.key);
                        if (!fa) continue;
                        if (a.side == b.side) {
                            emit(4, b.key, disp(x, b.at, y), fa->value, {a.key},
                                 disp(x, a.at, y), b.measured);
                        } else {
                            // Note: the cyclic quad in circular order.
                            emit(5, b.key, disp(x, b.at, y), pi_minus(fa->value),
                                 {a.key}, x + a.at + y + b.at, b.measured);
                        }
                    }
            }
    }

    // Rule 6: central angle vs inscribed angle on the same chord.
    void rule6_central_angle() {
        std::vector<std::string> circle(st_.geom.circle_points.begin(),
                                        st_.geom.circle_points.end());
        const int nc = static_cast<int>(circle.size());
        auto o_rays = st_.geom.rays_at("O");
        for (int xi = 0; xi < nc; ++xi)
            for (int yi = xi + 1; yi < nc; ++yi) {
                const std::string &x = circle[xi], &y = circle[yi];
                const Ray* ox = ray_toward(o_rays, x);
                const Ray* oy = ray_toward(o_rays, y);
                if (!ox || !oy || ox == oy) continue;
                int o_side = st_.geom.side_of_chord(x, y, "O");
                if (o_side == 0) continue;  // diameter: skip the ambiguity
                std::string k_center = angle_key("O", ox->rep, oy->rep);
                double m_center = ray_angle(ox->dir, oy->dir);
                const AngleFact* fc = fact(k_center);
                for (const auto& p : circle) {
                    if (p == x || p == y) continue;
                    int p_side = st_.geom.side_of_chord(x, y, p);
                    if (p_side == 0) continue;
                    auto rays = st_.geom.rays_at(p);
                    const Ray* r1 = ray_toward(rays, x);
                    const Ray* r2 = ray_toward(rays, y);
                    if (!r1 || !r2 || r1 == r2) continue;
                    std::string k_insc = angle_key(p, r1->rep, r2->rep);
                    double m_insc = ray_angle(r1->dir, r2->dir);
                    const AngleFact* fi = fact(k_insc);
                    bool same_dir = p_side == o_side;
                    std::string note =
                        disp(x, "O", y) + "|" + disp(x, p, y) + "|" + (same_dir ? "s" : "o");
                    if (fi) {
                        AngleExpr central =
                            same_dir ? fi->value.scaled(Rational(2))
                                     : AngleExpr::pi_multiple(Rational(2)) -
                                           fi->value.scaled(Rational(2));
                        emit(6, k_center, disp(x, "O", y), central, {k_insc}, note,
                             m_center);
                    }
                    if (fc) {
                        AngleExpr inscribed =
                            same_dir ? fc->value.scaled(Rational(1, 2))
                                     : AngleExpr::pi_multiple(Rational(1)) -
                                           fc->value.scaled(Rational(1, 2));
                        emit(6, k_insc, disp(x, p, y), inscribed, {k_center}, note,
                             m_insc);
                    }
                }
            }
    }

    // Rule 7: the radii triangle is isosceles.
    void rule7_isosceles_radii() {
        std::vector<std::string> circle(st_.geom.circle_points.begin(),
                                        st_.geom.circle_points.end());
        const int nc = static_cast<int>(circle.size());
        auto o_rays = st_.geom.rays_at("O");
        for (int xi = 0; xi < nc; ++xi)
            for (int yi = xi + 1; yi < nc; ++yi) {
                const std::string &x = circle[xi], &y = circle[yi];
                if (!st_.geom.connected(x, y)) continue;
                const Ray* ox = ray_toward(o_rays, x);
                const Ray* oy = ray_toward(o_rays, y);
                if (!ox || !oy || ox == oy) continue;
                auto x_rays = st_.geom.rays_at(x);
                auto y_rays = st_.geom.rays_at(y);
                const Ray* xo = ray_toward(x_rays, "O");
                const Ray* xy = ray_toward(x_rays, y);
                const Ray* yo = ray_toward(y_rays, "O");
                const Ray* yx = ray_toward(y_rays, x);
                if (!xo || !xy || xo == xy || !yo || !yx || yo == yx) continue;

                std::string k_center = angle_key("O", ox->rep, oy->rep);
                std::string k_x = angle_key(x, xo->rep, xy->rep);
                std::string k_y = angle_key(y, yo->rep, yx->rep);
                double m_center = ray_angle(ox->dir, oy->dir);
                double m_x = ray_angle(xo->dir, xy->dir);
                double m_y = ray_angle(yo->dir, yx->dir);
                const AngleFact *fc = fact(k_center), *fx = fact(k_x), *fy = fact(k_y);
                std::string tri = x + y + "O";
                auto base_from_center = [&](const AngleExpr& center) {
                    return pi_minus(center).scaled(Rational(1, 2));
                };
                if (fc) {
                    emit(7, k_x, disp("O", x, y), base_from_center(fc->value),
                         {k_center}, tri, m_x);
                    emit(7, k_y, disp("O", y, x), base_from_center(fc->value),
                         {k_center}, tri, m_y);
                }
                if (fx) {
                    emit(7, k_y, disp("O", y, x), fx->value, {k_x}, tri, m_y);
                    emit(7, k_center, disp(x, "O", y),
                         pi_minus(fx->value.scaled(Rational(2))), {k_x}, tri, m_center);
                }
                if (fy) {
                    emit(7, k_x, disp("O", x, y), fy->value, {k_y}, tri, m_x);
                    emit(7, k_center, disp(x, "O", y),
                         pi_minus(fy->value.scaled(Rational(2))), {k_y}, tri, m_center);
                }
            }
    }

    DeductionState& st_;
    std::vector<Firing> firings_;
};

}  // namespace detail

/// Breadth-first closure under the seven angle rules. Halts on the first
/// conflicting re-derivation (the relation) or when no new facts arise.
/// Soundness is asserted on every insertion: the symbolic value evaluated at
/// the measured knowns must reproduce the measured angle. `shuffle` reorders
/// firings within a round (the extracted relation must not depend on it).
inline DeductionState& saturate(DeductionState& st, Rng* shuffle = nullptr) {
    constexpr int kMaxFacts = 10000;
    while (!st.conflict) {
        detail::RuleEngine engine(st);
        std::vector<detail::Firing> firings = engine.enumerate();
        if (shuffle)
            for (std::size_t i = firings.size(); i > 1; --i)
                std::swap(firings[i - 1], firings[shuffle->below(i)]);
        bool progress = false;
        for (const auto& f : firings) {
            auto it = st.facts.find(f.key);
            if (it != st.facts.end()) {
                if (it->second.value == f.value) continue;
                AngleFact incoming;
                incoming.key = f.key;
                incoming.display = f.display;
                incoming.value = f.value;
                incoming.rule = f.rule;
                incoming.inputs = f.inputs;
                incoming.note = f.note;
                incoming.measured = f.measured;
                incoming.step_index = st.insert_counter++;
                auto rel = relation_from_equality(f.value, it->second.value);
                st.conflict = DeductionState::Conflict{it->second, incoming, *rel};
                return st;
            }
            double predicted = f.value.evaluate(st.known_values);
            if (std::abs(predicted - f.measured) > 1e-6)
                throw Error("unsound derivation for " + f.display);
            AngleFact fact;
            fact.key = f.key;
            fact.display = f.display;
            fact.value = f.value;
            fact.rule = f.rule;
            fact.inputs = f.inputs;
            fact.note = f.note;
            fact.measured = f.measured;
            fact.step_index = st.insert_counter++;
            st.facts[f.key] = fact;
            progress = true;
            if (++st.steps_taken > kMaxFacts) return st;
        }
        if (!progress) break;
    }
    return st;
}

/// One augmentation round: draw the lexicographically first absent segment
/// and re-saturate; if still stuck, name the first valueless angle as a
/// helper (its fresh unit vector is never in the span of the knowns, which
/// is what guarantees it cancels from any found relation) and re-saturate.
inline DeductionState& augment(DeductionState& st) {
    if (st.conflict) return st;

    // Phase 1: one absent segment, lexicographic by endpoint labels.
    std::vector<std::string> labels;
    for (const auto& [label, pos] : st.geom.points) labels.push_back(label);
    std::sort(labels.begin(), labels.end());
    bool drew = false;
    for (std::size_t i = 0; i < labels.size() && !drew; ++i)
        for (std::size_t j = i + 1; j < labels.size() && !drew; ++j)
            if (!st.geom.connected(labels[i], labels[j])) {
                st.geom.add_segment(labels[i], labels[j]);
                st.drawn_segments.emplace_back(labels[i], labels[j]);
                drew = true;
            }
    if (drew) {
        saturate(st);
        if (st.conflict) return st;
    }

    // Phase 2: name one new angle outside the span of the knowns.
    std::vector<AngleExpr> basis;
    for (const auto& name : st.known_names) basis.push_back(AngleExpr::unit(name));
    for (const auto& name : st.helper_names) basis.push_back(AngleExpr::unit(name));

    for (const auto& v : labels) {
        auto rays = st.geom.rays_at(v);
        for (std::size_t i = 0; i < rays.size(); ++i)
            for (std::size_t j = i + 1; j < rays.size(); ++j) {
                if (std::abs(cross(rays[i].dir, rays[j].dir)) < 1e-9) continue;
                std::string key = detail::angle_key(v, rays[i].rep, rays[j].rep);
                if (st.facts.count(key)) continue;
                std::string display = rays[j].rep < rays[i].rep
                                          ? rays[j].rep + v + rays[i].rep
                                          : rays[i].rep + v + rays[j].rep;
                if (in_span(AngleExpr::unit(display), basis)) continue;
                name_angle(st, rays[i].rep, v, rays[j].rep, /*helper=*/true);
                saturate(st);
                return st;
            }
    }
    if (!drew)
        throw AugmentationExhausted(
            "all segments drawn and every candidate angle is already valued");
    return st;
}

/// Run saturation with augmentation until a relation is found.
inline DeductionState deduce(const Diagram& d, int max_augment_rounds = 64) {
    DeductionState st = init_deduction(d);
    saturate(st);
    for (int round = 0; round < max_augment_rounds && !st.conflict; ++round)
        augment(st);
    if (!st.conflict)
        throw AugmentationExhausted("no relation found within the augmentation budget");
    return st;
}

/// The pruned derivation: rule applications reachable backward from the
/// conflicting pair, in insertion order.
struct ProofTrace {
    std::vector<std::string> known_names;
    std::vector<std::string> helper_names;
    std::map<std::string, double> known_values;  // measured radians
    std::vector<std::pair<std::string, std::string>> drawn_segments;
    std::vector<AngleFact> steps;  // rule > 0, topologically ordered
    AngleFact final_step;          // the incoming re-derivation
    AngleFact clashing;            // the previously established fact
    LinearRelation conclusion;
    std::map<std::string, AngleFact> fact_by_key;  // every referenced fact
};

inline ProofTrace build_trace(const DeductionState& st) {
    if (!st.conflict) throw Error("build_trace: no relation was found");
    const auto& c = *st.conflict;

    std::set<std::string> needed;
    std::vector<std::string> stack;
    auto push_inputs = [&](const AngleFact& f) {
        for (const auto& k : f.inputs)
            if (!needed.count(k)) {
                needed.insert(k);
                stack.push_back(k);
            }
    };
    push_inputs(c.incoming);
    needed.insert(c.existing.key);
    push_inputs(c.existing);
    while (!stack.empty()) {
        std::string k = stack.back();
        stack.pop_back();
        push_inputs(st.facts.at(k));
    }

    ProofTrace t;
    t.known_names = st.known_names;
    t.helper_names = st.helper_names;
    t.known_values = st.known_values;
    t.drawn_segments = st.drawn_segments;
    for (const auto& k : needed) {
        const AngleFact& f = st.facts.at(k);
        t.fact_by_key[k] = f;
        if (f.rule > 0) t.steps.push_back(f);
    }
    std::sort(t.steps.begin(), t.steps.end(),
              [](const AngleFact& a, const AngleFact& b) {
                  return a.step_index < b.step_index;
              });
    t.final_step = c.incoming;
    t.clashing = c.existing;
    t.conclusion = c.relation;
    return t;
}

}  // namespace cyclicforge
