#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "cyclicforge/diagram.hpp"

namespace cyclicforge {

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v + 0.0);  // +0.0 kills -0.00
    if (std::string(buf) == "-0.00") return "0.00";
    return buf;
}

// Unit circle scaled by 100; SVG y axis points down.
inline std::string sx(double x) { return fmt2(100.0 * x); }
inline std::string sy(double y) { return fmt2(-100.0 * y); }

inline void emit_line(std::string& out, Vec2 a, Vec2 b, const std::string& cls) {
    out += "  <line class=\"" + cls + "\" x1=\"" + sx(a.x) + "\" y1=\"" + sy(a.y) +
           "\" x2=\"" + sx(b.x) + "\" y2=\"" + sy(b.y) + "\"/>\n";
}

inline void emit_text(std::string& out, Vec2 at, const std::string& cls,
                      const std::string& text) {
    out += "  <text class=\"" + cls + "\" x=\"" + sx(at.x) + "\" y=\"" + sy(at.y) +
           "\">" + text + "</text>\n";
}

}  // namespace detail

/// Deterministic SVG 1.1 rendering: the circle, polygon sides, outline
/// chords, extensions to marked intersections, angle arcs with names, and
/// point labels. Exactly one <circle> element (the circumcircle).
inline std::string render_svg(const Diagram& d) {
    using detail::emit_line;
    using detail::emit_text;
    using detail::fmt2;
    using detail::sx;
    using detail::sy;

    double r = d.config.canvas_radius * 100.0;
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" +
           fmt2(-r) + " " + fmt2(-r) + " " + fmt2(2 * r) + " " + fmt2(2 * r) + "\">\n";
    out += "  <style>\n"
           "    .circle { fill: none; stroke: #888; stroke-width: 1; }\n"
           "    .outline { stroke: #bbb; stroke-width: 1; }\n"
           "    .side { stroke: #000; stroke-width: 2; }\n"
           "    .radius { stroke: #000; stroke-width: 1.5; stroke-dasharray: 6 3; }\n"
           "    .ext { stroke: #555; stroke-width: 1; stroke-dasharray: 4 3; }\n"
           "    .anglearc { fill: none; stroke: #c00; stroke-width: 1.5; }\n"
           "    .anglelabel { font: italic 14px serif; fill: #c00; }\n"
           "    .pointlabel { font: 14px serif; fill: #000; }\n"
           "  </style>\n";
    out += "  <circle class=\"circle\" cx=\"0.00\" cy=\"0.00\" r=\"100.00\"/>\n";

    // Outline chords (thin) under everything else.
    for (const auto& l : d.lines) {
        if (!l.is_outline) continue;
        // The outline chord connects two consecutive circle points; they are
        // the first/last circle points among the incident labels by param.
        const NamedPoint* a = nullptr;
        const NamedPoint* b = nullptr;
        for (const auto& label : l.points) {
            const NamedPoint* p = d.find_point(label);
            if (!p->on_circle) continue;
            if (!a) a = p;
            b = p;
        }
        if (a && b && a != b) emit_line(out, a->pos, b->pos, "outline");
    }

    // Extensions: from each side/radius segment to marked intersections
    // lying beyond it.
    for (const auto& l : d.lines) {
        if (l.side_indices.empty() && !l.is_radius) continue;
        // Segment extent of the drawn base (sides or radius).
        double lo = 0.0, hi = 0.0;
        bool first = true;
        auto extend_base = [&](Vec2 p) {
            double t = dot(l.geom.dir, p - l.geom.point);
            if (first) { lo = hi = t; first = false; }
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        };
        if (l.is_radius) {
            extend_base({0.0, 0.0});
            for (const auto& label : l.points) {
                const NamedPoint* p = d.find_point(label);
                if (p->on_circle) extend_base(p->pos);
            }
        } else {
            for (const auto& label : l.points) {
                const NamedPoint* p = d.find_point(label);
                if (p->on_circle) extend_base(p->pos);
            }
        }
        for (const auto& m : d.marked) {
            for (const auto& label : l.points) {
                if (label != m.at_label) continue;
                double t = dot(l.geom.dir, m.q - l.geom.point);
                if (t < lo - 1e-9)
                    emit_line(out, l.geom.point + lo * l.geom.dir, m.q, "ext");
                else if (t > hi + 1e-9)
                    emit_line(out, l.geom.point + hi * l.geom.dir, m.q, "ext");
            }
        }
    }

    // Polygon sides (solid) and radius segments.
    for (const auto& l : d.lines) {
        if (l.is_radius) {
            Vec2 tip{0.0, 0.0};
            for (const auto& label : l.points) {
                const NamedPoint* p = d.find_point(label);
                if (p->on_circle) tip = p->pos;
            }
            emit_line(out, {0.0, 0.0}, tip, "radius");
            continue;
        }
        for (int side : l.side_indices) {
            int two_n = d.num_vertices();
            Vec2 a = d.vertex_pos(((side - 1) + two_n - 1) % two_n + 1);
            Vec2 b = d.vertex_pos(side);
            emit_line(out, a, b, "side");
        }
    }

    // Angle arcs and labels.
    for (const auto& m : d.marked) {
        const double arc_r = 0.12;
        // Sweep from ray1 to ray2 the short way.
        double a1 = std::atan2(m.ray1.y, m.ray1.x);
        double ang = directed_angle(m.ray1, m.ray2);
        Vec2 p1 = m.q + arc_r * m.ray1;
        Vec2 p2 = m.q + arc_r * m.ray2;
        int sweep_ccw = ang > 0 ? 1 : 0;
        // SVG y is flipped, so the sweep flag inverts.
        out += "  <path class=\"anglearc\" d=\"M " + sx(p1.x) + " " + sy(p1.y) +
               " A " + fmt2(arc_r * 100) + " " + fmt2(arc_r * 100) + " 0 0 " +
               std::to_string(sweep_ccw ? 0 : 1) + " " + sx(p2.x) + " " + sy(p2.y) +
               "\"/>\n";
        double mid = a1 + ang / 2.0;
        Vec2 lab = m.q + 0.22 * Vec2{std::cos(mid), std::sin(mid)};
        emit_text(out, lab, "anglelabel", m.name);
    }

    // Point labels, offset away from the centroid of the drawing.
    for (const auto& p : d.points) {
        Vec2 dir = p.pos;
        if (dir.norm() < 0.5) dir = {0.05, 0.05};
        Vec2 at = p.pos + 0.08 * normalized(dir);
        emit_text(out, at, "pointlabel", p.label);
    }

    out += "</svg>\n";
    return out;
}

}  // namespace cyclicforge
