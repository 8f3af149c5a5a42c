#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cyclicforge/errors.hpp"
#include "cyclicforge/geometry.hpp"
#include "cyclicforge/pairing.hpp"
#include "cyclicforge/rng.hpp"
#include "cyclicforge/theorem.hpp"

namespace cyclicforge {

/// Combinatorial description of one diagram: which pairing, how the traversal
/// permutes the circle slots, and which vertices are merged. `merges` entries
/// (v1, v2) move vertex v1 onto v2's position.
struct DiagramSpec {
    int n = 2;
    Pairing pairing{2, {{1, 2}, {3, 4}}};
    std::vector<int> permutation;                // 0-based slot per vertex; empty = identity
    std::vector<std::pair<int, int>> merges;     // 1-based vertex indices
    std::uint64_t seed = 0;

    std::vector<int> effective_permutation() const {
        if (!permutation.empty()) return permutation;
        std::vector<int> id(2 * n);
        for (int i = 0; i < 2 * n; ++i) id[i] = i;
        return id;
    }
};

struct PlacementConfig {
    std::optional<double> min_gap;  // default pi / (6n)
    double min_cross = 0.1;         // |w_i ^ w_j| lower bound for marked pairs
    double canvas_radius = 3.0;     // every marked intersection within 3R
    int max_attempts = 1000;

    double gap_for(int n) const { return min_gap.value_or(kPi / (6.0 * n)); }
};

/// A named, placed point of the diagram.
struct NamedPoint {
    std::string label;
    Vec2 pos;
    bool on_circle = false;
};

/// One drawn straight line with the labels of every point incident to it,
/// ordered along the direction vector.
struct DrawnLine {
    Line geom;
    std::vector<std::string> points;
    bool is_radius = false;
    bool is_outline = false;
    std::vector<int> side_indices;
};

/// An angle marked on the diagram: the pair angle at q between two rays.
struct MarkedAngle {
    std::pair<int, int> pair;
    std::string name;        // e.g. "DFE": outer labels sorted, vertex in middle
    std::string at_label;    // label of q
    std::string ray1_label;  // target of the first ray
    std::string ray2_label;
    Vec2 q;
    Vec2 ray1, ray2;         // unit ray directions from q
    double value = 0.0;      // in (0, pi)
    int orientation_sign = 0;
    bool via_center = false;  // one leg lies on a radius line
};

namespace detail {

/// Letter sequence A, B, C, ... skipping O (reserved for the circle center).
inline std::string point_letter(int index) {
    std::string out;
    int block = index;
    // Past 'Z' we use A1, B1, ... (not expected at the supported sizes).
    int suffix = block / 25;
    int pos = block % 25;
    char c = static_cast<char>('A' + pos + (pos >= ('O' - 'A') ? 1 : 0));
    out += c;
    if (suffix > 0) out += std::to_string(suffix);
    return out;
}

}  // namespace detail

class Diagram {
public:
    DiagramSpec spec;
    PlacementConfig config;

    std::vector<double> slot_positions;  // distinct point positions, by slot
    std::vector<int> vertex_point;       // logical vertex (1..2n) -> point index
    std::vector<double> positions;       // logical vertex positions (post-merge)

    std::vector<NamedPoint> points;      // circle points first, then
                                         // intersections, then O if used
    std::vector<DrawnLine> lines;
    std::vector<MarkedAngle> marked;
    bool center_used = false;

    DeltaRelation delta;
    TheoremStatement statement;
    int winding = 0;

    int num_vertices() const { return 2 * spec.n; }

    int distinct_point_count() const {
        int c = 0;
        for (const auto& p : points)
            if (p.on_circle) ++c;
        return c;
    }

    const NamedPoint* find_point(const std::string& label) const {
        for (const auto& p : points)
            if (p.label == label) return &p;
        return nullptr;
    }

    std::string vertex_label(int v) const {  // 1-based logical vertex
        return points[vertex_point[v - 1]].label;
    }

    Vec2 vertex_pos(int v) const { return points[vertex_point[v - 1]].pos; }

    const MarkedAngle* marked_for(std::pair<int, int> pr) const {
        for (const auto& m : marked)
            if (m.pair == pr) return &m;
        return nullptr;
    }
};

namespace detail {

struct SideGeom {
    Line line;
    bool degenerate = false;  // endpoints coincide: drawn as the center radius
    int from_vertex = 0;      // logical indices
    int to_vertex = 0;
};

inline std::string angle_display_name(const std::string& ray1, const std::string& at,
                                      const std::string& ray2) {
    if (ray2 < ray1) return ray2 + at + ray1;
    return ray1 + at + ray2;
}

/// Applies merges to the vertex->slot map; returns false when a merge chain
/// is malformed.
inline void apply_merges(const DiagramSpec& spec, std::vector<int>& slot_of) {
    for (const auto& [v1, v2] : spec.merges) {
        if (v1 < 1 || v1 > 2 * spec.n || v2 < 1 || v2 > 2 * spec.n || v1 == v2)
            throw MergeDegenerate("merge references invalid vertices");
        slot_of[v1 - 1] = slot_of[v2 - 1];
    }
}

inline void validate_spec(const DiagramSpec& spec) {
    if (spec.n < 2) throw InvalidPairing("diagram needs n >= 2");
    if (spec.pairing.n() != spec.n) throw InvalidPairing("pairing size mismatch");
    if (!spec.pairing.odd_gaps())
        throw InvalidPairing("pairing gaps must be odd to admit a theorem");
    std::vector<int> perm = spec.effective_permutation();
    if (static_cast<int>(perm.size()) != 2 * spec.n)
        throw InvalidPairing("permutation size mismatch");
    std::vector<char> seen(2 * spec.n, 0);
    for (int s : perm) {
        if (s < 0 || s >= 2 * spec.n || seen[s]++)
            throw InvalidPairing("permutation must be a bijection on slots");
    }
    if (spec.merges.size() > 2)
        throw MergeDegenerate("at most two merges are supported");
    std::vector<int> slot_of(2 * spec.n);
    for (int i = 0; i < 2 * spec.n; ++i) slot_of[i] = perm[i];
    apply_merges(spec, slot_of);
    std::set<int> distinct(slot_of.begin(), slot_of.end());
    if (distinct.size() < 3)
        throw MergeDegenerate("merged diagram needs at least 3 distinct points");
}

/// Builds the full Diagram from fixed slot positions; throws ParallelSides /
/// Error when the sample violates a marked-pair constraint.
inline Diagram realize(const DiagramSpec& spec, const PlacementConfig& config,
                       const std::vector<double>& sorted_slot_positions) {
    const int two_n = 2 * spec.n;
    std::vector<int> perm = spec.effective_permutation();

    Diagram d;
    d.spec = spec;
    d.config = config;

    // Slot of each logical vertex, merges applied.
    std::vector<int> slot_of(two_n);
    for (int i = 0; i < two_n; ++i) slot_of[i] = perm[i];
    apply_merges(spec, slot_of);

    // Distinct occupied slots in circle order, rotated so vertex 1 gets 'A'.
    std::vector<int> occupied;
    for (int s = 0; s < two_n; ++s)
        if (std::find(slot_of.begin(), slot_of.end(), s) != slot_of.end())
            occupied.push_back(s);
    const int m = static_cast<int>(occupied.size());
    std::rotate(occupied.begin(),
                std::find(occupied.begin(), occupied.end(), slot_of[0]),
                occupied.end());

    std::map<int, int> point_of_slot;
    for (int k = 0; k < m; ++k) {
        point_of_slot[occupied[k]] = k;
        NamedPoint p;
        p.label = point_letter(k);
        p.pos = unit_from_angle(sorted_slot_positions[occupied[k]]);
        p.on_circle = true;
        d.points.push_back(p);
        d.slot_positions.push_back(sorted_slot_positions[occupied[k]]);
    }
    d.vertex_point.resize(two_n);
    d.positions.resize(two_n);
    for (int i = 0; i < two_n; ++i) {
        d.vertex_point[i] = point_of_slot.at(slot_of[i]);
        d.positions[i] = sorted_slot_positions[slot_of[i]];
    }

    CyclicPolygon poly = build_polygon_lenient(d.positions);
    d.winding = poly.winding();

    // Side lines; degenerate sides become the radius line through the point.
    auto vpos = [&](int v) {  // v in 0..2n, wrapping
        return d.points[d.vertex_point[(v + two_n - 1) % two_n]].pos;
    };
    auto vpoint = [&](int v) { return d.vertex_point[(v + two_n - 1) % two_n]; };

    std::vector<SideGeom> sides(two_n + 1);
    for (int i = 1; i <= two_n; ++i) {
        SideGeom sg;
        sg.from_vertex = (i + two_n - 2) % two_n;  // logical index of p_{i-1}, 0-based
        sg.to_vertex = i - 1;
        Vec2 a = vpos(i - 1);
        Vec2 b = vpos(i);
        if ((a - b).norm() < kAssertTol) {
            sg.degenerate = true;
            sg.line = Line{{0.0, 0.0}, normalized(a)};
            d.center_used = true;
        } else {
            sg.line = Line{a, normalized(b - a)};
        }
        sides[i] = sg;
    }

    // Marked angles, one per pair.
    std::vector<PairMeasurement> measurements;
    std::vector<MarkedAngle> marked;
    int next_letter = m;
    // label -> point index for intersections created below
    for (const auto& [a, b] : spec.pairing.pairs()) {
        const SideGeom& sa = sides[a];
        const SideGeom& sb = sides[b];
        double cr = cross(sa.line.dir, sb.line.dir);
        if (std::abs(cr) < config.min_cross)
            throw ParallelSides("marked pair angle too small");
        Vec2 q = *line_intersect(sa.line, sb.line, 0.0);
        if (q.norm() > config.canvas_radius)
            throw PlacementExhausted("marked intersection outside canvas");

        // Ray targets with the coincidence fallback chain; O is the final
        // fallback for fully degenerate sides.
        struct Target { Vec2 pos; std::string label; };
        auto resolve = [&](std::vector<Target> chain) -> Target {
            for (const auto& t : chain)
                if ((t.pos - q).norm() >= kAssertTol) return t;
            throw Error("marked angle rays degenerate");
        };
        auto vlab = [&](int v) { return d.points[vpoint(v)].label; };
        Target ta = resolve({{vpos(a - 1), vlab(a - 1)},
                             {vpos(a), vlab(a)},
                             {{0.0, 0.0}, "O"}});
        Target tb = resolve({{vpos(b), vlab(b)},
                             {vpos(b - 1), vlab(b - 1)},
                             {{0.0, 0.0}, "O"}});
        if (ta.label == "O" || tb.label == "O") d.center_used = true;

        MarkedAngle ma;
        ma.pair = {a, b};
        ma.q = q;
        ma.ray1 = normalized(ta.pos - q);
        ma.ray2 = normalized(tb.pos - q);
        ma.ray1_label = ta.label;
        ma.ray2_label = tb.label;
        ma.value = ray_angle(ma.ray1, ma.ray2);
        ma.orientation_sign = cr > 0 ? 1 : -1;
        ma.via_center = sa.degenerate || sb.degenerate;

        // q label: reuse a named point when the intersection is one,
        // otherwise allocate the next letter.
        std::string qlabel;
        for (const auto& p : d.points)
            if ((p.pos - q).norm() < 1e-6) { qlabel = p.label; break; }
        if (qlabel.empty() && q.norm() < 1e-6) qlabel = "O";
        if (qlabel.empty()) {
            qlabel = point_letter(next_letter++);
            d.points.push_back({qlabel, q, std::abs(q.norm() - 1.0) < 1e-9});
        }
        ma.at_label = qlabel;
        if (qlabel == "O") d.center_used = true;
        ma.name = angle_display_name(ma.ray1_label, ma.at_label, ma.ray2_label);
        marked.push_back(ma);

        PairMeasurement pm;
        pm.pair = {a, b};
        pm.angle_name = ma.name;
        pm.delta = poly.delta(a, b);
        pm.marked = ma.value;
        pm.orientation_sign = ma.orientation_sign;
        pm.half_step = ma.via_center;
        measurements.push_back(pm);
    }
    d.marked = std::move(marked);

    if (d.center_used) d.points.push_back({"O", {0.0, 0.0}, false});

    d.delta = delta_relation_direct(spec.pairing, d.winding);
    d.statement = statement_from_measurements(d.delta, measurements, d.winding);

    // Drawn lines: traversal sides, the convex outline of the circle points,
    // and radius lines. Outline chords make the diagram read as the paper's
    // figures do and give the proof engine the segments those proofs use.
    struct LineAcc {
        Line geom;
        bool is_radius = false;
        bool is_outline = false;
        std::vector<int> side_indices;
    };
    std::map<std::string, LineAcc> acc;
    auto chord_key = [&](int pa, int pb) {
        std::string la = d.points[pa].label, lb = d.points[pb].label;
        if (lb < la) std::swap(la, lb);
        return "C:" + la + ":" + lb;
    };
    for (int i = 1; i <= two_n; ++i) {
        const SideGeom& sg = sides[i];
        if (sg.degenerate) {
            std::string key = "R:" + d.points[vpoint(i)].label;
            auto& l = acc[key];
            l.geom = sg.line;
            l.is_radius = true;
            l.side_indices.push_back(i);
        } else {
            auto& l = acc[chord_key(vpoint(i - 1), vpoint(i))];
            l.geom = sg.line;
            l.side_indices.push_back(i);
        }
    }
    for (int k = 0; k < m; ++k) {
        int k2 = (k + 1) % m;
        auto& l = acc[chord_key(k, k2)];
        if (l.side_indices.empty())
            l.geom = Line{d.points[k].pos,
                          normalized(d.points[k2].pos - d.points[k].pos)};
        l.is_outline = true;
    }

    for (auto& [key, l] : acc) {
        DrawnLine dl;
        dl.geom = l.geom;
        dl.is_radius = l.is_radius;
        dl.is_outline = l.is_outline;
        dl.side_indices = l.side_indices;
        // Attach every named point lying on the line (includes O on radii and
        // the marked intersections).
        std::vector<std::pair<double, std::string>> on_line;
        for (const auto& p : d.points) {
            Vec2 rel = p.pos - dl.geom.point;
            if (std::abs(cross(dl.geom.dir, rel)) < 1e-9)
                on_line.emplace_back(dot(dl.geom.dir, rel), p.label);
        }
        std::sort(on_line.begin(), on_line.end());
        for (const auto& [t, label] : on_line) dl.points.push_back(label);
        d.lines.push_back(std::move(dl));
    }

    return d;
}

}  // namespace detail

/// Build a diagram on explicit circle positions (index = slot, in circle
/// order). Throws when a marked-pair constraint fails.
inline Diagram realize_diagram(const DiagramSpec& spec, const PlacementConfig& config,
                               const std::vector<double>& slot_positions) {
    detail::validate_spec(spec);
    if (static_cast<int>(slot_positions.size()) != 2 * spec.n)
        throw Error("realize_diagram: need one position per slot");
    return detail::realize(spec, config, slot_positions);
}

/// Rejection-sample a diagram satisfying the drawability constraints:
/// a minimum angular gap between circle points, a minimum crossing magnitude
/// for every marked pair, and all marked intersections inside the canvas.
inline Diagram place_vertices(const DiagramSpec& spec,
                              const PlacementConfig& config = {}) {
    detail::validate_spec(spec);
    const int two_n = 2 * spec.n;
    const double gap = config.gap_for(spec.n);
    Rng rng(spec.seed);

    for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
        std::vector<double> pos;
        pos.reserve(two_n);
        for (int i = 0; i < two_n; ++i) pos.push_back(rng.uniform(0.0, 2.0 * kPi));
        std::sort(pos.begin(), pos.end());
        bool ok = true;
        for (int i = 0; i < two_n && ok; ++i) {
            double g = (i + 1 < two_n) ? pos[i + 1] - pos[i]
                                       : pos[0] + 2.0 * kPi - pos[two_n - 1];
            // Upper bound keeps the center inside the hull, which is what
            // makes the in-order traversal wind once.
            if (g < gap || g > kPi - 0.05) ok = false;
        }
        if (!ok) continue;
        try {
            return detail::realize(spec, config, pos);
        } catch (const ParallelSides&) {
        } catch (const PlacementExhausted&) {
        } catch (const Error&) {
        }
    }
    throw PlacementExhausted("no placement found in " +
                             std::to_string(config.max_attempts) +
                             " attempts; reseed and retry");
}

/// Merge vertex `from_label` onto `onto_label`, keeping the current
/// placement. Adjacent merges (the vertices share a polygon side) introduce
/// the center radius and shift the statement by pi/2.
inline Diagram merge_points(const Diagram& d, const std::string& from_label,
                            const std::string& onto_label) {
    if (from_label == onto_label) throw MergeDegenerate("cannot merge a point onto itself");
    int v1 = 0, v2 = 0;
    for (int v = 1; v <= d.num_vertices(); ++v) {
        if (d.vertex_label(v) == from_label && v1 == 0) v1 = v;
        if (d.vertex_label(v) == onto_label && v2 == 0) v2 = v;
    }
    if (v1 == 0 || v2 == 0) throw MergeDegenerate("merge labels not found");

    DiagramSpec spec = d.spec;
    spec.merges.emplace_back(v1, v2);
    detail::validate_spec(spec);

    // Rebuild on the parent's slot positions: the parent's distinct points
    // cover all slots of the unmerged spec.
    std::vector<double> slot_positions(2 * spec.n);
    std::vector<int> perm = d.spec.effective_permutation();
    std::vector<int> slot_of(2 * spec.n);
    for (int i = 0; i < 2 * spec.n; ++i) slot_of[i] = perm[i];
    detail::apply_merges(d.spec, slot_of);
    for (int i = 0; i < 2 * spec.n; ++i) slot_positions[perm[i]] = d.positions[i];
    return detail::realize(spec, d.config, slot_positions);
}

/// Canonical combinatorial signature of a diagram structure, invariant under
/// the dihedral symmetries of its distinct-point configuration. Legs are
/// undirected chords between point slots, or a radius marker at the merged
/// slot; the signature is the lexicographic minimum over all images.
inline std::string structure_signature(const DiagramSpec& spec) {
    detail::validate_spec(spec);
    const int two_n = 2 * spec.n;
    std::vector<int> perm = spec.effective_permutation();
    std::vector<int> slot_of(two_n);
    for (int i = 0; i < two_n; ++i) slot_of[i] = perm[i];
    detail::apply_merges(spec, slot_of);

    // Dense-rank the occupied slots, preserving circle order.
    std::vector<int> occupied;
    for (int s = 0; s < two_n; ++s)
        if (std::find(slot_of.begin(), slot_of.end(), s) != slot_of.end())
            occupied.push_back(s);
    const int m = static_cast<int>(occupied.size());
    std::map<int, int> rank;
    for (int k = 0; k < m; ++k) rank[occupied[k]] = k;

    // Leg of each side: chord {u,v} or radius at a slot.
    struct Leg {
        bool radius = false;
        int u = 0, v = 0;
    };
    std::vector<Leg> legs(two_n + 1);
    for (int i = 1; i <= two_n; ++i) {
        int u = rank.at(slot_of[(i + two_n - 2) % two_n]);
        int v = rank.at(slot_of[i - 1]);
        if (u == v)
            legs[i] = {true, u, u};
        else
            legs[i] = {false, std::min(u, v), std::max(u, v)};
    }

    auto serialize = [&](const std::vector<int>& image) {
        auto leg_str = [&](const Leg& l) {
            if (l.radius) return "R" + std::to_string(image[l.u]);
            int a = image[l.u], b = image[l.v];
            if (b < a) std::swap(a, b);
            return "C" + std::to_string(a) + "-" + std::to_string(b);
        };
        std::vector<std::string> tokens;
        for (const auto& [a, b] : spec.pairing.pairs()) {
            std::string s1 = leg_str(legs[a]);
            std::string s2 = leg_str(legs[b]);
            if (s2 < s1) std::swap(s1, s2);
            tokens.push_back(s1 + "|" + s2);
        }
        std::sort(tokens.begin(), tokens.end());
        std::string out = "m" + std::to_string(m) + ";";
        for (const auto& t : tokens) out += t + ";";
        return out;
    };

    std::string best;
    for (int refl = 0; refl < 2; ++refl) {
        for (int k = 0; k < m; ++k) {
            std::vector<int> image(m);
            for (int s = 0; s < m; ++s) {
                int j = (s + k) % m;
                if (refl) j = (m - 1 - j + m) % m;
                image[s] = j;
            }
            std::string sig = serialize(image);
            if (best.empty() || sig < best) best = sig;
        }
    }
    return best;
}

inline std::string diagram_signature(const Diagram& d) {
    return structure_signature(d.spec);
}

/// Apply a simultaneous label substitution (labels only; geometry is
/// untouched). Marked-angle names and statement terms are rebuilt.
inline void rename_points(Diagram& d, const std::map<std::string, std::string>& renames) {
    auto ren = [&](const std::string& label) {
        auto it = renames.find(label);
        return it == renames.end() ? label : it->second;
    };
    for (auto& p : d.points) p.label = ren(p.label);
    for (auto& l : d.lines)
        for (auto& p : l.points) p = ren(p);
    for (auto& m : d.marked) {
        m.at_label = ren(m.at_label);
        m.ray1_label = ren(m.ray1_label);
        m.ray2_label = ren(m.ray2_label);
        m.name = detail::angle_display_name(m.ray1_label, m.at_label, m.ray2_label);
    }
    for (auto& term : d.statement.terms)
        for (const auto& m : d.marked)
            if (m.pair == term.pair) term.name = m.name;
}

}  // namespace cyclicforge
