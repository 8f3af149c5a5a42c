#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "cyclicforge/diagram.hpp"
#include "cyclicforge/svg.hpp"
#include "support/oracles.hpp"
#include "support/samplers.hpp"

using namespace cyclicforge;

namespace {

std::map<std::pair<int, int>, int> coeffs_by_pair(const TheoremStatement& st) {
    std::map<std::pair<int, int>, int> out;
    for (const auto& t : st.terms) out[t.pair] = t.coeff;
    return out;
}

std::map<std::string, int> coeffs_by_name(const TheoremStatement& st) {
    std::map<std::string, int> out;
    for (const auto& t : st.terms) out[t.name] = t.coeff;
    return out;
}

int count_occurrences(const std::string& hay, const std::string& needle) {
    int c = 0;
    for (std::size_t at = hay.find(needle); at != std::string::npos;
         at = hay.find(needle, at + needle.size()))
        ++c;
    return c;
}

DiagramSpec fig6_hexagon_spec(std::uint64_t seed) {
    DiagramSpec spec;
    spec.n = 3;
    spec.pairing = Pairing(3, {{1, 6}, {2, 3}, {4, 5}});
    spec.seed = seed;
    return spec;
}

// A slightly perturbed regular 2n-gon slot layout.
std::vector<double> jittered_regular(int two_n, double jitter) {
    std::vector<double> pos;
    for (int i = 0; i < two_n; ++i)
        pos.push_back(i * 2.0 * kPi / two_n + jitter * std::sin(3.7 * i + 1.0));
    return pos;
}

}  // namespace

TEST_CASE("quadrilateral placement yields the supplementary-angle diagram") {
    DiagramSpec spec;
    spec.n = 2;
    spec.pairing = Pairing(2, {{1, 2}, {3, 4}});
    spec.seed = 99;
    Diagram d = place_vertices(spec);

    CHECK(d.winding == 1);
    CHECK(d.distinct_point_count() == 4);
    CHECK_FALSE(d.center_used);
    REQUIRE(d.marked.size() == 2);
    // Marked at the shared vertices: the opposite interior angles.
    CHECK(d.marked[0].at_label == "A");
    CHECK(d.marked[1].at_label == "C");
    auto coeffs = coeffs_by_pair(d.statement);
    CHECK(coeffs[{1, 2}] == 1);
    CHECK(coeffs[{3, 4}] == 1);
    CHECK(d.statement.pi_constant == Rational(1));

    // The polygon realizes its own theorem.
    CyclicPolygon poly = build_polygon(d.positions);
    CHECK(verify_numeric(poly, spec.pairing) < kAssertTol);
}

TEST_CASE("identity placements are simple with winding one") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        for (int n : {2, 3, 5}) {
            DiagramSpec spec;
            spec.n = n;
            spec.pairing = enumerate_pairings(n).front();
            spec.seed = seed;
            Diagram d = place_vertices(spec);
            CHECK(d.winding == 1);
            std::vector<Vec2> pts;
            for (int v = 1; v <= 2 * n; ++v) pts.push_back(d.vertex_pos(v));
            CHECK(oracles::is_simple_polygon(pts));
        }
    }
}

TEST_CASE("placement respects constraint overrides and exhausts honestly") {
    DiagramSpec spec;
    spec.n = 2;
    spec.pairing = Pairing(2, {{1, 2}, {3, 4}});
    spec.seed = 7;
    PlacementConfig config;
    config.min_cross = 1.999;  // impossible: |cross of unit vectors| <= 1
    config.max_attempts = 50;
    CHECK_THROWS_AS(place_vertices(spec, config), PlacementExhausted);
}

TEST_CASE("permuted placements verify their statements") {
    Rng rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 3;
        DiagramSpec spec;
        spec.n = n;
        auto all = enumerate_pairings(n);
        spec.pairing = all[rng.below(all.size())];
        std::vector<int> perm(2 * n);
        for (int i = 0; i < 2 * n; ++i) perm[i] = i;
        for (int i = 2 * n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
        spec.permutation = perm;
        spec.seed = rng.next_u64();
        Diagram d;
        try {
            d = place_vertices(spec);
        } catch (const PlacementExhausted&) {
            continue;  // some permutations are hard at default thresholds
        }
        // Statement self-verified at construction; check the delta identity.
        CyclicPolygon poly = build_polygon(d.positions);
        CHECK(verify_numeric(poly, spec.pairing) < kAssertTol);
        // Every marked pair respects the crossing threshold.
        for (const auto& m : d.marked) CHECK(m.value > 0.05);
    }
}

// The worked hexagon statements assume the merged configuration keeps the
// circle center inside the hull, so the goldens pin near-regular positions.
// (Skewed placements flip signs legitimately: the statement depends on where
// the points sit.)
TEST_CASE("hexagon alternating-angle family (no merge)") {
    Diagram d = realize_diagram(fig6_hexagon_spec(0), {}, jittered_regular(6, 0.05));
    auto coeffs = coeffs_by_name(d.statement);
    REQUIRE(coeffs.size() == 3);
    CHECK(coeffs["ABC"] == 1);
    CHECK(coeffs["CDE"] == 1);
    CHECK(coeffs["AFE"] == 1);
    CHECK(d.statement.pi_constant == Rational(2));
}

TEST_CASE("merging two non-adjacent points gives the pentagon diagonal theorem") {
    Diagram hex = realize_diagram(fig6_hexagon_spec(0), {}, jittered_regular(6, 0.05));
    Diagram pent = merge_points(hex, "F", "C");
    CHECK(pent.distinct_point_count() == 5);
    CHECK_FALSE(pent.center_used);
    auto coeffs = coeffs_by_name(pent.statement);
    REQUIRE(coeffs.size() == 3);
    CHECK(coeffs["ABC"] == 1);
    CHECK(coeffs["CDE"] == 1);
    CHECK(coeffs["ACE"] == -1);
    CHECK(pent.statement.pi_constant == Rational(1));
}

TEST_CASE("merging adjacent points introduces the center and a pi/2 shift") {
    Diagram hex = realize_diagram(fig6_hexagon_spec(0), {}, jittered_regular(6, 0.05));
    Diagram pent = merge_points(hex, "F", "E");
    CHECK(pent.distinct_point_count() == 5);
    CHECK(pent.center_used);
    auto coeffs = coeffs_by_name(pent.statement);
    REQUIRE(coeffs.size() == 3);
    CHECK(coeffs["ABC"] == 1);
    CHECK(coeffs["CDE"] == 1);
    CHECK(coeffs["AEO"] == 1);
    CHECK(pent.statement.pi_constant == Rational(3, 2));
    // The marked angle at the merged point references O.
    const MarkedAngle* m = pent.marked_for({1, 6});
    REQUIRE(m != nullptr);
    CHECK(m->via_center);
    CHECK(m->at_label == "E");
}

TEST_CASE("merge statements match the premerge limit diagrams") {
    // Realize the hexagon, then compare each merged statement against an
    // unmerged polygon whose vertex sits 1e-4 away from the merge target.
    Diagram hex = realize_diagram(fig6_hexagon_spec(0), {}, jittered_regular(6, 0.05));
    Pairing pairing = hex.spec.pairing;

    auto limit_statement = [&](int moved_vertex, double target_pos) {
        std::vector<double> pos = hex.positions;
        pos[moved_vertex - 1] = target_pos + 1e-4;
        CyclicPolygon poly = build_polygon(pos);
        std::vector<PairMeasurement> ms;
        for (const auto& [sign, pr] : delta_relation_direct(pairing, poly.winding()).terms) {
            SidePairAngle spa = side_pair_angle(poly, pr.first, pr.second);
            ms.push_back({pr, psi_name(pr.first, pr.second), poly.delta(pr.first, pr.second),
                          spa.psi, spa.orientation_sign, false});
        }
        return statement_from_measurements(delta_relation_direct(pairing, poly.winding()),
                                           ms, poly.winding());
    };

    SECTION("non-adjacent merge (F onto C)") {
        Diagram merged = merge_points(hex, "F", "C");
        TheoremStatement lim = limit_statement(6, hex.positions[2]);
        auto a = coeffs_by_pair(merged.statement);
        auto b = coeffs_by_pair(lim);
        CHECK(a == b);
        CHECK(merged.statement.pi_constant == lim.pi_constant);
        // Numeric agreement of the marked values within the limit tolerance.
        for (const auto& m : merged.marked) {
            double lim_value = 0.0;
            CyclicPolygon poly = build_polygon([&] {
                std::vector<double> pos = hex.positions;
                pos[5] = hex.positions[2] + 1e-4;
                return pos;
            }());
            lim_value = side_pair_angle(poly, m.pair.first, m.pair.second).psi;
            CHECK(std::abs(m.value - lim_value) < 1e-3);
        }
    }

    SECTION("adjacent merge (F onto E): constant shifts by exactly pi/2") {
        Diagram merged = merge_points(hex, "F", "E");
        TheoremStatement lim = limit_statement(6, hex.positions[4]);
        // Coefficients agree pair by pair; only the constant moves, by a
        // half turn of pi.
        CHECK(coeffs_by_pair(merged.statement) == coeffs_by_pair(lim));
        Rational shift = merged.statement.pi_constant - lim.pi_constant;
        bool is_half = shift == Rational(1, 2) || shift == Rational(-1, 2);
        CHECK(is_half);
    }
}

TEST_CASE("diagram signatures are dihedral invariants") {
    DiagramSpec spec = fig6_hexagon_spec(1);
    std::string base = structure_signature(spec);

    // Rotating every slot assignment is a rotation of the whole diagram.
    for (int k = 1; k < 6; ++k) {
        DiagramSpec rot = spec;
        std::vector<int> perm = spec.effective_permutation();
        for (auto& s : perm) s = (s + k) % 6;
        rot.permutation = perm;
        CHECK(structure_signature(rot) == base);
    }
    // Reflection image.
    DiagramSpec refl = spec;
    std::vector<int> perm = spec.effective_permutation();
    for (auto& s : perm) s = (6 - s) % 6;
    refl.permutation = perm;
    CHECK(structure_signature(refl) == base);

    // A different pairing pattern gives a different signature.
    DiagramSpec other = spec;
    other.pairing = Pairing(3, {{1, 4}, {2, 5}, {3, 6}});
    CHECK(structure_signature(other) != base);

    // Placed diagrams carry the same signature as their specs.
    Diagram d = place_vertices(spec);
    CHECK(diagram_signature(d) == base);
}

TEST_CASE("svg output structure for the quadrilateral") {
    DiagramSpec spec;
    spec.n = 2;
    spec.pairing = Pairing(2, {{1, 2}, {3, 4}});
    spec.seed = 5;
    Diagram d = place_vertices(spec);
    std::string svg = render_svg(d);

    CHECK(count_occurrences(svg, "<circle") == 1);
    CHECK(count_occurrences(svg, "class=\"side\"") == 4);
    CHECK(count_occurrences(svg, "class=\"anglelabel\"") == 2);
    // Deterministic re-render.
    CHECK(render_svg(d) == svg);
}

TEST_CASE("svg output for the worked decagon") {
    DiagramSpec spec;
    spec.n = 5;
    spec.pairing = Pairing(5, {{1, 2}, {3, 10}, {4, 7}, {5, 8}, {6, 9}});
    spec.seed = 31;
    Diagram d = place_vertices(spec);
    std::string svg = render_svg(d);

    CHECK(count_occurrences(svg, "class=\"side\"") == 10);
    CHECK(count_occurrences(svg, "class=\"anglelabel\"") == 5);
    // Non-adjacent pairs are extended to their intersections.
    CHECK(count_occurrences(svg, "class=\"ext\"") >= 4);
    CHECK(count_occurrences(svg, "<circle") == 1);
}

TEST_CASE("same seed reproduces identical diagrams") {
    DiagramSpec spec = fig6_hexagon_spec(777);
    Diagram a = place_vertices(spec);
    Diagram b = place_vertices(spec);
    CHECK(render_svg(a) == render_svg(b));
    CHECK(a.statement.str() == b.statement.str());
}

TEST_CASE("merge validation") {
    DiagramSpec quad_spec;
    quad_spec.n = 2;
    quad_spec.pairing = Pairing(2, {{1, 2}, {3, 4}});
    quad_spec.seed = 3;
    Diagram quad = place_vertices(quad_spec);
    CHECK_THROWS_AS(merge_points(quad, "A", "A"), MergeDegenerate);

    // Two merges on a quadrilateral would leave two points.
    DiagramSpec degenerate = quad_spec;
    degenerate.merges = {{1, 3}, {2, 4}};
    CHECK_THROWS_AS(place_vertices(degenerate), MergeDegenerate);

    // Two merges on a hexagon are fine; a third is rejected.
    Diagram hex = realize_diagram(fig6_hexagon_spec(0), {}, jittered_regular(6, 0.05));
    Diagram four = merge_points(merge_points(hex, "F", "C"), "E", "B");
    CHECK(four.distinct_point_count() == 4);
    CHECK_THROWS_AS(merge_points(four, "D", "A"), MergeDegenerate);
}

TEST_CASE("jittered regular decagon realizes directly") {
    DiagramSpec spec;
    spec.n = 5;
    spec.pairing = Pairing(5, {{1, 2}, {3, 10}, {4, 7}, {5, 8}, {6, 9}});
    Diagram d = realize_diagram(spec, PlacementConfig{}, jittered_regular(10, 0.05));
    CHECK(d.winding == 1);
    CHECK(d.marked.size() == 5);
}
