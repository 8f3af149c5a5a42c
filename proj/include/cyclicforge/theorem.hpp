#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cyclicforge/angle_expr.hpp"
#include "cyclicforge/errors.hpp"
#include "cyclicforge/geometry.hpp"
#include "cyclicforge/pairing.hpp"

namespace cyclicforge {

inline std::string delta_name(int a, int b) {
    return "delta_" + std::to_string(a) + "_" + std::to_string(b);
}

/// The banded linear system of the side-pairing theorem: 2n rows over the
/// unknowns theta_1..theta_2n and one bisector variable per pair. The right
/// hand side is symbolic (delta names and pi) so triangularization is exact.
struct AngleSystem {
    int n = 0;
    int winding = 1;
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::vector<Rational>> mat;  // 2n rows x 3n cols
    std::vector<AngleExpr> rhs;              // 2n entries

    int rows() const { return 2 * n; }
    int cols() const { return 3 * n; }
};

/// Row j carries theta_j + theta_{j-1} (row 1 wraps to theta_2n); the column
/// of pair k holds -2 at rows a_k and b_k. rhs_1 = 2*pi*W and rhs_{b_k} is
/// twice the pair's delta.
inline AngleSystem build_system(const Pairing& p, int winding) {
    AngleSystem s;
    s.n = p.n();
    s.winding = winding;
    s.pairs = p.pairs();
    const int m = 2 * s.n;
    s.mat.assign(m, std::vector<Rational>(3 * s.n, Rational(0)));
    s.rhs.assign(m, AngleExpr{});

    for (int j = 1; j <= m; ++j) {
        s.mat[j - 1][j - 1] = Rational(1);
        int prev = j == 1 ? m : j - 1;
        s.mat[j - 1][prev - 1] = Rational(1);
    }
    for (int k = 0; k < s.n; ++k) {
        const auto& [a, b] = s.pairs[k];
        s.mat[a - 1][m + k] = Rational(-2);
        s.mat[b - 1][m + k] = Rational(-2);
        s.rhs[b - 1] = AngleExpr::unit(delta_name(a, b)).scaled(Rational(2));
    }
    s.rhs[0] = AngleExpr::pi_multiple(Rational(2 * winding));
    return s;
}

/// The row recurrence T_1 = R_1, T_i = R_i - T_{i-1}, applied to matrix rows
/// and right hand sides alike.
inline AngleSystem triangularize(const AngleSystem& s) {
    AngleSystem t = s;
    for (int i = 1; i < t.rows(); ++i) {
        for (int c = 0; c < t.cols(); ++c) t.mat[i][c] -= t.mat[i - 1][c];
        t.rhs[i] = t.rhs[i] - t.rhs[i - 1];
    }
    return t;
}

/// The theorem's conclusion: sum of sign_i * delta_{a_i b_i} equals a
/// rational multiple of pi (the winding number for valid pairings).
struct DeltaRelation {
    std::vector<std::pair<int, std::pair<int, int>>> terms;  // (sign, pair)
    Rational pi_constant;

    friend bool operator==(const DeltaRelation& x, const DeltaRelation& y) {
        return x.terms == y.terms && x.pi_constant == y.pi_constant;
    }

    AngleExpr as_expr() const {
        AngleExpr e;
        for (const auto& [sign, pr] : terms)
            e.add_term(delta_name(pr.first, pr.second), Rational(sign));
        e.add_pi(-pi_constant);
        return e;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const auto& [sign, pr] = terms[i];
            if (sign < 0)
                s += "-";
            else if (i)
                s += "+";
            s += "d_{" + std::to_string(pr.first) + "," + std::to_string(pr.second) + "}";
        }
        s += " = ";
        if (pi_constant.is_zero())
            s += "0";
        else if (pi_constant == Rational(1))
            s += "pi";
        else
            s += pi_constant.str() + "*pi";
        return s;
    }
};

/// Read the consistency condition off the final triangularized row. Throws
/// InconsistentSystem when that row still involves unknowns, which is exactly
/// the even-gap pairing failure.
inline DeltaRelation consistency_relation(const AngleSystem& t) {
    const auto& last = t.mat[t.rows() - 1];
    for (const Rational& c : last)
        if (!c.is_zero())
            throw InconsistentSystem(
                "final row has nonzero unknown coefficients; pairing gaps must be odd");
    const AngleExpr& s_expr = t.rhs[t.rows() - 1];

    DeltaRelation rel;
    for (const auto& [a, b] : t.pairs) {
        Rational c = s_expr.coeff(delta_name(a, b));
        if (c == Rational(2))
            rel.terms.push_back({1, {a, b}});
        else if (c == Rational(-2))
            rel.terms.push_back({-1, {a, b}});
        else
            throw InconsistentSystem("consistency row has unexpected delta coefficient");
    }
    rel.pi_constant = -(s_expr.pi_coeff() / Rational(2));
    return rel;
}

/// The closed-form relation: sign (-1)^{b_i} per pair, constant W*pi.
inline DeltaRelation delta_relation_direct(const Pairing& p, int winding) {
    DeltaRelation rel;
    for (const auto& [a, b] : p.pairs())
        rel.terms.push_back({b % 2 == 0 ? 1 : -1, {a, b}});
    rel.pi_constant = Rational(winding);
    return rel;
}

/// |sum of (-1)^{b_i} delta_{a_i b_i} - W*pi| on the measured polygon.
inline double verify_numeric(const CyclicPolygon& poly, const Pairing& p) {
    if (poly.num_sides() != p.num_sides())
        throw InvalidPairing("pairing size does not match polygon");
    double acc = 0.0;
    for (const auto& [a, b] : p.pairs()) {
        double d = poly.delta(a, b);
        acc += (b % 2 == 0) ? d : -d;
    }
    return std::abs(acc - poly.winding() * kPi);
}

/// Measured data for one pair, enough to rewrite its delta in terms of the
/// marked angle: delta = k*pi + c*marked with c = +-1 and k integral (half
/// integral when the pair involves a center radius line).
struct PairMeasurement {
    std::pair<int, int> pair;
    std::string angle_name;
    double delta = 0.0;
    double marked = 0.0;       // in (0, pi)
    int orientation_sign = 0;  // sgn(w_i ^ w_j); 0 when not meaningful
    bool half_step = false;    // radius-replaced side: pi/2 shifts allowed
};

namespace detail {

/// Solve delta = k*pi + c*marked for c in {+-1} and k on the integer (or
/// half-integer) lattice. prefer_c breaks the perpendicular tie, where both
/// substitutions are simultaneously true.
inline std::pair<int, Rational> match_substitution(double delta, double marked,
                                                   bool half_step, int prefer_c) {
    const double step = half_step ? 0.5 : 1.0;
    if (prefer_c == 0) prefer_c = 1;
    for (int c : {prefer_c, -prefer_c}) {
        double t = (delta - c * marked) / kPi;
        double k = std::round(t / step) * step;
        if (std::abs(t - k) < 1e-6)
            return {c, Rational(std::llround(k * 2), 2)};
    }
    throw Error("measured angle does not match any pi-lattice substitution");
}

}  // namespace detail

/// A linear relation among named marked angles equal to a rational multiple
/// of pi, together with its delta-level ancestor.
struct TheoremStatement {
    struct Term {
        int coeff = 0;  // +1 or -1
        std::pair<int, int> pair;
        std::string name;
    };

    DeltaRelation delta;
    std::vector<Term> terms;
    Rational pi_constant;
    std::map<std::pair<int, int>, int> orientation_signs;
    int winding = 1;

    /// Terms partitioned so both rendered sides are positive.
    std::vector<Term> lhs_terms() const {
        std::vector<Term> out;
        for (const auto& t : terms)
            if (t.coeff > 0) out.push_back(t);
        return out;
    }
    std::vector<Term> rhs_terms() const {
        std::vector<Term> out;
        for (const auto& t : terms)
            if (t.coeff < 0) out.push_back(t);
        return out;
    }
    /// Constant as it appears on the right hand side of the rendered form.
    Rational rhs_constant() const { return pi_constant; }

    std::string str() const {
        std::string lhs = join(lhs_terms());
        std::string rhs = join(rhs_terms());
        Rational k = rhs_constant();
        if (k > Rational(0)) {
            if (!rhs.empty()) rhs += " + ";
            rhs += format_pi(k);
        } else if (k < Rational(0)) {
            if (!lhs.empty()) lhs += " + ";
            lhs += format_pi(-k);
        }
        if (rhs.empty()) rhs = "0";
        if (lhs.empty()) lhs = "0";
        return lhs + " = " + rhs;
    }

    static std::string format_pi(const Rational& k) {
        if (k.is_zero()) return "0";
        if (k == Rational(1)) return "pi";
        if (k.is_integer()) return k.num().str() + "pi";
        return k.num().str() + "pi/" + k.den().str();
    }

private:
    static std::string join(const std::vector<Term>& ts) {
        std::string s;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (i) s += " + ";
            s += ts[i].name;
        }
        return s;
    }
};

/// Substitute measured marked angles into the delta relation. Each delta is
/// rewritten on the pi lattice from its measured value, so the result holds
/// for any diagram, convex or not.
inline TheoremStatement statement_from_measurements(
    const DeltaRelation& delta, const std::vector<PairMeasurement>& ms, int winding) {
    TheoremStatement st;
    st.delta = delta;
    st.winding = winding;
    std::map<std::pair<int, int>, const PairMeasurement*> by_pair;
    for (const auto& m : ms) by_pair[m.pair] = &m;

    Rational k_sum(0);
    for (const auto& [sign, pr] : delta.terms) {
        const PairMeasurement* m = by_pair.at(pr);
        // Prefer the convex-diagram convention c = -s when both branches fit.
        auto [c, k] = detail::match_substitution(m->delta, m->marked, m->half_step,
                                                 -m->orientation_sign);
        st.terms.push_back({sign * c, pr, m->angle_name});
        k_sum += Rational(sign) * k;
        st.orientation_signs[pr] = m->orientation_sign;
    }
    st.pi_constant = delta.pi_constant - k_sum;

    // Keep the rendered left side nonempty: when every coefficient came out
    // negative, negate the whole statement once.
    bool any_positive = false;
    for (const auto& t : st.terms) any_positive |= t.coeff > 0;
    if (!any_positive) {
        for (auto& t : st.terms) t.coeff = -t.coeff;
        st.pi_constant = -st.pi_constant;
    }

    // The statement must hold on the diagram it was measured from.
    double acc = -st.pi_constant.to_double() * kPi;
    for (std::size_t i = 0; i < st.terms.size(); ++i)
        acc += st.terms[i].coeff * by_pair.at(st.terms[i].pair)->marked;
    if (std::abs(acc) > 1e-6)
        throw Error("statement does not verify numerically against its diagram");
    return st;
}

inline std::string psi_name(int a, int b) {
    return "psi_{" + std::to_string(a) + "," + std::to_string(b) + "}";
}

/// Translate a delta relation into a psi-level statement on a concrete
/// polygon, measuring each pair's orientation from the diagram.
inline TheoremStatement to_psi_statement(const DeltaRelation& delta,
                                         const CyclicPolygon& poly) {
    if (delta.pi_constant != Rational(poly.winding()))
        throw Error("delta relation was built for a different winding number");
    std::vector<PairMeasurement> ms;
    for (const auto& [sign, pr] : delta.terms) {
        SidePairAngle spa = side_pair_angle(poly, pr.first, pr.second);
        PairMeasurement m;
        m.pair = pr;
        m.angle_name = psi_name(pr.first, pr.second);
        m.delta = poly.delta(pr.first, pr.second);
        m.marked = spa.psi;
        m.orientation_sign = spa.orientation_sign;
        ms.push_back(m);
    }
    return statement_from_measurements(delta, ms, poly.winding());
}

}  // namespace cyclicforge
