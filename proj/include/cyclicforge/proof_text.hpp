#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "cyclicforge/proof.hpp"

namespace cyclicforge {

enum class ProblemMode { Prove, FindNumeric, FindSymbolic };

namespace detail {

/// Variable letters in the paper's order: knowns x, y, z, then helpers w, v, ...
inline std::string var_letter(int index) {
    static const char* seq = "xyzwvutsrqpnmlkjihgfedcba";
    if (index < 25) return std::string(1, seq[index]);
    return "x" + std::to_string(index);
}

inline std::string format_degrees(const Rational& pi_coeff) {
    Rational deg = pi_coeff * Rational(180);
    return deg.str();
}

/// Renders an AngleExpr in degree units over the proof's variable letters,
/// e.g. "x+w-y+90".
inline std::string render_value(const AngleExpr& e,
                                const std::vector<std::string>& name_order,
                                const std::map<std::string, std::string>& var_of) {
    std::string out;
    auto append = [&](const Rational& c, const std::string& sym) {
        if (c.is_zero()) return;
        std::string mag;
        Rational a = c.is_negative() ? -c : c;
        if (sym.empty())
            mag = a.str();
        else if (a == Rational(1))
            mag = sym;
        else
            mag = a.str() + sym;
        if (out.empty())
            out += (c.is_negative() ? "-" : "") + mag;
        else
            out += (c.is_negative() ? "-" : "+") + mag;
    };
    // Positive variable terms, then (as in "180-z-w") a positive constant
    // when no variable leads, then the rest.
    Rational deg = e.pi_coeff() * Rational(180);
    bool any_positive_var = false;
    for (const auto& name : name_order)
        if (e.coeff(name) > Rational(0)) any_positive_var = true;
    for (const auto& name : name_order) {
        Rational c = e.coeff(name);
        if (c > Rational(0)) append(c, var_of.at(name));
    }
    if (!any_positive_var && deg > Rational(0)) append(deg, "");
    for (const auto& name : name_order) {
        Rational c = e.coeff(name);
        if (c < Rational(0)) append(c, var_of.at(name));
    }
    if (any_positive_var || deg < Rational(0)) append(deg, "");
    if (out.empty()) out = "0";
    return out;
}

/// Positive-form rendering of a relation over angle names, degrees at the
/// boundary: "DFE+90=AHE+BGE".
inline std::string render_relation_names(const LinearRelation& rel) {
    const AngleExpr& e = rel.expr();
    std::vector<std::string> pos, neg;
    for (const auto& [name, c] : e.coeffs()) {
        std::string term = name;
        Rational a = c.is_negative() ? -c : c;
        if (a != Rational(1)) term = a.str() + name;
        (c.is_negative() ? neg : pos).push_back(term);
    }
    Rational k = -(e.pi_coeff() * Rational(180));  // constant moved right
    std::string lhs, rhs;
    for (const auto& t : pos) lhs += (lhs.empty() ? "" : "+") + t;
    for (const auto& t : neg) rhs += (rhs.empty() ? "" : "+") + t;
    if (k > Rational(0))
        rhs += (rhs.empty() ? "" : "+") + k.str();
    else if (k < Rational(0))
        lhs += (lhs.empty() ? "" : "+") + (-k).str();
    if (lhs.empty()) lhs = "0";
    if (rhs.empty()) rhs = "0";

    auto term_count = [](const std::string& s) {
        int c = 1;
        for (char ch : s) c += ch == '+';
        return s == "0" ? 0 : c;
    };
    bool digits_left = !lhs.empty() && std::isdigit(static_cast<unsigned char>(lhs.back()));
    bool digits_right = !rhs.empty() && std::isdigit(static_cast<unsigned char>(rhs.back()));
    // Single bare term reads best on the left; otherwise lead with the side
    // carrying the constant.
    if (term_count(rhs) == 1 && !digits_right && term_count(lhs) != 1)
        std::swap(lhs, rhs);
    else if (digits_right && !digits_left && term_count(lhs) > 1)
        std::swap(lhs, rhs);
    return lhs + "=" + rhs;
}

inline std::map<std::string, std::string> variable_map(const ProofTrace& t,
                                                       std::vector<std::string>& order) {
    std::map<std::string, std::string> var_of;
    int idx = 0;
    for (const auto& n : t.known_names) {
        order.push_back(n);
        var_of[n] = var_letter(idx++);
    }
    for (const auto& n : t.helper_names) {
        order.push_back(n);
        var_of[n] = var_letter(idx++);
    }
    return var_of;
}

inline std::string step_sentence(const AngleFact& f, const ProofTrace& t,
                                 const std::vector<std::string>& order,
                                 const std::map<std::string, std::string>& var_of) {
    auto val = [&](const AngleExpr& e) { return render_value(e, order, var_of); };
    auto input_fact = [&](std::size_t i) -> const AngleFact& {
        return t.fact_by_key.at(f.inputs.at(i));
    };
    // The input established most recently reads as the narrative thread.
    const AngleFact* lead = nullptr;
    for (const auto& k : f.inputs) {
        const AngleFact& g = t.fact_by_key.at(k);
        if (!lead || g.step_index > lead->step_index) lead = &g;
    }
    switch (f.rule) {
        case 1:
        case 2:
        case 3:
            return "As " + lead->display + "=" + val(lead->value) + ", " + f.display +
                   "=" + val(f.value) + ".";
        case 4:
            return "As " + input_fact(0).display + " and " + f.display +
                   " stand on the same chord, " + f.display + "=" + input_fact(0).display +
                   ", so " + f.display + "=" + val(f.value) + ".";
        case 5:
            return "As " + f.note + " is a cyclic quadrilateral, " + f.display + "=180-" +
                   input_fact(0).display + ", so " + f.display + "=" + val(f.value) + ".";
        case 6: {
            // note = central|inscribed|s-or-o
            auto p1 = f.note.find('|');
            auto p2 = f.note.find('|', p1 + 1);
            std::string central = f.note.substr(0, p1);
            std::string inscribed = f.note.substr(p1 + 1, p2 - p1 - 1);
            bool same = f.note.substr(p2 + 1) == "s";
            if (same)
                return "As " + central + " is at the center of a circle on the same chord as " +
                       inscribed + ", " + central + "=2" + inscribed + ", so " + f.display +
                       "=" + val(f.value) + ".";
            return "As " + central +
                   " is at the center of a circle on the same chord, but in the opposite "
                   "direction to " +
                   inscribed + ", " + central + "=360-2" + inscribed + ", so " + f.display +
                   "=" + val(f.value) + ".";
        }
        case 7:
            return "As triangle " + f.note + " is isosceles, " + f.display + "=" +
                   val(f.value) + ".";
        default:
            return f.display + "=" + val(f.value) + ".";
    }
}

}  // namespace detail

/// The trace as the words of a proof, one sentence per step, degrees at the
/// text boundary.
inline std::string render_proof(const ProofTrace& t) {
    std::vector<std::string> order;
    auto var_of = detail::variable_map(t, order);
    auto val = [&](const AngleExpr& e) { return detail::render_value(e, order, var_of); };

    std::string out;
    for (const auto& [a, b] : t.drawn_segments) out += "Draw line " + a + b + ".\n";
    if (!t.drawn_segments.empty()) out += "\n";
    for (const auto& n : t.known_names) {
        out += "Let " + n + "=" + var_of.at(n) + ".";
        out += (&n == &t.known_names.back()) ? "\n" : " ";
    }
    for (const auto& n : t.helper_names) out += "Let " + n + "=" + var_of.at(n) + ".\n";
    out += "\n";
    for (const auto& f : t.steps)
        out += detail::step_sentence(f, t, order, var_of) + "\n";
    out += detail::step_sentence(t.final_step, t, order, var_of) + "\n";
    out += "But " + t.clashing.display + "=" + val(t.clashing.value) + ", so " +
           val(t.final_step.value) + "=" + val(t.clashing.value) + ", or " +
           detail::render_relation_names(t.conclusion) + ".\n";
    return out;
}

/// "Let ABCDE be a cyclic pentagon with center O. Let F be the intersection
/// of AE and DC. ..." — the setup text for a diagram's problem statement.
inline std::string diagram_description(const Diagram& d) {
    static const std::map<int, std::string> shapes = {
        {3, "triangle"},   {4, "quadrilateral"}, {5, "pentagon"}, {6, "hexagon"},
        {7, "heptagon"},   {8, "octagon"},       {9, "nonagon"},  {10, "decagon"},
        {11, "hendecagon"}, {12, "dodecagon"}};
    std::string pts;
    for (const auto& p : d.points)
        if (p.on_circle) pts += p.label;
    int m = static_cast<int>(pts.size());
    std::string shape = shapes.count(m) ? shapes.at(m) : std::to_string(m) + "-gon";
    std::string out = "Let " + pts + " be a cyclic " + shape;
    if (d.center_used) out += " with center O";
    out += ".";

    // Intersection points, described by the sides that meet there.
    auto side_name = [&](int i) {
        int two_n = d.num_vertices();
        std::string from = d.vertex_label((i + two_n - 2) % two_n + 1);
        std::string to = d.vertex_label(i);
        if (from == to) return "O" + to;  // degenerate side drawn as radius
        return from + to;
    };
    for (const auto& ma : d.marked) {
        const NamedPoint* p = d.find_point(ma.at_label);
        if (p->on_circle || p->label == "O") continue;
        out += " Let " + ma.at_label + " be the intersection of " +
               side_name(ma.pair.first) + " and " + side_name(ma.pair.second) + ".";
    }
    return out;
}

/// Problem text for the statement proved by `trace`. FindNumeric substitutes
/// integer degree values (taken from the diagram's own sampled measures) for
/// all but the last angle; FindSymbolic asks for the closed form.
inline std::string pose_problem(const TheoremStatement& st, const ProofTrace& trace,
                                ProblemMode mode) {
    // The trace must conclude exactly the statement's relation.
    AngleExpr expr;
    for (const auto& t : st.terms) expr.add_term(t.name, Rational(t.coeff));
    expr.add_pi(-st.pi_constant);
    auto expected = LinearRelation::normalize(expr);
    if (!(expected == trace.conclusion))
        throw Error("trace conclusion does not match the statement");

    if (mode == ProblemMode::Prove)
        return "Prove that " + detail::render_relation_names(trace.conclusion) + ".";

    // Solve for the last term from the others.
    const auto& target = st.terms.back();
    if (mode == ProblemMode::FindNumeric) {
        long long rhs_deg = 0;  // accumulate target = (180K - sum others)/coeff
        std::string given;
        Rational k180 = st.pi_constant * Rational(180);
        double acc = k180.to_double();
        for (std::size_t i = 0; i + 1 < st.terms.size(); ++i) {
            const auto& term = st.terms[i];
            long long deg = std::llround(trace.known_values.at(term.name) * 180.0 / kPi);
            acc -= term.coeff * static_cast<double>(deg);
            if (!given.empty()) given += " and ";
            given += term.name + "=" + std::to_string(deg);
        }
        rhs_deg = std::llround(acc / target.coeff);
        return "Suppose " + given + ". Find " + target.name + ".\nAnswer: " +
               target.name + "=" + std::to_string(rhs_deg) + ".";
    }

    // FindSymbolic: target = combination of the others.
    AngleExpr solved;
    for (std::size_t i = 0; i + 1 < st.terms.size(); ++i)
        solved.add_term(st.terms[i].name, Rational(-st.terms[i].coeff, target.coeff));
    solved.add_pi(st.pi_constant / Rational(target.coeff));
    std::vector<std::string> order;
    std::map<std::string, std::string> self;
    for (const auto& t : st.terms) {
        order.push_back(t.name);
        self[t.name] = t.name;
    }
    std::string others;
    for (std::size_t i = 0; i + 1 < st.terms.size(); ++i) {
        if (!others.empty()) others += i + 2 == st.terms.size() ? " and " : ", ";
        others += st.terms[i].name;
    }
    return "Express " + target.name + " in terms of " + others + ".\nAnswer: " +
           target.name + "=" + detail::render_value(solved, order, self) + ".";
}

}  // namespace cyclicforge
