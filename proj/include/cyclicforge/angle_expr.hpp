#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclicforge/rational.hpp"

namespace cyclicforge {

/// A linear combination of named unknown angles plus a rational multiple of pi.
/// Zero coefficients are never stored, so equality is plain member equality.
class AngleExpr {
public:
    AngleExpr() = default;

    static AngleExpr unit(const std::string& name) {
        AngleExpr e;
        e.coeffs_[name] = Rational(1);
        return e;
    }

    static AngleExpr pi_multiple(const Rational& r) {
        AngleExpr e;
        e.pi_ = r;
        return e;
    }

    const std::map<std::string, Rational>& coeffs() const { return coeffs_; }
    const Rational& pi_coeff() const { return pi_; }

    Rational coeff(const std::string& name) const {
        auto it = coeffs_.find(name);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    void add_term(const std::string& name, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = coeffs_.try_emplace(name, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    void add_pi(const Rational& c) { pi_ += c; }

    bool is_zero() const { return coeffs_.empty() && pi_.is_zero(); }

    AngleExpr scaled(const Rational& c) const {
        AngleExpr out;
        if (c.is_zero()) return out;
        for (const auto& [name, v] : coeffs_) out.coeffs_[name] = v * c;
        out.pi_ = pi_ * c;
        return out;
    }

    friend bool operator==(const AngleExpr& a, const AngleExpr& b) {
        return a.pi_ == b.pi_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const AngleExpr& a, const AngleExpr& b) { return !(a == b); }

    /// Evaluate at concrete angle values (radians); pi contributes numerically.
    template <typename Map>
    double evaluate(const Map& values) const {
        double acc = pi_.to_double() * 3.14159265358979323846;
        for (const auto& [name, c] : coeffs_) acc += c.to_double() * values.at(name);
        return acc;
    }

private:
    std::map<std::string, Rational> coeffs_;
    Rational pi_;
};

/// ca*a + cb*b in canonical sparse form.
inline AngleExpr expr_combine(const AngleExpr& a, const Rational& ca,
                              const AngleExpr& b, const Rational& cb) {
    AngleExpr out = a.scaled(ca);
    for (const auto& [name, v] : b.coeffs()) out.add_term(name, v * cb);
    out.add_pi(b.pi_coeff() * cb);
    return out;
}

inline AngleExpr operator+(const AngleExpr& a, const AngleExpr& b) {
    return expr_combine(a, Rational(1), b, Rational(1));
}
inline AngleExpr operator-(const AngleExpr& a, const AngleExpr& b) {
    return expr_combine(a, Rational(1), b, Rational(-1));
}

/// An AngleExpr interpreted as "expr = 0", kept in a canonical normalized form:
/// integer coefficients with overall gcd 1 and the first nonzero coefficient
/// (in angle-name order, pi last) positive.
class LinearRelation {
public:
    LinearRelation() = default;  // the trivial relation 0 = 0

    static LinearRelation normalize(const AngleExpr& e) {
        LinearRelation r;
        if (e.is_zero()) {
            r.expr_ = e;
            return r;
        }
        // Scale to integers: multiply by lcm of denominators.
        BigInt l = e.pi_coeff().den();
        for (const auto& [name, c] : e.coeffs())
            l = boost::multiprecision::lcm(l, c.den());
        // Divide out the gcd of the integer coefficients.
        BigInt g = 0;
        auto intval = [&](const Rational& c) { return c.num() * (l / c.den()); };
        for (const auto& [name, c] : e.coeffs())
            g = boost::multiprecision::gcd(g, intval(c));
        g = boost::multiprecision::gcd(g, intval(e.pi_coeff()));
        // Sign: first nonzero coefficient in name order positive; pi decides
        // only when no angle coefficient is present.
        BigInt lead = e.coeffs().empty() ? intval(e.pi_coeff())
                                         : intval(e.coeffs().begin()->second);
        Rational scale(boost::multiprecision::cpp_rational(l, g));
        if (lead < 0) scale = -scale;
        r.expr_ = e.scaled(scale);
        return r;
    }

    const AngleExpr& expr() const { return expr_; }

    friend bool operator==(const LinearRelation& a, const LinearRelation& b) {
        return a.expr_ == b.expr_;
    }
    friend bool operator!=(const LinearRelation& a, const LinearRelation& b) {
        return !(a == b);
    }

private:
    AngleExpr expr_;
};

/// Normalized relation a - b = 0, or nullopt when a and b are identical.
inline std::optional<LinearRelation> relation_from_equality(const AngleExpr& a,
                                                            const AngleExpr& b) {
    AngleExpr diff = a - b;
    if (diff.is_zero()) return std::nullopt;
    return LinearRelation::normalize(diff);
}

namespace detail {

/// Dense view over a set of AngleExprs: angle names in sorted order, pi last.
struct DenseBasis {
    std::vector<std::string> names;

    explicit DenseBasis(const std::vector<const AngleExpr*>& exprs) {
        std::map<std::string, int> seen;
        for (const AngleExpr* e : exprs)
            for (const auto& [name, c] : e->coeffs()) seen[name] = 1;
        for (const auto& [name, v] : seen) names.push_back(name);
    }

    std::vector<Rational> densify(const AngleExpr& e) const {
        std::vector<Rational> row(names.size() + 1);
        for (std::size_t i = 0; i < names.size(); ++i) row[i] = e.coeff(names[i]);
        row[names.size()] = e.pi_coeff();
        return row;
    }
};

/// Reduce `row` against pivoted echelon rows, appending it as a new pivot row
/// when a nonzero residual remains. Returns true if the row reduced to zero.
inline bool reduce_against(std::vector<std::vector<Rational>>& echelon,
                           std::vector<Rational> row, bool append) {
    for (const auto& er : echelon) {
        std::size_t p = 0;
        while (p < er.size() && er[p].is_zero()) ++p;
        if (p == er.size()) continue;
        if (!row[p].is_zero()) {
            Rational f = row[p] / er[p];
            for (std::size_t k = p; k < row.size(); ++k) row[k] -= f * er[k];
        }
    }
    bool zero = true;
    for (const auto& c : row)
        if (!c.is_zero()) { zero = false; break; }
    if (!zero && append) echelon.push_back(std::move(row));
    return zero;
}

}  // namespace detail

/// True iff candidate lies in the rational span of basis plus the constant pi
/// vector. Exact elimination, no floating point.
inline bool in_span(const AngleExpr& candidate, const std::vector<AngleExpr>& basis) {
    std::vector<const AngleExpr*> all;
    for (const auto& e : basis) all.push_back(&e);
    all.push_back(&candidate);
    detail::DenseBasis dense(all);

    std::vector<std::vector<Rational>> echelon;
    // The constant pi vector is always part of the span.
    std::vector<Rational> pi_row(dense.names.size() + 1);
    pi_row.back() = Rational(1);
    echelon.push_back(std::move(pi_row));
    for (const auto& e : basis)
        detail::reduce_against(echelon, dense.densify(e), /*append=*/true);
    return detail::reduce_against(echelon, dense.densify(candidate), /*append=*/false);
}

}  // namespace cyclicforge
