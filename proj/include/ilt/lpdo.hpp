#pragma once

#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ilt/field.hpp"

namespace ilt {

// Derivative multi-index over the tower's variables (generators carry no
// derivations). Zero exponents are stored explicitly; the dense vector is
// small and keeps ordering trivial.
using MultiIndex = Exponents;

class PrincipalSymbol;

// Linear partial differential operator: sparse map multi-index -> coefficient
// in F, nonzero coefficients only. Immutable value semantics; every operation
// is pure.
class Lpdo {
  public:
    static constexpr int kOrderOfZero = std::numeric_limits<int>::min();

    using TermMap = std::map<MultiIndex, RationalExpr, GradedLexDesc>;

    explicit Lpdo(TowerPtr tower) : tower_(std::move(tower)) {}
    static Lpdo function(TowerPtr tower, const RationalExpr& f);
    static Lpdo derivation(TowerPtr tower, int var);
    static Lpdo derivation(TowerPtr tower, const std::string& var);

    const TowerPtr& tower() const { return tower_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // Max total degree of a stored index; kOrderOfZero for the zero operator.
    int order() const;
    // Max exponent of one variable across stored indices (0 for zero operator).
    uint32_t degree_in_var(int var) const;
    // Coefficient at an index (zero expression when absent).
    RationalExpr coeff(const MultiIndex& idx) const;
    RationalExpr coeff_of_derivation(int var) const;
    // Order-0 part as a field element; operator must have no derivations.
    bool is_function() const { return order() <= 0; }
    RationalExpr as_function() const;

    void add_term(const MultiIndex& idx, const RationalExpr& c);

    Lpdo operator-() const;
    Lpdo operator+(const Lpdo& rhs) const;
    Lpdo operator-(const Lpdo& rhs) const;
    bool operator==(const Lpdo& rhs) const;
    bool operator!=(const Lpdo& rhs) const { return !(*this == rhs); }

    // Multiplication by a function on the left (coefficient scaling).
    Lpdo left_mul(const RationalExpr& f) const;

  private:
    TowerPtr tower_;
    TermMap terms_;
};

// Homogeneous commutative polynomial in the formal symbols xi_i with
// coefficients in F; the top-order part of an operator.
class PrincipalSymbol {
  public:
    explicit PrincipalSymbol(TowerPtr tower) : tower_(std::move(tower)), degree_(0) {}
    PrincipalSymbol(TowerPtr tower, std::map<MultiIndex, RationalExpr, GradedLexDesc> terms, int degree)
        : tower_(std::move(tower)), terms_(std::move(terms)), degree_(degree) {}

    const TowerPtr& tower() const { return tower_; }
    const std::map<MultiIndex, RationalExpr, GradedLexDesc>& terms() const { return terms_; }
    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }

    PrincipalSymbol operator*(const PrincipalSymbol& rhs) const;
    bool operator==(const PrincipalSymbol& rhs) const;
    bool operator!=(const PrincipalSymbol& rhs) const { return !(*this == rhs); }

  private:
    TowerPtr tower_;
    std::map<MultiIndex, RationalExpr, GradedLexDesc> terms_;
    int degree_;
};

// A o B by the generalized Leibniz rule. ord(A o B) = ord A + ord B.
Lpdo compose(const Lpdo& a, const Lpdo& b);

// [A, B] = A o B - B o A.
Lpdo commutator(const Lpdo& a, const Lpdo& b);

// A acting on f as a differential operator.
RationalExpr apply(const Lpdo& a, const RationalExpr& f);

// Top-order homogeneous part with D_i -> xi_i; operator must be nonzero.
PrincipalSymbol principal_symbol(const Lpdo& a);

// L = Q o M + R with R free of D_var. M must be first order with nonzero
// coefficient at D_var; degrees in other variables may grow in R.
std::pair<Lpdo, Lpdo> right_divide(const Lpdo& l, const Lpdo& m, int var);
std::pair<Lpdo, Lpdo> right_divide(const Lpdo& l, const Lpdo& m, const std::string& var);

// Gauge conjugation lambda^-1 o L o lambda.
Lpdo conjugate(const Lpdo& l, const RationalExpr& lambda);

// Rational change of coordinates. fwd[j] expresses new variable j in the old
// variables (over the old tower's symbols, generator-free); inv[i] expresses
// old variable i in the new variables (over a plain symbol space of just the
// new variables). Both compositions are verified to be the identity.
struct CoordinateChange {
    std::vector<std::string> new_vars;
    std::vector<RationalExpr> fwd;
    std::vector<RationalExpr> inv;
};

// Pushforward of L along the coordinate change; returns the image operator
// and the new tower (same generators, transformed partials tables).
std::pair<Lpdo, TowerPtr> change_vars(const Lpdo& l, const CoordinateChange& chg);

// Image of a field element under the same change (coefficients composed with
// the inverse map); new_tower must come from change_vars/transformed_tower.
TowerPtr transformed_tower(const TowerPtr& old_tower, const CoordinateChange& chg);
RationalExpr transform_expr(const FieldTower& old_tower, const RationalExpr& f, const CoordinateChange& chg,
                            const FieldTower& new_tower);

// Factor the order-2 principal symbol of L as a binary quadratic in the two
// chosen variables' symbols. Returns the pair of linear factor polynomials
// (degenerate leading coefficients handled by returning factors, not roots).
std::pair<PrincipalSymbol, PrincipalSymbol> factor_symbol_quadratic(const Lpdo& l, const std::string& u,
                                                                    const std::string& v);

// Canonical text form, graded-lex descending terms. `x^2*Dx*Dy + ... + 2/x`.
std::string to_string(const Lpdo& a);
std::string to_string(const PrincipalSymbol& s);

}  // namespace ilt
