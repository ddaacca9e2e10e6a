#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ilt/poly.hpp"

namespace ilt {

class FieldTower;

// Element of the differential coefficient field F = Q(x_1..x_n, t_1..t_m):
// a canonical quotient of integer polynomials. Canonical form: num/den
// coprime, gcd of integer contents 1, leading coefficient of den positive
// under graded lex. Equality of canonical forms is equality in F.
class RationalExpr {
  public:
    RationalExpr() : num_(0), den_(0, 1) {}
    RationalExpr(Poly num, Poly den);
    explicit RationalExpr(Poly num);

    static RationalExpr integer(int nsyms, const mpz_class& n);
    static RationalExpr rational(int nsyms, const mpq_class& q);
    static RationalExpr symbol(int nsyms, int sym);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    int nsyms() const { return num_.nsyms(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_integer_constant() const { return num_.is_constant() && den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    RationalExpr operator-() const;
    RationalExpr operator+(const RationalExpr& rhs) const;
    RationalExpr operator-(const RationalExpr& rhs) const;
    RationalExpr operator*(const RationalExpr& rhs) const;
    RationalExpr operator/(const RationalExpr& rhs) const;  // throws DivisionByZero
    RationalExpr inverse() const;
    RationalExpr pow(uint32_t k) const;
    bool operator==(const RationalExpr& rhs) const;
    bool operator!=(const RationalExpr& rhs) const { return !(*this == rhs); }

    // Lift into a tower with extra trailing symbols.
    RationalExpr lifted(int new_nsyms) const;

  private:
    struct canonical_tag {};
    RationalExpr(canonical_tag, Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {}
    void canonicalize();
    Poly num_, den_;
};

// The ambient differential field: ordered independent variables plus declared
// transcendental generators, each with a table of partial derivatives over
// the tower built so far (a generator's partials may involve the generator
// itself). Immutable; extension returns a new tower.
class FieldTower {
  public:
    struct Generator {
        std::string name;
        std::vector<RationalExpr> partials;  // indexed by variable
    };

    static std::shared_ptr<const FieldTower> create(std::vector<std::string> vars);

    // The callback receives the provisional extended tower (generator present
    // with all-zero partials) and returns the partials table var -> expr.
    // Mixed-partial integrability D_i(D_j t) = D_j(D_i t) is verified.
    std::shared_ptr<const FieldTower> declare_generator(
        const std::string& name,
        const std::function<std::map<std::string, RationalExpr>(const FieldTower&)>& partials_fn) const;

    int num_vars() const { return static_cast<int>(vars_.size()); }
    int num_generators() const { return static_cast<int>(gens_.size()); }
    int num_symbols() const { return num_vars() + num_generators(); }
    const std::vector<std::string>& vars() const { return vars_; }
    const std::vector<Generator>& generators() const { return gens_; }
    const std::string& symbol_name(int sym) const;
    std::vector<std::string> symbol_names() const;
    // -1 when the name is not declared.
    int symbol_index(const std::string& name) const;
    int var_index(const std::string& name) const;  // throws UnknownVariable

    bool operator==(const FieldTower& rhs) const;
    bool operator!=(const FieldTower& rhs) const { return !(*this == rhs); }

  private:
    FieldTower() = default;
    void check_name(const std::string& name) const;

    std::vector<std::string> vars_;
    std::vector<Generator> gens_;
};

using TowerPtr = std::shared_ptr<const FieldTower>;

// Same tower, by pointer or by structure.
bool same_tower(const TowerPtr& a, const TowerPtr& b);

// Partial derivative in the tower: quotient rule plus generator chain rule.
RationalExpr derive(const FieldTower& tower, const RationalExpr& f, int var);
RationalExpr derive(const FieldTower& tower, const RationalExpr& f, const std::string& var);

// Substitute every symbol by its image; images live in a symbol space of
// out_nsyms symbols. Throws DivisionByZero if a denominator vanishes.
RationalExpr subst(const RationalExpr& f, const std::vector<RationalExpr>& images, int out_nsyms);

// Canonical text: `num/den` with deterministic graded-lex term order.
std::string to_string(const RationalExpr& f, const std::vector<std::string>& names);
std::string to_string(const RationalExpr& f, const FieldTower& tower);

// Rendering helpers shared with the operator printer.
bool leading_is_negative(const RationalExpr& f);
// String of f (made positive if negative), parenthesized as needed for use
// as a factor in a `*` product.
std::string factor_string(const RationalExpr& f, const std::vector<std::string>& names);

}  // namespace ilt
