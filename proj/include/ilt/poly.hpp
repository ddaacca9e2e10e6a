#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ilt {

// Exponent vector of a monomial; one slot per symbol of the ambient tower
// (variables first, then declared generators).
using Exponents = std::vector<uint32_t>;

uint32_t total_degree(const Exponents& e);

// Graded lexicographic, descending: higher total degree first, ties broken
// lexicographically with symbol 0 most significant. map::begin() is then the
// leading term.
struct GradedLexDesc {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

// Sparse multivariate polynomial over Z. All polynomials taking part in one
// operation must agree on the number of symbols.
class Poly {
  public:
    using TermMap = std::map<Exponents, mpz_class, GradedLexDesc>;

    Poly() : nsyms_(0) {}
    explicit Poly(int nsyms) : nsyms_(nsyms) {}
    Poly(int nsyms, const mpz_class& constant);

    static Poly symbol(int nsyms, int sym, uint32_t power = 1);
    static Poly monomial(int nsyms, Exponents exps, const mpz_class& coeff);

    int nsyms() const { return nsyms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_one() const;
    // Constant value; polynomial must be constant.
    mpz_class constant_value() const;

    const TermMap& terms() const { return terms_; }
    // Leading term under graded lex; polynomial must be nonzero.
    const Exponents& leading_exponents() const;
    const mpz_class& leading_coeff() const;
    uint32_t degree() const;                  // total degree, 0 for the zero polynomial
    uint32_t degree_in(int sym) const;        // max exponent of one symbol
    bool depends_on(int sym) const;

    Poly operator-() const;
    Poly operator+(const Poly& rhs) const;
    Poly operator-(const Poly& rhs) const;
    Poly operator*(const Poly& rhs) const;
    Poly operator*(const mpz_class& c) const;
    bool operator==(const Poly& rhs) const;
    bool operator!=(const Poly& rhs) const { return !(*this == rhs); }

    // Formal partial derivative with respect to one symbol (power rule only;
    // generator chain rules live at the field layer).
    Poly derivative(int sym) const;

    // GCD of the integer coefficients, non-negative; 0 for the zero polynomial.
    mpz_class content() const;

    void add_term(const Exponents& exps, const mpz_class& coeff);

  private:
    int nsyms_;
    TermMap terms_;
};

// Exact quotient a/b, or nullopt when b does not divide a. b must be nonzero.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

// GCD in Z[symbols] with positive leading coefficient (primitive PRS).
Poly poly_gcd(const Poly& a, const Poly& b);

// Exact square root with positive leading coefficient, or nullopt when the
// polynomial is not a perfect square.
std::optional<Poly> poly_sqrt(const Poly& p);

// Canonical text form: graded-lex descending terms, explicit '*', '^' powers.
std::string poly_to_string(const Poly& p, const std::vector<std::string>& names);

}  // namespace ilt
