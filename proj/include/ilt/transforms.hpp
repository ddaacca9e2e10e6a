#pragma once

#include <optional>
#include <vector>

#include "ilt/ilt.hpp"

namespace ilt {

// Plane operators D_x D_y + a D_x + b D_y + c and D_x^2 + a D_x + b D_y + c
// use the tower's first variable as x and second as y.

struct LaplaceData {
    RationalExpr a, b, c;
    RationalExpr h, k;  // h = a_x + a*b - c, k = b_y + a*b - c
};

enum class LaplaceDirection { X, Y };

LaplaceData laplace_invariants(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                               const RationalExpr& c);

// Hyperbolic operator built from the coefficient triple.
Lpdo laplace_operator(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                      const RationalExpr& c);

// Classical Laplace transformation in the chosen direction; requires the
// corresponding invariant to be nonzero.
IltCertificate laplace_transform(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                                 const RationalExpr& c, LaplaceDirection dir);

struct CascadeStep {
    int step;
    RationalExpr a, b, c, h, k;
};

enum class CascadeStatus { Factored, Exhausted };

struct CascadeReport {
    std::vector<CascadeStep> steps;  // steps[i] holds the data before transform i
    CascadeStatus status = CascadeStatus::Exhausted;
    // Present when the chain factored: L = first o second at the final step.
    std::optional<std::pair<Lpdo, Lpdo>> factorization;
    std::vector<IltCertificate> certificates;  // one per executed transform
};

CascadeReport cascade(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                      const RationalExpr& c, LaplaceDirection dir, int max_steps);

// Gauge transformation L -> lambda^-1 L lambda as a certificate with
// zero-order X2 = lambda^-1, X1 = L lambda + phi lambda, H = phi.
IltCertificate gauge_as_ilt(const Lpdo& l, const RationalExpr& lambda, const RationalExpr& phi);

// Loewy-Ore toolkit for ordinary differential operators (one derivation).
struct LodoEuclidResult {
    Lpdo rgcd;                // monic
    Lpdo lclm;                // monic; lclm = m_cof o L = l_cof o M
    Lpdo l_cof, m_cof;
    Lpdo bezout_u, bezout_v;  // u o L + v o M = rgcd
    int var = 0;
};

LodoEuclidResult lodo_euclid(const Lpdo& l, const Lpdo& m);

// L -> L1 by a first-order M with rGCD(L, M) = 1, as a certificate.
IltCertificate lodo_transform_as_ilt(const Lpdo& l, const Lpdo& m);

struct SchrodingerResult {
    RationalExpr u, u_tilde;  // u = v^2 + v_x, u~ = v^2 - v_x
    Lpdo l, l_tilde;          // -D^2 + u and -D^2 + u~
    IltCertificate cert;      // X1 = D + v, X2 = -D + v, H = 0, psi = 0
};

SchrodingerResult schrodinger_darboux(const TowerPtr& tower, const RationalExpr& v);

// Darboux transformations generated by seed solutions of L z = 0. One seed
// builds M = D_x - (z_x/z); two seeds build M = D_x + q D_y + r from the
// Wronskian-type determinant formula.
IltCertificate darboux_hyperbolic(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                                  const RationalExpr& c, const std::vector<RationalExpr>& seeds);

IltCertificate darboux_parabolic(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                                 const RationalExpr& c, const std::vector<RationalExpr>& seeds);

// L = A + B with A an operator in the first variable alone, B an operator in
// the remaining variables with coefficients free of the first; h is an
// eigenfunction A h = c h.
IltCertificate euler_darboux(const Lpdo& a_op, const Lpdo& b_op, const RationalExpr& h, const mpq_class& c);

// L = sum_i A_i D_x D_y^i + sum_i B_i D_y^i, driven by a seed alpha0 with
// (sum A_i D_y^i) alpha0 = 0 and L alpha0 != 0.
IltCertificate petren_transform(const TowerPtr& tower, const std::vector<RationalExpr>& a_coeffs,
                                const std::vector<RationalExpr>& b_coeffs, const RationalExpr& alpha0);

struct DiniDecomposition {
    RationalExpr kappa, rho;  // [H, X2] = kappa H + rho X2
};

// Exact decomposition of the commutator over F, or nullopt when the linear
// system is inconsistent. H and X2 must be first order and not proportional.
std::optional<DiniDecomposition> dini_decompose(const Lpdo& h, const Lpdo& x2);

// Shift H~ = H + alpha X2 with a verified solution alpha of X2(alpha) +
// kappa*alpha = rho, then transform; psi = kappa.
IltCertificate dini_to_ilt(const Lpdo& x1, const Lpdo& x2, const Lpdo& h, const RationalExpr& kappa,
                           const RationalExpr& rho, const RationalExpr& alpha);

// Transformed-side coefficients of a certificate whose L1 is again a plane
// hyperbolic operator; used by the cascade.
LaplaceData laplace_read_back(const TowerPtr& tower, const Lpdo& l1);

}  // namespace ilt
