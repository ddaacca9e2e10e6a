#pragma once

#include <optional>

#include "ilt/lpdo.hpp"

namespace ilt {

// Full witness of one intertwining Laplace transformation:
//   L  = X1 o X2 - H
//   L1 = X2 o X1 + psi*X1 - H
//   H o X2 = (X2 + psi) o H
//   M1 o L = L1 o M           with M = X2, M1 = X2 + psi
//   Sym L = Sym L1
// Certificates are only produced by build_transform, which verifies all five
// identities exactly before returning.
struct IltCertificate {
    Lpdo x1, x2, h;
    RationalExpr psi;
    Lpdo l, l1, m, m1;
};

// H = X1 o X2 - L; any order of H is permitted.
Lpdo h_from_factors(const Lpdo& l, const Lpdo& x1, const Lpdo& x2);

// Solve [H, X2] = psi * H for the function psi: take the ratio at the
// graded-lex-largest nonzero index of H, then verify the whole residual.
// Throws ZeroH when H = 0 and NoIlt when the commutator is not proportional.
RationalExpr detect_psi(const Lpdo& h, const Lpdo& x2);

// Assemble and verify a certificate from a triple satisfying H X2 = (X2+psi) H.
IltCertificate build_transform(const Lpdo& x1, const Lpdo& x2, const Lpdo& h, const RationalExpr& psi);

struct IntertwiningReport {
    bool product_identity = false;
    bool orders_match = false;
    bool symbols_match = false;
    Lpdo residual;  // M1 o L - L1 o M
    bool pass() const { return product_identity && orders_match && symbols_match; }
};

IntertwiningReport verify_intertwining(const Lpdo& m1, const Lpdo& l, const Lpdo& l1, const Lpdo& m);

// The four-step construction: an operator H~ whose coefficients do not depend
// on rect_var, gauge factors theta1/theta2, an optional change of variables,
// and an arbitrary X1 (given in the final coordinates).
struct GenerateInput {
    Lpdo h_seed;
    RationalExpr theta1, theta2;
    Lpdo x1;
    int rect_var = 0;
    std::optional<CoordinateChange> maps;
};

IltCertificate generate(const GenerateInput& in);

}  // namespace ilt
