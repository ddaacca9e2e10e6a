#pragma once

#include <optional>
#include <vector>

#include "ilt/ilt.hpp"

namespace ilt {

enum class SolveStatus { Unique, NonUnique, None };

// Solution set of M1 o L = L1 o M with ord M1 <= 1 and the top-order part of
// L1 pinned to that of L (Sym L1 = Sym L). Unknown coefficient functions enter
// the identity linearly, so the set is an affine subspace over F.
struct IntertwiningSolution {
    SolveStatus status = SolveStatus::None;
    std::optional<Lpdo> l1, m1;                 // particular solution (free unknowns zeroed)
    int dimension = 0;                          // NonUnique only
    std::vector<std::pair<Lpdo, Lpdo>> basis;   // (delta M1, delta L1) homogeneous solutions
    bool m1_order_degenerate = false;           // solved M1 dropped to order 0
};

IntertwiningSolution solve_intertwining(const Lpdo& l, const Lpdo& m);

// Hypotheses of the left-least-common-multiple theorem, checked one by one;
// when all hold, M1 o L = L1 o M is the lLCM of (L, M).
struct LclmReport {
    bool product_identity = false;
    bool order_l_matches = false;
    bool order_m_one = false;
    bool symbols_match = false;
    bool not_right_divisible = false;
    Lpdo lclm;
    bool certified() const {
        return product_identity && order_l_matches && order_m_one && symbols_match && not_right_divisible;
    }
};

LclmReport certify_lclm(const Lpdo& l, const Lpdo& m, const Lpdo& l1, const Lpdo& m1);

// Normalize a first-order intertwining into a certificate: the target is
// alpha^-1 L1 alpha with X2 = alpha^-1 M, alpha the coefficient of D_var in M.
IltCertificate first_order_to_ilt(const Lpdo& l, const Lpdo& m, const Lpdo& m1, const Lpdo& l1, int var);

struct KernelCheckEntry {
    RationalExpr seed;
    bool l_zero = false;
    bool m_zero = false;
    std::optional<bool> h_zero;  // present when H was supplied
};

std::vector<KernelCheckEntry> kernel_check(const Lpdo& l, const Lpdo& m,
                                           const std::vector<RationalExpr>& seeds,
                                           const std::optional<Lpdo>& h);

}  // namespace ilt
