#include "ilt/ilt.hpp"

#include "ilt/error.hpp"

namespace ilt {

Lpdo h_from_factors(const Lpdo& l, const Lpdo& x1, const Lpdo& x2) {
    return compose(x1, x2) - l;
}

RationalExpr detect_psi(const Lpdo& h, const Lpdo& x2) {
    if (h.is_zero()) throw Error(ErrorCode::ZeroH, "psi detection needs H != 0");
    Lpdo c = commutator(h, x2);
    const auto& [gamma, h_gamma] = *h.terms().begin();
    RationalExpr psi = c.coeff(gamma) / h_gamma;
    Lpdo residual = c - h.left_mul(psi);
    if (!residual.is_zero()) {
        std::string hint = x2.order() > 1 ? " (X2 has order > 1, so omega is operator-valued; only a "
                                            "function psi is representable)"
                                          : "";
        throw Error(ErrorCode::NoIlt,
                    "[H, X2] is not proportional to H; residual " + to_string(residual) + hint);
    }
    return psi;
}

IltCertificate build_transform(const Lpdo& x1, const Lpdo& x2, const Lpdo& h, const RationalExpr& psi) {
    if (!same_tower(x1.tower(), x2.tower()) || !same_tower(x1.tower(), h.tower()))
        throw Error(ErrorCode::TowerMismatch, "factors live in different field towers");
    // The proportionality condition H X2 = (X2 + psi) H, re-verified here.
    Lpdo condition = commutator(h, x2) - h.left_mul(psi);
    if (!condition.is_zero())
        throw Error(ErrorCode::ConditionViolated,
                    "H X2 != (X2 + psi) H; residual " + to_string(condition));

    IltCertificate cert{x1, x2, h, psi, Lpdo(x1.tower()), Lpdo(x1.tower()), Lpdo(x1.tower()),
                        Lpdo(x1.tower())};
    cert.l = compose(x1, x2) - h;
    cert.l1 = compose(x2, x1) + x1.left_mul(psi) - h;
    cert.m = x2;
    cert.m1 = x2 + Lpdo::function(x2.tower(), psi);

    Lpdo product_residual = compose(cert.m1, cert.l) - compose(cert.l1, cert.m);
    if (!product_residual.is_zero())
        throw Error(ErrorCode::InternalInconsistency,
                    "intertwining identity failed; residual " + to_string(product_residual));
    bool sym_ok;
    if (cert.l.is_zero() || cert.l1.is_zero())
        sym_ok = cert.l.is_zero() && cert.l1.is_zero();
    else
        sym_ok = cert.l.order() == cert.l1.order() && principal_symbol(cert.l) == principal_symbol(cert.l1);
    if (!sym_ok)
        throw Error(ErrorCode::InternalInconsistency, "principal symbols of L and L1 differ");
    return cert;
}

IntertwiningReport verify_intertwining(const Lpdo& m1, const Lpdo& l, const Lpdo& l1, const Lpdo& m) {
    IntertwiningReport rep{false, false, false, Lpdo(l.tower())};
    rep.residual = compose(m1, l) - compose(l1, m);
    rep.product_identity = rep.residual.is_zero();
    rep.orders_match = (l.order() == l1.order()) && (m.order() == m1.order());
    if (l.is_zero() || l1.is_zero())
        rep.symbols_match = l.is_zero() && l1.is_zero();
    else
        rep.symbols_match = l.order() == l1.order() && principal_symbol(l) == principal_symbol(l1);
    return rep;
}

IltCertificate generate(const GenerateInput& in) {
    const TowerPtr& tower = in.h_seed.tower();
    const FieldTower& ft = *tower;
    if (in.rect_var < 0 || in.rect_var >= ft.num_vars())
        throw Error(ErrorCode::UnknownVariable, "rectification variable out of range");
    for (const auto& [idx, c] : in.h_seed.terms()) {
        if (!derive(ft, c, in.rect_var).is_zero())
            throw Error(ErrorCode::SeedDependsOnVar,
                        "coefficient " + to_string(c, ft) + " of the seed depends on " +
                            ft.vars()[in.rect_var]);
    }
    if (in.theta1.is_zero() || in.theta2.is_zero())
        throw Error(ErrorCode::ZeroTheta, "theta factors must be nonzero");

    // H = theta1 o H~ o theta2; X2 = D_x + alpha and psi follow in closed form
    // from the commutation relation H~ D_x = D_x H~.
    Lpdo h = compose(Lpdo::function(tower, in.theta1), compose(in.h_seed, Lpdo::function(tower, in.theta2)));
    RationalExpr alpha = derive(ft, in.theta2, in.rect_var) / in.theta2;
    RationalExpr psi = -(derive(ft, in.theta1, in.rect_var) / in.theta1) - alpha;
    Lpdo x2 = Lpdo::derivation(tower, in.rect_var) + Lpdo::function(tower, alpha);

    if (in.maps) {
        auto [x2_img, new_tower] = change_vars(x2, *in.maps);
        auto [h_img, new_tower2] = change_vars(h, *in.maps);
        psi = transform_expr(ft, psi, *in.maps, *new_tower);
        x2 = x2_img;
        h = h_img;
    }
    return build_transform(in.x1, x2, h, psi);
}

}  // namespace ilt
