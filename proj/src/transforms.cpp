#include "ilt/transforms.hpp"

#include <cassert>

#include "ilt/error.hpp"

namespace ilt {

namespace {

void require_plane(const TowerPtr& tower) {
    if (tower->num_vars() < 2)
        throw Error(ErrorCode::UnknownVariable, "plane transformations need at least two variables");
}

RationalExpr zero_of(const TowerPtr& t) { return RationalExpr::integer(t->num_symbols(), 0); }
RationalExpr one_of(const TowerPtr& t) { return RationalExpr::integer(t->num_symbols(), 1); }

MultiIndex index_of(const TowerPtr& t, std::initializer_list<std::pair<int, uint32_t>> entries) {
    MultiIndex idx(t->num_vars(), 0);
    for (const auto& [v, e] : entries) idx[v] += e;
    return idx;
}

}  // namespace

LaplaceData laplace_invariants(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                               const RationalExpr& c) {
    require_plane(tower);
    LaplaceData d{a, b, c, zero_of(tower), zero_of(tower)};
    d.h = derive(*tower, a, 0) + a * b - c;
    d.k = derive(*tower, b, 1) + a * b - c;
    return d;
}

Lpdo laplace_operator(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                      const RationalExpr& c) {
    require_plane(tower);
    Lpdo l(tower);
    l.add_term(index_of(tower, {{0, 1}, {1, 1}}), one_of(tower));
    l.add_term(index_of(tower, {{0, 1}}), a);
    l.add_term(index_of(tower, {{1, 1}}), b);
    l.add_term(index_of(tower, {}), c);
    return l;
}

IltCertificate laplace_transform(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                                 const RationalExpr& c, LaplaceDirection dir) {
    LaplaceData d = laplace_invariants(tower, a, b, c);
    Lpdo dx = Lpdo::derivation(tower, 0);
    Lpdo dy = Lpdo::derivation(tower, 1);
    Lpdo x1(tower), x2(tower);
    RationalExpr invariant = zero_of(tower);
    if (dir == LaplaceDirection::X) {
        // L = (D_x + b)(D_y + a) - h
        if (d.h.is_zero()) throw Error(ErrorCode::ZeroInvariant, "Laplace invariant h vanishes");
        x1 = dx + Lpdo::function(tower, b);
        x2 = dy + Lpdo::function(tower, a);
        invariant = d.h;
    } else {
        // L = (D_y + a)(D_x + b) - k
        if (d.k.is_zero()) throw Error(ErrorCode::ZeroInvariant, "Laplace invariant k vanishes");
        x1 = dy + Lpdo::function(tower, a);
        x2 = dx + Lpdo::function(tower, b);
        invariant = d.k;
    }
    Lpdo h_op = Lpdo::function(tower, invariant);
    RationalExpr psi = detect_psi(h_op, x2);
    IltCertificate cert = build_transform(x1, x2, h_op, psi);
    if (cert.l != laplace_operator(tower, a, b, c))
        throw Error(ErrorCode::InternalInconsistency, "factorization does not rebuild the hyperbolic form");
    return cert;
}

LaplaceData laplace_read_back(const TowerPtr& tower, const Lpdo& l1) {
    require_plane(tower);
    MultiIndex top = index_of(tower, {{0, 1}, {1, 1}});
    MultiIndex ex = index_of(tower, {{0, 1}});
    MultiIndex ey = index_of(tower, {{1, 1}});
    MultiIndex e0 = index_of(tower, {});
    if (!(l1.coeff(top) == one_of(tower)))
        throw Error(ErrorCode::InternalInconsistency, "operator is not in plane hyperbolic normal form");
    for (const auto& [idx, coeff] : l1.terms())
        if (idx != top && idx != ex && idx != ey && idx != e0)
            throw Error(ErrorCode::InternalInconsistency, "operator is not in plane hyperbolic normal form");
    return laplace_invariants(tower, l1.coeff(ex), l1.coeff(ey), l1.coeff(e0));
}

CascadeReport cascade(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                      const RationalExpr& c, LaplaceDirection dir, int max_steps) {
    CascadeReport report;
    RationalExpr ca = a, cb = b, cc = c;
    for (int step = 0;; ++step) {
        LaplaceData d = laplace_invariants(tower, ca, cb, cc);
        report.steps.push_back({step, ca, cb, cc, d.h, d.k});
        const RationalExpr& invariant = (dir == LaplaceDirection::X) ? d.h : d.k;
        if (invariant.is_zero()) {
            report.status = CascadeStatus::Factored;
            Lpdo dx = Lpdo::derivation(tower, 0);
            Lpdo dy = Lpdo::derivation(tower, 1);
            if (dir == LaplaceDirection::X)
                report.factorization = {{dx + Lpdo::function(tower, cb), dy + Lpdo::function(tower, ca)}};
            else
                report.factorization = {{dy + Lpdo::function(tower, ca), dx + Lpdo::function(tower, cb)}};
            return report;
        }
        if (step == max_steps) {
            report.status = CascadeStatus::Exhausted;
            return report;
        }
        IltCertificate cert = laplace_transform(tower, ca, cb, cc, dir);
        LaplaceData next = laplace_read_back(tower, cert.l1);
        report.certificates.push_back(std::move(cert));
        ca = next.a;
        cb = next.b;
        cc = next.c;
    }
}

IltCertificate gauge_as_ilt(const Lpdo& l, const RationalExpr& lambda, const RationalExpr& phi) {
    if (lambda.is_zero()) throw Error(ErrorCode::ZeroGauge, "gauge function must be nonzero");
    const TowerPtr& tower = l.tower();
    Lpdo x2 = Lpdo::function(tower, lambda.inverse());
    Lpdo x1 = compose(l, Lpdo::function(tower, lambda)) + Lpdo::function(tower, phi * lambda);
    Lpdo h = h_from_factors(l, x1, x2);
    if (h != Lpdo::function(tower, phi))
        throw Error(ErrorCode::InternalInconsistency, "gauge H should reduce to phi");
    RationalExpr psi = phi.is_zero() ? zero_of(tower) : detect_psi(h, x2);
    IltCertificate cert = build_transform(x1, x2, h, psi);
    if (cert.l1 != conjugate(l, lambda))
        throw Error(ErrorCode::InternalInconsistency, "gauge certificate does not match conjugation");
    return cert;
}

namespace {

// The single derivation variable of a univariate operator pair.
int univariate_var(const Lpdo& l, const Lpdo& m) {
    int var = -1;
    auto scan = [&](const Lpdo& op) {
        for (const auto& [idx, c] : op.terms()) {
            for (size_t i = 0; i < idx.size(); ++i) {
                if (idx[i] == 0) continue;
                if (var == -1)
                    var = static_cast<int>(i);
                else if (var != static_cast<int>(i))
                    throw Error(ErrorCode::NotUnivariate, "operators involve more than one derivation");
            }
        }
    };
    scan(l);
    scan(m);
    return var < 0 ? 0 : var;
}

// Right division A = Q o B + R for univariate operators of any order; the top
// D_var term cancels exactly each round, so the degree strictly decreases.
std::pair<Lpdo, Lpdo> divide_uni(const Lpdo& a, const Lpdo& b, int var) {
    int nv = a.tower()->num_vars();
    uint32_t db = b.degree_in_var(var);
    MultiIndex btop(nv, 0);
    btop[var] = db;
    RationalExpr lc_b = b.coeff(btop);
    Lpdo q(a.tower());
    Lpdo r = a;
    while (!r.is_zero() && r.degree_in_var(var) >= db) {
        uint32_t dr = r.degree_in_var(var);
        MultiIndex rtop(nv, 0);
        rtop[var] = dr;
        MultiIndex shift(nv, 0);
        shift[var] = dr - db;
        Lpdo qt(a.tower());
        qt.add_term(shift, r.coeff(rtop) / lc_b);
        q = q + qt;
        r = r - compose(qt, b);
    }
    return {q, r};
}

}  // namespace

LodoEuclidResult lodo_euclid(const Lpdo& l, const Lpdo& m) {
    if (l.is_zero() || m.is_zero())
        throw Error(ErrorCode::ZeroOperator, "Euclid needs nonzero operators");
    int var = univariate_var(l, m);
    const TowerPtr& tower = l.tower();
    Lpdo one = Lpdo::function(tower, one_of(tower));
    Lpdo zero(tower);

    // Extended Euclid: r_i = u_i o L + v_i o M.
    Lpdo r0 = l, r1 = m;
    Lpdo u0 = one, v0 = zero, u1 = zero, v1 = one;
    while (!r1.is_zero()) {
        auto [q, r2] = divide_uni(r0, r1, var);
        Lpdo u2 = u0 - compose(q, u1);
        Lpdo v2 = v0 - compose(q, v1);
        r0 = r1;
        u0 = u1;
        v0 = v1;
        r1 = r2;
        u1 = u2;
        v1 = v2;
    }
    LodoEuclidResult res{Lpdo(tower), Lpdo(tower), Lpdo(tower), Lpdo(tower), Lpdo(tower), Lpdo(tower), var};
    // Last nonzero remainder, made monic.
    MultiIndex gtop(tower->num_vars(), 0);
    gtop[var] = r0.degree_in_var(var);
    RationalExpr glc = r0.coeff(gtop);
    res.rgcd = r0.left_mul(glc.inverse());
    res.bezout_u = u0.left_mul(glc.inverse());
    res.bezout_v = v0.left_mul(glc.inverse());
    // The step past the gcd gives the least common multiple cofactors:
    // u1 o L + v1 o M = 0, so lclm = u1 o L = (-v1) o M.
    Lpdo k = compose(u1, l);
    MultiIndex ktop(tower->num_vars(), 0);
    ktop[var] = k.degree_in_var(var);
    RationalExpr klc = k.coeff(ktop);
    res.m_cof = u1.left_mul(klc.inverse());
    res.l_cof = (-v1).left_mul(klc.inverse());
    res.lclm = compose(res.m_cof, l);
    if (res.lclm != compose(res.l_cof, m))
        throw Error(ErrorCode::InternalInconsistency, "lLCM cofactor identity failed");
    return res;
}

IltCertificate lodo_transform_as_ilt(const Lpdo& l, const Lpdo& m) {
    int var = univariate_var(l, m);
    if (m.order() != 1) throw Error(ErrorCode::NotFirstOrder, "intertwiner M must be first order");
    auto [q, r] = right_divide(l, m, var);
    if (r.is_zero())
        throw Error(ErrorCode::DivisibleByM, "L is right divisible by M (rGCD != 1)");
    Lpdo h = -r;
    RationalExpr psi = detect_psi(h, m);
    return build_transform(q, m, h, psi);
}

SchrodingerResult schrodinger_darboux(const TowerPtr& tower, const RationalExpr& v) {
    Lpdo d = Lpdo::derivation(tower, 0);
    RationalExpr vx = derive(*tower, v, 0);
    SchrodingerResult res{v * v + vx, v * v - vx, Lpdo(tower), Lpdo(tower),
                          IltCertificate{Lpdo(tower), Lpdo(tower), Lpdo(tower), zero_of(tower), Lpdo(tower),
                                         Lpdo(tower), Lpdo(tower), Lpdo(tower)}};
    res.l = -compose(d, d) + Lpdo::function(tower, res.u);
    res.l_tilde = -compose(d, d) + Lpdo::function(tower, res.u_tilde);
    Lpdo a_op = -d + Lpdo::function(tower, v);        // A
    Lpdo a_t = d + Lpdo::function(tower, v);          // A^T
    res.cert = build_transform(a_t, a_op, Lpdo(tower), zero_of(tower));
    if (res.cert.l != res.l || res.cert.l1 != res.l_tilde)
        throw Error(ErrorCode::InternalInconsistency, "Darboux potentials do not match the factorization");
    return res;
}

namespace {

struct TwoSeedM {
    RationalExpr q, r;
};

// M = D_x + q D_y + r annihilating both seeds, from the determinant formula
// with rows (u, z1, z2) and columns (u, u_y, u_x).
TwoSeedM two_seed_intertwiner(const TowerPtr& tower, const RationalExpr& z1, const RationalExpr& z2) {
    const FieldTower& ft = *tower;
    RationalExpr z1x = derive(ft, z1, 0), z1y = derive(ft, z1, 1);
    RationalExpr z2x = derive(ft, z2, 0), z2y = derive(ft, z2, 1);
    RationalExpr w_x = z1 * z2x - z1x * z2;  // |z1 z1_x; z2 z2_x|
    RationalExpr w_y = z1 * z2y - z1y * z2;  // |z1 z1_y; z2 z2_y|
    if (w_x.is_zero() || w_y.is_zero())
        throw Error(ErrorCode::DegenerateSeeds, "seed independence determinant vanishes");
    RationalExpr w_0 = z1y * z2x - z1x * z2y;
    return {-w_x / w_y, w_0 / w_y};
}

void check_seed_solves(const Lpdo& l, const RationalExpr& z) {
    if (z.is_zero()) throw Error(ErrorCode::DegenerateSeeds, "zero seed");
    RationalExpr r = apply(l, z);
    if (!r.is_zero())
        throw Error(ErrorCode::SeedNotASolution,
                    "seed does not solve L z = 0; L z = " + to_string(r, *l.tower()));
}

RationalExpr psi_or_internal(const Lpdo& h, const Lpdo& x2) {
    try {
        return detect_psi(h, x2);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoIlt)
            throw Error(ErrorCode::PsiNotProportional, "internal consistency failure: [H, X2] not "
                                                       "proportional to H for a seed-built transform");
        throw;
    }
}

void check_kernel_contained(const Lpdo& op, const std::vector<RationalExpr>& seeds, const char* name) {
    for (const auto& z : seeds)
        if (!apply(op, z).is_zero())
            throw Error(ErrorCode::InternalInconsistency,
                        std::string(name) + " does not annihilate a defining seed");
}

}  // namespace

IltCertificate darboux_hyperbolic(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                                  const RationalExpr& c, const std::vector<RationalExpr>& seeds) {
    require_plane(tower);
    Lpdo l = laplace_operator(tower, a, b, c);
    if (seeds.empty() || seeds.size() > 2)
        throw Error(ErrorCode::UsageError, "one or two seeds expected");
    for (const auto& z : seeds) check_seed_solves(l, z);

    Lpdo x1 = Lpdo::derivation(tower, 1) + Lpdo::function(tower, a);
    Lpdo m(tower);
    if (seeds.size() == 1) {
        const RationalExpr& z = seeds[0];
        RationalExpr mu = -derive(*tower, z, 0) / z;
        if ((b - mu).is_zero())
            throw Error(ErrorCode::DegenerateSeeds, "alpha = b + z_x/z vanishes; H would be a function");
        m = Lpdo::derivation(tower, 0) + Lpdo::function(tower, mu);
    } else {
        TwoSeedM tm = two_seed_intertwiner(tower, seeds[0], seeds[1]);
        m = Lpdo::derivation(tower, 0) + Lpdo::derivation(tower, 1).left_mul(tm.q) +
            Lpdo::function(tower, tm.r);
    }
    Lpdo h = h_from_factors(l, x1, m);
    check_kernel_contained(m, seeds, "M");
    check_kernel_contained(h, seeds, "H");
    RationalExpr psi = psi_or_internal(h, m);
    return build_transform(x1, m, h, psi);
}

IltCertificate darboux_parabolic(const TowerPtr& tower, const RationalExpr& a, const RationalExpr& b,
                                 const RationalExpr& c, const std::vector<RationalExpr>& seeds) {
    require_plane(tower);
    if (b.is_zero()) throw Error(ErrorCode::ZeroB, "parabolic form needs b != 0");
    Lpdo l(tower);
    l.add_term(index_of(tower, {{0, 2}}), one_of(tower));
    l.add_term(index_of(tower, {{0, 1}}), a);
    l.add_term(index_of(tower, {{1, 1}}), b);
    l.add_term(index_of(tower, {}), c);
    if (seeds.empty() || seeds.size() > 2)
        throw Error(ErrorCode::UsageError, "one or two seeds expected");
    for (const auto& z : seeds) check_seed_solves(l, z);

    Lpdo m(tower);
    if (seeds.size() == 1) {
        // Case B: M = D_x + r, r = -z_x/z
        const RationalExpr& z = seeds[0];
        m = Lpdo::derivation(tower, 0) + Lpdo::function(tower, -derive(*tower, z, 0) / z);
    } else {
        // Case A: M = D_x + q D_y + r with q != 0
        TwoSeedM tm = two_seed_intertwiner(tower, seeds[0], seeds[1]);
        m = Lpdo::derivation(tower, 0) + Lpdo::derivation(tower, 1).left_mul(tm.q) +
            Lpdo::function(tower, tm.r);
    }
    auto [q_op, r_op] = right_divide(l, m, 0);
    Lpdo h = -r_op;
    check_kernel_contained(m, seeds, "M");
    check_kernel_contained(h, seeds, "H");
    RationalExpr psi = psi_or_internal(h, m);
    return build_transform(q_op, m, h, psi);
}

IltCertificate euler_darboux(const Lpdo& a_op, const Lpdo& b_op, const RationalExpr& h,
                             const mpq_class& c) {
    const TowerPtr& tower = a_op.tower();
    const FieldTower& ft = *tower;
    for (const auto& [idx, coeff] : a_op.terms()) {
        for (size_t i = 1; i < idx.size(); ++i)
            if (idx[i] > 0)
                throw Error(ErrorCode::NotUnivariate, "A must be an operator in the first variable alone");
        for (int v = 1; v < ft.num_vars(); ++v)
            if (!derive(ft, coeff, v).is_zero())
                throw Error(ErrorCode::NotUnivariate, "coefficients of A must depend only on " + ft.vars()[0]);
    }
    for (const auto& [idx, coeff] : b_op.terms()) {
        if (idx[0] > 0)
            throw Error(ErrorCode::CoefficientDependsOnX, "B must not contain D_" + ft.vars()[0]);
        if (!derive(ft, coeff, 0).is_zero())
            throw Error(ErrorCode::CoefficientDependsOnX,
                        "coefficients of B must not depend on " + ft.vars()[0]);
    }
    if (h.is_zero()) throw Error(ErrorCode::SeedNotEigen, "eigenfunction h must be nonzero");
    RationalExpr cval = RationalExpr::rational(ft.num_symbols(), c);
    if (apply(a_op, h) != cval * h)
        throw Error(ErrorCode::SeedNotEigen, "A h != c h for the supplied eigenfunction");

    Lpdo m = Lpdo::derivation(tower, 0) - Lpdo::function(tower, derive(ft, h, 0) / h);
    auto [q, rem] = right_divide(a_op, m, 0);
    if (rem != Lpdo::function(tower, cval))
        throw Error(ErrorCode::InternalInconsistency, "division remainder is not the eigenvalue");
    Lpdo h_op = -(b_op + Lpdo::function(tower, cval));
    IltCertificate cert = build_transform(q, m, h_op, zero_of(tower));
    if (cert.l != a_op + b_op)
        throw Error(ErrorCode::InternalInconsistency, "factorization does not rebuild L = A + B");
    return cert;
}

IltCertificate petren_transform(const TowerPtr& tower, const std::vector<RationalExpr>& a_coeffs,
                                const std::vector<RationalExpr>& b_coeffs, const RationalExpr& alpha0) {
    require_plane(tower);
    const FieldTower& ft = *tower;
    if (a_coeffs.size() != b_coeffs.size() || a_coeffs.empty())
        throw Error(ErrorCode::UsageError, "need matching nonempty coefficient lists A_i, B_i");
    if (alpha0.is_zero()) throw Error(ErrorCode::DegeneratePetren, "zero seed");

    Lpdo a_hat(tower), l(tower), b_shift(tower);
    for (size_t i = 0; i < a_coeffs.size(); ++i) {
        uint32_t yi = static_cast<uint32_t>(i);
        a_hat.add_term(index_of(tower, {{1, yi}}), a_coeffs[i]);
        l.add_term(index_of(tower, {{0, 1}, {1, yi}}), a_coeffs[i]);
        l.add_term(index_of(tower, {{1, yi}}), b_coeffs[i]);
        // B^ = sum (B_i - (A_i)_x) D_y^i from commuting D_x to the front
        b_shift.add_term(index_of(tower, {{1, yi}}), b_coeffs[i] - derive(ft, a_coeffs[i], 0));
    }
    if (!apply(a_hat, alpha0).is_zero())
        throw Error(ErrorCode::SeedNotAnnihilated, "sum A_i D_y^i alpha0 != 0");
    if (apply(l, alpha0).is_zero())
        throw Error(ErrorCode::DegeneratePetren, "L alpha0 = 0; the transform degenerates");

    Lpdo x2 = Lpdo::derivation(tower, 1) - Lpdo::function(tower, derive(ft, alpha0, 1) / alpha0);
    auto [q, q_rem] = right_divide(a_hat, x2, 1);
    if (!q_rem.is_zero())
        throw Error(ErrorCode::InternalInconsistency, "A^ division remainder should vanish");
    auto [r, r_rem] = right_divide(b_shift, x2, 1);
    RationalExpr rr = r_rem.as_function();
    if (rr.is_zero())
        throw Error(ErrorCode::InternalInconsistency, "nonzero L alpha0 must force a nonzero remainder");
    Lpdo x1 = compose(Lpdo::derivation(tower, 0), q) + r;
    Lpdo h_op = Lpdo::function(tower, -rr);
    RationalExpr psi = detect_psi(h_op, x2);
    IltCertificate cert = build_transform(x1, x2, h_op, psi);
    if (cert.l != l)
        throw Error(ErrorCode::InternalInconsistency, "certificate does not rebuild the input operator");
    return cert;
}

std::optional<DiniDecomposition> dini_decompose(const Lpdo& h, const Lpdo& x2) {
    if (h.order() != 1 || x2.order() != 1)
        throw Error(ErrorCode::NotFirstOrder, "Dini decomposition works on first-order H and X2");
    const TowerPtr& tower = h.tower();
    int nv = tower->num_vars();
    // Collect the order-<=1 index set.
    std::vector<MultiIndex> indices;
    indices.push_back(MultiIndex(nv, 0));
    for (int v = 0; v < nv; ++v) {
        MultiIndex e(nv, 0);
        e[v] = 1;
        indices.push_back(e);
    }
    // Proportionality of H and X2 as coefficient vectors.
    bool proportional = true;
    for (const auto& ei : indices) {
        for (const auto& ej : indices) {
            if (!(h.coeff(ei) * x2.coeff(ej) == h.coeff(ej) * x2.coeff(ei))) proportional = false;
        }
    }
    if (proportional) throw Error(ErrorCode::ProportionalInputs, "H and X2 are proportional");

    Lpdo c = commutator(h, x2);
    // Cramer on the first nonsingular 2x2 block of [H X2 | C].
    for (size_t i = 0; i < indices.size(); ++i) {
        for (size_t j = i + 1; j < indices.size(); ++j) {
            RationalExpr det = h.coeff(indices[i]) * x2.coeff(indices[j]) -
                               h.coeff(indices[j]) * x2.coeff(indices[i]);
            if (det.is_zero()) continue;
            RationalExpr kappa =
                (c.coeff(indices[i]) * x2.coeff(indices[j]) - c.coeff(indices[j]) * x2.coeff(indices[i])) / det;
            RationalExpr rho =
                (h.coeff(indices[i]) * c.coeff(indices[j]) - h.coeff(indices[j]) * c.coeff(indices[i])) / det;
            Lpdo residual = c - h.left_mul(kappa) - x2.left_mul(rho);
            if (!residual.is_zero()) return std::nullopt;
            return DiniDecomposition{kappa, rho};
        }
    }
    return std::nullopt;
}

IltCertificate dini_to_ilt(const Lpdo& x1, const Lpdo& x2, const Lpdo& h, const RationalExpr& kappa,
                           const RationalExpr& rho, const RationalExpr& alpha) {
    const TowerPtr& tower = h.tower();
    // [X2, alpha] + kappa*alpha = rho, verified exactly (never solved).
    RationalExpr x2_alpha = commutator(x2, Lpdo::function(tower, alpha)).as_function();
    RationalExpr residual = x2_alpha + kappa * alpha - rho;
    if (!residual.is_zero())
        throw Error(ErrorCode::AlphaNotASolution,
                    "alpha fails X2(alpha) + kappa alpha = rho; residual " + to_string(residual, *tower));

    Lpdo h_shift = h + x2.left_mul(alpha);
    Lpdo x1_shift = x1 + Lpdo::function(tower, alpha);
    RationalExpr psi = kappa;
    if (!h_shift.is_zero()) {
        try {
            psi = detect_psi(h_shift, x2);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NoIlt)
                throw Error(ErrorCode::ConditionViolated,
                            "(kappa, rho) do not decompose [H, X2]; the shifted H fails the "
                            "proportionality condition");
            throw;
        }
        if (psi != kappa)
            throw Error(ErrorCode::ConditionViolated, "detected psi differs from kappa");
    }
    return build_transform(x1_shift, x2, h_shift, psi);
}

}  // namespace ilt
