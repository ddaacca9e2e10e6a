#include "ilt/solver.hpp"

#include <algorithm>

#include "ilt/error.hpp"

namespace ilt {

namespace {

// Multi-indices of total degree < bound over nv variables, graded-lex
// descending (matches the unknown ordering of the elimination).
std::vector<MultiIndex> indices_below(int nv, int bound) {
    std::vector<MultiIndex> out;
    MultiIndex cur(nv, 0);
    // enumerate all indices with entries summing to < bound via odometer
    while (true) {
        if (static_cast<int>(total_degree(cur)) < bound) out.push_back(cur);
        int i = 0;
        while (i < nv) {
            if (static_cast<int>(cur[i]) < bound - 1) {
                ++cur[i];
                for (int j = 0; j < i; ++j) cur[j] = 0;
                break;
            }
            ++i;
        }
        if (i == nv) break;
    }
    std::sort(out.begin(), out.end(), GradedLexDesc{});
    return out;
}

int first_var_with_nonzero_coeff(const Lpdo& m) {
    for (int v = 0; v < m.tower()->num_vars(); ++v)
        if (!m.coeff_of_derivation(v).is_zero()) return v;
    throw Error(ErrorCode::VarCoefficientZero, "M carries no derivation");
}

}  // namespace

IntertwiningSolution solve_intertwining(const Lpdo& l, const Lpdo& m) {
    if (m.order() != 1) throw Error(ErrorCode::NotFirstOrderM, "intertwiner M must have order 1");
    if (l.is_zero() || l.order() < 1)
        throw Error(ErrorCode::UsageError, "L must have order >= 1");
    const TowerPtr& tower = l.tower();
    if (!same_tower(tower, m.tower()))
        throw Error(ErrorCode::TowerMismatch, "operands live in different field towers");
    int nv = tower->num_vars();
    int ns = tower->num_symbols();
    int ord_l = l.order();

    // Unknowns: coefficients of M1 (all |gamma| <= 1), then the sub-top
    // coefficients of L1 (all |beta| < ord L); the top of L1 is pinned to L's.
    std::vector<MultiIndex> m_idx = indices_below(nv, 2);
    std::vector<MultiIndex> l_idx = indices_below(nv, ord_l);
    size_t n_unknowns = m_idx.size() + l_idx.size();

    // The identity M1 o L - L1 o M = 0 is F-linear in the unknown functions:
    // derivatives only ever land on the known coefficients of L and M. Column
    // k collects, per derivative index, the operator multiplying unknown k.
    std::vector<Lpdo> columns;
    columns.reserve(n_unknowns);
    for (const auto& gamma : m_idx) {
        Lpdo unit(tower);
        unit.add_term(gamma, RationalExpr::integer(ns, 1));
        columns.push_back(compose(unit, l));
    }
    for (const auto& beta : l_idx) {
        Lpdo unit(tower);
        unit.add_term(beta, RationalExpr::integer(ns, 1));
        columns.push_back(-compose(unit, m));
    }
    Lpdo top(tower);
    for (const auto& [idx, c] : l.terms())
        if (static_cast<int>(total_degree(idx)) == ord_l) top.add_term(idx, c);
    Lpdo rhs_op = compose(top, m);  // moved to the right-hand side

    // Row space: every derivative index seen anywhere.
    std::map<MultiIndex, size_t, GradedLexDesc> row_of;
    auto note_rows = [&](const Lpdo& op) {
        for (const auto& [idx, c] : op.terms()) row_of.emplace(idx, 0);
    };
    for (const auto& col : columns) note_rows(col);
    note_rows(rhs_op);
    size_t n_rows = 0;
    for (auto& [idx, r] : row_of) r = n_rows++;

    // Clear denominators row by row: the elimination then runs fraction-free
    // (Bareiss), with a single exact polynomial division per updated entry.
    size_t width = n_unknowns + 1;  // last column holds the right-hand side
    std::vector<std::vector<Poly>> a(n_rows, std::vector<Poly>(width, Poly(ns)));
    {
        std::vector<std::vector<RationalExpr>> raw(n_rows,
                                                   std::vector<RationalExpr>(width, RationalExpr::integer(ns, 0)));
        for (size_t k = 0; k < columns.size(); ++k)
            for (const auto& [idx, c] : columns[k].terms()) raw[row_of.at(idx)][k] = c;
        for (const auto& [idx, c] : rhs_op.terms()) raw[row_of.at(idx)][n_unknowns] = c;
        for (size_t r = 0; r < n_rows; ++r) {
            Poly common(ns, 1);
            for (const auto& e : raw[r])
                if (!e.den().is_one()) common = *divide_exact(common * e.den(), poly_gcd(common, e.den()));
            for (size_t j = 0; j < width; ++j)
                a[r][j] = raw[r][j].num() * *divide_exact(common, raw[r][j].den());
        }
    }

    std::vector<int> pivot_row_of_col(n_unknowns, -1);
    std::vector<int> pivot_col_of_row;
    Poly prev_pivot(ns, 1);
    size_t rank = 0;
    for (size_t col = 0; col < n_unknowns && rank < n_rows; ++col) {
        // pick the sparsest nonzero pivot candidate to limit fill-in
        size_t best = n_rows;
        size_t best_terms = SIZE_MAX;
        for (size_t r = rank; r < n_rows; ++r) {
            size_t nt = a[r][col].terms().size();
            if (nt > 0 && nt < best_terms) {
                best = r;
                best_terms = nt;
            }
        }
        if (best == n_rows) continue;
        std::swap(a[best], a[rank]);
        const Poly pivot = a[rank][col];
        for (size_t r = rank + 1; r < n_rows; ++r) {
            if (a[r][col].is_zero()) {
                // still rescale to keep the Bareiss invariant exact
                for (size_t j = col; j < width; ++j)
                    a[r][j] = *divide_exact(a[r][j] * pivot, prev_pivot);
                continue;
            }
            for (size_t j = col + 1; j < width; ++j)
                a[r][j] = *divide_exact(a[r][j] * pivot - a[r][col] * a[rank][j], prev_pivot);
            a[r][col] = Poly(ns);
        }
        prev_pivot = pivot;
        pivot_row_of_col[col] = static_cast<int>(rank);
        pivot_col_of_row.push_back(static_cast<int>(col));
        ++rank;
    }

    IntertwiningSolution sol;
    for (size_t r = rank; r < n_rows; ++r) {
        if (!a[r][n_unknowns].is_zero()) {
            sol.status = SolveStatus::None;
            return sol;
        }
    }

    std::vector<int> free_cols;
    for (size_t c = 0; c < n_unknowns; ++c)
        if (pivot_row_of_col[c] < 0) free_cols.push_back(static_cast<int>(c));

    RationalExpr zero = RationalExpr::integer(ns, 0);
    // Back-substitution over F for a full assignment with the free columns
    // fixed; `scale` weights the right-hand side (1 for the particular
    // solution, 0 for homogeneous basis vectors).
    auto back_substitute = [&](const std::vector<RationalExpr>& free_values, int rhs_scale) {
        std::vector<RationalExpr> x(n_unknowns, zero);
        for (size_t i = 0; i < free_cols.size(); ++i) x[free_cols[i]] = free_values[i];
        for (int k = static_cast<int>(rank) - 1; k >= 0; --k) {
            int pc = pivot_col_of_row[k];
            RationalExpr acc = RationalExpr(a[k][n_unknowns]) * RationalExpr::integer(ns, rhs_scale);
            for (size_t j = pc + 1; j < n_unknowns; ++j) {
                if (a[k][j].is_zero() || x[j].is_zero()) continue;
                acc = acc - RationalExpr(a[k][j]) * x[j];
            }
            x[pc] = acc / RationalExpr(a[k][pc]);
        }
        return x;
    };

    auto assemble = [&](const std::vector<RationalExpr>& values, bool with_top) {
        Lpdo m1(tower), l1(tower);
        for (size_t k = 0; k < m_idx.size(); ++k) m1.add_term(m_idx[k], values[k]);
        for (size_t k = 0; k < l_idx.size(); ++k) l1.add_term(l_idx[k], values[m_idx.size() + k]);
        if (with_top) l1 = l1 + top;
        return std::make_pair(m1, l1);
    };

    std::vector<RationalExpr> particular =
        back_substitute(std::vector<RationalExpr>(free_cols.size(), zero), 1);
    auto [m1, l1] = assemble(particular, true);

    // Residual must vanish identically at the returned solution.
    if (!(compose(m1, l) - compose(l1, m)).is_zero())
        throw Error(ErrorCode::InternalInconsistency, "solver residual is nonzero");

    sol.m1 = m1;
    sol.l1 = l1;
    sol.m1_order_degenerate = m1.order() < 1;
    if (free_cols.empty()) {
        sol.status = SolveStatus::Unique;
        return sol;
    }
    sol.status = SolveStatus::NonUnique;
    sol.dimension = static_cast<int>(free_cols.size());
    for (size_t i = 0; i < free_cols.size(); ++i) {
        std::vector<RationalExpr> unit(free_cols.size(), zero);
        unit[i] = RationalExpr::integer(ns, 1);
        sol.basis.push_back(assemble(back_substitute(unit, 0), false));
    }
    return sol;
}

LclmReport certify_lclm(const Lpdo& l, const Lpdo& m, const Lpdo& l1, const Lpdo& m1) {
    LclmReport rep{false, false, false, false, false, Lpdo(l.tower())};
    rep.product_identity = (compose(m1, l) - compose(l1, m)).is_zero();
    rep.order_l_matches = !l.is_zero() && l.order() >= 1 && l.order() == l1.order();
    rep.order_m_one = m.order() == 1 && m1.order() == 1;
    if (!l.is_zero() && !l1.is_zero() && l.order() == l1.order())
        rep.symbols_match = principal_symbol(l) == principal_symbol(l1);
    if (rep.order_m_one) {
        int var = first_var_with_nonzero_coeff(m);
        auto [q, r] = right_divide(l, m, var);
        rep.not_right_divisible = !r.is_zero();
    }
    if (rep.certified()) rep.lclm = compose(m1, l);
    return rep;
}

IltCertificate first_order_to_ilt(const Lpdo& l, const Lpdo& m, const Lpdo& m1, const Lpdo& l1, int var) {
    IntertwiningReport rep = verify_intertwining(m1, l, l1, m);
    if (!rep.pass())
        throw Error(ErrorCode::ConditionViolated,
                    "the quadruple does not satisfy an intertwining relation");
    RationalExpr alpha = m.coeff_of_derivation(var);
    if (alpha.is_zero())
        throw Error(ErrorCode::ZeroAlphaCoefficient,
                    "M has zero coefficient at D_" + l.tower()->vars()[var]);
    Lpdo x2 = m.left_mul(alpha.inverse());
    auto [q, r] = right_divide(l, x2, var);
    Lpdo h = -r;
    RationalExpr psi = RationalExpr::integer(l.tower()->num_symbols(), 0);
    if (!h.is_zero()) {
        try {
            psi = detect_psi(h, x2);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NoIlt)
                throw Error(ErrorCode::InternalInconsistency,
                            "normalization failed although an intertwining relation holds");
            throw;
        }
    }
    IltCertificate cert = build_transform(q, x2, h, psi);
    // Against the uniqueness statement: the certificate's transformed operator
    // is the conjugate alpha^-1 L1 alpha whenever L is not divisible by M.
    if (!r.is_zero() && cert.l1 != conjugate(l1, alpha))
        throw Error(ErrorCode::InternalInconsistency,
                    "normalized certificate disagrees with the conjugated transform");
    return cert;
}

std::vector<KernelCheckEntry> kernel_check(const Lpdo& l, const Lpdo& m,
                                           const std::vector<RationalExpr>& seeds,
                                           const std::optional<Lpdo>& h) {
    std::vector<KernelCheckEntry> out;
    for (const auto& z : seeds) {
        KernelCheckEntry e;
        e.seed = z;
        e.l_zero = apply(l, z).is_zero();
        e.m_zero = apply(m, z).is_zero();
        if (h) e.h_zero = apply(*h, z).is_zero();
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace ilt
