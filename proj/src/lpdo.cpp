#include "ilt/lpdo.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "ilt/error.hpp"

namespace ilt {

namespace {

void require_same_tower(const Lpdo& a, const Lpdo& b) {
    if (!same_tower(a.tower(), b.tower()))
        throw Error(ErrorCode::TowerMismatch, "operands live in different field towers");
}

mpz_class multi_binomial(const MultiIndex& alpha, const MultiIndex& gamma) {
    mpz_class r = 1;
    for (size_t i = 0; i < alpha.size(); ++i) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), alpha[i], gamma[i]);
        r *= b;
    }
    return r;
}

// All gamma <= alpha componentwise, via odometer enumeration.
std::vector<MultiIndex> sub_indices(const MultiIndex& alpha) {
    std::vector<MultiIndex> out;
    MultiIndex g(alpha.size(), 0);
    while (true) {
        out.push_back(g);
        size_t i = 0;
        while (i < g.size()) {
            if (g[i] < alpha[i]) {
                ++g[i];
                for (size_t j = 0; j < i; ++j) g[j] = 0;
                break;
            }
            ++i;
        }
        if (i == g.size()) break;
    }
    return out;
}

// Memoized iterated derivatives D^delta f for delta <= some bound.
class DerivativeTable {
  public:
    DerivativeTable(const FieldTower& tower, RationalExpr f) : tower_(tower) {
        cache_.emplace(MultiIndex(tower.num_vars(), 0), std::move(f));
    }

    const RationalExpr& get(const MultiIndex& delta) {
        auto it = cache_.find(delta);
        if (it != cache_.end()) return it->second;
        for (size_t i = 0; i < delta.size(); ++i) {
            if (delta[i] == 0) continue;
            MultiIndex prev = delta;
            prev[i] -= 1;
            RationalExpr d = derive(tower_, get(prev), static_cast<int>(i));
            return cache_.emplace(delta, std::move(d)).first->second;
        }
        return cache_.at(delta);  // delta == 0, already present
    }

  private:
    const FieldTower& tower_;
    std::map<MultiIndex, RationalExpr> cache_;
};

}  // namespace

Lpdo Lpdo::function(TowerPtr tower, const RationalExpr& f) {
    Lpdo a(std::move(tower));
    a.add_term(MultiIndex(a.tower_->num_vars(), 0), f);
    return a;
}

Lpdo Lpdo::derivation(TowerPtr tower, int var) {
    Lpdo a(std::move(tower));
    if (var < 0 || var >= a.tower_->num_vars())
        throw Error(ErrorCode::UnknownVariable, "derivation index out of range");
    MultiIndex idx(a.tower_->num_vars(), 0);
    idx[var] = 1;
    a.add_term(idx, RationalExpr::integer(a.tower_->num_symbols(), 1));
    return a;
}

Lpdo Lpdo::derivation(TowerPtr tower, const std::string& var) {
    int vi = tower->var_index(var);
    return derivation(std::move(tower), vi);
}

int Lpdo::order() const {
    if (terms_.empty()) return kOrderOfZero;
    return static_cast<int>(total_degree(terms_.begin()->first));
}

uint32_t Lpdo::degree_in_var(int var) const {
    uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
}

RationalExpr Lpdo::coeff(const MultiIndex& idx) const {
    auto it = terms_.find(idx);
    if (it == terms_.end()) return RationalExpr::integer(tower_->num_symbols(), 0);
    return it->second;
}

RationalExpr Lpdo::coeff_of_derivation(int var) const {
    MultiIndex idx(tower_->num_vars(), 0);
    idx[var] = 1;
    return coeff(idx);
}

RationalExpr Lpdo::as_function() const {
    if (order() > 0) throw Error(ErrorCode::NotFirstOrder, "operator has derivations, not a function");
    return coeff(MultiIndex(tower_->num_vars(), 0));
}

void Lpdo::add_term(const MultiIndex& idx, const RationalExpr& c) {
    if (static_cast<int>(idx.size()) != tower_->num_vars() || c.nsyms() != tower_->num_symbols())
        throw Error(ErrorCode::TowerMismatch, "term does not match the operator's tower");
    if (c.is_zero()) return;
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        terms_.emplace(idx, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Lpdo Lpdo::operator-() const {
    Lpdo r(tower_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Lpdo Lpdo::operator+(const Lpdo& rhs) const {
    require_same_tower(*this, rhs);
    Lpdo r = *this;
    for (const auto& [e, c] : rhs.terms_) r.add_term(e, c);
    return r;
}

Lpdo Lpdo::operator-(const Lpdo& rhs) const {
    return *this + (-rhs);
}

bool Lpdo::operator==(const Lpdo& rhs) const {
    if (!same_tower(tower_, rhs.tower_)) return false;
    return terms_ == rhs.terms_;
}

Lpdo Lpdo::left_mul(const RationalExpr& f) const {
    Lpdo r(tower_);
    if (f.is_zero()) return r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, f * c);
    return r;
}

Lpdo compose(const Lpdo& a, const Lpdo& b) {
    require_same_tower(a, b);
    Lpdo result(a.tower());
    const FieldTower& tower = *a.tower();
    int nv = tower.num_vars();
    // A o B = sum over a_alpha D^alpha o b_beta D^beta; D^alpha pushes through
    // the coefficient b_beta by the generalized Leibniz rule.
    for (const auto& [beta, bcoeff] : b.terms()) {
        DerivativeTable table(tower, bcoeff);
        for (const auto& [alpha, acoeff] : a.terms()) {
            for (const MultiIndex& gamma : sub_indices(alpha)) {
                MultiIndex diff(nv), target(nv);
                for (int i = 0; i < nv; ++i) {
                    diff[i] = alpha[i] - gamma[i];
                    target[i] = gamma[i] + beta[i];
                }
                const RationalExpr& db = table.get(diff);
                if (db.is_zero()) continue;
                mpz_class binom = multi_binomial(alpha, gamma);
                RationalExpr term = acoeff * db * RationalExpr::integer(tower.num_symbols(), binom);
                result.add_term(target, term);
            }
        }
    }
    return result;
}

Lpdo commutator(const Lpdo& a, const Lpdo& b) {
    return compose(a, b) - compose(b, a);
}

RationalExpr apply(const Lpdo& a, const RationalExpr& f) {
    const FieldTower& tower = *a.tower();
    if (f.nsyms() != tower.num_symbols())
        throw Error(ErrorCode::TowerMismatch, "expression does not belong to the operator's tower");
    DerivativeTable table(tower, f);
    RationalExpr out = RationalExpr::integer(tower.num_symbols(), 0);
    for (const auto& [alpha, c] : a.terms()) out = out + c * table.get(alpha);
    return out;
}

PrincipalSymbol principal_symbol(const Lpdo& a) {
    if (a.is_zero()) throw Error(ErrorCode::ZeroOperator, "the zero operator has no principal symbol");
    int ord = a.order();
    std::map<MultiIndex, RationalExpr, GradedLexDesc> top;
    for (const auto& [e, c] : a.terms()) {
        if (static_cast<int>(total_degree(e)) == ord) top.emplace(e, c);
    }
    return PrincipalSymbol(a.tower(), std::move(top), ord);
}

PrincipalSymbol PrincipalSymbol::operator*(const PrincipalSymbol& rhs) const {
    if (!same_tower(tower_, rhs.tower_))
        throw Error(ErrorCode::TowerMismatch, "symbols live in different field towers");
    std::map<MultiIndex, RationalExpr, GradedLexDesc> out;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : rhs.terms_) {
            MultiIndex e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            RationalExpr prod = ca * cb;
            auto it = out.find(e);
            if (it == out.end()) {
                out.emplace(e, prod);
            } else {
                it->second = it->second + prod;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    }
    return PrincipalSymbol(tower_, std::move(out), degree_ + rhs.degree_);
}

bool PrincipalSymbol::operator==(const PrincipalSymbol& rhs) const {
    return same_tower(tower_, rhs.tower_) && terms_ == rhs.terms_;
}

std::pair<Lpdo, Lpdo> right_divide(const Lpdo& l, const Lpdo& m, int var) {
    require_same_tower(l, m);
    if (m.order() != 1)
        throw Error(ErrorCode::NotFirstOrder, "divisor must have order 1");
    RationalExpr cvar = m.coeff_of_derivation(var);
    if (cvar.is_zero())
        throw Error(ErrorCode::VarCoefficientZero,
                    "divisor has zero coefficient at D_" + l.tower()->vars()[var]);

    Lpdo q(l.tower());
    Lpdo r = l;
    while (true) {
        uint32_t kmax = 0;
        for (const auto& [e, c] : r.terms()) kmax = std::max(kmax, e[var]);
        if (kmax == 0) break;
        // Reduce the graded-lex-largest index at the top D_var level; the map
        // is sorted descending, so the first hit is the target. Each round
        // strictly lowers that index, then the D_var level itself drops.
        MultiIndex mu;
        RationalExpr w;
        for (const auto& [e, c] : r.terms()) {
            if (e[var] == kmax) {
                mu = e;
                w = c;
                break;
            }
        }
        mu[var] -= 1;
        Lpdo qt(l.tower());
        qt.add_term(mu, w / cvar);
        q = q + qt;
        r = r - compose(qt, m);
    }
    return {q, r};
}

std::pair<Lpdo, Lpdo> right_divide(const Lpdo& l, const Lpdo& m, const std::string& var) {
    return right_divide(l, m, l.tower()->var_index(var));
}

Lpdo conjugate(const Lpdo& l, const RationalExpr& lambda) {
    if (lambda.is_zero()) throw Error(ErrorCode::ZeroGauge, "gauge function must be nonzero");
    Lpdo lam = Lpdo::function(l.tower(), lambda);
    Lpdo lam_inv = Lpdo::function(l.tower(), lambda.inverse());
    return compose(lam_inv, compose(l, lam));
}

namespace {

RationalExpr determinant(std::vector<std::vector<RationalExpr>> m, int nsyms) {
    size_t n = m.size();
    if (n == 0) return RationalExpr::integer(nsyms, 1);
    if (n == 1) return m[0][0];
    RationalExpr det = RationalExpr::integer(nsyms, 0);
    int sign = 1;
    for (size_t k = 0; k < n; ++k) {
        std::vector<std::vector<RationalExpr>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<RationalExpr> row;
            for (size_t j = 0; j < n; ++j)
                if (j != k) row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        RationalExpr term = m[0][k] * determinant(std::move(minor), nsyms);
        det = (sign > 0) ? det + term : det - term;
        sign = -sign;
    }
    return det;
}

bool depends_on_generators(const RationalExpr& f, const FieldTower& tower) {
    for (int g = tower.num_vars(); g < tower.num_symbols(); ++g)
        if (f.num().depends_on(g) || f.den().depends_on(g)) return true;
    return false;
}

}  // namespace

TowerPtr transformed_tower(const TowerPtr& old_tower, const CoordinateChange& chg) {
    int n = old_tower->num_vars();
    int old_nsyms = old_tower->num_symbols();
    if (static_cast<int>(chg.new_vars.size()) != n || static_cast<int>(chg.fwd.size()) != n ||
        static_cast<int>(chg.inv.size()) != n)
        throw Error(ErrorCode::BadCoordinateMap, "coordinate maps must cover all variables");
    for (const auto& f : chg.fwd) {
        if (f.nsyms() != old_nsyms)
            throw Error(ErrorCode::BadCoordinateMap, "forward map must live over the source tower");
        if (depends_on_generators(f, *old_tower))
            throw Error(ErrorCode::BadCoordinateMap, "coordinate maps must be generator-free");
    }
    for (const auto& g : chg.inv)
        if (g.nsyms() != n)
            throw Error(ErrorCode::BadCoordinateMap, "inverse map must live over the new variables only");

    // Jacobian of the forward map over the old tower.
    std::vector<std::vector<RationalExpr>> jac(n, std::vector<RationalExpr>(n, RationalExpr()));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) jac[j][i] = derive(*old_tower, chg.fwd[j], i);
    if (determinant(jac, old_nsyms).is_zero())
        throw Error(ErrorCode::SingularJacobian, "forward map has singular Jacobian");

    // inv o fwd must be the identity on the old variables.
    for (int i = 0; i < n; ++i) {
        std::vector<RationalExpr> images;
        for (int j = 0; j < n; ++j) images.push_back(chg.fwd[j]);
        RationalExpr back = subst(chg.inv[i], images, old_nsyms);
        if (back != RationalExpr::symbol(old_nsyms, i))
            throw Error(ErrorCode::NotInverse,
                        "inv(fwd(" + old_tower->vars()[i] + ")) does not reduce to " + old_tower->vars()[i]);
    }
    // fwd o inv must be the identity on the new variables.
    for (int j = 0; j < n; ++j) {
        std::vector<RationalExpr> images;
        for (int i = 0; i < n; ++i) images.push_back(chg.inv[i]);
        for (int g = n; g < old_nsyms; ++g) images.push_back(RationalExpr::integer(n, 0));  // unused
        RationalExpr fwd_in_new = subst(chg.fwd[j], images, n);
        if (fwd_in_new != RationalExpr::symbol(n, j))
            throw Error(ErrorCode::NotInverse,
                        "fwd(inv(" + chg.new_vars[j] + ")) does not reduce to " + chg.new_vars[j]);
    }

    // Rebuild the tower over the new variables; generator partials transform
    // by the chain rule through the inverse map.
    TowerPtr fresh = FieldTower::create(chg.new_vars);
    for (int g = 0; g < old_tower->num_generators(); ++g) {
        const auto& gen = old_tower->generators()[g];
        fresh = fresh->declare_generator(gen.name, [&](const FieldTower& provisional) {
            int pn = provisional.num_symbols();
            // Images of the old symbols inside the provisional tower.
            std::vector<RationalExpr> images;
            for (int i = 0; i < n; ++i) images.push_back(chg.inv[i].lifted(pn));
            for (int k = 0; k < old_tower->num_generators(); ++k) {
                if (n + k < pn)
                    images.push_back(RationalExpr::symbol(pn, n + k));
                else
                    images.push_back(RationalExpr::integer(pn, 0));  // later generator, may not occur
            }
            std::map<std::string, RationalExpr> table;
            for (int j = 0; j < n; ++j) {
                RationalExpr acc = RationalExpr::integer(pn, 0);
                for (int i = 0; i < n; ++i) {
                    const RationalExpr& old_partial = gen.partials[i];
                    if (old_partial.is_zero()) continue;
                    RationalExpr moved = subst(old_partial, images, pn);
                    RationalExpr dinv = derive(provisional, chg.inv[i].lifted(pn), j);
                    acc = acc + moved * dinv;
                }
                table[chg.new_vars[j]] = acc;
            }
            return table;
        });
    }
    return fresh;
}

RationalExpr transform_expr(const FieldTower& old_tower, const RationalExpr& f, const CoordinateChange& chg,
                            const FieldTower& new_tower) {
    int pn = new_tower.num_symbols();
    int n = old_tower.num_vars();
    std::vector<RationalExpr> images;
    for (int i = 0; i < n; ++i) images.push_back(chg.inv[i].lifted(pn));
    for (int k = 0; k < old_tower.num_generators(); ++k) images.push_back(RationalExpr::symbol(pn, n + k));
    return subst(f, images, pn);
}

std::pair<Lpdo, TowerPtr> change_vars(const Lpdo& l, const CoordinateChange& chg) {
    const TowerPtr& old_tower = l.tower();
    TowerPtr new_tower = transformed_tower(old_tower, chg);
    int n = old_tower->num_vars();

    // Pushforward of each derivation: D_xi -> sum_j (d fwd_j / d xi) o inv * D_Xj.
    std::vector<Lpdo> pushed;
    for (int i = 0; i < n; ++i) {
        Lpdo v(new_tower);
        for (int j = 0; j < n; ++j) {
            RationalExpr jac = derive(*old_tower, chg.fwd[j], i);
            if (jac.is_zero()) continue;
            RationalExpr moved = transform_expr(*old_tower, jac, chg, *new_tower);
            MultiIndex idx(n, 0);
            idx[j] = 1;
            v.add_term(idx, moved);
        }
        pushed.push_back(std::move(v));
    }

    Lpdo out(new_tower);
    for (const auto& [alpha, c] : l.terms()) {
        Lpdo term = Lpdo::function(new_tower, transform_expr(*old_tower, c, chg, *new_tower));
        for (int i = 0; i < n; ++i)
            for (uint32_t k = 0; k < alpha[i]; ++k) term = compose(term, pushed[i]);
        out = out + term;
    }
    return {out, new_tower};
}

std::pair<PrincipalSymbol, PrincipalSymbol> factor_symbol_quadratic(const Lpdo& l, const std::string& u,
                                                                    const std::string& v) {
    if (l.is_zero() || l.order() != 2)
        throw Error(ErrorCode::NotQuadratic, "operator must have order 2");
    int ui = l.tower()->var_index(u);
    int vi = l.tower()->var_index(v);
    if (ui == vi) throw Error(ErrorCode::NotQuadratic, "need two distinct variables");
    PrincipalSymbol sym = principal_symbol(l);
    int nv = l.tower()->num_vars();
    int ns = l.tower()->num_symbols();
    auto idx = [&](int a_exp_u, int a_exp_v) {
        MultiIndex e(nv, 0);
        e[ui] = a_exp_u;
        e[vi] = a_exp_v;
        return e;
    };
    RationalExpr zero = RationalExpr::integer(ns, 0);
    RationalExpr A = zero, B = zero, C = zero;
    for (const auto& [e, c] : sym.terms()) {
        for (int i = 0; i < nv; ++i)
            if (i != ui && i != vi && e[i] > 0)
                throw Error(ErrorCode::NotQuadratic,
                            "principal symbol involves xi_" + l.tower()->vars()[i]);
        if (e == idx(2, 0))
            A = c;
        else if (e == idx(1, 1))
            B = c;
        else if (e == idx(0, 2))
            C = c;
    }

    auto linear_form = [&](const RationalExpr& cu, const RationalExpr& cv) {
        std::map<MultiIndex, RationalExpr, GradedLexDesc> t;
        if (!cu.is_zero()) t.emplace(idx(1, 0), cu);
        if (!cv.is_zero()) t.emplace(idx(0, 1), cv);
        return PrincipalSymbol(l.tower(), std::move(t), 1);
    };

    RationalExpr two = RationalExpr::integer(ns, 2);
    std::pair<PrincipalSymbol, PrincipalSymbol> factors{PrincipalSymbol(l.tower()), PrincipalSymbol(l.tower())};
    if (!A.is_zero()) {
        RationalExpr disc = B * B - RationalExpr::integer(ns, 4) * A * C;
        // n/d is a square in F iff n*d is a square in the polynomial ring.
        auto root = poly_sqrt(disc.num() * disc.den());
        if (!root)
            throw Error(ErrorCode::NotAPerfectSquare,
                        "symbol discriminant is not a square in the coefficient field; "
                        "supply the factors manually");
        // sqrt(n*d)/d squares to n/d.
        RationalExpr s(*root, disc.den());
        factors = {linear_form(A, (B - s) / two), linear_form(RationalExpr::integer(ns, 1), (B + s) / (two * A))};
    } else if (!B.is_zero()) {
        factors = {linear_form(B, C), linear_form(zero, RationalExpr::integer(ns, 1))};
    } else if (!C.is_zero()) {
        factors = {linear_form(zero, C), linear_form(zero, RationalExpr::integer(ns, 1))};
    } else {
        throw Error(ErrorCode::NotQuadratic, "symbol is not a binary quadratic in the chosen pair");
    }
    if (factors.first * factors.second != sym)
        throw Error(ErrorCode::InternalInconsistency, "symbol factor check failed");
    return factors;
}

namespace {

std::string term_string(const MultiIndex& idx, const std::vector<std::string>& vars) {
    std::ostringstream out;
    bool first = true;
    for (size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] == 0) continue;
        if (!first) out << "*";
        out << "D" << vars[i];
        if (idx[i] > 1) out << "^" << idx[i];
        first = false;
    }
    return out.str();
}

std::string symbol_term_string(const MultiIndex& idx, const std::vector<std::string>& vars) {
    std::ostringstream out;
    bool first = true;
    for (size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] == 0) continue;
        if (!first) out << "*";
        out << "xi_" << vars[i];
        if (idx[i] > 1) out << "^" << idx[i];
        first = false;
    }
    return out.str();
}

template <typename TermMap>
std::string render_terms(const TermMap& terms, const FieldTower& tower, bool as_symbol) {
    if (terms.empty()) return "0";
    std::vector<std::string> names = tower.symbol_names();
    std::ostringstream out;
    bool first = true;
    for (const auto& [idx, c] : terms) {
        bool neg = leading_is_negative(c);
        if (first) {
            if (neg) out << "-";
            first = false;
        } else {
            out << (neg ? " - " : " + ");
        }
        RationalExpr mag = neg ? -c : c;
        std::string atoms = as_symbol ? symbol_term_string(idx, tower.vars()) : term_string(idx, tower.vars());
        if (atoms.empty()) {
            // The zero-order slot is unique, so a polynomial coefficient can
            // spill its terms inline; the separator already carries the
            // leading sign.
            if (c.den().is_one()) {
                std::string s = poly_to_string(c.num(), names);
                out << (neg ? s.substr(1) : s);
            } else {
                out << factor_string(mag, names);
            }
        } else if (mag.is_one()) {
            out << atoms;
        } else {
            out << factor_string(mag, names) << "*" << atoms;
        }
    }
    return out.str();
}

}  // namespace

std::string to_string(const Lpdo& a) {
    return render_terms(a.terms(), *a.tower(), false);
}

std::string to_string(const PrincipalSymbol& s) {
    return render_terms(s.terms(), *s.tower(), true);
}

}  // namespace ilt
