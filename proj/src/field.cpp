#include "ilt/field.hpp"

#include <cassert>
#include <cctype>

#include "ilt/error.hpp"

namespace ilt {

RationalExpr::RationalExpr(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    canonicalize();
}

RationalExpr::RationalExpr(Poly num) : num_(std::move(num)), den_(num_.nsyms(), 1) {}

RationalExpr RationalExpr::integer(int nsyms, const mpz_class& n) {
    return RationalExpr(Poly(nsyms, n));
}

RationalExpr RationalExpr::rational(int nsyms, const mpq_class& q) {
    return RationalExpr(Poly(nsyms, q.get_num()), Poly(nsyms, q.get_den()));
}

RationalExpr RationalExpr::symbol(int nsyms, int sym) {
    return RationalExpr(Poly::symbol(nsyms, sym));
}

void RationalExpr::canonicalize() {
    if (den_.is_zero()) throw Error(ErrorCode::DivisionByZero, "denominator is zero");
    if (num_.is_zero()) {
        den_ = Poly(num_.nsyms(), 1);
        return;
    }
    if (!den_.is_one()) {
        Poly g = poly_gcd(num_, den_);
        if (!g.is_one()) {
            num_ = *divide_exact(num_, g);
            den_ = *divide_exact(den_, g);
        }
    }
    if (den_.leading_coeff() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

RationalExpr RationalExpr::operator-() const {
    RationalExpr r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

// Addition and multiplication keep the operands' coprimality instead of
// re-running a full gcd on the products (Henrici's algorithm); elimination-
// style workloads spend most of their time here.
RationalExpr RationalExpr::operator+(const RationalExpr& rhs) const {
    if (is_zero()) return rhs;
    if (rhs.is_zero()) return *this;
    if (den_.is_one() && rhs.den_.is_one()) return RationalExpr(canonical_tag{}, num_ + rhs.num_, den_);
    Poly g = poly_gcd(den_, rhs.den_);
    if (g.is_one()) {
        Poly n = num_ * rhs.den_ + rhs.num_ * den_;
        if (n.is_zero()) return integer(nsyms(), 0);
        return RationalExpr(canonical_tag{}, std::move(n), den_ * rhs.den_);
    }
    Poly b1 = *divide_exact(den_, g);
    Poly d1 = *divide_exact(rhs.den_, g);
    Poly t = num_ * d1 + rhs.num_ * b1;
    if (t.is_zero()) return integer(nsyms(), 0);
    Poly h = poly_gcd(t, g);
    if (h.is_one()) return RationalExpr(canonical_tag{}, std::move(t), b1 * rhs.den_);
    return RationalExpr(canonical_tag{}, *divide_exact(t, h), b1 * *divide_exact(rhs.den_, h));
}

RationalExpr RationalExpr::operator-(const RationalExpr& rhs) const {
    return *this + (-rhs);
}

RationalExpr RationalExpr::operator*(const RationalExpr& rhs) const {
    if (is_zero()) return *this;
    if (rhs.is_zero()) return rhs;
    Poly g1 = poly_gcd(num_, rhs.den_);
    Poly g2 = poly_gcd(rhs.num_, den_);
    Poly n = g1.is_one() ? num_ : *divide_exact(num_, g1);
    Poly m = g2.is_one() ? rhs.num_ : *divide_exact(rhs.num_, g2);
    Poly d1 = g2.is_one() ? den_ : *divide_exact(den_, g2);
    Poly d2 = g1.is_one() ? rhs.den_ : *divide_exact(rhs.den_, g1);
    return RationalExpr(canonical_tag{}, n * m, d1 * d2);
}

RationalExpr RationalExpr::operator/(const RationalExpr& rhs) const {
    if (rhs.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero expression");
    if (is_zero()) return *this;
    Poly g1 = poly_gcd(num_, rhs.num_);
    Poly g2 = poly_gcd(den_, rhs.den_);
    Poly n = (g1.is_one() ? num_ : *divide_exact(num_, g1)) * (g2.is_one() ? rhs.den_ : *divide_exact(rhs.den_, g2));
    Poly d = (g2.is_one() ? den_ : *divide_exact(den_, g2)) * (g1.is_one() ? rhs.num_ : *divide_exact(rhs.num_, g1));
    if (d.leading_coeff() < 0) {
        n = -n;
        d = -d;
    }
    return RationalExpr(canonical_tag{}, std::move(n), std::move(d));
}

RationalExpr RationalExpr::inverse() const {
    if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    return RationalExpr(den_, num_);
}

RationalExpr RationalExpr::pow(uint32_t k) const {
    RationalExpr r = RationalExpr::integer(nsyms(), 1);
    for (uint32_t i = 0; i < k; ++i) r = r * *this;
    return r;
}

bool RationalExpr::operator==(const RationalExpr& rhs) const {
    return num_ == rhs.num_ && den_ == rhs.den_;
}

RationalExpr RationalExpr::lifted(int new_nsyms) const {
    assert(new_nsyms >= nsyms());
    auto lift = [&](const Poly& p) {
        Poly out(new_nsyms);
        for (const auto& [e, c] : p.terms()) {
            Exponents le = e;
            le.resize(new_nsyms, 0);
            out.add_term(le, c);
        }
        return out;
    };
    RationalExpr r;
    r.num_ = lift(num_);
    r.den_ = lift(den_);
    return r;
}

std::shared_ptr<const FieldTower> FieldTower::create(std::vector<std::string> vars) {
    auto t = std::shared_ptr<FieldTower>(new FieldTower());
    for (const auto& v : vars) {
        t->check_name(v);
        t->vars_.push_back(v);
    }
    // Reject names that make derivation tokens ambiguous (variable "Dx" next
    // to variable "x" would collide with the token for d/dx).
    for (const auto& v : t->vars_)
        for (const auto& w : t->vars_)
            if (v == "D" + w)
                throw Error(ErrorCode::NameCollision,
                            "name '" + v + "' collides with the derivation token for '" + w + "'");
    return t;
}

void FieldTower::check_name(const std::string& name) const {
    if (name.empty() || (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_'))
        throw Error(ErrorCode::NameCollision, "invalid symbol name '" + name + "'");
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            throw Error(ErrorCode::NameCollision, "invalid symbol name '" + name + "'");
    if (symbol_index(name) >= 0)
        throw Error(ErrorCode::NameCollision, "symbol '" + name + "' already declared");
}

std::shared_ptr<const FieldTower> FieldTower::declare_generator(
    const std::string& name,
    const std::function<std::map<std::string, RationalExpr>(const FieldTower&)>& partials_fn) const {
    check_name(name);
    for (const auto& v : vars_)
        if (name == "D" + v)
            throw Error(ErrorCode::NameCollision,
                        "name '" + name + "' collides with the derivation token for '" + v + "'");

    auto ext = std::shared_ptr<FieldTower>(new FieldTower());
    ext->vars_ = vars_;
    int new_nsyms = num_symbols() + 1;
    for (const auto& g : gens_) {
        Generator lifted{g.name, {}};
        for (const auto& p : g.partials) lifted.partials.push_back(p.lifted(new_nsyms));
        ext->gens_.push_back(std::move(lifted));
    }
    Generator fresh{name, std::vector<RationalExpr>(vars_.size(), RationalExpr::integer(new_nsyms, 0))};
    ext->gens_.push_back(std::move(fresh));

    auto table = partials_fn(*ext);
    auto& partials = ext->gens_.back().partials;
    for (const auto& [var, expr] : table) {
        int vi = ext->var_index(var);
        if (expr.nsyms() != new_nsyms)
            throw Error(ErrorCode::TowerMismatch, "partial of '" + name + "' built over a different tower");
        partials[vi] = expr;
    }

    // Mixed-partial integrability for the new generator.
    for (int i = 0; i < ext->num_vars(); ++i) {
        for (int j = i + 1; j < ext->num_vars(); ++j) {
            RationalExpr dij = derive(*ext, partials[j], i);
            RationalExpr dji = derive(*ext, partials[i], j);
            if (dij != dji)
                throw Error(ErrorCode::IntegrabilityViolation,
                            "generator '" + name + "': D_" + ext->vars_[i] + "(D_" + ext->vars_[j] + " " +
                                name + ") != D_" + ext->vars_[j] + "(D_" + ext->vars_[i] + " " + name + ")");
        }
    }
    return ext;
}

const std::string& FieldTower::symbol_name(int sym) const {
    if (sym < num_vars()) return vars_[sym];
    return gens_[sym - num_vars()].name;
}

std::vector<std::string> FieldTower::symbol_names() const {
    std::vector<std::string> out = vars_;
    for (const auto& g : gens_) out.push_back(g.name);
    return out;
}

int FieldTower::symbol_index(const std::string& name) const {
    for (int i = 0; i < num_vars(); ++i)
        if (vars_[i] == name) return i;
    for (int i = 0; i < num_generators(); ++i)
        if (gens_[i].name == name) return num_vars() + i;
    return -1;
}

int FieldTower::var_index(const std::string& name) const {
    for (int i = 0; i < num_vars(); ++i)
        if (vars_[i] == name) return i;
    throw Error(ErrorCode::UnknownVariable, "'" + name + "' is not a variable of the tower");
}

bool FieldTower::operator==(const FieldTower& rhs) const {
    if (vars_ != rhs.vars_ || gens_.size() != rhs.gens_.size()) return false;
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (gens_[i].name != rhs.gens_[i].name) return false;
        if (gens_[i].partials.size() != rhs.gens_[i].partials.size()) return false;
        for (size_t j = 0; j < gens_[i].partials.size(); ++j)
            if (gens_[i].partials[j] != rhs.gens_[i].partials[j]) return false;
    }
    return true;
}

bool same_tower(const TowerPtr& a, const TowerPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

namespace {

// d/dvar of a polynomial: formal part plus generator chain rule.
RationalExpr derive_poly(const FieldTower& tower, const Poly& p, int var) {
    RationalExpr out(p.derivative(var));
    int nv = tower.num_vars();
    for (int g = 0; g < tower.num_generators(); ++g) {
        int sym = nv + g;
        Poly formal = p.derivative(sym);
        if (formal.is_zero()) continue;
        const RationalExpr& dgen = tower.generators()[g].partials[var];
        if (dgen.is_zero()) continue;
        out = out + RationalExpr(formal) * dgen;
    }
    return out;
}

}  // namespace

RationalExpr derive(const FieldTower& tower, const RationalExpr& f, int var) {
    if (var < 0 || var >= tower.num_vars())
        throw Error(ErrorCode::UnknownVariable, "variable index out of range");
    if (f.nsyms() != tower.num_symbols())
        throw Error(ErrorCode::TowerMismatch, "expression does not belong to the tower");
    RationalExpr dn = derive_poly(tower, f.num(), var);
    if (f.den().is_one()) return dn;
    RationalExpr dd = derive_poly(tower, f.den(), var);
    RationalExpr n(f.num()), d(f.den());
    return (dn * d - n * dd) / (d * d);
}

RationalExpr derive(const FieldTower& tower, const RationalExpr& f, const std::string& var) {
    return derive(tower, f, tower.var_index(var));
}

RationalExpr subst(const RationalExpr& f, const std::vector<RationalExpr>& images, int out_nsyms) {
    auto poly_subst = [&](const Poly& p) {
        RationalExpr acc = RationalExpr::integer(out_nsyms, 0);
        for (const auto& [e, c] : p.terms()) {
            RationalExpr term = RationalExpr::integer(out_nsyms, c);
            for (size_t s = 0; s < e.size(); ++s)
                if (e[s] > 0) term = term * images[s].pow(e[s]);
            acc = acc + term;
        }
        return acc;
    };
    RationalExpr dn = poly_subst(f.den());
    if (dn.is_zero()) throw Error(ErrorCode::DivisionByZero, "substitution makes a denominator vanish");
    return poly_subst(f.num()) / dn;
}

namespace {

bool needs_parens_as_factor(const Poly& p) {
    return p.terms().size() > 1;
}

// A denominator can stay bare only when it prints as a single power atom.
bool den_needs_parens(const Poly& p) {
    if (p.terms().size() != 1) return true;
    const auto& [e, c] = *p.terms().begin();
    if (total_degree(e) == 0) return false;  // bare integer
    if (c != 1) return true;
    int nontrivial = 0;
    for (uint32_t x : e)
        if (x > 0) ++nontrivial;
    return nontrivial != 1;
}

}  // namespace

std::string to_string(const RationalExpr& f, const std::vector<std::string>& names) {
    std::string ns = poly_to_string(f.num(), names);
    if (f.den().is_one()) return ns;
    if (needs_parens_as_factor(f.num())) ns = "(" + ns + ")";
    std::string ds = poly_to_string(f.den(), names);
    if (den_needs_parens(f.den())) ds = "(" + ds + ")";
    return ns + "/" + ds;
}

std::string to_string(const RationalExpr& f, const FieldTower& tower) {
    return to_string(f, tower.symbol_names());
}

bool leading_is_negative(const RationalExpr& f) {
    return !f.num().is_zero() && f.num().leading_coeff() < 0;
}

std::string factor_string(const RationalExpr& f, const std::vector<std::string>& names) {
    RationalExpr g = leading_is_negative(f) ? -f : f;
    std::string s = to_string(g, names);
    if (g.den().is_one() && needs_parens_as_factor(g.num())) s = "(" + s + ")";
    return s;
}

}  // namespace ilt
