#include "ilt/poly.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "ilt/error.hpp"

namespace ilt {

uint32_t total_degree(const Exponents& e) {
    uint32_t d = 0;
    for (uint32_t x : e) d += x;
    return d;
}

bool GradedLexDesc::operator()(const Exponents& a, const Exponents& b) const {
    uint32_t da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;  // lexicographic on the exponent vectors, symbol 0 first
}

Poly::Poly(int nsyms, const mpz_class& constant) : nsyms_(nsyms) {
    if (constant != 0) terms_.emplace(Exponents(nsyms, 0), constant);
}

Poly Poly::symbol(int nsyms, int sym, uint32_t power) {
    Poly p(nsyms);
    Exponents e(nsyms, 0);
    e[sym] = power;
    if (power == 0) return Poly(nsyms, 1);
    p.terms_.emplace(std::move(e), mpz_class(1));
    return p;
}

Poly Poly::monomial(int nsyms, Exponents exps, const mpz_class& coeff) {
    Poly p(nsyms);
    if (static_cast<int>(exps.size()) != nsyms)
        throw Error(ErrorCode::TowerMismatch, "exponent vector does not match the symbol space");
    if (coeff != 0) p.terms_.emplace(std::move(exps), coeff);
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

bool Poly::is_one() const {
    return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0 && terms_.begin()->second == 1;
}

mpz_class Poly::constant_value() const {
    assert(is_constant());
    return terms_.empty() ? mpz_class(0) : terms_.begin()->second;
}

const Exponents& Poly::leading_exponents() const {
    assert(!terms_.empty());
    return terms_.begin()->first;
}

const mpz_class& Poly::leading_coeff() const {
    assert(!terms_.empty());
    return terms_.begin()->second;
}

uint32_t Poly::degree() const {
    return terms_.empty() ? 0 : total_degree(terms_.begin()->first);
}

uint32_t Poly::degree_in(int sym) const {
    uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[sym]);
    return d;
}

bool Poly::depends_on(int sym) const {
    for (const auto& [e, c] : terms_)
        if (e[sym] > 0) return true;
    return false;
}

void Poly::add_term(const Exponents& exps, const mpz_class& coeff) {
    if (coeff == 0) return;
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        terms_.emplace(exps, coeff);
    } else {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r(nsyms_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

namespace {
void require_same_symbol_space(int a, int b) {
    if (a != b) throw Error(ErrorCode::TowerMismatch, "polynomials over different symbol spaces");
}
}  // namespace

Poly Poly::operator+(const Poly& rhs) const {
    require_same_symbol_space(nsyms_, rhs.nsyms_);
    Poly r = *this;
    for (const auto& [e, c] : rhs.terms_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& rhs) const {
    require_same_symbol_space(nsyms_, rhs.nsyms_);
    Poly r = *this;
    for (const auto& [e, c] : rhs.terms_) r.add_term(e, -c);
    return r;
}

Poly Poly::operator*(const Poly& rhs) const {
    require_same_symbol_space(nsyms_, rhs.nsyms_);
    Poly r(nsyms_);
    Exponents e(nsyms_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : rhs.terms_) {
            for (int i = 0; i < nsyms_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Poly Poly::operator*(const mpz_class& c) const {
    Poly r(nsyms_);
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

bool Poly::operator==(const Poly& rhs) const {
    return nsyms_ == rhs.nsyms_ && terms_ == rhs.terms_;
}

Poly Poly::derivative(int sym) const {
    Poly r(nsyms_);
    for (const auto& [e, c] : terms_) {
        if (e[sym] == 0) continue;
        Exponents d = e;
        d[sym] -= 1;
        r.add_term(d, c * e[sym]);
    }
    return r;
}

mpz_class Poly::content() const {
    mpz_class g = 0;
    for (const auto& [e, c] : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
    assert(!b.is_zero());
    if (a.is_zero()) return Poly(a.nsyms());
    if (b.is_one()) return a;
    if (b.is_constant()) {
        mpz_class d = b.constant_value();
        Poly q(a.nsyms());
        for (const auto& [e, c] : a.terms()) {
            mpz_class qc, rc;
            mpz_fdiv_qr(qc.get_mpz_t(), rc.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
            if (rc != 0) return std::nullopt;
            q.add_term(e, qc);
        }
        return q;
    }
    // Leading-term reduction; exact quotients always reduce at the leading term.
    Poly r = a;
    Poly q(a.nsyms());
    const Exponents& lb = b.leading_exponents();
    const mpz_class& cb = b.leading_coeff();
    while (!r.is_zero()) {
        const Exponents& lr = r.leading_exponents();
        Exponents diff(a.nsyms());
        for (int i = 0; i < a.nsyms(); ++i) {
            if (lr[i] < lb[i]) return std::nullopt;
            diff[i] = lr[i] - lb[i];
        }
        mpz_class qc, rc;
        mpz_fdiv_qr(qc.get_mpz_t(), rc.get_mpz_t(), r.leading_coeff().get_mpz_t(), cb.get_mpz_t());
        if (rc != 0) return std::nullopt;
        Poly t = Poly::monomial(a.nsyms(), diff, qc);
        q = q + t;
        r = r - t * b;
    }
    return q;
}

namespace {

// View of p as a univariate polynomial in `sym`; coefficient polynomials
// carry zero exponent in `sym`.
std::map<uint32_t, Poly> uni_coeffs(const Poly& p, int sym) {
    std::map<uint32_t, Poly> out;
    for (const auto& [e, c] : p.terms()) {
        uint32_t k = e[sym];
        Exponents stripped = e;
        stripped[sym] = 0;
        auto it = out.find(k);
        if (it == out.end()) it = out.emplace(k, Poly(p.nsyms())).first;
        it->second.add_term(stripped, c);
    }
    return out;
}

Poly content_wrt(const Poly& p, int sym) {
    Poly g(p.nsyms());
    for (const auto& [k, coeff] : uni_coeffs(p, sym)) {
        g = poly_gcd(g, coeff);
        if (g.is_one()) break;
    }
    return g;
}

// Pseudo-remainder lc_sym(b)^(delta+1) * a mod b, exactly; the scaling keeps
// the arithmetic in Z[symbols] and feeds the subresultant recurrences.
Poly prem(Poly a, const Poly& b, int sym, uint32_t delta) {
    uint32_t db = b.degree_in(sym);
    auto bu = uni_coeffs(b, sym);
    const Poly& lb = bu.rbegin()->second;
    uint32_t steps = 0;
    while (!a.is_zero() && a.degree_in(sym) >= db) {
        uint32_t da = a.degree_in(sym);
        auto au = uni_coeffs(a, sym);
        const Poly& la = au.rbegin()->second;
        Poly shift = Poly::symbol(a.nsyms(), sym, da - db);
        a = a * lb - la * shift * b;
        ++steps;
    }
    for (; steps < delta + 1; ++steps) a = a * lb;
    return a;
}

Poly normalize_sign(Poly p) {
    if (!p.is_zero() && p.leading_coeff() < 0) return -p;
    return p;
}

mpz_class mpz_gcd_of(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

// gcd(monomial, p): integer content gcd times the common symbol powers.
Poly monomial_gcd(const Exponents& me, const mpz_class& mc, const Poly& p) {
    Exponents e = me;
    mpz_class c = mc;
    if (c < 0) c = -c;
    for (const auto& [pe, pc] : p.terms()) {
        for (size_t i = 0; i < e.size(); ++i) e[i] = std::min(e[i], pe[i]);
        c = mpz_gcd_of(c, pc);
    }
    return Poly::monomial(static_cast<int>(e.size()), e, c);
}

// Heuristic gcd (Char/Geddes/Gonnet): evaluate one variable at a large
// integer, recurse, and lift the integer/low-variate gcd back through
// balanced base-xi digits. Results are only accepted after exact division
// into both arguments, so a miss is harmless; the caller falls back to the
// subresultant PRS.
namespace {

mpz_class height_of(const Poly& p) {
    mpz_class h = 0;
    for (const auto& [e, c] : p.terms()) {
        mpz_class a = abs(c);
        if (a > h) h = a;
    }
    return h;
}

Poly eval_at(const Poly& p, int sym, const mpz_class& xi) {
    Poly out(p.nsyms());
    for (const auto& [e, c] : p.terms()) {
        mpz_class scale;
        mpz_pow_ui(scale.get_mpz_t(), xi.get_mpz_t(), e[sym]);
        Exponents stripped = e;
        stripped[sym] = 0;
        out.add_term(stripped, c * scale);
    }
    return out;
}

// Write g = sum_i digit_i * xi^i with coefficients balanced into
// (-xi/2, xi/2]; the digits become the sym^i coefficients of the lift.
Poly lift_digits(Poly g, int sym, const mpz_class& xi) {
    Poly out(g.nsyms());
    mpz_class half = xi / 2;
    uint32_t power = 0;
    while (!g.is_zero()) {
        Poly digit(g.nsyms());
        for (const auto& [e, c] : g.terms()) {
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
            if (r > half) r -= xi;
            if (r != 0) {
                Exponents le = e;
                le[sym] = power;
                out.add_term(le, r);
                digit.add_term(e, r);
            }
        }
        g = *divide_exact(g - digit, Poly(g.nsyms(), xi));
        ++power;
    }
    return out;
}

std::optional<Poly> gcd_heuristic(const Poly& a, const Poly& b, int depth) {
    if (depth > 8) return std::nullopt;
    if (a.is_constant() && b.is_constant())
        return Poly(a.nsyms(), mpz_gcd_of(a.constant_value(), b.constant_value()));
    int sym = -1;
    for (int i = 0; i < a.nsyms(); ++i)
        if (a.depends_on(i) || b.depends_on(i)) {
            sym = i;
            break;
        }
    if (sym < 0) return std::nullopt;

    mpz_class h = std::max(height_of(a), height_of(b));
    mpz_class xi = 2 * h + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        auto gamma = gcd_heuristic(eval_at(a, sym, xi), eval_at(b, sym, xi), depth + 1);
        if (gamma && !gamma->is_zero()) {
            Poly g = lift_digits(*gamma, sym, xi);
            if (!g.is_zero()) {
                mpz_class cont = g.content();
                if (cont > 1) g = *divide_exact(g, Poly(g.nsyms(), cont));
                if (g.leading_coeff() < 0) g = -g;
                if (divide_exact(a, g) && divide_exact(b, g)) {
                    // restore the shared integer content
                    mpz_class ic = mpz_gcd_of(a.content(), b.content());
                    return g * ic;
                }
            }
        }
        // next evaluation point; growth keeps digits unambiguous
        xi = xi * 73794 / 27011 + 17;
    }
    return std::nullopt;
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
    assert(a.nsyms() == b.nsyms() || a.is_zero() || b.is_zero());
    if (a.is_zero()) return normalize_sign(b);
    if (b.is_zero()) return normalize_sign(a);
    if (a == b) return normalize_sign(a);
    if (a.terms().size() == 1)
        return monomial_gcd(a.leading_exponents(), a.leading_coeff(), b);
    if (b.terms().size() == 1)
        return monomial_gcd(b.leading_exponents(), b.leading_coeff(), a);
    if (a.is_constant() || b.is_constant())
        return Poly(a.nsyms(), mpz_gcd_of(a.content(), b.content()));

    int sym = -1;
    for (int i = 0; i < a.nsyms(); ++i) {
        if (a.depends_on(i) || b.depends_on(i)) {
            sym = i;
            break;
        }
    }
    assert(sym >= 0);
    if (!a.depends_on(sym)) return poly_gcd(a, content_wrt(b, sym));
    if (!b.depends_on(sym)) return poly_gcd(content_wrt(a, sym), b);

    if (auto heu = gcd_heuristic(a, b, 0)) return normalize_sign(*heu);

    Poly ca = content_wrt(a, sym);
    Poly cb = content_wrt(b, sym);
    Poly u = *divide_exact(a, ca);
    Poly v = *divide_exact(b, cb);
    if (u.degree_in(sym) < v.degree_in(sym)) std::swap(u, v);
    // Subresultant polynomial remainder sequence; contents are extracted only
    // at the ends, the known g*h^delta factors are divided out in between.
    Poly g(a.nsyms(), 1), h(a.nsyms(), 1);
    while (true) {
        uint32_t delta = u.degree_in(sym) - v.degree_in(sym);
        Poly r = prem(u, v, sym, delta);
        if (r.is_zero()) break;
        if (r.degree_in(sym) == 0) {
            // a sym-free common divisor of the primitive inputs is a unit
            return normalize_sign(poly_gcd(ca, cb));
        }
        u = v;
        Poly divisor = g;
        for (uint32_t i = 0; i < delta; ++i) divisor = divisor * h;
        v = *divide_exact(r, divisor);
        g = uni_coeffs(u, sym).rbegin()->second;
        if (delta >= 1) {
            Poly gp = g;
            for (uint32_t i = 1; i < delta; ++i) gp = gp * g;
            Poly hp(a.nsyms(), 1);
            for (uint32_t i = 1; i < delta; ++i) hp = hp * h;
            h = hp.is_one() ? gp : *divide_exact(gp, hp);
        }
    }
    return normalize_sign(poly_gcd(ca, cb) * *divide_exact(v, content_wrt(v, sym)));
}

std::optional<Poly> poly_sqrt(const Poly& p) {
    if (p.is_zero()) return Poly(p.nsyms());
    if (p.is_constant()) {
        mpz_class c = p.constant_value();
        if (c < 0 || mpz_perfect_square_p(c.get_mpz_t()) == 0) return std::nullopt;
        mpz_class s;
        mpz_sqrt(s.get_mpz_t(), c.get_mpz_t());
        return Poly(p.nsyms(), s);
    }
    int sym = -1;
    for (int i = 0; i < p.nsyms(); ++i)
        if (p.depends_on(i)) {
            sym = i;
            break;
        }
    uint32_t deg = p.degree_in(sym);
    if (deg % 2 != 0) return std::nullopt;
    uint32_t m = deg / 2;
    auto pu = uni_coeffs(p, sym);
    auto coeff_at = [&](uint32_t k) -> Poly {
        auto it = pu.find(k);
        return it == pu.end() ? Poly(p.nsyms()) : it->second;
    };
    auto top = poly_sqrt(coeff_at(deg));
    if (!top) return std::nullopt;
    std::map<uint32_t, Poly> r;
    r[m] = *top;
    Poly twice_top = *top * mpz_class(2);
    for (int t = static_cast<int>(m) - 1; t >= 0; --t) {
        // Coefficient of sym^(m+t) in r^2 is 2*r_m*r_t plus known cross terms
        // r_i*r_j with i+j = m+t, t < i <= j < m.
        Poly s = coeff_at(m + t);
        for (uint32_t i = t + 1; 2 * i <= static_cast<uint32_t>(m + t); ++i) {
            uint32_t j = m + t - i;
            Poly prod = r[i] * r[j];
            s = (i == j) ? s - prod : s - prod * mpz_class(2);
        }
        auto q = divide_exact(s, twice_top);
        if (!q) return std::nullopt;
        r[t] = *q;
    }
    Poly root(p.nsyms());
    for (const auto& [k, c] : r) root = root + c * Poly::symbol(p.nsyms(), sym, k);
    if ((root * root) != p) return std::nullopt;
    return normalize_sign(root);
}

std::string poly_to_string(const Poly& p, const std::vector<std::string>& names) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        bool neg = c < 0;
        mpz_class mag = neg ? mpz_class(-c) : c;
        if (first) {
            if (neg) out << "-";
            first = false;
        } else {
            out << (neg ? " - " : " + ");
        }
        std::vector<std::string> pieces;
        if (mag != 1 || total_degree(e) == 0) pieces.push_back(mag.get_str());
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (e[i] == 1)
                pieces.push_back(names[i]);
            else
                pieces.push_back(names[i] + "^" + std::to_string(e[i]));
        }
        for (size_t i = 0; i < pieces.size(); ++i) {
            if (i) out << "*";
            out << pieces[i];
        }
    }
    return out.str();
}

}  // namespace ilt
