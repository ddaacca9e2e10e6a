#include "ilt/jsonio.hpp"

#include "ilt/error.hpp"
#include "ilt/parser.hpp"

namespace ilt {

namespace {

json index_to_json(const MultiIndex& idx, const FieldTower& tower) {
    json j = json::object();
    for (size_t i = 0; i < idx.size(); ++i)
        if (idx[i] > 0) j[tower.vars()[i]] = idx[i];
    return j;
}

}  // namespace

json to_json(const Lpdo& op) {
    json terms = json::array();
    auto names = op.tower()->symbol_names();
    for (const auto& [idx, c] : op.terms()) {
        terms.push_back({{"index", index_to_json(idx, *op.tower())}, {"coeff", to_string(c, names)}});
    }
    return terms;
}

Lpdo lpdo_from_json(const json& j, const TowerPtr& tower) {
    if (!j.is_array()) throw Error(ErrorCode::SyntaxError, "operator JSON must be an array of terms");
    Lpdo op(tower);
    for (const auto& term : j) {
        MultiIndex idx(tower->num_vars(), 0);
        for (const auto& [var, exp] : term.at("index").items()) idx[tower->var_index(var)] = exp.get<uint32_t>();
        op.add_term(idx, parse_expr(term.at("coeff").get<std::string>(), tower));
    }
    return op;
}

json to_json(const PrincipalSymbol& s) {
    json terms = json::array();
    auto names = s.tower()->symbol_names();
    for (const auto& [idx, c] : s.terms()) {
        terms.push_back({{"index", index_to_json(idx, *s.tower())}, {"coeff", to_string(c, names)}});
    }
    return {{"degree", s.degree()}, {"terms", terms}};
}

json to_json(const IltCertificate& cert) {
    const FieldTower& tower = *cert.l.tower();
    return {{"X1", to_string(cert.x1)},
            {"X2", to_string(cert.x2)},
            {"H", to_string(cert.h)},
            {"psi", to_string(cert.psi, tower)},
            {"L", to_string(cert.l)},
            {"L1", to_string(cert.l1)},
            {"M", to_string(cert.m)},
            {"M1", to_string(cert.m1)},
            {"verified", true}};
}

json to_json(const IntertwiningReport& rep) {
    json j{{"product_identity", rep.product_identity},
           {"orders_match", rep.orders_match},
           {"symbols_match", rep.symbols_match},
           {"pass", rep.pass()}};
    if (!rep.product_identity) j["residual"] = to_string(rep.residual);
    return j;
}

// Chain reports are a JSON array of per-step records; the final record
// carries the terminal status and, when the chain factored, the factors.
json to_json(const CascadeReport& rep, const FieldTower& tower) {
    json steps = json::array();
    for (const auto& s : rep.steps) {
        steps.push_back({{"step", s.step},
                         {"a", to_string(s.a, tower)},
                         {"b", to_string(s.b, tower)},
                         {"c", to_string(s.c, tower)},
                         {"h", to_string(s.h, tower)},
                         {"k", to_string(s.k, tower)},
                         {"status", "chained"}});
    }
    if (!steps.empty()) {
        steps.back()["status"] = rep.status == CascadeStatus::Factored ? "Factored" : "Exhausted";
        if (rep.factorization)
            steps.back()["factorization"] = {to_string(rep.factorization->first),
                                             to_string(rep.factorization->second)};
    }
    return steps;
}

json to_json(const LclmReport& rep) {
    json j{{"product_identity", rep.product_identity},
           {"order_l_matches", rep.order_l_matches},
           {"order_m_one", rep.order_m_one},
           {"symbols_match", rep.symbols_match},
           {"not_right_divisible", rep.not_right_divisible},
           {"certified", rep.certified()}};
    if (rep.certified()) j["lclm"] = to_string(rep.lclm);
    return j;
}

json to_json(const IntertwiningSolution& sol) {
    json j;
    switch (sol.status) {
        case SolveStatus::Unique: j["status"] = "Unique"; break;
        case SolveStatus::NonUnique: j["status"] = "NonUnique"; break;
        case SolveStatus::None: j["status"] = "None"; break;
    }
    if (sol.l1 && sol.m1) {
        j["M1"] = to_string(*sol.m1);
        j["L1"] = to_string(*sol.l1);
    }
    if (sol.status == SolveStatus::NonUnique) {
        j["dimension"] = sol.dimension;
        json basis = json::array();
        for (const auto& [dm1, dl1] : sol.basis)
            basis.push_back({{"dM1", to_string(dm1)}, {"dL1", to_string(dl1)}});
        j["basis"] = basis;
    }
    if (sol.m1_order_degenerate) j["m1_order_degenerate"] = true;
    return j;
}

json to_json(const std::vector<KernelCheckEntry>& entries, const FieldTower& tower) {
    json arr = json::array();
    for (const auto& e : entries) {
        json j{{"seed", to_string(e.seed, tower)}, {"L_zero", e.l_zero}, {"M_zero", e.m_zero}};
        if (e.h_zero) j["H_zero"] = *e.h_zero;
        arr.push_back(j);
    }
    return arr;
}

}  // namespace ilt
