#include "ilt/cli.hpp"

#include <CLI11.hpp>
#include <functional>
#include <optional>
#include <sstream>

#include "ilt/error.hpp"
#include "ilt/jsonio.hpp"
#include "ilt/parser.hpp"

namespace ilt {

namespace {

struct Ctx {
    std::string workspace_path;
    std::string inline_vars;
    bool json_mode = false;
    std::ostream* out = nullptr;
    Workspace ws;
    std::map<std::string, Lpdo> named;
    int exit_code = 0;

    void prepare() {
        if (!workspace_path.empty()) {
            ws = load_workspace(workspace_path);
        } else if (!inline_vars.empty()) {
            std::vector<std::string> vars;
            std::string name;
            for (char c : inline_vars + ",") {
                if (c == ',' || c == ' ') {
                    if (!name.empty()) vars.push_back(name);
                    name.clear();
                } else {
                    name += c;
                }
            }
            ws.tower = FieldTower::create(vars);
        } else {
            throw Error(ErrorCode::UsageError, "declare a tower with --workspace or --vars");
        }
        for (const auto& [name, op] : ws.operators) named.emplace(name, op);
        for (const auto& [name, e] : ws.exprs) named.emplace(name, Lpdo::function(ws.tower, e));
    }

    NameResolver resolver() const {
        return [this](const std::string& name) -> const Lpdo* {
            auto it = named.find(name);
            return it == named.end() ? nullptr : &it->second;
        };
    }

    Lpdo op(const std::string& s) const {
        auto it = named.find(s);
        if (it != named.end()) return it->second;
        return parse_operator(s, ws.tower, resolver());
    }

    RationalExpr expr(const std::string& s) const {
        Lpdo v = op(s);
        if (v.order() > 0)
            throw Error(ErrorCode::UsageError, "'" + s + "' is an operator, not a field expression");
        return v.as_function();
    }

    void emit(const std::string& opname, const json& result, const std::string& status = "ok",
              const std::string& residual = std::string()) {
        if (json_mode) {
            nlohmann::ordered_json envelope{{"op", opname}, {"status", status}, {"result", result}};
            if (!residual.empty()) envelope["residual"] = residual;
            *out << envelope.dump(2) << "\n";
        } else {
            print_tree(result, result.is_object() || result.is_array() ? "" : opname);
        }
    }

    void print_tree(const json& j, const std::string& prefix) {
        if (j.is_object()) {
            for (const auto& [k, v] : j.items()) {
                if (v.is_object() || v.is_array())
                    print_tree(v, prefix.empty() ? k : prefix + "." + k);
                else
                    *out << (prefix.empty() ? k : prefix + "." + k) << " = "
                         << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        } else if (j.is_array()) {
            int i = 0;
            for (const auto& v : j) print_tree(v, prefix + "[" + std::to_string(i++) + "]");
        } else {
            *out << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
        }
    }
};

CoordinateChange parse_change(const Ctx& ctx, const std::string& fwd_spec, const std::string& inv_spec) {
    auto split_pairs = [](const std::string& text) {
        std::vector<std::pair<std::string, std::string>> out;
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw Error(ErrorCode::UsageError, "coordinate maps read 'name=expr,name=expr'");
            auto trim = [](std::string s) {
                size_t a = s.find_first_not_of(" \t");
                size_t b = s.find_last_not_of(" \t");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            out.push_back({trim(item.substr(0, eq)), trim(item.substr(eq + 1))});
        }
        return out;
    };
    CoordinateChange chg;
    auto fwd_pairs = split_pairs(fwd_spec);
    for (const auto& [name, src] : fwd_pairs) {
        chg.new_vars.push_back(name);
        chg.fwd.push_back(ctx.expr(src));
    }
    TowerPtr plain = FieldTower::create(chg.new_vars);
    auto inv_pairs = split_pairs(inv_spec);
    chg.inv.resize(ctx.ws.tower->num_vars());
    std::vector<bool> seen(chg.inv.size(), false);
    for (const auto& [name, src] : inv_pairs) {
        int vi = ctx.ws.tower->var_index(name);
        chg.inv[vi] = parse_expr(src, plain);
        seen[vi] = true;
    }
    for (size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw Error(ErrorCode::UsageError, "inverse map misses variable " + ctx.ws.tower->vars()[i]);
    return chg;
}

LaplaceDirection parse_dir(const std::string& s) {
    if (s == "X" || s == "x") return LaplaceDirection::X;
    if (s == "Y" || s == "y") return LaplaceDirection::Y;
    throw Error(ErrorCode::UsageError, "--dir must be X or Y");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Ctx ctx;
    ctx.out = &out;

    CLI::App app{"Exact constructor and verifier for intertwining Laplace transformations of LPDOs"};
    app.set_help_all_flag("--help-all");
    app.require_subcommand(1);
    app.add_option("--workspace,-w", ctx.workspace_path, "workspace file declaring the tower and named objects");
    app.add_option("--vars", ctx.inline_vars, "comma-separated variable list (tower without generators)");
    app.add_flag("--json", ctx.json_mode, "machine-readable output");

    // Deferred actions: parse first, then run the chosen command.
    std::function<void()> action;

    // ---- operator algebra ----
    std::string arg_a, arg_b, arg_var, arg_f;
    auto* c_compose = app.add_subcommand("compose", "compose two operators");
    c_compose->add_option("A", arg_a)->required();
    c_compose->add_option("B", arg_b)->required();
    c_compose->callback([&] {
        action = [&] { ctx.emit("compose", to_string(compose(ctx.op(arg_a), ctx.op(arg_b)))); };
    });

    auto* c_comm = app.add_subcommand("commutator", "commutator of two operators");
    c_comm->add_option("A", arg_a)->required();
    c_comm->add_option("B", arg_b)->required();
    c_comm->callback([&] {
        action = [&] { ctx.emit("commutator", to_string(commutator(ctx.op(arg_a), ctx.op(arg_b)))); };
    });

    auto* c_div = app.add_subcommand("divide", "right Euclidean division eliminating one variable");
    c_div->add_option("L", arg_a)->required();
    c_div->add_option("M", arg_b)->required();
    c_div->add_option("--var", arg_var, "variable to eliminate")->required();
    c_div->callback([&] {
        action = [&] {
            auto [q, r] = right_divide(ctx.op(arg_a), ctx.op(arg_b), arg_var);
            ctx.emit("divide", {{"Q", to_string(q)}, {"R", to_string(r)}});
        };
    });

    auto* c_symbol = app.add_subcommand("symbol", "principal symbol");
    c_symbol->add_option("A", arg_a)->required();
    c_symbol->callback([&] {
        action = [&] { ctx.emit("symbol", to_string(principal_symbol(ctx.op(arg_a)))); };
    });

    auto* c_apply = app.add_subcommand("apply", "apply an operator to a field expression");
    c_apply->add_option("A", arg_a)->required();
    c_apply->add_option("f", arg_f)->required();
    c_apply->callback([&] {
        action = [&] {
            ctx.emit("apply", to_string(apply(ctx.op(arg_a), ctx.expr(arg_f)), *ctx.ws.tower));
        };
    });

    std::string arg_fwd, arg_inv;
    auto* c_chvar = app.add_subcommand("chvar", "push an operator through a change of variables");
    c_chvar->add_option("A", arg_a)->required();
    c_chvar->add_option("--fwd", arg_fwd, "new=old expressions, comma separated")->required();
    c_chvar->add_option("--inv", arg_inv, "old=new expressions, comma separated")->required();
    c_chvar->callback([&] {
        action = [&] {
            auto chg = parse_change(ctx, arg_fwd, arg_inv);
            auto [img, tower2] = change_vars(ctx.op(arg_a), chg);
            ctx.emit("chvar", to_string(img));
        };
    });

    // ---- ilt engine ----
    std::string arg_hseed, arg_t1, arg_t2, arg_x1, arg_rect;
    auto* c_ilt = app.add_subcommand("ilt", "intertwining Laplace transformations");
    c_ilt->require_subcommand(1);
    auto* c_gen = c_ilt->add_subcommand("generate", "run the four-step construction");
    c_gen->add_option("--hseed", arg_hseed, "operator H~ with coefficients free of the rectified variable")
        ->required();
    c_gen->add_option("--theta1", arg_t1)->required();
    c_gen->add_option("--theta2", arg_t2)->required();
    c_gen->add_option("--x1", arg_x1)->required();
    c_gen->add_option("--rect-var", arg_rect)->required();
    c_gen->add_option("--fwd", arg_fwd, "optional change of variables, forward map");
    c_gen->add_option("--inv", arg_inv, "optional change of variables, inverse map");
    c_gen->callback([&] {
        action = [&] {
            GenerateInput in{ctx.op(arg_hseed), ctx.expr(arg_t1), ctx.expr(arg_t2), ctx.op(arg_x1),
                             ctx.ws.tower->var_index(arg_rect), std::nullopt};
            if (!arg_fwd.empty() || !arg_inv.empty()) in.maps = parse_change(ctx, arg_fwd, arg_inv);
            ctx.emit("ilt generate", to_json(generate(in)));
        };
    });

    std::string arg_m1, arg_l, arg_l1, arg_m;
    auto* c_verify = c_ilt->add_subcommand("verify", "check an intertwining relation M1 L = L1 M");
    c_verify->add_option("--m1", arg_m1)->required();
    c_verify->add_option("--l", arg_l)->required();
    c_verify->add_option("--l1", arg_l1)->required();
    c_verify->add_option("--m", arg_m)->required();
    c_verify->callback([&] {
        action = [&] {
            auto rep = verify_intertwining(ctx.op(arg_m1), ctx.op(arg_l), ctx.op(arg_l1), ctx.op(arg_m));
            ctx.emit("ilt verify", to_json(rep), rep.pass() ? "ok" : "fail",
                     rep.product_identity ? std::string() : to_string(rep.residual));
            if (!rep.pass()) ctx.exit_code = 1;
        };
    });

    // ---- laplace ----
    std::string arg_ca, arg_cb, arg_cc, arg_dir = "X";
    int arg_max_steps = 10;
    auto* c_lap = app.add_subcommand("laplace", "classical Laplace transformations");
    c_lap->require_subcommand(1);
    auto* c_inv = c_lap->add_subcommand("invariants", "h = a_x + ab - c, k = b_y + ab - c");
    c_inv->add_option("--a", arg_ca)->required();
    c_inv->add_option("--b", arg_cb)->required();
    c_inv->add_option("--c", arg_cc)->required();
    c_inv->callback([&] {
        action = [&] {
            auto d = laplace_invariants(ctx.ws.tower, ctx.expr(arg_ca), ctx.expr(arg_cb), ctx.expr(arg_cc));
            ctx.emit("laplace invariants",
                     {{"h", to_string(d.h, *ctx.ws.tower)}, {"k", to_string(d.k, *ctx.ws.tower)}});
        };
    });
    auto* c_lt = c_lap->add_subcommand("transform", "one Laplace transformation step");
    c_lt->add_option("--a", arg_ca)->required();
    c_lt->add_option("--b", arg_cb)->required();
    c_lt->add_option("--c", arg_cc)->required();
    c_lt->add_option("--dir", arg_dir, "X or Y");
    c_lt->callback([&] {
        action = [&] {
            auto cert = laplace_transform(ctx.ws.tower, ctx.expr(arg_ca), ctx.expr(arg_cb), ctx.expr(arg_cc),
                                          parse_dir(arg_dir));
            ctx.emit("laplace transform", to_json(cert));
        };
    });
    auto* c_casc = c_lap->add_subcommand("cascade", "iterate until an invariant vanishes");
    c_casc->add_option("--a", arg_ca)->required();
    c_casc->add_option("--b", arg_cb)->required();
    c_casc->add_option("--c", arg_cc)->required();
    c_casc->add_option("--dir", arg_dir, "X or Y");
    c_casc->add_option("--max-steps", arg_max_steps);
    c_casc->callback([&] {
        action = [&] {
            auto rep = cascade(ctx.ws.tower, ctx.expr(arg_ca), ctx.expr(arg_cb), ctx.expr(arg_cc),
                               parse_dir(arg_dir), arg_max_steps);
            ctx.emit("laplace cascade", to_json(rep, *ctx.ws.tower));
        };
    });

    // ---- gauge ----
    std::string arg_lambda, arg_phi = "0";
    auto* c_gauge = app.add_subcommand("gauge", "gauge transformation as a certificate");
    c_gauge->add_option("L", arg_l)->required();
    c_gauge->add_option("--lambda", arg_lambda)->required();
    c_gauge->add_option("--phi", arg_phi, "free function phi (default 0)");
    c_gauge->callback([&] {
        action = [&] {
            ctx.emit("gauge", to_json(gauge_as_ilt(ctx.op(arg_l), ctx.expr(arg_lambda), ctx.expr(arg_phi))));
        };
    });

    // ---- lodo ----
    auto* c_lodo = app.add_subcommand("lodo", "ordinary differential operator toolkit");
    c_lodo->require_subcommand(1);
    auto* c_euclid = c_lodo->add_subcommand("euclid", "rGCD, lLCM and Bezout cofactors");
    c_euclid->add_option("L", arg_a)->required();
    c_euclid->add_option("M", arg_b)->required();
    c_euclid->callback([&] {
        action = [&] {
            auto res = lodo_euclid(ctx.op(arg_a), ctx.op(arg_b));
            ctx.emit("lodo euclid", {{"rgcd", to_string(res.rgcd)},
                                     {"lclm", to_string(res.lclm)},
                                     {"L_cofactor", to_string(res.l_cof)},
                                     {"M_cofactor", to_string(res.m_cof)},
                                     {"bezout_u", to_string(res.bezout_u)},
                                     {"bezout_v", to_string(res.bezout_v)}});
        };
    });
    auto* c_lodot = c_lodo->add_subcommand("transform", "L -> L1 by a first-order M, as a certificate");
    c_lodot->add_option("L", arg_a)->required();
    c_lodot->add_option("M", arg_b)->required();
    c_lodot->callback([&] {
        action = [&] { ctx.emit("lodo transform", to_json(lodo_transform_as_ilt(ctx.op(arg_a), ctx.op(arg_b)))); };
    });

    // ---- darboux ----
    std::string arg_v;
    std::vector<std::string> arg_seeds;
    auto* c_darboux = app.add_subcommand("darboux", "Darboux transformations");
    c_darboux->require_subcommand(1);
    auto* c_schro = c_darboux->add_subcommand("schrodinger", "one-dimensional Schrodinger Darboux swap");
    c_schro->add_option("--v", arg_v, "superpotential v")->required();
    c_schro->callback([&] {
        action = [&] {
            auto res = schrodinger_darboux(ctx.ws.tower, ctx.expr(arg_v));
            ctx.emit("darboux schrodinger",
                     {{"u", to_string(res.u, *ctx.ws.tower)},
                      {"u_tilde", to_string(res.u_tilde, *ctx.ws.tower)},
                      {"L", to_string(res.l)},
                      {"L_tilde", to_string(res.l_tilde)},
                      {"certificate", to_json(res.cert)}});
        };
    });
    auto add_plane_darboux = [&](CLI::App* parent, const char* name, auto fn, const char* what) {
        auto* cmd = parent->add_subcommand(name, what);
        cmd->add_option("--a", arg_ca)->required();
        cmd->add_option("--b", arg_cb)->required();
        cmd->add_option("--c", arg_cc)->required();
        cmd->add_option("--seed", arg_seeds, "seed solution of L z = 0 (repeat for two seeds)")->required();
        cmd->callback([&, fn, name] {
            action = [&, fn, name] {
                std::vector<RationalExpr> seeds;
                for (const auto& s : arg_seeds) seeds.push_back(ctx.expr(s));
                ctx.emit(std::string("darboux ") + name,
                         to_json(fn(ctx.ws.tower, ctx.expr(arg_ca), ctx.expr(arg_cb), ctx.expr(arg_cc), seeds)));
            };
        });
    };
    add_plane_darboux(c_darboux, "hyperbolic", darboux_hyperbolic, "Darboux for DxDy + aDx + bDy + c");
    add_plane_darboux(c_darboux, "parabolic", darboux_parabolic, "Darboux for Dx^2 + aDx + bDy + c");

    // ---- euler-darboux ----
    std::string arg_opA, arg_opB, arg_h, arg_const;
    auto* c_ed = app.add_subcommand("euler-darboux", "Euler-Darboux transformation for L = A + B");
    c_ed->add_option("--A", arg_opA, "operator in the first variable")->required();
    c_ed->add_option("--B", arg_opB, "operator in the remaining variables")->required();
    c_ed->add_option("--seed", arg_h, "eigenfunction seed, A h = c h")->required();
    c_ed->add_option("--c", arg_const, "rational eigenvalue")->required();
    c_ed->callback([&] {
        action = [&] {
            mpq_class c(arg_const);
            c.canonicalize();
            ctx.emit("euler-darboux", to_json(euler_darboux(ctx.op(arg_opA), ctx.op(arg_opB), ctx.expr(arg_h), c)));
        };
    });

    // ---- petren ----
    std::vector<std::string> arg_As, arg_Bs;
    std::string arg_alpha0;
    auto* c_petren = app.add_subcommand("petren", "Petren transformation for sum A_i Dx Dy^i + sum B_i Dy^i");
    c_petren->add_option("--A", arg_As, "A_0, A_1, ... in order (repeat)")->required();
    c_petren->add_option("--B", arg_Bs, "B_0, B_1, ... in order (repeat)")->required();
    c_petren->add_option("--alpha0", arg_alpha0, "seed annihilated by sum A_i Dy^i")->required();
    c_petren->callback([&] {
        action = [&] {
            std::vector<RationalExpr> as, bs;
            for (const auto& s : arg_As) as.push_back(ctx.expr(s));
            for (const auto& s : arg_Bs) bs.push_back(ctx.expr(s));
            ctx.emit("petren", to_json(petren_transform(ctx.ws.tower, as, bs, ctx.expr(arg_alpha0))));
        };
    });

    // ---- dini ----
    std::string arg_H, arg_x2, arg_kappa, arg_rho, arg_alpha;
    auto* c_dini = app.add_subcommand("dini", "Dini transformation pieces");
    c_dini->require_subcommand(1);
    auto* c_dd = c_dini->add_subcommand("decompose", "[H, X2] = kappa H + rho X2");
    c_dd->add_option("--H", arg_H)->required();
    c_dd->add_option("--x2", arg_x2)->required();
    c_dd->callback([&] {
        action = [&] {
            auto dec = dini_decompose(ctx.op(arg_H), ctx.op(arg_x2));
            if (!dec) {
                ctx.emit("dini decompose", {{"status", "NoDecomposition"}}, "fail");
                ctx.exit_code = 1;
            } else {
                ctx.emit("dini decompose", {{"kappa", to_string(dec->kappa, *ctx.ws.tower)},
                                            {"rho", to_string(dec->rho, *ctx.ws.tower)}});
            }
        };
    });
    auto* c_di = c_dini->add_subcommand("to-ilt", "shift by alpha and transform");
    c_di->add_option("--x1", arg_x1)->required();
    c_di->add_option("--x2", arg_x2)->required();
    c_di->add_option("--H", arg_H)->required();
    c_di->add_option("--kappa", arg_kappa)->required();
    c_di->add_option("--rho", arg_rho)->required();
    c_di->add_option("--alpha", arg_alpha)->required();
    c_di->callback([&] {
        action = [&] {
            ctx.emit("dini to-ilt",
                     to_json(dini_to_ilt(ctx.op(arg_x1), ctx.op(arg_x2), ctx.op(arg_H), ctx.expr(arg_kappa),
                                         ctx.expr(arg_rho), ctx.expr(arg_alpha))));
        };
    });

    // ---- intertwine ----
    std::string arg_ivar;
    auto* c_int = app.add_subcommand("intertwine", "constructive intertwining solver");
    c_int->require_subcommand(1);
    auto* c_solve = c_int->add_subcommand("solve", "find (L1, M1) with M1 L = L1 M");
    c_solve->add_option("L", arg_a)->required();
    c_solve->add_option("M", arg_b)->required();
    c_solve->callback([&] {
        action = [&] {
            auto sol = solve_intertwining(ctx.op(arg_a), ctx.op(arg_b));
            ctx.emit("intertwine solve", to_json(sol), sol.status == SolveStatus::None ? "fail" : "ok");
            if (sol.status == SolveStatus::None) ctx.exit_code = 1;
        };
    });
    auto* c_cert = c_int->add_subcommand("certify", "check the lLCM theorem hypotheses");
    c_cert->add_option("--l", arg_l)->required();
    c_cert->add_option("--m", arg_m)->required();
    c_cert->add_option("--l1", arg_l1)->required();
    c_cert->add_option("--m1", arg_m1)->required();
    c_cert->callback([&] {
        action = [&] {
            auto rep = certify_lclm(ctx.op(arg_l), ctx.op(arg_m), ctx.op(arg_l1), ctx.op(arg_m1));
            ctx.emit("intertwine certify", to_json(rep), rep.certified() ? "ok" : "fail");
            if (!rep.certified()) ctx.exit_code = 1;
        };
    });
    auto* c_norm = c_int->add_subcommand("normalize", "rebuild a first-order intertwining as a certificate");
    c_norm->add_option("--l", arg_l)->required();
    c_norm->add_option("--m", arg_m)->required();
    c_norm->add_option("--l1", arg_l1)->required();
    c_norm->add_option("--m1", arg_m1)->required();
    c_norm->add_option("--var", arg_ivar, "variable whose M-coefficient normalizes to 1")->required();
    c_norm->callback([&] {
        action = [&] {
            ctx.emit("intertwine normalize",
                     to_json(first_order_to_ilt(ctx.op(arg_l), ctx.op(arg_m), ctx.op(arg_m1), ctx.op(arg_l1),
                                                ctx.ws.tower->var_index(arg_ivar))));
        };
    });
    auto* c_kernel = c_int->add_subcommand("kernel", "seed membership in the kernels of L, M, H");
    c_kernel->add_option("--l", arg_l)->required();
    c_kernel->add_option("--m", arg_m)->required();
    c_kernel->add_option("--H", arg_H, "optional H from a certificate");
    c_kernel->add_option("--seed", arg_seeds, "seed (repeat)")->required();
    c_kernel->callback([&] {
        action = [&] {
            std::vector<RationalExpr> seeds;
            for (const auto& s : arg_seeds) seeds.push_back(ctx.expr(s));
            std::optional<Lpdo> h;
            if (!arg_H.empty()) h = ctx.op(arg_H);
            ctx.emit("intertwine kernel", to_json(kernel_check(ctx.op(arg_l), ctx.op(arg_m), seeds, h),
                                                  *ctx.ws.tower));
        };
    });

    std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 wants reversed args
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help("", CLI::AppFormatMode::Normal);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        ctx.prepare();
        action();
        return ctx.exit_code;
    } catch (const Error& e) {
        int code = e.is_input_error() ? 2 : 1;
        if (ctx.json_mode) {
            nlohmann::ordered_json envelope{
                {"op", ""}, {"status", code == 2 ? "error" : "fail"}, {"message", e.what()}};
            out << envelope.dump(2) << "\n";
        }
        err << "error: " << e.what() << "\n";
        return code;
    }
}

}  // namespace ilt
