#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "upslope/json_io.hpp"
#include "upslope/literal.hpp"
#include "upslope/scenario.hpp"

using namespace upslope;

namespace {

// exit-code contract: 0 pass, 1 check failure, 2 input error, 3 uncertified
// result in strict mode
constexpr int kExitPass = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitUncertified = 3;

struct GlobalOpts {
    int prec = 40;
    std::uint64_t seed = 1;
    std::string format = "json";
    bool strict = false;
    bool timings = false;
    int jobs = 1;
};

Json parse_inline_or_file(const std::string& spec) {
    if (!spec.empty() && (spec.front() == '{' || spec.front() == '[')) return Json::parse(spec);
    return read_json_file(spec);
}

DirichletCharacter parse_psi(const std::string& spec) {
    // "m':tame:wild"
    DirichletCharacter chi;
    std::size_t a = spec.find(':');
    std::size_t b = a == std::string::npos ? std::string::npos : spec.find(':', a + 1);
    if (a == std::string::npos || b == std::string::npos)
        throw std::invalid_argument("psi spec must be conductor_exp:tame:wild, e.g. 2:0:2");
    chi.conductor_exp = std::stoi(spec.substr(0, a));
    chi.tame_exp = std::stoull(spec.substr(a + 1, b - a - 1));
    chi.wild_exp = std::stoull(spec.substr(b + 1));
    return chi;
}

WeightChar parse_weight(const PadicContext* ctx, const std::string& wspec,
                        const std::string& psi_spec) {
    DirichletCharacter psi = parse_psi(psi_spec);
    std::size_t c = wspec.find(':');
    std::string kind = wspec.substr(0, c);
    if (kind == "classical") {
        if (c == std::string::npos) throw std::invalid_argument("weight: classical:k");
        return WeightChar::classical(std::stoi(wspec.substr(c + 1)), psi);
    }
    if (kind == "disk") {
        std::string lit = c == std::string::npos ? "0" : wspec.substr(c + 1);
        return WeightChar::disk(psi, parse_cyclo(ctx, lit));
    }
    throw std::invalid_argument("weight must be classical:k or disk:w0");
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int emit_slopes(const GlobalOpts& g, const std::vector<std::pair<Rat, bool>>& sl) {
    if (g.format == "csv") {
        std::cout << slopes_to_csv(sl);
    } else {
        Json j;
        j["slopes"] = slopes_to_json(sl);
        emit(j);
    }
    if (g.strict)
        for (const auto& [s, cert] : sl)
            if (!cert) return kExitUncertified;
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact U_p-operator matrices, characteristic series, Newton/Hodge polygons and "
                 "slope decompositions on quaternionic automorphic forms"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--prec", g.prec, "absolute p-adic precision exponent");
    app.add_option("--seed", g.seed, "seed for synthetic data");
    app.add_option("--format", g.format, "output format: json or csv (slope tables)");
    app.add_flag("--strict", g.strict, "exit 3 on precision-uncertified results");
    app.add_flag("--timings", g.timings, "include (non-canonical) timings in reports");
    app.add_option("--jobs", g.jobs, "parallelize independent checks");

    // ---- quat ----
    auto* quat = app.add_subcommand("quat", "Hamilton quaternion order arithmetic");
    quat->require_subcommand(1);
    auto* quat_units = quat->add_subcommand("units", "the 24 units of the order");
    std::int64_t norm_n = 1;
    auto* quat_norm = quat->add_subcommand("norm-elements", "all elements of a given norm");
    quat_norm->add_option("--n", norm_n, "the norm")->required();
    auto* quat_deltas =
        quat->add_subcommand("deltas", "the three norm-3 elements assembling U_3");

    // ---- act ----
    auto* act = app.add_subcommand("act", "weight action matrix of one monoid element");
    std::string act_gamma, act_weight, act_psi = "1:0:0", act_ctx = R"({"p":3,"m":2,"prec":40,"cyclo_order":3})";
    std::string act_rescale = "none";
    int act_N = 8;
    act->add_option("--gamma", act_gamma, "a,b,c,d as cyclo literals")->required();
    act->add_option("--weight", act_weight, "classical:k or disk:w0")->required();
    act->add_option("--psi", act_psi, "character spec conductor_exp:tame:wild");
    act->add_option("--N", act_N, "truncation size");
    act->add_option("--context", act_ctx, "context JSON (inline or file)");
    act->add_option("--rescale", act_rescale, "none or up (the 1, pz, p^2z^2 basis)");

    // ---- upmat ----
    auto* upmat = app.add_subcommand("upmat", "assemble truncated block operators");
    upmat->require_subcommand(1);
    auto* upmat_assemble = upmat->add_subcommand("assemble", "assemble a recipe");
    std::string um_recipe, um_weight, um_psi = "1:0:0", um_ctx;
    int um_N = 8;
    upmat_assemble->add_option("--recipe", um_recipe, "recipe JSON file")->required();
    upmat_assemble->add_option("--weight", um_weight, "classical:k or disk:w0")->required();
    upmat_assemble->add_option("--psi", um_psi, "character spec");
    upmat_assemble->add_option("--N", um_N, "block count");
    upmat_assemble->add_option("--context", um_ctx, "context JSON (inline or file)")->required();

    // ---- spectral ----
    auto* spectral = app.add_subcommand("spectral", "characteristic series and polygons");
    spectral->require_subcommand(1);
    std::string sp_matrix, sp_classical;
    int sp_t = 1, sp_kmax = 3, sp_q = 1, sp_r = 0;
    auto add_matrix_opt = [&](CLI::App* c) {
        c->add_option("--matrix", sp_matrix, "matrix JSON file")->required();
    };
    auto* sp_charpoly = spectral->add_subcommand("charpoly", "det(I - XM)");
    add_matrix_opt(sp_charpoly);
    auto* sp_newton = spectral->add_subcommand("newton", "Newton polygon");
    add_matrix_opt(sp_newton);
    auto* sp_hodge = spectral->add_subcommand("hodge", "Hodge polygon");
    add_matrix_opt(sp_hodge);
    auto* sp_va = spectral->add_subcommand("verify-A", "NP above the quadratic polygon");
    add_matrix_opt(sp_va);
    sp_va->add_option("--t", sp_t, "class number");
    auto* sp_vs = spectral->add_subcommand("verify-sharp", "NP touches (kt, lambda_kt)");
    add_matrix_opt(sp_vs);
    sp_vs->add_option("--t", sp_t, "class number");
    sp_vs->add_option("--kmax", sp_kmax, "largest k checked");
    sp_vs->add_option("--classical", sp_classical,
                      "JSON with the twisted weight-2 blocks {\"blocks\": [matrix...]}")
        ->required();
    auto* sp_pr = spectral->add_subcommand("progression", "vertex s0 and slope progressions");
    add_matrix_opt(sp_pr);
    sp_pr->add_option("--q", sp_q, "common difference (p-1)/2");
    sp_pr->add_option("--r", sp_r, "twist index");

    // ---- duality ----
    auto* duality = app.add_subcommand("duality", "pairing, adjunction and residual splitting");
    duality->require_subcommand(1);
    auto* du_vp = duality->add_subcommand("verify-pairing", "adjunction and Hodge duality");
    std::string du_matrix, du_partner, du_central;
    du_vp->add_option("--matrix", du_matrix, "U_p matrix JSON")->required();
    du_vp->add_option("--partner", du_partner, "inverse-character matrix JSON");
    du_vp->add_option("--central", du_central, "S_p matrix JSON (default identity)");
    auto* du_pr = duality->add_subcommand("project", "residual projector splitting");
    std::string du_pm, du_hecke, du_eigen;
    du_pr->add_option("--matrix", du_pm, "matrix to split")->required();
    du_pr->add_option("--hecke", du_hecke, "comma-separated Hecke matrix files")->required();
    du_pr->add_option("--eigen", du_eigen, "eigen data JSON")->required();

    // ---- run ----
    auto* run = app.add_subcommand("run", "run a scenario");
    std::string run_name;
    run->add_option("scenario", run_name, "builtin name (example-5, fixtures-6x, empty) or file")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (quat_units->parsed()) {
            Json arr = Json::array();
            for (const auto& u : unit_group()) arr.push_back(quat_to_json(u));
            emit(Json{{"units", arr}});
            return kExitPass;
        }
        if (quat_norm->parsed()) {
            auto els = elements_of_norm(norm_n);
            Json arr = Json::array();
            for (const auto& u : els) arr.push_back(quat_to_json(u));
            emit(Json{{"n", norm_n}, {"count", els.size()}, {"elements", arr}});
            return kExitPass;
        }
        if (quat_deltas->parsed()) {
            CtxPtr ctx = PadicContext::create(3, 2, g.prec, 3);
            SplittingMap sm = SplittingMap::hamilton_at_3(ctx);
            Json arr = Json::array();
            for (const auto& d : delta_decomposition(sm)) {
                Json dj = quat_to_json(d);
                dj["split"] = mat_to_json(split_at_p(d, sm));
                arr.push_back(dj);
            }
            emit(Json{{"deltas", arr}});
            return kExitPass;
        }
        if (act->parsed()) {
            CtxPtr ctx = ctx_from_json(parse_inline_or_file(act_ctx));
            std::vector<CycloElt> ent;
            std::string cur;
            for (char ch : act_gamma + ",") {
                if (ch == ',') {
                    ent.push_back(parse_cyclo(ctx.get(), cur));
                    cur.clear();
                } else
                    cur += ch;
            }
            if (ent.size() != 4) throw std::invalid_argument("--gamma needs a,b,c,d");
            MonoidElt::Shape shape = ent[0].valuation().known_eq(Rat(0)) ? MonoidElt::Shape::Tl
                                                                         : MonoidElt::Shape::Up;
            MonoidElt gamma = MonoidElt::make(ent[0], ent[1], ent[2], ent[3], shape, ctx->m);
            WeightChar kappa = parse_weight(ctx.get(), act_weight, act_psi);
            std::optional<Rescale> rs;
            if (act_rescale == "up")
                rs = Rescale::b_basis(ctx.get());
            else if (act_rescale != "none")
                throw std::invalid_argument("--rescale must be none or up");
            ActionMatrix am = generating_matrix(gamma, kappa, act_N, rs);
            Json j = mat_to_json(am.entries);
            j["basis"] = am.rescaled ? "rescaled" : "standard";
            emit(j);
            return kExitPass;
        }
        if (upmat_assemble->parsed()) {
            CtxPtr ctx = ctx_from_json(parse_inline_or_file(um_ctx));
            UpRecipe rec = recipe_from_json(read_json_file(um_recipe), ctx.get());
            WeightChar kappa = parse_weight(ctx.get(), um_weight, um_psi);
            TruncatedOpMatrix tm = assemble(ctx, rec, kappa, um_N);
            Json j = mat_to_json(tm.m);
            j["t"] = tm.t;
            j["N"] = tm.N;
            j["basis"] = "interleaved-pz";
            if (!tm.provenance.empty()) j["provenance"] = tm.provenance;
            emit(j);
            return kExitPass;
        }
        if (sp_charpoly->parsed() || sp_newton->parsed() || sp_hodge->parsed() ||
            sp_va->parsed() || sp_vs->parsed() || sp_pr->parsed()) {
            CtxPtr ctx;
            Mat m = mat_from_json(read_json_file(sp_matrix), ctx);
            if (sp_charpoly->parsed()) {
                emit(charseries_to_json(char_series(m)));
                return kExitPass;
            }
            if (sp_newton->parsed()) {
                PolygonData np = newton_polygon(char_series(m));
                if (g.format == "csv") return emit_slopes(g, np.slopes());
                Json j = polygon_to_json(np);
                emit(j);
                return g.strict && [&] {
                           for (const auto& v : np.vertices)
                               if (!v.exact) return true;
                           return false;
                       }()
                           ? kExitUncertified
                           : kExitPass;
            }
            if (sp_hodge->parsed()) {
                HodgePolygon hp = hodge_polygon(m);
                if (g.format == "csv") {
                    std::vector<std::pair<Rat, bool>> sl;
                    for (const auto& s : hp.slopes) sl.emplace_back(s, true);
                    return emit_slopes(g, sl);
                }
                Json j = polygon_to_json(hp.polygon);
                j["complete"] = hp.complete;
                emit(j);
                return !hp.complete && g.strict ? kExitUncertified : kExitPass;
            }
            if (sp_va->parsed()) {
                TheoremAReport rep = check_theorem_A(char_series(m), sp_t);
                Json j;
                j["ok"] = rep.ok;
                j["certified_up_to"] = rep.certified_up_to;
                j["violations"] = rep.violations;
                emit(j);
                return rep.ok ? kExitPass : kExitCheckFail;
            }
            if (sp_vs->parsed()) {
                Json cb = parse_inline_or_file(sp_classical);
                std::vector<std::vector<Rat>> alphas;
                for (const auto& bj : cb.at("blocks")) {
                    CtxPtr c2;
                    Mat b = mat_from_json(bj, c2);
                    HodgePolygon hp = hodge_polygon(b);
                    if (!hp.complete) throw std::domain_error("classical block Hodge uncertified");
                    alphas.push_back(hp.slopes);
                }
                SlopeMultiset imp =
                    improved_bound_slopes(alphas, sp_t, sp_kmax * sp_t + static_cast<int>(alphas.size()) * sp_t + 4);
                SharpBoundReport rep =
                    check_sharp_bound(char_series(m), imp, sp_t, sp_kmax, ctx->m >= 4);
                Json j;
                j["ok"] = rep.ok;
                j["strict"] = rep.strict;
                j["violations"] = rep.violations;
                j["notes"] = rep.notes;
                emit(j);
                return rep.ok ? kExitPass : kExitCheckFail;
            }
            // progression
            PolygonData np = newton_polygon(char_series(m));
            HodgePolygon hp = hodge_polygon(m);
            ProgressionReport rep = progression_check(np, hp.polygon, sp_q, sp_r);
            Json j;
            j["s0"] = rep.s0;
            Json be = Json::array();
            for (auto s : rep.boundary_equalities) be.push_back(s);
            j["boundary_equalities"] = be;
            Json progs = Json::array();
            for (const auto& pr : rep.progressions)
                progs.push_back(Json{{"first", pr.first_term.str()},
                                     {"difference", pr.common_difference.str()}});
            j["progressions"] = progs;
            emit(j);
            return kExitPass;
        }
        if (du_vp->parsed()) {
            CtxPtr ctx;
            Mat m = mat_from_json(read_json_file(du_matrix), ctx);
            ClassicalBlock b;
            if (!du_partner.empty()) {
                CtxPtr c2;
                b.u = m;
                b.partner = mat_from_json(read_json_file(du_partner), c2);
                b.central = Mat::identity(ctx.get(), m.rows());
            } else {
                b = ClassicalBlock::with_conj_partner(m);
                Mat u = *b.partner;  // conj(M)^T M = p I convention
                b.partner = b.u;
                b.u = u;
            }
            if (!du_central.empty()) {
                CtxPtr c3;
                b.central = mat_from_json(read_json_file(du_central), c3);
            }
            bool adj = verify_adjunction(b);
            bool dua = adj && hodge_duality_check(b);
            emit(Json{{"adjunction", adj}, {"hodge_duality", dua}});
            return adj && dua ? kExitPass : kExitCheckFail;
        }
        if (du_pr->parsed()) {
            CtxPtr ctx;
            Mat m = mat_from_json(read_json_file(du_pm), ctx);
            std::vector<Mat> hecke;
            std::string cur;
            for (char ch : du_hecke + ",") {
                if (ch == ',') {
                    if (!cur.empty()) {
                        CtxPtr c2;
                        hecke.push_back(mat_from_json(read_json_file(cur), c2));
                    }
                    cur.clear();
                } else
                    cur += ch;
            }
            Json ej = parse_inline_or_file(du_eigen);
            std::vector<Mat> projectors;
            std::vector<std::string> labels;
            for (const auto& lab : ej.at("labels")) {
                std::vector<EigenDatum> data;
                for (const auto& dj : lab.at("data")) {
                    EigenDatum d{hecke.at(dj.at("hecke").get<std::size_t>()),
                                 parse_cyclo(ctx.get(), dj.at("accepted").get<std::string>()),
                                 {}};
                    for (const auto& rj : dj.at("rejected"))
                        d.rejected.push_back(parse_cyclo(ctx.get(), rj.get<std::string>()));
                    data.push_back(std::move(d));
                }
                ResidualProjector rp = build_projector(lab.at("label").get<std::string>(), data);
                projectors.push_back(idempotent_limit(rp.p));
                labels.push_back(rp.label);
            }
            Splitting sp = split_and_factor(m, projectors, labels);
            Json out;
            Json blocks = Json::array();
            for (const auto& blk : sp.blocks) {
                Json bj;
                bj["label"] = blk.label;
                bj["dim"] = blk.dim;
                bj["char_series"] = charseries_to_json(blk.cs);
                bj["newton_slopes"] = slopes_to_json(newton_polygon(blk.cs).slopes());
                blocks.push_back(bj);
            }
            out["blocks"] = blocks;
            emit(out);
            return kExitPass;
        }
        if (run->parsed()) {
            Scenario sc;
            if (run_name == "example-5" || run_name == "fixtures-6x" || run_name == "empty")
                sc = Scenario::builtin(run_name);
            else
                sc = Scenario::from_json(read_json_file(run_name));
            sc.seed = g.seed;
            sc.prec = g.prec;
            sc.jobs = g.jobs;
            Report rep = run_scenario(sc);
            emit(rep.to_json(g.timings));
            if (!rep.all_passed()) return kExitCheckFail;
            if (g.strict && rep.any_uncertified()) return kExitUncertified;
            return kExitPass;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
