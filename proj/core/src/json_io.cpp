#include "upslope/json_io.hpp"

#include <fstream>

#include "upslope/literal.hpp"

namespace upslope {

Json ctx_to_json(const PadicContext* ctx) {
    Json j;
    j["p"] = ctx->p;
    j["m"] = ctx->m;
    j["prec"] = ctx->prec;
    j["cyclo_order"] = ctx->cyclo_order;
    if (ctx->extra_root_order != 1) j["extra_root_order"] = ctx->extra_root_order;
    return j;
}

CtxPtr ctx_from_json(const Json& j) {
    return PadicContext::create(j.at("p").get<std::uint64_t>(), j.at("m").get<int>(),
                                j.at("prec").get<int>(),
                                j.value("cyclo_order", std::uint64_t{0}),
                                j.value("extra_root_order", std::uint64_t{1}));
}

Json mat_to_json(const Mat& m) {
    Json j;
    j["context"] = ctx_to_json(m.ctx());
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(format_cyclo(m.at(i, k)));
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

Mat mat_from_json(const Json& j, CtxPtr& ctx) {
    ctx = ctx_from_json(j.at("context"));
    const auto& rows = j.at("rows");
    int r = static_cast<int>(rows.size());
    int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
    Mat m(ctx.get(), r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw std::invalid_argument("mat_from_json: ragged rows");
        for (int k = 0; k < c; ++k)
            m.at(i, k) = parse_cyclo(ctx.get(), rows[i][k].get<std::string>());
    }
    return m;
}

Json quat_to_json(const Quaternion& q) {
    Json j;
    j["coords2"] = {q.x2[0], q.x2[1], q.x2[2], q.x2[3]};
    j["norm"] = q.norm();
    return j;
}

Quaternion quat_from_json(const Json& j) {
    const auto& c = j.at("coords2");
    return Quaternion(c.at(0).get<std::int64_t>(), c.at(1).get<std::int64_t>(),
                      c.at(2).get<std::int64_t>(), c.at(3).get<std::int64_t>());
}

Json recipe_to_json(const UpRecipe& r) {
    Json j;
    j["t"] = r.t;
    j["shape"] = r.shape == UpRecipe::Shape::Up ? "Up" : "Tl";
    if (r.shape == UpRecipe::Shape::Tl) j["l"] = r.ell;
    if (!r.name.empty()) j["name"] = r.name;
    Json entries = Json::array();
    for (const auto& en : r.entries) {
        Json e;
        e["i"] = en.target;
        e["j"] = en.source;
        e["delta"] = {format_cyclo(en.delta.a), format_cyclo(en.delta.b),
                      format_cyclo(en.delta.c), format_cyclo(en.delta.d)};
        entries.push_back(e);
    }
    j["entries"] = entries;
    return j;
}

UpRecipe recipe_from_json(const Json& j, const PadicContext* ctx) {
    UpRecipe r;
    r.t = j.at("t").get<int>();
    std::string shape = j.at("shape").get<std::string>();
    if (shape == "Up")
        r.shape = UpRecipe::Shape::Up;
    else if (shape == "Tl")
        r.shape = UpRecipe::Shape::Tl;
    else
        throw std::invalid_argument("recipe_from_json: shape must be Up or Tl");
    r.ell = j.value("l", std::int64_t{0});
    r.name = j.value("name", std::string{});
    auto parse_entry = [&](const Json& e) {
        const auto& d = e.at("delta");
        auto get = [&](int idx) {
            if (d.at(idx).is_number_integer())
                return CycloElt::from_int(ctx, d.at(idx).get<std::int64_t>());
            return parse_cyclo(ctx, d.at(idx).get<std::string>());
        };
        MonoidElt me = MonoidElt::make(
            get(0), get(1), get(2), get(3),
            r.shape == UpRecipe::Shape::Up ? MonoidElt::Shape::Up : MonoidElt::Shape::Tl, ctx->m);
        return UpRecipe::Entry{e.at("i").get<int>(), e.at("j").get<int>(), std::move(me)};
    };
    for (const auto& e : j.at("entries")) r.entries.push_back(parse_entry(e));
    r.validate(ctx);
    return r;
}

Json polygon_to_json(const PolygonData& p) {
    Json j;
    Json verts = Json::array();
    for (const auto& v : p.vertices) {
        Json vv = Json::array();
        vv.push_back(v.x);
        vv.push_back(v.y.str());
        if (!v.exact) vv.push_back("uncertified");
        verts.push_back(vv);
    }
    j["vertices"] = verts;
    j["slopes"] = slopes_to_json(p.slopes());
    return j;
}

Json slopes_to_json(const std::vector<std::pair<Rat, bool>>& slopes) {
    Json arr = Json::array();
    for (const auto& [s, cert] : slopes) {
        if (cert)
            arr.push_back(s.str());
        else
            arr.push_back(s.str() + "?");
    }
    return arr;
}

std::string slopes_to_csv(const std::vector<std::pair<Rat, bool>>& slopes) {
    std::string out = "index,slope,certified\n";
    for (std::size_t i = 0; i < slopes.size(); ++i)
        out += std::to_string(i) + "," + slopes[i].first.str() + "," +
               (slopes[i].second ? "yes" : "no") + "\n";
    return out;
}

Json charseries_to_json(const CharSeries& cs) {
    Json j;
    if (!cs.provenance.empty()) j["provenance"] = cs.provenance;
    Json arr = Json::array();
    for (const auto& c : cs.c) arr.push_back(format_cyclo(c));
    j["coefficients"] = arr;
    return j;
}

Json dirichlet_to_json(const DirichletCharacter& chi) {
    Json j;
    j["conductor_exp"] = chi.conductor_exp;
    j["tame"] = chi.tame_exp;
    j["wild"] = chi.wild_exp;
    return j;
}

DirichletCharacter dirichlet_from_json(const Json& j) {
    DirichletCharacter chi;
    chi.conductor_exp = j.at("conductor_exp").get<int>();
    chi.tame_exp = j.value("tame", std::uint64_t{0});
    chi.wild_exp = j.value("wild", std::uint64_t{0});
    return chi;
}

Json weight_to_json(const WeightChar& w) {
    Json j;
    j["psi"] = dirichlet_to_json(w.psi);
    if (w.kind == WeightChar::Kind::Classical) {
        j["kind"] = "classical";
        j["k"] = w.k;
    } else {
        j["kind"] = "disk";
        j["w0"] = format_cyclo(w.w0);
    }
    return j;
}

WeightChar weight_from_json(const Json& j, const PadicContext* ctx) {
    DirichletCharacter psi = dirichlet_from_json(j.at("psi"));
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "classical") return WeightChar::classical(j.at("k").get<int>(), psi);
    if (kind == "disk") return WeightChar::disk(psi, parse_cyclo(ctx, j.at("w0").get<std::string>()));
    throw std::invalid_argument("weight_from_json: kind must be classical or disk");
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

}  // namespace upslope
