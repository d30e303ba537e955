#include "upslope/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <stdexcept>

#include "upslope/literal.hpp"
#include "upslope/rng.hpp"

namespace upslope {

std::string status_str(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::ReportOnly: return "report-only";
        case CheckStatus::Uncertified: return "uncertified";
    }
    return "?";
}

bool Report::all_passed() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::Fail) return false;
    return true;
}

bool Report::any_uncertified() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::Uncertified) return true;
    return false;
}

Json Report::to_json(bool with_timings) const {
    Json j;
    j["scenario"] = scenario;
    j["seed"] = seed;
    Json arr = Json::array();
    for (const auto& c : checks) {
        Json cj;
        cj["name"] = c.name;
        cj["status"] = status_str(c.status);
        if (!c.details.is_null()) cj["details"] = c.details;
        arr.push_back(cj);
    }
    j["checks"] = arr;
    j["status"] = all_passed() ? (any_uncertified() ? "pass-with-uncertified" : "pass") : "fail";
    if (with_timings) {
        Json t;
        for (const auto& c : checks) t[c.name] = c.seconds;
        j["timings"] = t;
    }
    return j;
}

namespace {

const char* kM3Rows[3][3] = {
    {"z", "z^2", "z^8"},
    {"z^4", "z^2", "z^5"},
    {"z^7", "z^2", "z^2"},
};

struct SparseEntry {
    int row, col, zexp;
};
const SparseEntry kM4Entries[] = {
    {0, 0, 19}, {0, 4, 2},  {0, 5, 17},
    {1, 3, 13}, {1, 7, 20}, {1, 8, 23},
    {2, 1, 11}, {2, 2, 2},  {2, 6, 7},
    {3, 0, 1},  {3, 4, 2},  {3, 5, 8},
    {4, 3, 22}, {4, 7, 20}, {4, 8, 14},
    {5, 1, 11}, {5, 2, 20}, {5, 6, 16},
    {6, 0, 10}, {6, 4, 2},  {6, 5, 26},
    {7, 3, 4},  {7, 7, 20}, {7, 8, 5},
    {8, 1, 11}, {8, 2, 11}, {8, 6, 25},
};

std::vector<Rat> rational_list(std::initializer_list<Rat> rs) { return std::vector<Rat>(rs); }

Json rats_json(const std::vector<Rat>& rs) {
    Json arr = Json::array();
    for (const auto& r : rs) arr.push_back(r.str());
    return arr;
}

bool slopes_equal(const std::vector<std::pair<Rat, bool>>& got, const std::vector<Rat>& want) {
    if (got.size() < want.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i)
        if (!got[i].second || !(got[i].first == want[i])) return false;
    return true;
}

using CheckFn = std::function<CheckResult()>;

CheckResult run_one(const std::string& name, const std::function<void(CheckResult&)>& body) {
    CheckResult r;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& ex) {
        r.status = CheckStatus::Fail;
        r.details["error"] = ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

void add_example5_checks(std::vector<std::pair<std::string, CheckFn>>& out, int prec,
                         std::uint64_t seed) {
    std::vector<Rat> first6 = rational_list({Rat(1, 2), Rat(3, 2), Rat(5, 2), Rat(7, 2),
                                             Rat(9, 2), Rat(11, 2)});
    out.emplace_back("slopes", [=] {
        return run_one("slopes", [&](CheckResult& r) {
            Example53 ex = example53_scenario(prec);
            TruncatedOpMatrix U = example53_up(CycloElt::zero(ex.ctx.get()), 12);
            PolygonData np = newton_polygon(char_series(U.m));
            auto sl = np.slopes();
            r.details["slopes"] = slopes_to_json(
                std::vector<std::pair<Rat, bool>>(sl.begin(), sl.begin() + std::min<std::size_t>(6, sl.size())));
            r.status = slopes_equal(sl, first6) ? CheckStatus::Pass : CheckStatus::Fail;
        });
    });
    out.emplace_back("w-independence", [=] {
        return run_one("w-independence", [&](CheckResult& r) {
            Example53 ex = example53_scenario(prec);
            SplitMix64 rng(seed);
            std::uint64_t u = 0;
            while (u % 3 == 0) u = rng.below(ex.ctx->modulus());
            std::vector<CycloElt> samples{
                CycloElt::zero(ex.ctx.get()), CycloElt::one(ex.ctx.get()),
                CycloElt::from_int(ex.ctx.get(), 3),
                CycloElt(ex.ctx.get(), mulmod(3, u, ex.ctx->modulus()))};
            Json all = Json::array();
            bool ok = true;
            for (const auto& w0 : samples) {
                TruncatedOpMatrix U = example53_up(w0, 12);
                auto sl = newton_polygon(char_series(U.m)).slopes();
                ok = ok && slopes_equal(sl, first6);
                all.push_back(slopes_to_json({sl.begin(), sl.begin() + std::min<std::size_t>(6, sl.size())}));
            }
            r.details["per-sample"] = all;
            r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        });
    });
    out.emplace_back("theorem-A", [=] {
        return run_one("theorem-A", [&](CheckResult& r) {
            Example53 ex = example53_scenario(prec);
            TruncatedOpMatrix U = example53_up(CycloElt::zero(ex.ctx.get()), 12);
            TheoremAReport rep = check_theorem_A(char_series(U.m), 1);
            r.details["certified_up_to"] = rep.certified_up_to;
            r.details["violations"] = rep.violations;
            r.status = rep.ok ? CheckStatus::Pass : CheckStatus::Fail;
        });
    });
    out.emplace_back("rescaled-congruence", [=] {
        return run_one("rescaled-congruence", [&](CheckResult& r) {
            // Diag(1/(p pi)) U Diag(pi) = 2 pi I mod 3 for the Hamilton recipe
            Example53 ex = example53_scenario(prec);
            const PadicContext* ctx = ex.ctx.get();
            WeightChar kappa = WeightChar::disk(ex.psi, CycloElt::zero(ctx));
            Rescale sc{PiScaled{ctx->pi_e_over_p(), -(ctx->e + 1)}, PiScaled::pi_pow(ctx, 1)};
            const int N = 8;
            Mat total(ctx, N, N);
            for (const auto& en : ex.recipe.entries)
                total += generating_matrix(en.delta, kappa, N, sc).entries;
            CycloElt two_pi = CycloElt::pi(ctx).mul_int(2);
            bool ok = true;
            for (int i = 0; i < N && ok; ++i)
                for (int j = 0; j < N && ok; ++j) {
                    CycloElt want = i == j ? two_pi : CycloElt::zero(ctx);
                    ok = (total.at(i, j) - want).valuation().known_ge(Rat(1));
                }
            r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        });
    });
}

void add_fixture_checks(std::vector<std::pair<std::string, CheckFn>>& out, int prec) {
    auto with_fixture = [prec](bool big, const std::function<void(CheckResult&, CtxPtr, const Mat&)>& body) {
        return [=](CheckResult& r) {
            Fixtures fx = fixtures(prec);
            body(r, big ? fx.ctx_c81 : fx.ctx_c27, big ? fx.c81 : fx.c27);
        };
    };
    std::vector<Rat> np27 = rational_list({Rat(1, 6), Rat(1, 2), Rat(5, 6)});
    std::vector<Rat> hp27 = rational_list({Rat(0), Rat(1, 2), Rat(1)});
    std::vector<Rat> np81, hp81;
    for (int i = 0; i < 9; ++i) np81.push_back(Rat(2 * i + 1, 18));
    for (int i = 0; i < 9; ++i) hp81.push_back(Rat(i / 3, 2));

    struct Item {
        const char* name;
        bool big;
    };
    for (auto [tag, big] : std::vector<std::pair<std::string, bool>>{{"c27", false}, {"c81", true}}) {
        auto np_want = big ? np81 : np27;
        auto hp_want = big ? hp81 : hp27;
        out.emplace_back(tag + "-newton", [=] {
            return run_one(tag + "-newton", with_fixture(big, [=](CheckResult& r, CtxPtr, const Mat& m) {
                auto sl = newton_polygon(char_series(m)).slopes();
                r.details["slopes"] = slopes_to_json(sl);
                r.status = slopes_equal(sl, np_want) && sl.size() == np_want.size()
                               ? CheckStatus::Pass
                               : CheckStatus::Fail;
            }));
        });
        out.emplace_back(tag + "-hodge", [=] {
            return run_one(tag + "-hodge", with_fixture(big, [=](CheckResult& r, CtxPtr, const Mat& m) {
                HodgePolygon hp = hodge_polygon(m);
                r.details["slopes"] = rats_json(hp.slopes);
                bool ok = hp.complete && hp.slopes.size() == hp_want.size();
                for (std::size_t i = 0; ok && i < hp_want.size(); ++i) ok = hp.slopes[i] == hp_want[i];
                r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
            }));
        });
        out.emplace_back(tag + "-adjunction", [=] {
            return run_one(tag + "-adjunction", with_fixture(big, [=](CheckResult& r, CtxPtr, const Mat& m) {
                ClassicalBlock b = ClassicalBlock::with_conj_partner(m, tag);
                // conj(M)^T M = p I: apply the adjunction with u = conj(M)
                ClassicalBlock swapped;
                swapped.u = *b.partner;
                swapped.partner = b.u;
                swapped.central = b.central;
                r.status = verify_adjunction(swapped) ? CheckStatus::Pass : CheckStatus::Fail;
            }));
        });
        out.emplace_back(tag + "-duality", [=] {
            return run_one(tag + "-duality", with_fixture(big, [=](CheckResult& r, CtxPtr, const Mat& m) {
                ClassicalBlock b = ClassicalBlock::with_conj_partner(m, tag);
                r.status = hodge_duality_check(b) ? CheckStatus::Pass : CheckStatus::Fail;
            }));
        });
        std::int64_t want_s0 = big ? 5 : 2;
        out.emplace_back(tag + "-progression", [=] {
            return run_one(tag + "-progression", with_fixture(big, [=](CheckResult& r, CtxPtr, const Mat& m) {
                PolygonData np = newton_polygon(char_series(m));
                HodgePolygon hp = hodge_polygon(m);
                ProgressionReport rep = progression_check(np, hp.polygon, 1, 0);
                r.details["s0"] = rep.s0;
                Json be = Json::array();
                for (auto s : rep.boundary_equalities) be.push_back(s);
                r.details["boundary_equalities"] = be;
                Json progs = Json::array();
                for (const auto& pr : rep.progressions) {
                    Json p;
                    p["first"] = pr.first_term.str();
                    p["difference"] = pr.common_difference.str();
                    progs.push_back(p);
                }
                r.details["progressions"] = progs;
                bool ok = rep.s0 == want_s0;
                if (big) {
                    // the printed value 6 needs non-strict comparison at s = 6;
                    // the checker reports 5 under the strict inequality and
                    // flags the boundary case instead of resolving it
                    ok = ok && rep.boundary_equalities.size() == 1 && rep.boundary_equalities[0] == 6;
                    r.details["note"] =
                        "s0 = 6 requires non-strict comparison at s = 6 (NP(6) = HP(5) + 1)";
                }
                r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
            }));
        });
    }
}

}  // namespace

Fixtures fixtures(int prec) {
    Fixtures fx;
    fx.ctx_c27 = PadicContext::create(3, 3, prec, 9);
    fx.c27 = Mat(fx.ctx_c27.get(), 3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            fx.c27.at(i, j) = parse_cyclo(fx.ctx_c27.get(), kM3Rows[i][j]);
    fx.ctx_c81 = PadicContext::create(3, 4, prec, 27);
    fx.c81 = Mat(fx.ctx_c81.get(), 9, 9);
    for (const auto& en : kM4Entries)
        fx.c81.at(en.row, en.col) =
            CycloElt::zeta(fx.ctx_c81.get()).pow_u64(static_cast<std::uint64_t>(en.zexp));
    fx.hamilton = example53_scenario(prec);
    return fx;
}

Scenario Scenario::builtin(const std::string& name) {
    if (name != "example-5" && name != "fixtures-6x" && name != "empty")
        throw std::invalid_argument("unknown builtin scenario: " + name);
    Scenario s;
    s.name = name;
    return s;
}

Scenario Scenario::from_json(const Json& j) {
    Scenario s;
    s.name = j.at("name").get<std::string>();
    s.seed = j.value("seed", std::uint64_t{1});
    s.prec = j.value("prec", 40);
    if (j.contains("checks"))
        for (const auto& c : j.at("checks")) s.only.push_back(c.get<std::string>());
    return s;
}

Report run_scenario(const Scenario& s) {
    std::vector<std::pair<std::string, CheckFn>> checks;
    if (s.name == "example-5")
        add_example5_checks(checks, s.prec, s.seed);
    else if (s.name == "fixtures-6x")
        add_fixture_checks(checks, s.prec);
    else if (s.name == "empty")
        ;  // empty scenario: empty passing report
    else
        throw std::invalid_argument("unknown scenario: " + s.name);

    if (!s.only.empty()) {
        std::vector<std::pair<std::string, CheckFn>> filtered;
        for (auto& c : checks)
            if (std::find(s.only.begin(), s.only.end(), c.first) != s.only.end())
                filtered.push_back(std::move(c));
        for (const auto& name : s.only) {
            bool found = false;
            for (const auto& c : filtered) found |= c.first == name;
            if (!found) throw std::invalid_argument("scenario has no check named " + name);
        }
        checks = std::move(filtered);
    }

    Report rep;
    rep.scenario = s.name;
    rep.seed = s.seed;
    if (s.jobs > 1) {
        std::vector<std::future<CheckResult>> futs;
        futs.reserve(checks.size());
        for (auto& c : checks) futs.push_back(std::async(std::launch::async, c.second));
        for (auto& f : futs) rep.checks.push_back(f.get());
    } else {
        for (auto& c : checks) rep.checks.push_back(c.second());
    }
    std::sort(rep.checks.begin(), rep.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return rep;
}

}  // namespace upslope
