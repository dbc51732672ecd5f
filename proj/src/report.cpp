#include "liesym/report.hpp"

#include "liesym/torsion.hpp"

#include "json.hpp"

#include <random>

namespace liesym {

namespace {

using Json = nlohmann::ordered_json;

Json rational_json(const Rational& v) {
    if (is_integer(v) && v.get_num().fits_slong_p()) return v.get_num().get_si();
    return to_string(v);
}

Json strings(const std::vector<Expr>& es) {
    Json out = Json::array();
    for (const auto& e : es) out.push_back(e.str());
    return out;
}

RunOutput finish(const Json& j, bool pass) { return RunOutput{j.dump(2) + "\n", pass}; }

Json header(ManifoldKind m, int n, CaseAssumption c) {
    Json j;
    j["manifold"] = manifold_name(m);
    j["n"] = n;
    j["case"] = case_name(c);
    return j;
}

}  // namespace

RunOutput determine_json(ManifoldKind m, int n, CaseAssumption c) {
    return determine_json(derive_determining_system(PDEInstance::make(ManifoldModel::make(m, n)), c));
}

RunOutput determine_json(const DeterminingSystem& ds) {
    Json j = header(ds.model.kind, ds.model.n, ds.assumption);
    j["equations"] = strings(ds.equations);
    Json stages = Json::object();
    for (const auto& s : ds.stages) stages[s.name] = strings(s.equations);
    j["stages"] = stages;
    return finish(j, true);
}

RunOutput catalog_json(ManifoldKind m, int n, CaseAssumption c, const Rational& r, const Rational& q) {
    auto cat = build_catalog(m, n, c, r, q);
    Json j = header(m, n, c);
    j["r"] = rational_json(r);
    j["q"] = rational_json(q);
    Json gens = Json::array();
    for (const auto& g : cat) {
        Json e;
        e["name"] = g.name;
        e["generator"] = {{"xi", strings(g.generator.xi)}, {"eta", g.generator.eta.str()}, {"phi", g.generator.phi.str()}};
        Json flow;
        if (g.is_rotation()) {
            Json a = Json::array();
            for (const auto& row : g.rotation) {
                Json jr = Json::array();
                for (const auto& v : row) jr.push_back(rational_json(v));
                a.push_back(jr);
            }
            flow["x"] = "exp(eps*a) x";
            flow["a"] = a;
            flow["t"] = "t";
            flow["u"] = "u";
        } else {
            flow["x"] = strings(std::vector<Expr>(g.flow.begin(), g.flow.begin() + n));
            flow["t"] = g.flow[n].str();
            flow["u"] = g.flow[n + 1].str();
        }
        e["flow"] = flow;
        e["domain"] = g.domain ? Json(g.domain->str() + " > 0") : Json(nullptr);
        gens.push_back(e);
    }
    j["generators"] = gens;
    return finish(j, true);
}

RunOutput verify_json(ManifoldKind m, int n, CaseAssumption c, const Rational& r, const Rational& q, int points,
                      std::uint64_t seed, double tol) {
    VerifyReport rep = verify_catalog(m, n, c, r, q, points, seed, tol);
    Json j = header(m, n, c);
    j["r"] = rational_json(r);
    j["q"] = rational_json(q);
    j["points"] = points;
    j["seed"] = seed;
    j["tol"] = tol;
    Json gens = Json::array();
    for (const auto& g : rep.generators)
        gens.push_back({{"name", g.name},
                        {"max_residual", g.max_residual},
                        {"mean_residual", g.mean_residual},
                        {"points", g.points},
                        {"pass", g.pass}});
    j["generators"] = gens;
    j["pass"] = rep.pass;
    return finish(j, rep.pass);
}

RunOutput torsion_check_json(const TorsionCheckConfig& cfg) {
    TorsionSystem ts = TorsionSystem::parse_variant(cfg.variant, cfg.n);
    Json j;
    j["variant"] = ts.variant_name();
    j["n"] = cfg.n;
    j["seed"] = cfg.seed;

    // Linear antisymmetric family with b = 0.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> entry(-5, 5);
    int nonzero = 0;
    for (int k = 0; k < cfg.family_samples; ++k) {
        std::vector<std::vector<Rational>> a(cfg.n, std::vector<Rational>(cfg.n, Rational(0)));
        for (int i = 0; i < cfg.n; ++i)
            for (int l = i + 1; l < cfg.n; ++l) {
                a[i][l] = Rational(entry(rng), 1 + (entry(rng) + 5) % 3);
                a[i][l].canonicalize();
                a[l][i] = -a[i][l];
            }
        auto sol = family_construct(a, std::vector<Rational>(cfg.n, Rational(0)));
        for (const auto& res : torsion_residual(ts, sol.components(), Expr()))
            if (!res.is_zero_const()) ++nonzero;
    }
    bool family_pass = nonzero == 0;
    j["family"] = {{"samples", cfg.family_samples}, {"nonzero_residuals", nonzero}, {"pass", family_pass}};

    LambdaOdeReport ode = lambda_ode_check(to_double(cfg.lam0));
    bool ode_pass = ode.max_deviation <= cfg.tol && ode.residual_vanishes == (cfg.lam0 == 0);
    j["ode"] = {{"lam0", rational_json(cfg.lam0)},
                {"max_deviation", ode.max_deviation},
                {"max_consistency_residual", ode.max_residual},
                {"probe_residual", ode.probe_residual},
                {"grid_points", ode.grid_points},
                {"residual_vanishes", ode.residual_vanishes},
                {"pass", ode_pass}};

    auto cases = falsify_random(ts, cfg.random, cfg.seed);
    int refuted = 0;
    for (const auto& fc : cases) refuted += fc.refuted;
    bool fals_pass = refuted == cfg.random;
    j["falsification"] = {{"count", cfg.random}, {"refuted", refuted}, {"pass", fals_pass}};
    bool pass = family_pass && ode_pass && fals_pass;
    j["pass"] = pass;
    return finish(j, pass);
}

RunOutput prolong_json(ManifoldKind m, int n, const VectorFieldAnsatz& v, const Expr& r, const Expr& q) {
    PDEInstance pde = PDEInstance::make(ManifoldModel::make(m, n), r, q);
    ProlongedCoefficients c = prolong_coefficients(v);
    CriterionResult crit = apply_symmetry_criterion(v, pde);
    Json j;
    j["manifold"] = manifold_name(m);
    j["n"] = n;
    j["r"] = r.str();
    j["q"] = q.str();
    j["generator"] = {{"xi", strings(v.xi)}, {"eta", v.eta.str()}, {"phi", v.phi.str()}};
    j["phi_x"] = strings(c.phi_i);
    j["phi_t"] = c.phi_t.str();
    Json phi_xx = Json::array();
    for (const auto& row : c.phi_ij) phi_xx.push_back(strings(row));
    j["phi_xx"] = phi_xx;
    j["criterion"] = crit.expr.str();
    j["mixed_jets"] = crit.mixed_jets;
    j["mixed_terms"] = strings(crit.mixed_terms);
    j["symmetry"] = crit.expr.is_zero_const();
    return finish(j, true);
}

RunOutput reduce_json(const Rational& m, const Rational& p) {
    SemilinearExponents s = reduce_to_semilinear(m, p);
    Json j;
    j["r"] = rational_json(s.r);
    j["q"] = rational_json(s.q);
    j["case"] = case_name(s.assumption);
    return RunOutput{j.dump() + "\n", true};
}

}  // namespace liesym
