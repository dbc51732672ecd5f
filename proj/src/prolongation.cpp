#include "liesym/prolongation.hpp"

#include "liesym/errors.hpp"

#include <algorithm>

namespace liesym {

namespace {

Expr ujet(std::vector<int> slots) { return Expr::jet(JetIndex::make(std::move(slots))); }

void push_unique(std::vector<Expr>& out, const Expr& e) {
    if (e.is_zero_const()) return;
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
}

}  // namespace

void VectorFieldAnsatz::validate() const {
    for (const auto& c : xi)
        if (has_jets(c)) throw ValueError("xi component depends on jet variables: " + c.str());
    if (has_jets(eta)) throw ValueError("eta depends on jet variables: " + eta.str());
    if (has_jets(phi)) throw ValueError("phi depends on jet variables: " + phi.str());
}

VectorFieldAnsatz VectorFieldAnsatz::general(int n) {
    VectorFieldAnsatz v;
    for (int k = 1; k <= n; ++k) v.xi.push_back(Expr::func(FuncName::Xi, k));
    v.eta = Expr::func(FuncName::Eta);
    v.phi = Expr::func(FuncName::Phi);
    return v;
}

PDEInstance PDEInstance::make(const ManifoldModel& m, const Expr& r, const Expr& q) {
    PDEInstance p{m, simplify(r), simplify(q), Expr()};
    Expr u = Expr::dep();
    std::vector<Expr> lap, drift;
    for (int i = 1; i <= m.n; ++i) {
        lap.push_back(ujet({i, i}));
        drift.push_back(Expr::coord(i) * ujet({i}));
    }
    p.F = simplify(pow(u, p.r) * ujet({kTSlot}) - m.laplacian_coefficient() * Expr::add(lap) -
                   m.drift_coefficient() * Expr::add(drift) - pow(u, p.q));
    return p;
}

Expr PDEInstance::time_derivative() const {
    Expr u = Expr::dep();
    std::vector<Expr> lap, drift;
    for (int i = 1; i <= model.n; ++i) {
        lap.push_back(ujet({i, i}));
        drift.push_back(Expr::coord(i) * ujet({i}));
    }
    return simplify(pow(u, -r) * (model.laplacian_coefficient() * Expr::add(lap) +
                                  model.drift_coefficient() * Expr::add(drift) + pow(u, q)));
}

Expr PDEInstance::eliminate_time_derivative(const Expr& e) const {
    return substitute(e, {{ujet({kTSlot}), time_derivative()}});
}

ProlongedCoefficients prolong_coefficients(const VectorFieldAnsatz& v) {
    v.validate();
    const int n = v.n();
    auto first = [&](int slot) {
        std::vector<Expr> terms{total_derivative(v.phi, slot)};
        for (int k = 1; k <= n; ++k) terms.push_back(-ujet({k}) * total_derivative(v.xi[k - 1], slot));
        terms.push_back(-ujet({kTSlot}) * total_derivative(v.eta, slot));
        return simplify(Expr::add(terms));
    };
    ProlongedCoefficients c;
    for (int i = 1; i <= n; ++i) c.phi_i.push_back(first(i));
    c.phi_t = first(kTSlot);
    c.phi_ij.assign(n, std::vector<Expr>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            std::vector<Expr> terms{total_derivative(c.phi_i[i - 1], j)};
            for (int k = 1; k <= n; ++k) terms.push_back(-ujet({i, k}) * total_derivative(v.xi[k - 1], j));
            terms.push_back(-ujet({i, kTSlot}) * total_derivative(v.eta, j));
            c.phi_ij[i - 1][j - 1] = c.phi_ij[j - 1][i - 1] = simplify(Expr::add(terms));
        }
    return c;
}

Expr prolonged_action(const VectorFieldAnsatz& v, const PDEInstance& pde) {
    const int n = pde.model.n;
    if (v.n() != n) throw ValueError("vector field has " + std::to_string(v.n()) + " spatial components, PDE has n = " +
                                     std::to_string(n));
    ProlongedCoefficients c = prolong_coefficients(v);
    const Expr& F = pde.F;
    std::vector<Expr> terms;
    for (int i = 1; i <= n; ++i) {
        terms.push_back(v.xi[i - 1] * partial(F, Expr::coord(i)));
        terms.push_back(c.phi_i[i - 1] * partial(F, ujet({i})));
        for (int j = i; j <= n; ++j) terms.push_back(c.phi_ij[i - 1][j - 1] * partial(F, ujet({i, j})));
    }
    terms.push_back(v.eta * partial(F, Expr::time()));
    terms.push_back(v.phi * partial(F, Expr::dep()));
    terms.push_back(c.phi_t * partial(F, ujet({kTSlot})));
    return simplify(Expr::add(terms));
}

CriterionResult apply_symmetry_criterion(const VectorFieldAnsatz& v, const PDEInstance& pde) {
    CriterionResult res;
    res.expr = pde.eliminate_time_derivative(prolonged_action(v, pde));
    std::vector<Expr> mixed{ujet({kTSlot, kTSlot})};
    for (int i = 1; i <= pde.model.n; ++i) mixed.push_back(ujet({i, kTSlot}));
    for (const auto& m : mixed)
        if (mentions(res.expr, m)) res.mixed_terms.push_back(m);
    res.mixed_jets = !res.mixed_terms.empty();
    return res;
}

Expr normalize_for(const ManifoldModel& m, const Expr& e) {
    std::vector<Expr> divisors;
    if (m.kind != ManifoldKind::EuclideanFlat) divisors.push_back(m.rho());
    return normalize_equation(e, divisors);
}

bool system_contains(const DeterminingSystem& ds, const Expr& equation) {
    Expr e = normalize_for(ds.model, apply_case(equation, ds.assumption));
    return std::find(ds.equations.begin(), ds.equations.end(), e) != ds.equations.end();
}

DeterminingSystem derive_determining_system(const PDEInstance& pde, CaseAssumption a) {
    DeterminingSystem ds;
    ds.assumption = a;
    ds.model = pde.model;
    CriterionResult crit = apply_symmetry_criterion(VectorFieldAnsatz::general(pde.model.n), pde);
    Expr e = apply_case(crit.expr, a);

    std::vector<Expr> rest;
    for (const auto& [mono, coeff] : jet_coefficients(e)) push_unique(rest, normalize_for(pde.model, coeff));

    // Equations c * f = 0 with c free of parameters force f and all its
    // higher derivatives to vanish.
    std::vector<Expr> zeroed;
    for (;;) {
        std::vector<Expr> found;
        for (const auto& eq : rest) {
            auto atoms = function_atoms(eq);
            if (atoms.size() != 1) continue;
            Expr c = simplify(eq / atoms[0]);
            if (mentions_kind(c, Kind::Func) || mentions_kind(c, Kind::Param)) continue;
            push_unique(found, atoms[0]);
        }
        if (found.empty()) break;
        for (const auto& f : found) push_unique(zeroed, f);
        std::vector<Expr> next;
        for (const auto& eq : rest) push_unique(next, normalize_for(pde.model, zero_function_derivatives(eq, found)));
        rest = std::move(next);
    }

    DeterminingStage jets{"jets", {}};
    for (const auto& z : zeroed) {
        bool implied = std::any_of(zeroed.begin(), zeroed.end(), [&](const Expr& w) {
            return w != z && zero_function_derivatives(z, {w}).is_zero_const();
        });
        if (!implied) push_unique(jets.equations, z);
    }
    for (const auto& eq : rest) push_unique(jets.equations, eq);

    FunctionRule linear_phi = [](FuncName f, int) -> std::optional<Expr> {
        if (f == FuncName::Phi) return Expr::func(FuncName::Alpha) * Expr::dep();
        return std::nullopt;
    };
    DeterminingStage linear{"linear", {}};
    for (const auto& eq : rest) push_unique(linear.equations, normalize_for(pde.model, substitute_functions(eq, linear_phi)));

    DeterminingStage split{"split", {}};
    for (const auto& eq : linear.equations)
        for (const auto& [mono, coeff] : u_power_coefficients(eq, a)) push_unique(split.equations, normalize_for(pde.model, coeff));

    for (const auto* s : {&jets, &linear, &split})
        for (const auto& eq : s->equations) push_unique(ds.equations, eq);
    ds.stages = {jets, linear, split};
    return ds;
}

MembershipReport check_membership(const VectorFieldAnsatz& v, const DeterminingSystem& ds,
                                  const std::vector<std::pair<Expr, Expr>>& params) {
    if (v.n() != ds.model.n)
        throw ValueError("vector field has " + std::to_string(v.n()) + " spatial components, system has n = " +
                         std::to_string(ds.model.n));
    v.validate();
    for (const auto& c : v.xi)
        if (!function_atoms(c).empty()) throw ValueError("membership needs a concrete vector field");
    Expr alpha = simplify(v.phi / Expr::dep());
    FunctionRule rule = [&](FuncName f, int k) -> std::optional<Expr> {
        switch (f) {
            case FuncName::Xi: return v.xi[k - 1];
            case FuncName::Eta: return v.eta;
            case FuncName::Phi: return v.phi;
            case FuncName::Alpha: return alpha;
            default: return std::nullopt;
        }
    };
    MembershipReport rep;
    for (const auto& eq : ds.equations) {
        Expr r = substitute_functions(eq, rule);
        if (!params.empty()) r = substitute(r, params);
        r = apply_case(r, ds.assumption);
        if (!r.is_zero_const()) rep.satisfied = false;
        rep.residuals.push_back(r);
    }
    return rep;
}

}  // namespace liesym
