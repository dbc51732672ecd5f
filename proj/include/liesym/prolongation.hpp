#pragma once

#include "liesym/geometry.hpp"
#include "liesym/kernel.hpp"

#include <string>
#include <vector>

namespace liesym {

struct VectorFieldAnsatz {
    std::vector<Expr> xi;
    Expr eta;
    Expr phi;

    int n() const { return static_cast<int>(xi.size()); }
    // Rejects jet variables in any component.
    void validate() const;
    // xi^k(x,t,u), eta(x,t,u), phi(x,t,u) as opaque functions.
    static VectorFieldAnsatz general(int n);
};

struct PDEInstance {
    ManifoldModel model;
    Expr r;
    Expr q;
    Expr F;  // u^r u_t - A Delta u - B x.grad u - u^q

    // r and q default to the symbolic parameters.
    static PDEInstance make(const ManifoldModel& m, const Expr& r = Expr::param("r"),
                            const Expr& q = Expr::param("q"));
    // u_t solved from F = 0.
    Expr time_derivative() const;
    // F with every u_t replaced by time_derivative().
    Expr eliminate_time_derivative(const Expr& e) const;
};

struct ProlongedCoefficients {
    std::vector<Expr> phi_i;
    Expr phi_t;
    std::vector<std::vector<Expr>> phi_ij;  // symmetric, 0-based
};

ProlongedCoefficients prolong_coefficients(const VectorFieldAnsatz& v);

struct CriterionResult {
    Expr expr;                      // pr2 v F with u_t eliminated
    bool mixed_jets = false;        // u_it or u_tt survived
    std::vector<Expr> mixed_terms;  // the surviving mixed jets
};

// pr2 v applied to F without elimination.
Expr prolonged_action(const VectorFieldAnsatz& v, const PDEInstance& pde);
CriterionResult apply_symmetry_criterion(const VectorFieldAnsatz& v, const PDEInstance& pde);

struct DeterminingStage {
    std::string name;
    std::vector<Expr> equations;
};

struct DeterminingSystem {
    std::vector<Expr> equations;
    CaseAssumption assumption = CaseAssumption::Generic;
    ManifoldModel model;
    // jets: coefficient comparison in the jet variables, with derivatives of the
    // unknowns that are forced to vanish reported as their own equations.
    // linear: phi = alpha(x,t) u substituted.
    // split: linear equations separated by powers of u under the case.
    std::vector<DeterminingStage> stages;
};

DeterminingSystem derive_determining_system(const PDEInstance& pde, CaseAssumption a);

// Scale-free canonical form shared by the system and by fixtures.
Expr normalize_for(const ManifoldModel& m, const Expr& e);
bool system_contains(const DeterminingSystem& ds, const Expr& equation);

struct MembershipReport {
    bool satisfied = true;
    std::vector<Expr> residuals;
};

// Concrete r, q values (if any) are substituted into the residuals.
MembershipReport check_membership(const VectorFieldAnsatz& v, const DeterminingSystem& ds,
                                  const std::vector<std::pair<Expr, Expr>>& params = {});

}  // namespace liesym
