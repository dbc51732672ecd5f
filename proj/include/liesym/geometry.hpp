#pragma once

#include "liesym/expr.hpp"

#include <string>
#include <vector>

namespace liesym {

enum class ManifoldKind { SphereStereographic, HyperbolicPoincare, EuclideanFlat };

std::string manifold_name(ManifoldKind k);
// sphere | hyperbolic (ball, poincare) | flat
ManifoldKind parse_manifold(const std::string& text);

struct ManifoldModel {
    ManifoldKind kind = ManifoldKind::SphereStereographic;
    int n = 2;

    static ManifoldModel make(ManifoldKind kind, int n);

    Expr norm_sq() const;
    // |x|^2 + 1, 1 - |x|^2 or 1.
    Expr rho() const;
    // c(x) with g_ij = c^2 delta_ij.
    Expr conformal_factor() const;
    // Delta_g = A * Delta + B * (x . grad)
    Expr laplacian_coefficient() const;
    Expr drift_coefficient() const;
    bool in_domain(const std::vector<double>& x) const;
};

Expr metric(const ManifoldModel& m, int i, int j);
Expr inverse_metric(const ManifoldModel& m, int i, int j);
Expr christoffel(const ManifoldModel& m, int k, int i, int j);
// Same symbols computed from derivatives of the metric.
Expr christoffel_from_metric(const ManifoldModel& m, int k, int i, int j);

Expr laplace_beltrami(const ManifoldModel& m, const Expr& f);
// g^{ij} (f_ij - Gamma^k_ij f_k)
Expr laplace_beltrami_components(const ManifoldModel& m, const Expr& f);
// Delta_g u with u's derivatives written as jet variables.
Expr laplace_beltrami_jets(const ManifoldModel& m);

struct ChartMaps {
    std::vector<Expr> forward;        // n + 1 components in x
    std::vector<Expr> inverse;        // n components in y1..yn, z
    std::vector<Expr> inverse_vars;   // y1..yn, z
};
ChartMaps chart_maps(const ManifoldModel& m);

}  // namespace liesym
