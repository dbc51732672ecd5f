#pragma once

#include "liesym/catalog.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace liesym {

struct JetPoint {
    std::vector<double> x;
    double t = 0.0;
    double u = 1.0;
    std::vector<double> Du;
    std::vector<std::vector<double>> D2u;
    double ut = 0.0;  // backfilled from F = 0
    // Mixed time jets. They involve third and higher derivatives on
    // solutions, so they are free coordinates there.
    std::vector<double> Dut;
    double utt = 0.0;

    EvalEnv env() const;
};

// Points with u in [0.5, 2], |Du|, |D2u| <= 3 and x in the manifold domain
// (|x| <= 0.9 on the ball). r and q must be concrete.
std::vector<JetPoint> sample_jet_points(const PDEInstance& pde, int count, std::uint64_t seed);

double pde_residual(const PDEInstance& pde, const JetPoint& jp);

struct ResidualSample {
    double absolute = 0.0;
    double scale = 0.0;  // largest evaluated term
    double relative = 0.0;
};

// pr2 v F as a sum of coefficient * dF terms, prolonged once and evaluated many times.
class ResidualEvaluator {
public:
    ResidualEvaluator(const VectorFieldAnsatz& v, const PDEInstance& pde);
    ResidualSample at(const JetPoint& jp) const;

private:
    std::vector<std::pair<Expr, Expr>> terms_;
};

double residual_at(const VectorFieldAnsatz& v, const PDEInstance& pde, const JetPoint& jp);

// |d/d eps F[g(eps) u0]| at eps = 0. u0 is a function of (x, t); its Laplacian
// at the point is shifted so that F = 0 there.
double flow_invariance_derivative(const GroupAction& ga, const PDEInstance& pde, const Expr& u0,
                                  const std::vector<double>& x, double t);

// Smooth positive test function: low-degree polynomial plus exp and arctan terms.
Expr manufactured_function(int n, std::uint64_t seed);

// Largest gap between the symbolic eps-derivative of a scalar flow and a
// Richardson central difference, over random (t, u, eps).
double flow_derivative_gap(const GroupAction& ga, int samples = 50, std::uint64_t seed = 1);

// xi = M x + b with sym(M) != 0, eta and phi/u constant.
VectorFieldAnsatz random_linear_field(int n, std::uint64_t seed);

struct GeneratorReport {
    std::string name;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    int points = 0;
    bool pass = false;
};

struct VerifyReport {
    ManifoldKind manifold;
    int n = 2;
    CaseAssumption assumption;
    Rational r, q;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    std::vector<GeneratorReport> generators;
    bool pass = false;
};

GeneratorReport verify_generator(const std::string& name, const VectorFieldAnsatz& v, const PDEInstance& pde,
                                 const std::vector<JetPoint>& points, double tol);

VerifyReport verify_catalog(ManifoldKind m, int n, CaseAssumption c, const Rational& r, const Rational& q, int points,
                            std::uint64_t seed, double tol = 1e-8);

}  // namespace liesym
