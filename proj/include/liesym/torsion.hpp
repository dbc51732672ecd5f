#pragma once

#include "liesym/expr.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace liesym {

enum class TorsionDenominator { OnePlusNormSq, OneMinusNormSq };

// xi^i_i = lam +- 2 x.xi / denom for every i, xi^i_j + xi^j_i = 0 for i != j.
struct TorsionSystem {
    int n = 2;
    int sign = 1;
    TorsionDenominator denom = TorsionDenominator::OnePlusNormSq;

    static TorsionSystem make(int n, int sign, TorsionDenominator d);
    // sphere+ | sphere- | ball (minus sign over 1 - |x|^2) | ball+
    static TorsionSystem parse_variant(const std::string& text, int n);
    static std::vector<TorsionSystem> all_variants(int n);
    std::string variant_name() const;
    Expr denominator() const;
};

// n trace residuals followed by the pairs (i, j), i < j, in lexicographic order.
std::vector<Expr> torsion_residual(const TorsionSystem& ts, const std::vector<Expr>& xi, const Expr& lam);

struct TorsionSolution {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    Rational lam0;

    int n() const { return static_cast<int>(b.size()); }
    // xi^i = sum_j a^i_j x^j + b^i
    std::vector<Expr> components() const;
};

// Throws ValueError unless a is square, antisymmetric and matches b.
TorsionSolution family_construct(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b);

// Delta xi^j + (n - 2) d^2 xi^j / dx_j^2 for every j.
std::vector<Expr> harmonicity_check(const std::vector<Expr>& xi);

struct RadialSolution {
    double h = 0;
    std::vector<double> r;
    std::vector<double> phi;

    // Linear interpolation between grid points.
    double at(double radius) const;
};

// Integrates r phi_r = lam(r) r^2 + (r^2 - 1)/(r^2 + 1) phi from a Taylor start at r = h.
RadialSolution radial_reduction(const std::function<double(double)>& lam, double R, double h = 1e-3);
// phi for constant lam0: lam0 (r^2 + 1)/r (r - arctan r).
double radial_closed_form_constant(double lam0, double r);

double lambda_closed_form(double lam0, double r);
// Left minus right side of the consistency condition for a radial lam profile,
// with I(r) the weighted integral of lam from 0 to r.
double consistency_residual(double r, double x_i, double lam_r, double integral_r);

struct LambdaOdeReport {
    double lam0 = 0;
    double max_deviation = 0;         // ODE vs closed form on [0, 5]
    double max_residual = 0;          // consistency residual over the sample grid
    double probe_residual = 0;        // at r = 1, x_i = 1/sqrt(2)
    bool residual_vanishes = false;
    int grid_points = 0;
};

LambdaOdeReport lambda_ode_check(double lam0, double tol = 1e-9);

struct FalsificationCase {
    std::vector<Expr> xi;
    Expr lam;                      // best lam: forced by the first trace equation
    std::vector<Expr> residuals;
    bool refuted = false;          // some residual is nonzero
};

// Random polynomial fields of degree <= degree with integer coefficients in [-5, 5],
// excluding members of the linear antisymmetric family.
std::vector<FalsificationCase> falsify_random(const TorsionSystem& ts, int count, std::uint64_t seed, int degree = 3);

}  // namespace liesym
