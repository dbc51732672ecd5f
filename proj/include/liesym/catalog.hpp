#pragma once

#include "liesym/geometry.hpp"
#include "liesym/kernel.hpp"
#include "liesym/prolongation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace liesym {

using Matrix = std::vector<std::vector<double>>;

struct GroupAction {
    std::string name;
    CaseAssumption assumption = CaseAssumption::Generic;
    ManifoldKind manifold = ManifoldKind::SphereStereographic;
    int n = 2;
    VectorFieldAnsatz generator;
    // (x~1..x~n, t~, u~) in the parameter eps; empty for rotations.
    std::vector<Expr> flow;
    // The flow is defined where this expression is positive.
    std::optional<Expr> domain;
    // Antisymmetric generator matrix of a rotation.
    std::vector<std::vector<Rational>> rotation;

    bool is_rotation() const { return !rotation.empty(); }
    bool in_domain(double eps, const std::vector<double>& x, double t, double u) const;
    // Numeric image of (x, t, u); throws DomainError outside the parameter domain.
    std::vector<double> apply(double eps, const std::vector<double>& x, double t, double u) const;
};

Expr eps_symbol();

// Case forced by the coincidences among q, r + 1 and 1.
CaseAssumption classify_case(const Rational& r, const Rational& q);
// Throws ValueError when (r, q) does not belong to the case.
void check_case(CaseAssumption c, const Rational& r, const Rational& q);

GroupAction time_translation(ManifoldKind m, int n, CaseAssumption c);
// Rotation generated by x -> a x.
GroupAction rotation_action(ManifoldKind m, int n, CaseAssumption c, const std::vector<std::vector<Rational>>& a);
std::vector<GroupAction> build_catalog(ManifoldKind m, int n, CaseAssumption c, const Rational& r, const Rational& q);

// exp(eps a) by scaling and squaring.
Matrix rotation_exponential(const std::vector<std::vector<Rational>>& a, double eps);

struct ExponentiationReport {
    bool identity_at_zero = false;
    bool generator_matches = false;  // symbolic for scalar flows
    bool group_law_symbolic = false; // composition simplified to exactly zero
    double group_law_error = 0;      // max over random (eps1, eps2)
    double orthogonality_error = 0;  // rotations only
    double determinant_error = 0;
    double generator_error = 0;      // rotations: finite-difference generator
    int samples = 0;
    bool pass = false;
};

ExponentiationReport exponentiate_check(const GroupAction& ga, int samples = 100, std::uint64_t seed = 1,
                                        double tol = 1e-10);

struct SemilinearExponents {
    Rational r;
    Rational q;
    CaseAssumption assumption;
};

// v = u^m(x, t/m): r = (1 - m)/m, q = p/m.
SemilinearExponents reduce_to_semilinear(const Rational& m, const Rational& p);
// m = 1/(r + 1), p = q m; r = -1 is excluded.
std::pair<Rational, Rational> semilinear_inverse(const Rational& r, const Rational& q);

struct SamplePoint {
    std::vector<double> x;
    double t = 0;
    double u = 0;
};

std::vector<SamplePoint> act_on_function(const GroupAction& ga, double eps, const std::vector<SamplePoint>& samples);

}  // namespace liesym
