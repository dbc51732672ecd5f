#pragma once

#include "liesym/verify.hpp"

#include <cstdint>
#include <string>

namespace liesym {

// A JSON document and the verdict it carries.
struct RunOutput {
    std::string json;
    bool pass = true;
};

RunOutput determine_json(ManifoldKind m, int n, CaseAssumption c);
RunOutput determine_json(const DeterminingSystem& ds);
RunOutput catalog_json(ManifoldKind m, int n, CaseAssumption c, const Rational& r, const Rational& q);
RunOutput verify_json(ManifoldKind m, int n, CaseAssumption c, const Rational& r, const Rational& q, int points,
                      std::uint64_t seed, double tol);

struct TorsionCheckConfig {
    std::string variant = "sphere+";
    int n = 2;
    Rational lam0 = 0;
    int random = 20;
    int family_samples = 100;
    std::uint64_t seed = 1;
    double tol = 1e-8;
};
RunOutput torsion_check_json(const TorsionCheckConfig& cfg);

// Symbolic r and q are allowed here.
RunOutput prolong_json(ManifoldKind m, int n, const VectorFieldAnsatz& v, const Expr& r, const Expr& q);
RunOutput reduce_json(const Rational& m, const Rational& p);

}  // namespace liesym
