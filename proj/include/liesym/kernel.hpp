#pragma once

#include "liesym/expr.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace liesym {

enum class CaseAssumption { Generic, QeqRplus1, Qeq1, Req0, QeqRplus1eq1 };

std::string case_name(CaseAssumption c);
// Accepts the canonical names and the aliases case1..case5, qr1, q1, r0, q1r0 (case-insensitive).
CaseAssumption parse_case(const std::string& text);
// Parameter identities forced by the case, e.g. q -> r + 1.
std::vector<std::pair<Expr, Expr>> case_substitution(CaseAssumption c);
Expr apply_case(const Expr& e, CaseAssumption c);

Expr parse(const std::string& text, int n);
Expr simplify(const Expr& e);
bool is_zero(const Expr& e);

Expr partial(const Expr& e, const Expr& v);
// D_slot with slot in 1..n or kTSlot. Throws OrderOverflow past max_order.
Expr total_derivative(const Expr& e, int slot, int max_order = 2);

// Replaces symbols (coordinates, t, u, jets, parameters) and simplifies.
Expr substitute(const Expr& e, const std::vector<std::pair<Expr, Expr>>& subs);

// Replaces unknown functions by expressions; derivative atoms become derivatives
// of the replacement. The rule returns nullopt to keep a function opaque.
using FunctionRule = std::function<std::optional<Expr>(FuncName, int)>;
Expr substitute_functions(const Expr& e, const FunctionRule& rule);
// Sets every derivative of f that is at least as high as `atom` to zero.
Expr zero_function_derivatives(const Expr& e, const std::vector<Expr>& atoms);

struct Collection {
    std::vector<std::pair<Expr, Expr>> coefficients;
    Expr remainder;
};

// Coefficients of the given jet monomials (optionally times a power of u).
Collection collect(const Expr& e, const std::vector<Expr>& monomials, CaseAssumption a);
// Every jet monomial of e with its coefficient, in canonical order.
std::vector<std::pair<Expr, Expr>> jet_coefficients(const Expr& e);
// Splits e by the exponent of u after applying the case identities.
std::vector<std::pair<Expr, Expr>> u_power_coefficients(const Expr& e, CaseAssumption a);

bool has_jets(const Expr& e);
bool mentions_kind(const Expr& e, Kind k);
bool mentions(const Expr& e, const Expr& symbol);
std::vector<Expr> function_atoms(const Expr& e);

// Scale-free form of an equation "e = 0": numerator only, with monomial content
// in coordinates, t and u removed, each listed sum divided out as often as it
// divides, and leading coefficient 1.
Expr normalize_equation(const Expr& e, const std::vector<Expr>& divisors);

Expr numerator(const Expr& e);

}  // namespace liesym
