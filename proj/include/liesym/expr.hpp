#pragma once

#include "liesym/rational.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace liesym {

constexpr int kMaxDim = 6;
// Slot used for t in jet indices and derivative counts; u uses kUSlot.
constexpr int kTSlot = 7;
constexpr int kUSlot = 8;

enum class Kind : std::uint8_t { Const, Coord, Time, Dep, Jet, Param, Func, Add, Mul, Pow, Apply };
enum class Fn : std::uint8_t { Arctan, Ln, Exp };
// Opaque unknown functions. Xi carries a component index.
enum class FuncName : std::uint8_t { Xi, Eta, Phi, Alpha, Lam };

// Derivative multi-index of u. Entries are 1..kMaxDim or kTSlot, sorted ascending.
struct JetIndex {
    std::array<std::uint8_t, 3> idx{};
    std::uint8_t order = 0;

    static JetIndex make(std::vector<int> slots);
    JetIndex with(int slot) const;
    bool has_time() const;
    std::uint32_t code() const { return order * 4096u + idx[0] * 256u + idx[1] * 16u + idx[2]; }
    auto operator<=>(const JetIndex&) const = default;
};

// Counts of partial derivatives: slots 1..6 spatial, kTSlot, kUSlot.
using DerivCounts = std::array<std::uint8_t, 9>;

struct FuncDeps {
    bool x, t, u;
};
FuncDeps func_deps(FuncName f);
const char* func_base_name(FuncName f);

struct Node;

class Expr {
public:
    Expr();  // zero
    explicit Expr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
    Expr(long v);  // NOLINT: integers convert implicitly
    Expr(const Rational& q);  // NOLINT

    static Expr constant(const Rational& q);
    static Expr coord(int i);
    static Expr time();
    static Expr dep();
    static Expr jet(const JetIndex& j);
    static Expr param(const std::string& name);
    static Expr func(FuncName f, int index = 0, DerivCounts d = {});

    // Raw constructors: minimal flattening only. Call simplify() for canonical form.
    static Expr add(std::vector<Expr> terms);
    static Expr mul(std::vector<Expr> factors);
    static Expr pow(Expr base, Expr exponent);
    static Expr apply(Fn fn, Expr arg);

    const Node& node() const { return *p_; }
    const Node* get() const { return p_.get(); }
    Kind kind() const;
    std::size_t hash() const;
    bool is_const() const { return kind() == Kind::Const; }
    bool is_zero_const() const;
    bool is_one_const() const;
    const Rational& value() const;
    const std::vector<Expr>& args() const;

    std::string str() const;

private:
    std::shared_ptr<const Node> p_;
};

struct Node {
    Kind kind = Kind::Const;
    Rational value;
    int index = 0;
    JetIndex jet;
    std::string name;
    FuncName func = FuncName::Xi;
    DerivCounts deriv{};
    Fn fn = Fn::Exp;
    std::vector<Expr> args;
    std::size_t hash = 0;
};

// Structural total order (kind, payload, children).
int compare(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
    std::size_t operator()(const Expr& e) const { return e.hash(); }
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Expr& exponent);
Expr arctan(const Expr& a);
Expr ln(const Expr& a);
Expr exp(const Expr& a);

// Names used by the printer and parser.
std::string symbol_name(const Node& n);
std::string jet_name(const JetIndex& j);

struct EvalEnv {
    std::vector<double> x;
    double t = 0.0;
    double u = 1.0;
    std::map<std::uint32_t, double> jets;
    std::map<std::string, double> params;

    void set_jet(const JetIndex& j, double v) { jets[j.code()] = v; }
};

// Numeric evaluation; throws EvaluationError naming the offending subexpression.
double evaluate(const Expr& e, const EvalEnv& env);

}  // namespace liesym
