#include "liesym/errors.hpp"
#include "liesym/kernel.hpp"

#include <cctype>

namespace liesym {

namespace {

class Parser {
public:
    Parser(const std::string& text, int n) : s_(text), n_(n) {}

    Expr run() {
        Expr e = expr();
        skip();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    int n_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip();
        if (pos_ >= s_.size()) return '\0';
        char c = s_[pos_];
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '(' || c == ')' ||
              c == '+' || c == '-' || c == '*' || c == '/' || c == '^'))
            fail("unexpected character '" + std::string(1, c) + "'");
        return c;
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        std::vector<Expr> terms{term()};
        while (true) {
            if (accept('+')) terms.push_back(term());
            else if (accept('-')) terms.push_back(-term());
            else break;
        }
        return terms.size() == 1 ? terms[0] : Expr::add(terms);
    }

    Expr term() {
        Expr acc = unary();
        while (true) {
            if (accept('*')) acc = acc * unary();
            else if (accept('/')) acc = acc / unary();
            else break;
        }
        return acc;
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) return Expr::pow(base, unary());
        return base;
    }

    Expr primary() {
        char c = peek();
        if (c == '\0') fail("unexpected end of input");
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr number() {
        std::size_t start = pos_;
        std::string digits;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
        std::string frac;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) frac += s_[pos_++];
            if (digits.empty() && frac.empty()) fail_at("malformed number", start);
        }
        if (digits.empty()) digits = "0";
        mpz_class num(digits + frac), den(1);
        for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
        Rational q(num, den);
        q.canonicalize();
        return Expr(q);
    }

    int slot_of(char ch, std::size_t at, bool allow_u) const {
        if (ch == 't') return kTSlot;
        if (ch == 'u' && allow_u) return kUSlot;
        if (ch >= '1' && ch <= '9') {
            int i = ch - '0';
            if (i > n_) fail_at("index " + std::to_string(i) + " exceeds dimension " + std::to_string(n_), at);
            return i;
        }
        fail_at(std::string("invalid index character '") + ch + "'", at);
    }

    Expr identifier() {
        std::size_t start = pos_;
        std::string name;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) name += s_[pos_++];
        std::string suffix;
        bool has_suffix = false;
        if (pos_ < s_.size() && s_[pos_] == '_') {
            has_suffix = true;
            ++pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) suffix += s_[pos_++];
            if (suffix.empty()) fail("empty subscript");
        }
        if (!has_suffix && (name == "arctan" || name == "ln" || name == "exp")) {
            if (!accept('(')) fail("expected '(' after " + name);
            Expr a = expr();
            if (!accept(')')) fail("expected ')'");
            return name == "arctan" ? arctan(a) : (name == "ln" ? ln(a) : exp(a));
        }
        std::size_t sub_at = start + name.size() + 1;
        if (name == "u") {
            if (!has_suffix) return Expr::dep();
            std::vector<int> slots;
            for (std::size_t k = 0; k < suffix.size(); ++k) slots.push_back(slot_of(suffix[k], sub_at + k, false));
            if (slots.size() > 3) fail_at("jet order above 3", sub_at);
            return Expr::jet(JetIndex::make(slots));
        }
        if (name == "t" && !has_suffix) return Expr::time();
        if (name.size() > 1 && name[0] == 'x' && std::isdigit(static_cast<unsigned char>(name[1])) && !has_suffix) {
            std::string idx = name.substr(1);
            for (char ch : idx)
                if (!std::isdigit(static_cast<unsigned char>(ch))) fail_at("unknown symbol '" + name + "'", start);
            int i = std::stoi(idx);
            if (i < 1 || i > n_) fail_at("coordinate index " + idx + " out of range 1.." + std::to_string(n_), start);
            return Expr::coord(i);
        }
        std::optional<FuncName> fn;
        int findex = 0;
        if (name.size() > 2 && name.compare(0, 2, "xi") == 0 && std::isdigit(static_cast<unsigned char>(name[2]))) {
            std::string idx = name.substr(2);
            for (char ch : idx)
                if (!std::isdigit(static_cast<unsigned char>(ch))) fail_at("unknown symbol '" + name + "'", start);
            findex = std::stoi(idx);
            if (findex < 1 || findex > n_)
                fail_at("component index " + idx + " out of range 1.." + std::to_string(n_), start);
            fn = FuncName::Xi;
        } else if (name == "eta") {
            fn = FuncName::Eta;
        } else if (name == "phi") {
            fn = FuncName::Phi;
        } else if (name == "alpha") {
            fn = FuncName::Alpha;
        } else if (name == "lam") {
            fn = FuncName::Lam;
        }
        if (fn) {
            DerivCounts d{};
            FuncDeps deps = func_deps(*fn);
            for (std::size_t k = 0; k < suffix.size(); ++k) {
                int slot = slot_of(suffix[k], sub_at + k, true);
                bool ok = slot == kTSlot ? deps.t : (slot == kUSlot ? deps.u : deps.x);
                if (!ok) fail_at(std::string(func_base_name(*fn)) + " does not depend on '" + suffix[k] + "'", sub_at + k);
                ++d[slot];
            }
            return Expr::func(*fn, findex, d);
        }
        if (has_suffix || name == "x" || name == "xi") fail_at("unknown symbol '" + name + (has_suffix ? "_" + suffix : "") + "'", start);
        // q, r, eps, lam0, beta, gamma, kappa and any other plain name are parameters.
        return Expr::param(name);
    }
};

}  // namespace

Expr parse(const std::string& text, int n) {
    if (n < 1 || n > kMaxDim) throw IndexError("dimension must be in 1.." + std::to_string(kMaxDim));
    Parser p(text, n);
    return simplify(p.run());
}

}  // namespace liesym
