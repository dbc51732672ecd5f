#include "liesym/rational.hpp"

#include "liesym/errors.hpp"

#include <cmath>
#include <functional>

namespace liesym {

Rational rational_from_string(const std::string& text) {
    std::string s = text;
    Rational scale = 1;
    if (auto dot = s.find('.'); dot != std::string::npos && s.find('/') == std::string::npos) {
        // Exact decimal: shift the point out.
        std::string frac = s.substr(dot + 1);
        s = s.substr(0, dot) + frac;
        if (s.empty() || s == "-" || s == "+") throw ValueError("invalid rational '" + text + "'");
        mpz_class ten_pow;
        mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, frac.size());
        scale = Rational(1, 1) / Rational(ten_pow);
    }
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) throw ValueError("invalid rational '" + text + "'");
    if (q.get_den() == 0) throw ValueError("zero denominator in '" + text + "'");
    q.canonicalize();
    q *= scale;
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw ValueError("non-finite value cannot be made exact");
    Rational q(v);
    q.canonicalize();
    return q;
}

static std::size_t hash_mpz(const mpz_class& z) {
    std::size_t h = static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 7);
    std::size_t limbs = mpz_size(z.get_mpz_t());
    for (std::size_t i = 0; i < limbs; ++i) {
        h ^= std::hash<mp_limb_t>{}(mpz_getlimbn(z.get_mpz_t(), i)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

std::size_t hash_value(const Rational& q) {
    return hash_mpz(q.get_num()) * 31 + hash_mpz(q.get_den());
}

Rational floor(const Rational& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(f);
}

Rational pow(const Rational& q, long k) {
    if (k < 0) {
        if (q == 0) throw DomainError("division by zero");
        return Rational(1) / pow(q, -k);
    }
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(k));
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(k));
    Rational out(num, den);
    out.canonicalize();
    return out;
}

bool exact_root(const Rational& value, unsigned long degree, Rational& out) {
    if (value < 0) return false;
    mpz_class a, b;
    if (mpz_root(a.get_mpz_t(), value.get_num_mpz_t(), degree) == 0) return false;
    if (mpz_root(b.get_mpz_t(), value.get_den_mpz_t(), degree) == 0) return false;
    out = Rational(a, b);
    out.canonicalize();
    return true;
}

}  // namespace liesym
