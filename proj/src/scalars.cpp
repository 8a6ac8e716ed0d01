#include "chordbench/scalars.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace chordbench {

double& float_tolerance() {
    static double tol = 1e-12;
    return tol;
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// "mantissa e exponent" decimal literal -> exact rational
std::optional<rational> parse_decimal(const std::string& text) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s.erase(0, 1);
    }
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        std::string etail = s.substr(epos + 1);
        s.erase(epos);
        if (etail.empty()) return std::nullopt;
        bool eneg = false;
        if (etail[0] == '+' || etail[0] == '-') {
            eneg = etail[0] == '-';
            etail.erase(0, 1);
        }
        if (!all_digits(etail) || etail.size() > 6) return std::nullopt;
        exp10 = std::strtol(etail.c_str(), nullptr, 10);
        if (eneg) exp10 = -exp10;
    }
    std::string digits;
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exp10 -= static_cast<long>(s.size() - dot - 1);
    } else {
        digits = s;
    }
    if (!all_digits(digits)) return std::nullopt;

    mpz_class num(digits, 10);
    mpz_class den(1);
    mpz_class ten(10);
    if (exp10 >= 0) {
        mpz_class scale;
        mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exp10));
        num *= scale;
    } else {
        mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-exp10));
    }
    rational r(num, den);
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

}  // namespace

std::optional<rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    if (text.find('/') != std::string::npos) {
        rational r;
        if (r.set_str(text, 10) != 0) return std::nullopt;
        if (r.get_den() == 0) return std::nullopt;
        r.canonicalize();
        return r;
    }
    if (text.find('.') != std::string::npos || text.find('e') != std::string::npos ||
        text.find('E') != std::string::npos) {
        return parse_decimal(text);
    }
    // plain integer
    std::string s = text;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        s.erase(0, 1);
    }
    if (!all_digits(s)) return std::nullopt;
    rational r(mpz_class(s, 10));
    if (neg) r = -r;
    return r;
}

std::string format_rational(const rational& value) {
    rational v = value;
    v.canonicalize();
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

rational rational_sqrt_down(const rational& value, unsigned bits) {
    if (value < 0) throw domain_error("rational_sqrt_down: negative argument");
    if (value == 0) return rational(0);
    rational v = value;
    v.canonicalize();
    // sqrt(n/d) = sqrt(n*d)/d; scale by 4^bits before the integer sqrt so the
    // result lands on the grid 1/(d*2^bits), rounded toward zero.
    mpz_class nd = v.get_num() * v.get_den();
    mpz_class scaled = nd << (2 * bits);
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    rational out(root, v.get_den() << bits);
    out.canonicalize();
    return out;
}

double scalar_traits<double>::sqrt_down(double v) {
    if (v < 0) throw domain_error("sqrt_down: negative argument");
    double r = std::sqrt(v);
    if (r > 0 && r * r > v) r = std::nextafter(r, 0.0);
    return r;
}

std::optional<double> parse_double(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + text.size()) return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

}  // namespace chordbench
