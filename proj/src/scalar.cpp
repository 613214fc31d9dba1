#include "spacedmod/scalar.hpp"

#include <unordered_map>

namespace spacedmod {

FieldDesc FieldDesc::prime_field(std::int64_t p) {
    if (p < 2 || p > (1 << 20) || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw std::invalid_argument("prime field modulus must be a prime <= 2^20, got " + std::to_string(p));
    return {Kind::Fp, p};
}

std::string FieldDesc::str() const {
    return is_q() ? "Q" : "F" + std::to_string(p);
}

ExactScalar::ExactScalar(std::int64_t r, std::int64_t p) {
    std::int64_t m = r % p;
    if (m < 0) m += p;
    v_ = FpElem{m, p};
}

ExactScalar ExactScalar::zero(const FieldDesc& f) {
    return f.is_q() ? ExactScalar(Rat(0)) : ExactScalar(0, f.p);
}

ExactScalar ExactScalar::one(const FieldDesc& f) {
    return f.is_q() ? ExactScalar(Rat(1)) : ExactScalar(1, f.p);
}

ExactScalar ExactScalar::from_int(std::int64_t n, const FieldDesc& f) {
    return f.is_q() ? ExactScalar(Rat(n)) : ExactScalar(n, f.p);
}

ExactScalar ExactScalar::from_rat(const Rat& q, const FieldDesc& f) {
    if (f.is_q()) return ExactScalar(q);
    Int num = boost::multiprecision::numerator(q);
    Int den = boost::multiprecision::denominator(q);
    std::int64_t n = static_cast<std::int64_t>(num % f.p);
    std::int64_t d = static_cast<std::int64_t>(den % f.p);
    if (d == 0) throw std::invalid_argument("denominator vanishes mod " + std::to_string(f.p));
    if (n < 0) n += f.p;
    return ExactScalar(n * inverse_mod(d, f.p) % f.p, f.p);
}

bool ExactScalar::is_zero() const {
    if (is_q()) return std::get<Rat>(v_) == 0;
    return std::get<FpElem>(v_).r == 0;
}

bool ExactScalar::is_one() const {
    if (is_q()) return std::get<Rat>(v_) == 1;
    const auto& e = std::get<FpElem>(v_);
    return e.r == 1 % e.p;
}

FieldDesc ExactScalar::field() const {
    if (is_q()) return FieldDesc::rationals();
    return FieldDesc{FieldDesc::Kind::Fp, std::get<FpElem>(v_).p};
}

const Rat& ExactScalar::rat() const {
    if (!is_q()) throw MixedFieldError();
    return std::get<Rat>(v_);
}

ExactScalar::FpElem ExactScalar::fp() const {
    if (is_q()) throw MixedFieldError();
    return std::get<FpElem>(v_);
}

void ExactScalar::check_same(const ExactScalar& o) const {
    if (is_q() != o.is_q()) throw MixedFieldError();
    if (!is_q() && std::get<FpElem>(v_).p != std::get<FpElem>(o.v_).p) throw MixedFieldError();
}

ExactScalar ExactScalar::operator+(const ExactScalar& o) const {
    check_same(o);
    if (is_q()) return ExactScalar(rat() + o.rat());
    auto a = fp(), b = o.fp();
    return ExactScalar(a.r + b.r, a.p);
}

ExactScalar ExactScalar::operator-(const ExactScalar& o) const {
    check_same(o);
    if (is_q()) return ExactScalar(rat() - o.rat());
    auto a = fp(), b = o.fp();
    return ExactScalar(a.r - b.r + a.p, a.p);
}

ExactScalar ExactScalar::operator*(const ExactScalar& o) const {
    check_same(o);
    if (is_q()) return ExactScalar(rat() * o.rat());
    auto a = fp(), b = o.fp();
    return ExactScalar(a.r * b.r % a.p, a.p);
}

ExactScalar ExactScalar::operator/(const ExactScalar& o) const {
    return *this * o.inverse();
}

ExactScalar ExactScalar::operator-() const {
    if (is_q()) return ExactScalar(-rat());
    auto a = fp();
    return ExactScalar(a.p - a.r, a.p);
}

ExactScalar ExactScalar::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (is_q()) return ExactScalar(Rat(1) / rat());
    auto a = fp();
    return ExactScalar(inverse_mod(a.r, a.p), a.p);
}

bool ExactScalar::operator==(const ExactScalar& o) const {
    if (is_q() != o.is_q()) return false;
    if (is_q()) return rat() == o.rat();
    return fp() == o.fp();
}

std::string ExactScalar::str() const {
    if (is_q()) {
        Int num = boost::multiprecision::numerator(rat());
        Int den = boost::multiprecision::denominator(rat());
        if (den == 1) return num.str();
        return num.str() + "/" + den.str();
    }
    auto e = fp();
    return std::to_string(e.r) + " mod " + std::to_string(e.p);
}

ExactScalar parse_scalar(const std::string& s, const FieldDesc& f) {
    if (!f.is_q()) {
        auto mod = s.find(" mod ");
        std::string body = mod == std::string::npos ? s : s.substr(0, mod);
        if (mod != std::string::npos) {
            std::int64_t p = std::stoll(s.substr(mod + 5));
            if (p != f.p) throw std::invalid_argument("modulus mismatch in '" + s + "'");
        }
        return ExactScalar(std::stoll(body), f.p);
    }
    auto slash = s.find('/');
    if (slash == std::string::npos) return ExactScalar(Rat(Int(s)));
    Int num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return ExactScalar(Rat(num, den));
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull}) {
        if (n == d) return true;
        if (n % d == 0) return false;
    }
    // deterministic Miller-Rabin for 64-bit
    auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
    };
    auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) {
        std::uint64_t r = 1;
        for (a %= m; e; e >>= 1, a = mulmod(a, a, m))
            if (e & 1) r = mulmod(r, a, m);
        return r;
    };
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (a % n == 0) continue;
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
    std::int64_t r = 1;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (exp & 1) r = r * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw std::domain_error("division by zero mod " + std::to_string(p));
    return pow_mod(a, p - 2, p);
}

std::int64_t primitive_root(std::int64_t p) {
    if (p == 2) return 1;
    std::int64_t phi = p - 1;
    std::vector<std::int64_t> factors;
    std::int64_t m = phi;
    for (std::int64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) factors.push_back(m);
    for (std::int64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (std::int64_t q : factors)
            if (pow_mod(g, phi / q, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root found; modulus not prime?");
}

std::int64_t discrete_log(std::int64_t a, std::int64_t p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw std::domain_error("discrete log of zero");
    if (p == 2) return 0;
    std::int64_t g = primitive_root(p);
    // baby-step giant-step
    std::int64_t n = p - 1;
    std::int64_t m = 1;
    while (m * m < n) ++m;
    std::unordered_map<std::int64_t, std::int64_t> baby;
    std::int64_t cur = 1;
    for (std::int64_t j = 0; j < m; ++j) {
        baby.emplace(cur, j);
        cur = cur * g % p;
    }
    std::int64_t ginv_m = pow_mod(inverse_mod(g, p), m, p);
    std::int64_t gamma = a;
    for (std::int64_t i = 0; i <= m; ++i) {
        auto it = baby.find(gamma);
        if (it != baby.end()) {
            std::int64_t e = (i * m + it->second) % n;
            return e;
        }
        gamma = gamma * ginv_m % p;
    }
    throw std::logic_error("discrete log not found; modulus not prime?");
}

}  // namespace spacedmod
