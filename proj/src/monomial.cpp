#include "spacedmod/monomial.hpp"

#include <sstream>

namespace spacedmod {

bool MonoGen::operator<(const MonoGen& o) const {
    if (is_prime() != o.is_prime()) return is_prime();
    if (is_prime()) return std::get<Int>(g) < std::get<Int>(o.g);
    return std::get<std::string>(g) < std::get<std::string>(o.g);
}

std::string MonoGen::str() const {
    if (is_prime()) return std::get<Int>(g).str();
    return std::get<std::string>(g);
}

RadMonomial RadMonomial::minus_one() {
    RadMonomial m;
    m.sign_ = -1;
    return m;
}

RadMonomial RadMonomial::symbol(const std::string& name, Rat exponent) {
    RadMonomial m;
    if (exponent != 0) m.factors_.emplace(MonoGen::symbol(name), std::move(exponent));
    return m;
}

namespace {

// Trial division up to 2^20, then a primality check on the cofactor.
void factor_into(std::map<MonoGen, Rat>& out, Int n, int expsign) {
    constexpr std::int64_t kBound = 1 << 20;
    for (std::int64_t d = 2; d <= kBound && Int(d) * d <= n; ++d) {
        int e = 0;
        while (n % d == 0) { n /= d; ++e; }
        if (e) out[MonoGen::prime(Int(d))] += Rat(e * expsign);
    }
    if (n > 1) {
        if (!(n <= std::numeric_limits<std::uint64_t>::max() &&
              is_prime_u64(static_cast<std::uint64_t>(n))))
            throw std::domain_error("cannot factor " + n.str() + ": composite cofactor beyond trial bound");
        out[MonoGen::prime(n)] += Rat(expsign);
    }
}

void drop_zeros(std::map<MonoGen, Rat>& m) {
    for (auto it = m.begin(); it != m.end();)
        it = (it->second == 0) ? m.erase(it) : std::next(it);
}

std::string rat_str(const Rat& q) {
    Int num = boost::multiprecision::numerator(q);
    Int den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

}  // namespace

RadMonomial RadMonomial::from_rational(const Rat& q) {
    if (q == 0) throw std::domain_error("monomials represent nonzero values only");
    RadMonomial m;
    Int num = boost::multiprecision::numerator(q);
    Int den = boost::multiprecision::denominator(q);
    if (num < 0) { m.sign_ = -1; num = -num; }
    factor_into(m.factors_, num, +1);
    factor_into(m.factors_, den, -1);
    drop_zeros(m.factors_);
    return m;
}

RadMonomial RadMonomial::mul(const RadMonomial& o) const {
    RadMonomial m;
    m.sign_ = sign_ * o.sign_;
    m.factors_ = factors_;
    for (const auto& [g, e] : o.factors_) m.factors_[g] += e;
    drop_zeros(m.factors_);
    return m;
}

RadMonomial RadMonomial::inverse() const {
    RadMonomial m;
    m.sign_ = sign_;
    for (const auto& [g, e] : factors_) m.factors_.emplace(g, -e);
    return m;
}

RadMonomial RadMonomial::pow(const Rat& q) const {
    RadMonomial m;
    if (sign_ == -1) {
        Int num = boost::multiprecision::numerator(q);
        Int den = boost::multiprecision::denominator(q);
        if (den % 2 == 0) throw NegativeBaseFractionalPower();
        m.sign_ = (num % 2 == 0) ? 1 : -1;
    }
    if (q != 0)
        for (const auto& [g, e] : factors_) m.factors_.emplace(g, e * q);
    return m;
}

bool RadMonomial::operator==(const RadMonomial& o) const {
    return sign_ == o.sign_ && factors_ == o.factors_;
}

std::optional<Rat> RadMonomial::as_rational() const {
    Rat v(sign_);
    for (const auto& [g, e] : factors_) {
        if (!g.is_prime()) return std::nullopt;
        Int num = boost::multiprecision::numerator(e);
        Int den = boost::multiprecision::denominator(e);
        if (den != 1) return std::nullopt;
        bool neg = num < 0;
        Int k = neg ? Int(-num) : num;
        Rat f(1);
        const Int& p = std::get<Int>(g.g);
        for (Int i = 0; i < k; ++i) f *= Rat(p);
        v *= neg ? Rat(1) / f : f;
    }
    return v;
}

std::string RadMonomial::str() const {
    std::ostringstream out;
    if (sign_ < 0) out << '-';
    if (factors_.empty()) {
        out << '1';
        return out.str();
    }
    bool first = true;
    for (const auto& [g, e] : factors_) {
        if (!first) out << '*';
        first = false;
        out << g.str() << '^' << rat_str(e);
    }
    return out.str();
}

RadMonomial parse_monomial(const std::string& s) {
    std::string body = s;
    RadMonomial m;
    bool neg = false;
    if (!body.empty() && body[0] == '-') { neg = true; body = body.substr(1); }
    if (body.empty()) throw std::invalid_argument("empty monomial");
    if (body == "1") return neg ? RadMonomial::minus_one() : RadMonomial::one();
    RadMonomial acc = neg ? RadMonomial::minus_one() : RadMonomial::one();
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto star = body.find('*', pos);
        std::string part = body.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
        auto caret = part.rfind('^');
        if (caret == std::string::npos) throw std::invalid_argument("missing exponent in '" + part + "'");
        std::string gen = part.substr(0, caret);
        std::string exp = part.substr(caret + 1);
        Rat e;
        auto slash = exp.find('/');
        if (slash == std::string::npos) e = Rat(Int(exp));
        else e = Rat(Int(exp.substr(0, slash)), Int(exp.substr(slash + 1)));
        RadMonomial factor;
        if (!gen.empty() && (std::isdigit(static_cast<unsigned char>(gen[0]))))
            factor = RadMonomial::from_rational(Rat(Int(gen))).pow(e);
        else
            factor = RadMonomial::symbol(gen, e);
        acc = acc.mul(factor);
        if (star == std::string::npos) break;
        pos = star + 1;
    }
    return acc;
}

}  // namespace spacedmod
