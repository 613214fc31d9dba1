#pragma once

#include "spacedmod/scalar.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>

namespace spacedmod {

/// Raised when a fractional power with even reduced denominator is taken
/// of a negative monomial. Callers switch to symbolic mode on this.
struct NegativeBaseFractionalPower : std::domain_error {
    NegativeBaseFractionalPower()
        : std::domain_error("fractional power with even denominator of a negative base") {}
};

/// Generator of the monomial group: a prime integer or a named symbol.
/// Primes sort before symbols; primes numerically, symbols lexicographically.
struct MonoGen {
    std::variant<Int, std::string> g;

    static MonoGen prime(Int p) { return {std::move(p)}; }
    static MonoGen symbol(std::string s) { return {std::move(s)}; }
    bool is_prime() const { return std::holds_alternative<Int>(g); }
    bool operator<(const MonoGen& o) const;
    bool operator==(const MonoGen& o) const { return g == o.g; }
    std::string str() const;
};

/// Signed formal product of generators with rational exponents.
///
/// Canonical form: zero exponents absent, generators sorted. The set is an
/// abelian group under multiplication; rational powers are total on
/// sign-positive elements. Positive rationals embed by prime factorization
/// and the embedding round-trips exactly.
class RadMonomial {
  public:
    RadMonomial() = default;  // the identity, 1

    static RadMonomial one() { return RadMonomial(); }
    static RadMonomial minus_one();
    static RadMonomial symbol(const std::string& name, Rat exponent = Rat(1));
    /// Embed a nonzero rational by prime factorization of numerator and
    /// denominator. Throws if a factor beyond the trial bound is composite.
    static RadMonomial from_rational(const Rat& q);

    int sign() const { return sign_; }
    bool is_one() const { return sign_ == 1 && factors_.empty(); }
    const std::map<MonoGen, Rat>& factors() const { return factors_; }

    RadMonomial mul(const RadMonomial& o) const;
    RadMonomial inverse() const;
    /// Every exponent multiplied by q. Pre: if q has even reduced
    /// denominator the sign must be +1; otherwise throws.
    RadMonomial pow(const Rat& q) const;

    bool operator==(const RadMonomial& o) const;
    bool operator!=(const RadMonomial& o) const { return !(*this == o); }

    /// The rational this monomial denotes, if all exponents are integral
    /// and all generators are primes.
    std::optional<Rat> as_rational() const;

    /// "s g1^e1*g2^e2*..." with s an optional leading '-', exponents as
    /// "n" or "n/d"; "1"/"-1" for the trivial monomials. Bit-exact round
    /// trip with parse_monomial.
    std::string str() const;

  private:
    int sign_ = 1;
    std::map<MonoGen, Rat> factors_;
};

RadMonomial parse_monomial(const std::string& s);

}  // namespace spacedmod
