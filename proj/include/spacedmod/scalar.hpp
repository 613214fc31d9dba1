#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace spacedmod {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Ground field of a presentation: the rationals or a prime field F_p
/// with p <= 2^20.
struct FieldDesc {
    enum class Kind { Q, Fp } kind = Kind::Q;
    std::int64_t p = 0;

    static FieldDesc rationals() { return {Kind::Q, 0}; }
    static FieldDesc prime_field(std::int64_t p);

    bool is_q() const { return kind == Kind::Q; }
    bool operator==(const FieldDesc& o) const { return kind == o.kind && p == o.p; }
    std::string str() const;
};

struct MixedFieldError : std::logic_error {
    MixedFieldError() : std::logic_error("arithmetic between elements of different fields") {}
};

/// Exact field element: a reduced rational or a residue r mod p.
/// All arithmetic is total except division by zero; mixing elements of
/// different fields (or different moduli) throws MixedFieldError.
class ExactScalar {
  public:
    struct FpElem {
        std::int64_t r;
        std::int64_t p;
        bool operator==(const FpElem& o) const { return r == o.r && p == o.p; }
    };

    ExactScalar() : v_(Rat(0)) {}
    explicit ExactScalar(Rat q) : v_(std::move(q)) {}
    ExactScalar(std::int64_t r, std::int64_t p);  // residue mod p, reduced

    static ExactScalar zero(const FieldDesc& f);
    static ExactScalar one(const FieldDesc& f);
    static ExactScalar from_int(std::int64_t n, const FieldDesc& f);
    static ExactScalar from_rat(const Rat& q, const FieldDesc& f);  // Fp: q must have unit denominator mod p

    bool is_q() const { return std::holds_alternative<Rat>(v_); }
    bool is_zero() const;
    bool is_one() const;
    FieldDesc field() const;

    const Rat& rat() const;        // throws if not rational
    FpElem fp() const;             // throws if not prime-field

    ExactScalar operator+(const ExactScalar& o) const;
    ExactScalar operator-(const ExactScalar& o) const;
    ExactScalar operator*(const ExactScalar& o) const;
    ExactScalar operator/(const ExactScalar& o) const;  // throws on zero divisor
    ExactScalar operator-() const;
    ExactScalar inverse() const;

    bool operator==(const ExactScalar& o) const;
    bool operator!=(const ExactScalar& o) const { return !(*this == o); }

    /// "a/b" ("a" when b = 1) over Q, "r mod p" over F_p. Bit-exact round
    /// trip with parse_scalar.
    std::string str() const;

  private:
    std::variant<Rat, FpElem> v_;
    void check_same(const ExactScalar& o) const;
};

ExactScalar parse_scalar(const std::string& s, const FieldDesc& f);

// --- prime-field helpers -------------------------------------------------

bool is_prime_u64(std::uint64_t n);
std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod);
std::int64_t inverse_mod(std::int64_t a, std::int64_t p);

/// Smallest primitive root of F_p.
std::int64_t primitive_root(std::int64_t p);

/// Discrete logarithm of a to the base of the smallest primitive root,
/// i.e. e with g^e = a (mod p), 0 <= e < p-1. Requires a != 0.
std::int64_t discrete_log(std::int64_t a, std::int64_t p);

}  // namespace spacedmod
