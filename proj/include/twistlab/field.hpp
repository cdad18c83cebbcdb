#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace twistlab {

enum class FieldKind { Rationals, PrimeField };

struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    uint32_t characteristic = 0;  // prime p when kind == PrimeField

    static FieldSpec rationals() { return {FieldKind::Rationals, 0}; }
    static FieldSpec prime(uint32_t p);

    bool operator==(const FieldSpec&) const = default;
    std::string str() const;
};

bool is_prime(uint64_t n);

/* Exact scalar of a FieldSpec: arbitrary-precision rational, or least
 * residue mod p.  Always canonical (lowest terms / least residue), so
 * equality and printing are well defined bit for bit. */
class Scalar {
public:
    Scalar() = default;

    static Scalar zero(const FieldSpec& f) { return of_int(f, 0); }
    static Scalar one(const FieldSpec& f) { return of_int(f, 1); }
    static Scalar of_int(const FieldSpec& f, long long n);
    static Scalar of_fraction(const FieldSpec& f, long long num, long long den);

    FieldSpec field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;  // throws on zero divisor
    Scalar operator-() const;
    Scalar inverse() const;

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // "p/q" for rationals (plain integer when q=1), residue for prime fields
    std::string str() const;

private:
    FieldSpec field_;
    mpq_class q_ = 0;   // used when Rationals
    uint32_t v_ = 0;    // used when PrimeField

    void require_same(const Scalar& o) const;
};

}  // namespace twistlab
