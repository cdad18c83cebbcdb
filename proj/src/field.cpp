#include "twistlab/field.hpp"

namespace twistlab {

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FieldSpec FieldSpec::prime(uint32_t p) {
    if (!is_prime(p))
        throw std::invalid_argument("FieldSpec: characteristic " + std::to_string(p) + " is not prime");
    return {FieldKind::PrimeField, p};
}

std::string FieldSpec::str() const {
    return kind == FieldKind::Rationals ? "rationals" : "prime " + std::to_string(characteristic);
}

Scalar Scalar::of_int(const FieldSpec& f, long long n) {
    Scalar s;
    s.field_ = f;
    if (f.kind == FieldKind::Rationals) {
        s.q_ = mpq_class(static_cast<long>(n));
    } else {
        long long p = f.characteristic;
        long long r = n % p;
        if (r < 0) r += p;
        s.v_ = static_cast<uint32_t>(r);
    }
    return s;
}

Scalar Scalar::of_fraction(const FieldSpec& f, long long num, long long den) {
    if (den == 0) throw std::invalid_argument("Scalar: zero denominator");
    if (f.kind == FieldKind::Rationals) {
        Scalar s;
        s.field_ = f;
        s.q_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
        s.q_.canonicalize();
        return s;
    }
    return of_int(f, num) / of_int(f, den);
}

bool Scalar::is_zero() const {
    return field_.kind == FieldKind::Rationals ? q_ == 0 : v_ == 0;
}

bool Scalar::is_one() const {
    return field_.kind == FieldKind::Rationals ? q_ == 1 : v_ == 1;
}

void Scalar::require_same(const Scalar& o) const {
    if (field_ != o.field_)
        throw std::invalid_argument("Scalar: mixed-field arithmetic");
}

Scalar Scalar::operator+(const Scalar& o) const {
    require_same(o);
    Scalar s = *this;
    if (field_.kind == FieldKind::Rationals)
        s.q_ = q_ + o.q_;
    else
        s.v_ = static_cast<uint32_t>((uint64_t(v_) + o.v_) % field_.characteristic);
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    require_same(o);
    Scalar s = *this;
    if (field_.kind == FieldKind::Rationals)
        s.q_ = q_ * o.q_;
    else
        s.v_ = static_cast<uint32_t>((uint64_t(v_) * o.v_) % field_.characteristic);
    return s;
}

Scalar Scalar::operator-() const {
    Scalar s = *this;
    if (field_.kind == FieldKind::Rationals)
        s.q_ = -q_;
    else if (v_ != 0)
        s.v_ = field_.characteristic - v_;
    return s;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw std::domain_error("Scalar: division by zero");
    Scalar s = *this;
    if (field_.kind == FieldKind::Rationals) {
        s.q_ = 1 / q_;
        return s;
    }
    // extended Euclid mod p
    int64_t p = field_.characteristic;
    int64_t a = v_, b = p, x0 = 1, x1 = 0;
    while (b != 0) {
        int64_t q = a / b;
        int64_t t = a - q * b; a = b; b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
    }
    x0 %= p;
    if (x0 < 0) x0 += p;
    s.v_ = static_cast<uint32_t>(x0);
    return s;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

bool Scalar::operator==(const Scalar& o) const {
    if (field_ != o.field_) return false;
    return field_.kind == FieldKind::Rationals ? q_ == o.q_ : v_ == o.v_;
}

std::string Scalar::str() const {
    if (field_.kind == FieldKind::PrimeField) return std::to_string(v_);
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

}  // namespace twistlab
