#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace ihtk {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Thrown on malformed user input (bad files, invalid perversities, unknown
/// corpus names).  The CLI maps it to exit code 2.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& m) : std::runtime_error(m) {}
};

/// Thrown when a verification step fails (oracle mismatch, law violation).
/// The CLI maps it to exit code 1.
struct verify_error : std::runtime_error {
  explicit verify_error(const std::string& m) : std::runtime_error(m) {}
};

enum class RingKind { Integers, Rationals, PrimeField };

/// Coefficient ring selector.  PrimeField carries its modulus.
struct Ring {
  RingKind kind = RingKind::Integers;
  Int p = 0;

  static Ring Z() { return {RingKind::Integers, 0}; }
  static Ring Q() { return {RingKind::Rationals, 0}; }
  static Ring Fp(const Int& prime) {
    if (prime < 2) throw input_error("prime field modulus must be >= 2");
    return {RingKind::PrimeField, prime};
  }

  bool is_field() const { return kind != RingKind::Integers; }
  bool operator==(const Ring& o) const { return kind == o.kind && p == o.p; }
  bool operator!=(const Ring& o) const { return !(*this == o); }

  std::string name() const {
    switch (kind) {
      case RingKind::Integers: return "Z";
      case RingKind::Rationals: return "Q";
      default: return "F" + p.str();
    }
  }
};

/// Arithmetic of a coefficient field on Rat storage.  Over F_p every value is
/// kept as the canonical residue in [0, p) with denominator 1.
struct FieldOps {
  Ring R;

  explicit FieldOps(Ring r = Ring::Q()) : R(r) {
    if (!R.is_field()) throw input_error("FieldOps requires a field");
  }

  Rat norm(const Rat& x) const {
    if (R.kind == RingKind::Rationals) return x;
    Int num = boost::multiprecision::numerator(x) % R.p;
    Int den = boost::multiprecision::denominator(x) % R.p;
    if (den == 0) throw input_error("denominator divisible by modulus");
    if (num < 0) num += R.p;
    if (den < 0) den += R.p;
    return Rat(mulmod(num, invmod(den)));
  }
  Rat add(const Rat& a, const Rat& b) const { return norm(a + b); }
  Rat sub(const Rat& a, const Rat& b) const { return norm(a - b); }
  Rat mul(const Rat& a, const Rat& b) const {
    if (R.kind == RingKind::Rationals) return a * b;
    return Rat(mulmod(boost::multiprecision::numerator(norm(a)),
                      boost::multiprecision::numerator(norm(b))));
  }
  Rat neg(const Rat& a) const { return norm(-a); }
  Rat inv(const Rat& a) const {
    if (R.kind == RingKind::Rationals) {
      if (a == 0) throw std::domain_error("inverse of zero");
      return 1 / a;
    }
    return Rat(invmod(boost::multiprecision::numerator(norm(a))));
  }
  Rat div(const Rat& a, const Rat& b) const { return mul(a, inv(b)); }
  bool is_zero(const Rat& a) const {
    if (R.kind == RingKind::Rationals) return a == 0;
    return boost::multiprecision::numerator(a) % R.p == 0;
  }

 private:
  Int mulmod(const Int& a, const Int& b) const {
    Int r = (a * b) % R.p;
    if (r < 0) r += R.p;
    return r;
  }
  // Extended Euclid; modulus is prime so every nonzero residue is a unit.
  Int invmod(Int a) const {
    a %= R.p;
    if (a < 0) a += R.p;
    if (a == 0) throw std::domain_error("inverse of zero residue");
    Int t = 0, newt = 1, r = R.p, newr = a;
    while (newr != 0) {
      Int q = r / newr;
      Int tmp = t - q * newt;
      t = newt;
      newt = tmp;
      tmp = r - q * newr;
      r = newr;
      newr = tmp;
    }
    if (t < 0) t += R.p;
    return t;
  }
};

}  // namespace ihtk
