#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pmf/errors.hpp"

namespace pmf {

// Number-theoretic helpers used throughout.
long euler_phi(long n);
int moebius(long n);
std::vector<long> divisors(long n);
bool is_prime(long n);
long gcd_long(long a, long b);

/// d^e mod p^M with the exponent reduced mod (p-1)p^{M-1} when gcd(d,p)=1.
/// For p | d the result is 0 as soon as the accumulated p-valuation reaches M.
mpz_class pow_reduce(const mpz_class& d, const mpz_class& e, long p, long M);

enum class Flavor { Rational, Residue };

class CycRing;
using CycRingPtr = std::shared_ptr<const CycRing>;

/// Coefficient ring Z[x]/Phi_L(x), either with exact rational coordinates or
/// with coordinates mod p^M (residue flavor, requires p coprime to L).
class CycRing : public std::enable_shared_from_this<CycRing> {
public:
    static CycRingPtr rational(long L);
    static CycRingPtr residue(long L, long p, long M);

    long conductor() const { return L_; }
    Flavor flavor() const { return flavor_; }
    long p() const { return p_; }
    long precision() const { return M_; }
    const mpz_class& modulus() const { return pM_; }
    long degree() const { return degree_; }

    /// Monic cyclotomic polynomial Phi_L, coefficients in Z, size degree+1.
    const std::vector<mpz_class>& phi() const { return phi_; }

    bool same_ring(const CycRing& o) const {
        return L_ == o.L_ && flavor_ == o.flavor_ && p_ == o.p_ && M_ == o.M_;
    }

private:
    CycRing(long L, Flavor f, long p, long M);

    long L_;
    Flavor flavor_;
    long p_ = 0;
    long M_ = 0;
    mpz_class pM_ = 0;
    long degree_;
    std::vector<mpz_class> phi_;
};

/// Element of a CycRing: phi(L) coordinates in the power basis of zeta_L,
/// always reduced mod Phi_L (and mod p^M in residue flavor).
class CycScalar {
public:
    CycScalar() = default;
    explicit CycScalar(CycRingPtr ring); // zero

    static CycScalar from_int(const CycRingPtr& ring, const mpz_class& n);
    static CycScalar from_rational(const CycRingPtr& ring, const mpq_class& q);
    /// Canonical reduction of an integer polynomial (coefficient of x^i at index i).
    static CycScalar from_poly(const CycRingPtr& ring, const std::vector<mpz_class>& poly);
    static CycScalar from_rational_poly(const CycRingPtr& ring, const std::vector<mpq_class>& poly);
    /// zeta_L^j
    static CycScalar root_of_unity(const CycRingPtr& ring, long j);

    const CycRingPtr& ring() const { return ring_; }
    bool is_zero() const;
    bool is_one() const;

    CycScalar operator+(const CycScalar& o) const;
    CycScalar operator-(const CycScalar& o) const;
    CycScalar operator-() const;
    CycScalar operator*(const CycScalar& o) const;
    bool operator==(const CycScalar& o) const;
    bool operator!=(const CycScalar& o) const { return !(*this == o); }

    CycScalar inverse() const; // throws NonUnitError
    CycScalar pow(unsigned long e) const;

    /// Residue flavor: min over coordinates of v_p, capped at M. Zero gives M.
    long valuation() const;
    /// Residue flavor: all coordinates divisible by p^m.
    bool divisible_by(long m) const;
    /// Residue flavor: exact division by p^m (throws if not divisible).
    CycScalar divide_exact_p(long m) const;
    /// Residue flavor: congruence mod p^m, m <= M.
    bool congruent(const CycScalar& o, long m) const;
    /// Residue flavor: drop to a ring with smaller precision M' <= M.
    CycScalar truncate_precision(const CycRingPtr& target) const;

    /// Map rational flavor to a residue ring with the same conductor.
    CycScalar reduce(const CycRingPtr& target) const; // throws DenominatorNotPrimeError

    // Coordinate access (power basis, size = ring degree).
    const std::vector<mpq_class>& rational_coords() const { return rc_; }
    const std::vector<mpz_class>& residue_coords() const { return zc_; }

    std::string to_string() const;

private:
    void check_same(const CycScalar& o) const;

    CycRingPtr ring_;
    std::vector<mpq_class> rc_; // rational flavor
    std::vector<mpz_class> zc_; // residue flavor
};

/// Rational-flavor p-valuation of a single rational coordinate.
long vp_of_mpq(const mpq_class& q, long p);
/// Min p-valuation over the coordinates of a rational-flavor scalar.
long vp_rational(const CycScalar& a, long p);

} // namespace pmf
