#pragma once

#include <optional>

#include "pmf/chars.hpp"
#include "pmf/cyclo.hpp"

namespace pmf {

/// Truncated q-series a_0 + a_1 q + ... + a_Q q^Q with weight/level/nebentypus
/// tags. The retained exponent range is the usable precision: binary
/// operations truncate to the minimum of their inputs' precisions.
class QExpansion {
public:
    QExpansion() = default;
    QExpansion(CycRingPtr ring, long q_prec); // zero series

    const CycRingPtr& ring() const { return ring_; }
    long q_prec() const { return (long)coeffs_.size() - 1; }
    const CycScalar& coeff(long n) const { return coeffs_[n]; }
    CycScalar& coeff(long n) { return coeffs_[n]; }
    const std::vector<CycScalar>& coeffs() const { return coeffs_; }

    std::optional<long> weight;
    long level = 1;
    std::optional<DirichletCharacter> nebentypus;

    bool is_zero() const;

    QExpansion operator+(const QExpansion& o) const;
    QExpansion operator-(const QExpansion& o) const;
    QExpansion operator*(const QExpansion& o) const;
    QExpansion scale(const CycScalar& s) const;
    QExpansion operator-() const;

    /// Equality of coefficient arrays up to the minimum precision.
    bool agrees_with(const QExpansion& o) const;
    bool operator==(const QExpansion& o) const { return agrees_with(o); }

    QExpansion truncate(long new_prec) const;

    /// Rational flavor -> residue(p, M), coefficientwise.
    QExpansion reduce_padic(long p, long M) const;
    /// Residue flavor: drop to a smaller precision M'.
    QExpansion truncate_precision(long M2) const;

    /// Residue flavor: min coefficient valuation over q^0..q^prec, capped at M.
    long valuation() const;
    /// Residue flavor: coefficientwise congruence mod p^m up to min precision.
    bool congruent(const QExpansion& o, long m) const;

private:
    void merge_tags(const QExpansion& a, const QExpansion& b);

    CycRingPtr ring_;
    std::vector<CycScalar> coeffs_;
};

} // namespace pmf
