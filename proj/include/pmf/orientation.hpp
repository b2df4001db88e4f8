#pragma once

#include "pmf/measures.hpp"

namespace pmf {

/// Truncated power series in a formal variable u whose coefficients are
/// rational-flavor q-expansions; all arithmetic truncates at u^D.
class CharSeries {
public:
    CharSeries() = default;
    CharSeries(CycRingPtr ring, long D, long Q); // zero series

    long D() const { return (long)t_.size() - 1; }
    long Q() const { return Qprec_; }
    const CycRingPtr& ring() const { return ring_; }
    const QExpansion& t(long i) const { return t_[i]; }
    QExpansion& t(long i) { return t_[i]; }

    static CharSeries one(const CycRingPtr& ring, long D, long Q);
    static CharSeries variable(const CycRingPtr& ring, long D, long Q); // u

    CharSeries operator+(const CharSeries& o) const;
    CharSeries operator-(const CharSeries& o) const;
    CharSeries operator*(const CharSeries& o) const;
    CharSeries scale(const CycScalar& s) const;
    CharSeries pow(long n) const;

    /// Multiplicative inverse; needs an invertible scalar constant term.
    CharSeries inverse() const;
    /// exp of a series with zero constant term.
    CharSeries exp() const;
    /// this(o(u)) for o with zero constant term.
    CharSeries compose(const CharSeries& o) const;

    bool is_identity_map() const; // equals u exactly up to u^D

private:
    CycRingPtr ring_;
    long Qprec_ = 0;
    std::vector<QExpansion> t_;
};

/// K(u) = exp(sum_{k=2..D} (G_k + G_k^chi) u^k / k!) over the rational-flavor
/// cyclotomic ring of chi.
CharSeries characteristic_series(const DirichletCharacter& chi, long D, long Q);

/// exp_F(u) = u / K(u) and its compositional inverse log_F.
std::pair<CharSeries, CharSeries> fgl_exponential(const CharSeries& K);

/// u^n-coefficient of K(u)^{n+1}: the CP^n genus.
QExpansion genus_cpn(const CharSeries& K, long n);

struct MembershipReport {
    bool pass = false;
    long q_checked = 0;
    std::vector<CycScalar> solution; // coordinates in the basis when pass
};

/// Expresses f in the span of `basis` through q^{Q_eff} by Gaussian
/// elimination over Q(zeta_L). Throws DegenerateBasisError when the basis
/// is dependent at this precision.
MembershipReport basis_membership(const QExpansion& f, const std::vector<QExpansion>& basis,
                                  long q_eff);

struct MeanConditionReport {
    long c = 0;
    std::vector<long> valuations; // v_p(m_r - mean target)
    bool pass = false;
};

struct KernelConditionEntry {
    long k = 0;
    bool pass = false;
    long first_fail_index = -1;
};

struct ConditionReport {
    // condition 1: Kummer congruences of the mu moments, per c
    std::vector<std::pair<long, KummerUnitsReport>> kummer;
    // condition 2: mean limits against (1/p) log(c^{p-1}), per c
    std::vector<MeanConditionReport> means;
    // condition 3: p-stabilized g_k in the kernel of 1 - <p>U
    std::vector<KernelConditionEntry> kernels;
    // condition 4: classicality of g_1 via basis membership
    MembershipReport classicality;
    bool overall = false;
};

struct OrientParams {
    DirichletCharacter chi;
    long p = 5;
    std::vector<long> c_set;
    long K = 8;
    long Q = 16;
    long M = 5;
    long r_max = 3;
    // perturbation hook: adds 1 to q^{inject_q} of moment inject_k (off when < 0)
    long inject_k = -1;
    long inject_q = 0;
};

ConditionReport verify_conditions(const OrientParams& op,
                                  const std::vector<QExpansion>* basis = nullptr);

} // namespace pmf
