#pragma once

#include <functional>
#include <string>

#include "pmf/operators.hpp"

namespace pmf {

enum class Domain { Zp, ZpUnits };

/// A p-adic measure represented extensionally by its moments b_0..b_K,
/// each a residue-flavor q-expansion over a shared ring.
struct MomentSequence {
    std::vector<QExpansion> moments;
    Domain domain = Domain::Zp;
    std::string provenance = "custom";
    long p = 0, M = 0, Q = 0;
    long K() const { return (long)moments.size() - 1; }
};

/// Values on the binomial basis: c_m = (1/m!) sum_j s(m,j) b_j, together with
/// the achieved p-valuation slack of the divisibility test.
struct MahlerTable {
    std::vector<QExpansion> values;
    std::vector<long> slack; // per entry: achieved valuation minus required v_p(m!)
};

/// Signed Stirling numbers of the first kind, rows 0..K.
std::vector<std::vector<mpz_class>> stirling_first(long K);

/// Mahler transform of a Zp-domain moment sequence. The moments must carry
/// working precision at least M + v_p(K!) or InsufficientPrecision is thrown;
/// the returned entries live at precision M.
MahlerTable mahler_from_moments(const MomentSequence& b, long M);

struct KummerZpReport {
    bool pass = true;
    long fail_m = -1, fail_q = -1, fail_coord = -1;
};

/// Integrality of every Mahler entry (the generalized Kummer congruences
/// on Z_p, tested as a necessary condition at finite K, Q, M).
KummerZpReport kummer_check_zp(const MomentSequence& b, long M);

struct UnitsPairFailure {
    long k = 0, k2 = 0, r = 0, q_index = -1;
};

struct KummerUnitsReport {
    bool pass = true;
    long pairs_checked = 0;
    std::vector<UnitsPairFailure> failures;
};

/// For every pair k < k' with k' = k mod (p-1)p^r, checks b_k = b_{k'}
/// mod p^{r+1} coefficientwise (measures on Z_p^x).
KummerUnitsReport kummer_check_units(const MomentSequence& b);

/// Parameters shared by the Eisenstein measure constructions.
struct MeasureParams {
    DirichletCharacter chi;
    long p = 5;
    long M = 8;
    long Q = 32;
    long conductor = 0; // ring conductor; defaults to lcm(N, ord chi)
    CycRingPtr ring() const;
};

/// k-th moment of the Katz measure H^{a,b}: (1 - a^{k+1} chi(b)) G^chi_{k+1};
/// restricted variant additionally applies (1 - p^k Frob).
QExpansion h_moment(const MeasureParams& mp, const mpz_class& k, long a, long b, bool restricted);

/// k-th moment of the twisted measure: (1 - c^k)(1 - p^{k-1} Frob) G_k^chi.
QExpansion j_tilde_moment(const MeasureParams& mp, const mpz_class& k, long c);

/// k-th moment of the level-1 AHR measure in the doubled normalization:
/// (1 - c^k)(1 - p^{k-1} Frob) G_k for even k >= 2, zero for odd k.
QExpansion nu_bar_moment(const MeasureParams& mp, const mpz_class& k, long c);

/// mu_c^chi = nu_bar_c + J~_chi^{c,1}, momentwise.
QExpansion mu_moment(const MeasureParams& mp, const mpz_class& k, long c);

MomentSequence eisenstein_moments(const MeasureParams& mp, long a, long b, long K, bool restricted);
MomentSequence moments_j_tilde(const MeasureParams& mp, long c, long K);
MomentSequence moments_nu_bar(const MeasureParams& mp, long c, long K);
MomentSequence moments_mu(const MeasureParams& mp, long c, long K);

struct MeanLimit {
    std::vector<QExpansion> approximations; // moment at exponent (p-1)p^r
    std::vector<long> valuations;           // v_p of each approximation
    std::vector<long> diff_valuations;      // v_p(m_{r+1} - m_r)
};

/// Approximations to the mean of a measure via 1 = lim x^{(p-1)p^r}.
MeanLimit mean_via_limit(const std::function<QExpansion(const mpz_class&)>& moment_at,
                         long p, long r_max);

/// log_p(c^{p-1}) mod p^M via the power series on 1 + pZ_p.
mpz_class iwasawa_log(long c, long p, long M);

} // namespace pmf
