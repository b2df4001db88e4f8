#include "pmf/cyclo.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace pmf {

long gcd_long(long a, long b) {
    while (b) { long t = a % b; a = b; b = t; }
    return a < 0 ? -a : a;
}

long euler_phi(long n) {
    long result = n;
    for (long q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            while (n % q == 0) n /= q;
            result -= result / q;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

int moebius(long n) {
    int mu = 1;
    for (long q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            n /= q;
            if (n % q == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

std::vector<long> divisors(long n) {
    std::vector<long> ds;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            if (d != n / d) ds.push_back(n / d);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

mpz_class pow_reduce(const mpz_class& d, const mpz_class& e, long p, long M) {
    if (d < 0) throw ParameterError("pow_reduce: negative base");
    if (e < 0) throw ParameterError("pow_reduce: negative exponent");
    mpz_class pM;
    mpz_ui_pow_ui(pM.get_mpz_t(), (unsigned long)p, (unsigned long)M);
    if (e == 0) return mpz_class(1 % pM);
    mpz_class dm = d % pM;
    if (mpz_divisible_ui_p(d.get_mpz_t(), (unsigned long)p)) {
        if (d == 0) return mpz_class(0);
        // d = p^v * u; result is 0 once v*e >= M
        mpz_class rest = d;
        long v = (long)mpz_remove(rest.get_mpz_t(), d.get_mpz_t(), mpz_class(p).get_mpz_t());
        if (e >= M || v * e >= M) return mpz_class(0);
        mpz_class r;
        mpz_powm(r.get_mpz_t(), dm.get_mpz_t(), e.get_mpz_t(), pM.get_mpz_t());
        return r;
    }
    // unit base: exponent reduces mod (p-1)p^{M-1}
    mpz_class lam;
    mpz_ui_pow_ui(lam.get_mpz_t(), (unsigned long)p, (unsigned long)(M - 1));
    lam *= (p - 1);
    mpz_class er = e % lam;
    if (er == 0) er = lam; // any multiple works; keep exponent positive
    mpz_class r;
    mpz_powm(r.get_mpz_t(), dm.get_mpz_t(), er.get_mpz_t(), pM.get_mpz_t());
    return r;
}

// ---- integer polynomial helpers for Phi_L -------------------------------

namespace {

using ZPoly = std::vector<mpz_class>;

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    ZPoly r(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

// exact division by a monic-ish divisor with leading coeff +-1
ZPoly zdiv_exact(const ZPoly& num, const ZPoly& den) {
    ZPoly r = num;
    ZPoly q(num.size() - den.size() + 1, mpz_class(0));
    for (long i = (long)q.size() - 1; i >= 0; --i) {
        mpz_class c = r[i + den.size() - 1] / den.back();
        q[i] = c;
        if (c != 0)
            for (size_t j = 0; j < den.size(); ++j)
                r[i + j] -= c * den[j];
    }
    return q;
}

ZPoly x_pow_minus_one(long n) {
    ZPoly f(n + 1, mpz_class(0));
    f[0] = -1;
    f[n] = 1;
    return f;
}

ZPoly cyclotomic_poly(long L) {
    ZPoly num{mpz_class(1)};
    std::vector<long> denom_factors;
    for (long d : divisors(L)) {
        int mu = moebius(d);
        if (mu == 1) num = zmul(num, x_pow_minus_one(L / d));
        else if (mu == -1) denom_factors.push_back(L / d);
    }
    for (long n : denom_factors) num = zdiv_exact(num, x_pow_minus_one(n));
    return num;
}

std::mutex g_ring_mutex;
std::map<std::tuple<long, int, long, long>, CycRingPtr> g_ring_cache;

} // namespace

CycRing::CycRing(long L, Flavor f, long p, long M) : L_(L), flavor_(f), p_(p), M_(M) {
    if (L < 1) throw ParameterError("conductor must be positive");
    if (f == Flavor::Residue) {
        if (!is_prime(p)) throw ParameterError("residue flavor needs a prime p");
        if (M < 1) throw ParameterError("residue precision M must be >= 1");
        if (L % p == 0) throw ParameterError("residue flavor requires p coprime to the conductor");
        mpz_ui_pow_ui(pM_.get_mpz_t(), (unsigned long)p, (unsigned long)M);
    }
    phi_ = cyclotomic_poly(L);
    degree_ = (long)phi_.size() - 1;
}

CycRingPtr CycRing::rational(long L) {
    std::lock_guard<std::mutex> lock(g_ring_mutex);
    auto key = std::make_tuple(L, 0, 0L, 0L);
    auto it = g_ring_cache.find(key);
    if (it != g_ring_cache.end()) return it->second;
    auto r = CycRingPtr(new CycRing(L, Flavor::Rational, 0, 0));
    g_ring_cache[key] = r;
    return r;
}

CycRingPtr CycRing::residue(long L, long p, long M) {
    std::lock_guard<std::mutex> lock(g_ring_mutex);
    auto key = std::make_tuple(L, 1, p, M);
    auto it = g_ring_cache.find(key);
    if (it != g_ring_cache.end()) return it->second;
    auto r = CycRingPtr(new CycRing(L, Flavor::Residue, p, M));
    g_ring_cache[key] = r;
    return r;
}

// ---- CycScalar -----------------------------------------------------------

CycScalar::CycScalar(CycRingPtr ring) : ring_(std::move(ring)) {
    if (ring_->flavor() == Flavor::Rational) rc_.assign(ring_->degree(), mpq_class(0));
    else zc_.assign(ring_->degree(), mpz_class(0));
}

void CycScalar::check_same(const CycScalar& o) const {
    if (!ring_ || !o.ring_ || !ring_->same_ring(*o.ring_))
        throw RingMismatchError("operands live in different coefficient rings");
}

namespace {

// reduce a rational polynomial mod the monic Phi, in place
void reduce_mod_phi_q(std::vector<mpq_class>& poly, const std::vector<mpz_class>& phi) {
    long deg = (long)phi.size() - 1;
    for (long i = (long)poly.size() - 1; i >= deg; --i) {
        mpq_class c = poly[i];
        if (c != 0)
            for (long j = 0; j <= deg; ++j)
                poly[i - deg + j] -= c * mpq_class(phi[j]);
    }
    poly.resize(deg);
}

void reduce_mod_phi_z(std::vector<mpz_class>& poly, const std::vector<mpz_class>& phi,
                      const mpz_class& pM) {
    long deg = (long)phi.size() - 1;
    for (long i = (long)poly.size() - 1; i >= deg; --i) {
        mpz_class c = poly[i];
        if (c != 0)
            for (long j = 0; j <= deg; ++j)
                poly[i - deg + j] -= c * phi[j];
    }
    poly.resize(deg);
    for (auto& c : poly) {
        c %= pM;
        if (c < 0) c += pM;
    }
}

} // namespace

CycScalar CycScalar::from_poly(const CycRingPtr& ring, const std::vector<mpz_class>& poly) {
    CycScalar s(ring);
    if (ring->flavor() == Flavor::Rational) {
        std::vector<mpq_class> q(poly.begin(), poly.end());
        reduce_mod_phi_q(q, ring->phi());
        for (long i = 0; i < ring->degree(); ++i) s.rc_[i] = q[i];
        for (auto& c : s.rc_) c.canonicalize();
    } else {
        std::vector<mpz_class> z = poly;
        reduce_mod_phi_z(z, ring->phi(), ring->modulus());
        for (long i = 0; i < ring->degree(); ++i) s.zc_[i] = z[i];
    }
    return s;
}

CycScalar CycScalar::from_rational_poly(const CycRingPtr& ring, const std::vector<mpq_class>& poly) {
    if (ring->flavor() != Flavor::Rational)
        throw ParameterError("from_rational_poly requires a rational-flavor ring");
    CycScalar s(ring);
    std::vector<mpq_class> q = poly;
    reduce_mod_phi_q(q, ring->phi());
    q.resize(ring->degree(), mpq_class(0));
    for (long i = 0; i < ring->degree(); ++i) { s.rc_[i] = q[i]; s.rc_[i].canonicalize(); }
    return s;
}

CycScalar CycScalar::from_int(const CycRingPtr& ring, const mpz_class& n) {
    return from_poly(ring, {n});
}

CycScalar CycScalar::from_rational(const CycRingPtr& ring, const mpq_class& q) {
    if (ring->flavor() == Flavor::Rational) return from_rational_poly(ring, {q});
    // num * den^{-1} mod p^M
    mpz_class den = q.get_den();
    if (mpz_divisible_ui_p(den.get_mpz_t(), (unsigned long)ring->p()))
        throw DenominatorNotPrimeError("denominator divisible by p");
    mpz_class inv;
    if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), ring->modulus().get_mpz_t()))
        throw DenominatorNotPrimeError("denominator not invertible mod p^M");
    mpz_class v = (q.get_num() % ring->modulus()) * inv;
    return from_poly(ring, {v});
}

CycScalar CycScalar::root_of_unity(const CycRingPtr& ring, long j) {
    long L = ring->conductor();
    j %= L;
    if (j < 0) j += L;
    std::vector<mpz_class> poly(j + 1, mpz_class(0));
    poly[j] = 1;
    return from_poly(ring, poly);
}

bool CycScalar::is_zero() const {
    if (ring_->flavor() == Flavor::Rational) {
        for (const auto& c : rc_) if (c != 0) return false;
    } else {
        for (const auto& c : zc_) if (c != 0) return false;
    }
    return true;
}

bool CycScalar::is_one() const {
    return *this == from_int(ring_, 1);
}

CycScalar CycScalar::operator+(const CycScalar& o) const {
    check_same(o);
    CycScalar r(ring_);
    if (ring_->flavor() == Flavor::Rational) {
        for (size_t i = 0; i < rc_.size(); ++i) r.rc_[i] = rc_[i] + o.rc_[i];
    } else {
        for (size_t i = 0; i < zc_.size(); ++i) {
            r.zc_[i] = zc_[i] + o.zc_[i];
            if (r.zc_[i] >= ring_->modulus()) r.zc_[i] -= ring_->modulus();
        }
    }
    return r;
}

CycScalar CycScalar::operator-(const CycScalar& o) const {
    check_same(o);
    CycScalar r(ring_);
    if (ring_->flavor() == Flavor::Rational) {
        for (size_t i = 0; i < rc_.size(); ++i) r.rc_[i] = rc_[i] - o.rc_[i];
    } else {
        for (size_t i = 0; i < zc_.size(); ++i) {
            r.zc_[i] = zc_[i] - o.zc_[i];
            if (r.zc_[i] < 0) r.zc_[i] += ring_->modulus();
        }
    }
    return r;
}

CycScalar CycScalar::operator-() const {
    return CycScalar(ring_) - *this;
}

CycScalar CycScalar::operator*(const CycScalar& o) const {
    check_same(o);
    CycScalar r(ring_);
    long d = ring_->degree();
    if (ring_->flavor() == Flavor::Rational) {
        std::vector<mpq_class> prod(2 * d - 1, mpq_class(0));
        for (long i = 0; i < d; ++i) {
            if (rc_[i] == 0) continue;
            for (long j = 0; j < d; ++j)
                if (o.rc_[j] != 0) prod[i + j] += rc_[i] * o.rc_[j];
        }
        reduce_mod_phi_q(prod, ring_->phi());
        for (long i = 0; i < d; ++i) { r.rc_[i] = prod[i]; r.rc_[i].canonicalize(); }
    } else {
        std::vector<mpz_class> prod(2 * d - 1, mpz_class(0));
        for (long i = 0; i < d; ++i) {
            if (zc_[i] == 0) continue;
            for (long j = 0; j < d; ++j)
                if (o.zc_[j] != 0) prod[i + j] += zc_[i] * o.zc_[j];
        }
        reduce_mod_phi_z(prod, ring_->phi(), ring_->modulus());
        for (long i = 0; i < d; ++i) r.zc_[i] = prod[i];
    }
    return r;
}

bool CycScalar::operator==(const CycScalar& o) const {
    check_same(o);
    if (ring_->flavor() == Flavor::Rational) return rc_ == o.rc_;
    return zc_ == o.zc_;
}

CycScalar CycScalar::pow(unsigned long e) const {
    CycScalar base = *this;
    CycScalar acc = from_int(ring_, 1);
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

// ---- inversion -----------------------------------------------------------

namespace {

// extended gcd in Q[x]: returns s with s*a = gcd (mod phi); gcd normalized monic.
// Returns false if gcd(a, phi) != 1.
bool invert_mod_phi_q(const std::vector<mpq_class>& a_in, const std::vector<mpz_class>& phi,
                      std::vector<mpq_class>& out) {
    using QP = std::vector<mpq_class>;
    auto deg = [](const QP& f) {
        for (long i = (long)f.size() - 1; i >= 0; --i) if (f[i] != 0) return i;
        return -1L;
    };
    QP r0(phi.begin(), phi.end()), r1 = a_in;
    QP s0{mpq_class(0)}, s1{mpq_class(1)};
    while (deg(r1) >= 0) {
        // quotient of r0 by r1
        long d0 = deg(r0), d1 = deg(r1);
        if (d0 < d1) { std::swap(r0, r1); std::swap(s0, s1); continue; }
        QP q(d0 - d1 + 1, mpq_class(0));
        QP rr = r0;
        for (long i = d0 - d1; i >= 0; --i) {
            mpq_class c = rr[i + d1] / r1[d1];
            q[i] = c;
            if (c != 0)
                for (long j = 0; j <= d1; ++j)
                    rr[i + j] -= c * r1[j];
        }
        // s_new = s0 - q*s1
        QP snew(std::max(s0.size(), q.size() + s1.size()), mpq_class(0));
        for (size_t i = 0; i < s0.size(); ++i) snew[i] = s0[i];
        for (size_t i = 0; i < q.size(); ++i)
            if (q[i] != 0)
                for (size_t j = 0; j < s1.size(); ++j)
                    snew[i + j] -= q[i] * s1[j];
        r0 = r1; r1 = rr;
        s0 = s1; s1 = snew;
        // trim
        while (r1.size() > 1 && r1.back() == 0) r1.pop_back();
        if (r1.size() == 1 && r1[0] == 0) r1.clear();
    }
    long dg = deg(r0);
    if (dg != 0) return false; // nonconstant gcd
    mpq_class lead = r0[0];
    out.assign(s0.size(), mpq_class(0));
    for (size_t i = 0; i < s0.size(); ++i) { out[i] = s0[i] / lead; out[i].canonicalize(); }
    return true;
}

// inverse of a mod (phi, p) by extended gcd over F_p, then Hensel lift to p^M.
bool invert_mod_phi_residue(const std::vector<mpz_class>& a, const std::vector<mpz_class>& phi,
                            long p, long M, const mpz_class& pM, std::vector<mpz_class>& out) {
    using ZP = std::vector<mpz_class>;
    mpz_class P(p);
    auto norm = [&](ZP& f, const mpz_class& mod) {
        for (auto& c : f) { c %= mod; if (c < 0) c += mod; }
        while (f.size() > 1 && f.back() == 0) f.pop_back();
        if (f.size() == 1 && f[0] == 0) f.clear();
    };
    auto deg = [](const ZP& f) { return (long)f.size() - 1; };
    ZP r0(phi.begin(), phi.end()), r1 = a;
    norm(r0, P); norm(r1, P);
    ZP s0{mpz_class(0)}, s1{mpz_class(1)};
    while (!r1.empty()) {
        long d0 = deg(r0), d1 = deg(r1);
        if (d0 < d1) { std::swap(r0, r1); std::swap(s0, s1); continue; }
        mpz_class linv;
        mpz_invert(linv.get_mpz_t(), r1.back().get_mpz_t(), P.get_mpz_t());
        ZP q(d0 - d1 + 1, mpz_class(0));
        ZP rr = r0;
        for (long i = d0 - d1; i >= 0; --i) {
            mpz_class c = (rr[i + d1] * linv) % P;
            if (c < 0) c += P;
            q[i] = c;
            if (c != 0)
                for (long j = 0; j <= d1; ++j)
                    rr[i + j] -= c * r1[j];
        }
        ZP snew(std::max(s0.size(), q.size() + s1.size()), mpz_class(0));
        for (size_t i = 0; i < s0.size(); ++i) snew[i] = s0[i];
        for (size_t i = 0; i < q.size(); ++i)
            if (q[i] != 0)
                for (size_t j = 0; j < s1.size(); ++j)
                    snew[i + j] -= q[i] * s1[j];
        norm(snew, P);
        norm(rr, P);
        r0 = r1; r1 = rr;
        s0 = s1; s1 = snew;
    }
    if (deg(r0) != 0 || r0.empty()) return false;
    mpz_class linv;
    if (!mpz_invert(linv.get_mpz_t(), r0[0].get_mpz_t(), P.get_mpz_t())) return false;
    ZP y = s0;
    for (auto& c : y) c = (c * linv) % P;
    y.resize(phi.size() - 1, mpz_class(0));
    // Hensel: y <- y(2 - a*y) doubles the precision each step
    long prec = 1;
    auto mulmod = [&](const ZP& f, const ZP& g, const mpz_class& mod) {
        ZP prod(f.size() + g.size() - 1, mpz_class(0));
        for (size_t i = 0; i < f.size(); ++i)
            if (f[i] != 0)
                for (size_t j = 0; j < g.size(); ++j)
                    prod[i + j] += f[i] * g[j];
        reduce_mod_phi_z(prod, phi, mod);
        return prod;
    };
    ZP av = a;
    while (prec < M) {
        prec = std::min(2 * prec, M);
        mpz_class mod;
        mpz_ui_pow_ui(mod.get_mpz_t(), mpz_get_ui(P.get_mpz_t()), (unsigned long)prec);
        ZP ay = mulmod(av, y, mod);
        ZP two_minus(ay.size(), mpz_class(0));
        for (size_t i = 0; i < ay.size(); ++i) two_minus[i] = -ay[i];
        two_minus[0] += 2;
        y.resize(phi.size() - 1, mpz_class(0));
        y = mulmod(y, two_minus, mod);
        y.resize(phi.size() - 1, mpz_class(0));
    }
    for (auto& c : y) { c %= pM; if (c < 0) c += pM; }
    out = y;
    return true;
}

} // namespace

CycScalar CycScalar::inverse() const {
    if (is_zero()) throw NonUnitError("inverse of zero");
    CycScalar r(ring_);
    if (ring_->flavor() == Flavor::Rational) {
        std::vector<mpq_class> out;
        if (!invert_mod_phi_q(rc_, ring_->phi(), out))
            throw NonUnitError("element shares a factor with Phi_L");
        out.resize(ring_->degree(), mpq_class(0));
        reduce_mod_phi_q(out, ring_->phi());
        for (long i = 0; i < ring_->degree(); ++i) r.rc_[i] = out[i];
    } else {
        std::vector<mpz_class> out;
        if (!invert_mod_phi_residue(zc_, ring_->phi(), ring_->p(), ring_->precision(),
                                    ring_->modulus(), out))
            throw NonUnitError("element is not invertible mod p");
        out.resize(ring_->degree(), mpz_class(0));
        for (long i = 0; i < ring_->degree(); ++i) r.zc_[i] = out[i];
    }
    return r;
}

long CycScalar::valuation() const {
    if (ring_->flavor() != Flavor::Residue)
        throw ParameterError("valuation defined for residue flavor");
    long M = ring_->precision();
    long best = M;
    mpz_class P(ring_->p());
    for (const auto& c : zc_) {
        if (c == 0) continue;
        mpz_class rest;
        long v = (long)mpz_remove(rest.get_mpz_t(), c.get_mpz_t(), P.get_mpz_t());
        best = std::min(best, v);
    }
    return best;
}

bool CycScalar::divisible_by(long m) const {
    return valuation() >= std::min(m, ring_->precision());
}

CycScalar CycScalar::divide_exact_p(long m) const {
    if (ring_->flavor() != Flavor::Residue)
        throw ParameterError("divide_exact_p requires residue flavor");
    if (!divisible_by(m)) throw InsufficientPrecisionError("value not divisible by p^m");
    mpz_class pm;
    mpz_ui_pow_ui(pm.get_mpz_t(), (unsigned long)ring_->p(), (unsigned long)m);
    CycScalar r(ring_);
    for (size_t i = 0; i < zc_.size(); ++i) r.zc_[i] = zc_[i] / pm;
    return r;
}

bool CycScalar::congruent(const CycScalar& o, long m) const {
    check_same(o);
    if (ring_->flavor() != Flavor::Residue)
        throw ParameterError("congruent requires residue flavor");
    long mm = std::min(m, ring_->precision());
    mpz_class pm;
    mpz_ui_pow_ui(pm.get_mpz_t(), (unsigned long)ring_->p(), (unsigned long)mm);
    for (size_t i = 0; i < zc_.size(); ++i)
        if ((zc_[i] - o.zc_[i]) % pm != 0) return false;
    return true;
}

CycScalar CycScalar::truncate_precision(const CycRingPtr& target) const {
    if (ring_->flavor() != Flavor::Residue || target->flavor() != Flavor::Residue ||
        target->conductor() != ring_->conductor() || target->p() != ring_->p() ||
        target->precision() > ring_->precision())
        throw ParameterError("truncate_precision: incompatible target ring");
    CycScalar r(target);
    for (size_t i = 0; i < zc_.size(); ++i) r.zc_[i] = zc_[i] % target->modulus();
    return r;
}

CycScalar CycScalar::reduce(const CycRingPtr& target) const {
    if (ring_->flavor() != Flavor::Rational || target->flavor() != Flavor::Residue ||
        target->conductor() != ring_->conductor())
        throw ParameterError("reduce: need rational source and residue target with equal conductor");
    CycScalar r(target);
    for (long i = 0; i < ring_->degree(); ++i) {
        const mpq_class& q = rc_[i];
        mpz_class den = q.get_den();
        mpz_class inv;
        if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), target->modulus().get_mpz_t()))
            throw DenominatorNotPrimeError("coordinate denominator divisible by p");
        mpz_class v = ((q.get_num() % target->modulus()) * inv) % target->modulus();
        if (v < 0) v += target->modulus();
        r.zc_[i] = v;
    }
    return r;
}

std::string CycScalar::to_string() const {
    std::ostringstream os;
    os << "[";
    if (ring_->flavor() == Flavor::Rational) {
        for (size_t i = 0; i < rc_.size(); ++i) {
            if (i) os << ", ";
            os << rc_[i].get_str();
        }
    } else {
        for (size_t i = 0; i < zc_.size(); ++i) {
            if (i) os << ", ";
            os << zc_[i].get_str();
        }
    }
    os << "]";
    return os.str();
}

long vp_of_mpq(const mpq_class& q, long p) {
    if (q == 0) return 1000000000L;
    mpz_class P(p), rest;
    long vn = (long)mpz_remove(rest.get_mpz_t(), q.get_num().get_mpz_t(), P.get_mpz_t());
    long vd = (long)mpz_remove(rest.get_mpz_t(), q.get_den().get_mpz_t(), P.get_mpz_t());
    return vn - vd;
}

long vp_rational(const CycScalar& a, long p) {
    long best = 1000000000L;
    for (const auto& c : a.rational_coords()) best = std::min(best, vp_of_mpq(c, p));
    return best;
}

} // namespace pmf
