#include "pmf/qseries.hpp"

#include <algorithm>

namespace pmf {

QExpansion::QExpansion(CycRingPtr ring, long q_prec) : ring_(std::move(ring)) {
    if (q_prec < 0) throw ParameterError("q-precision must be >= 0");
    coeffs_.assign(q_prec + 1, CycScalar(ring_));
}

bool QExpansion::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const CycScalar& c) { return c.is_zero(); });
}

void QExpansion::merge_tags(const QExpansion& a, const QExpansion& b) {
    if (a.weight && b.weight && *a.weight == *b.weight) weight = a.weight;
    else weight.reset();
    level = (a.level == b.level) ? a.level : a.level / gcd_long(a.level, b.level) * b.level;
    if (a.nebentypus && b.nebentypus && a.nebentypus->modulus == b.nebentypus->modulus &&
        a.nebentypus->index == b.nebentypus->index)
        nebentypus = a.nebentypus;
    else
        nebentypus.reset();
}

QExpansion QExpansion::operator+(const QExpansion& o) const {
    if (!ring_->same_ring(*o.ring_)) throw RingMismatchError("q-expansions over different rings");
    QExpansion r(ring_, std::min(q_prec(), o.q_prec()));
    for (long n = 0; n <= r.q_prec(); ++n) r.coeffs_[n] = coeffs_[n] + o.coeffs_[n];
    r.merge_tags(*this, o);
    return r;
}

QExpansion QExpansion::operator-(const QExpansion& o) const {
    if (!ring_->same_ring(*o.ring_)) throw RingMismatchError("q-expansions over different rings");
    QExpansion r(ring_, std::min(q_prec(), o.q_prec()));
    for (long n = 0; n <= r.q_prec(); ++n) r.coeffs_[n] = coeffs_[n] - o.coeffs_[n];
    r.merge_tags(*this, o);
    return r;
}

QExpansion QExpansion::operator*(const QExpansion& o) const {
    if (!ring_->same_ring(*o.ring_)) throw RingMismatchError("q-expansions over different rings");
    QExpansion r(ring_, std::min(q_prec(), o.q_prec()));
    for (long i = 0; i <= r.q_prec(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        for (long j = 0; i + j <= r.q_prec(); ++j) {
            if (o.coeffs_[j].is_zero()) continue;
            r.coeffs_[i + j] = r.coeffs_[i + j] + coeffs_[i] * o.coeffs_[j];
        }
    }
    if (weight && o.weight) r.weight = *weight + *o.weight;
    r.level = (level == o.level) ? level : level / gcd_long(level, o.level) * o.level;
    return r;
}

QExpansion QExpansion::scale(const CycScalar& s) const {
    QExpansion r = *this;
    for (auto& c : r.coeffs_) c = c * s;
    return r;
}

QExpansion QExpansion::operator-() const {
    QExpansion r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

bool QExpansion::agrees_with(const QExpansion& o) const {
    if (!ring_->same_ring(*o.ring_)) throw RingMismatchError("q-expansions over different rings");
    long m = std::min(q_prec(), o.q_prec());
    for (long n = 0; n <= m; ++n)
        if (coeffs_[n] != o.coeffs_[n]) return false;
    return true;
}

QExpansion QExpansion::truncate(long new_prec) const {
    QExpansion r(ring_, std::min(new_prec, q_prec()));
    for (long n = 0; n <= r.q_prec(); ++n) r.coeffs_[n] = coeffs_[n];
    r.weight = weight;
    r.level = level;
    r.nebentypus = nebentypus;
    return r;
}

QExpansion QExpansion::reduce_padic(long p, long M) const {
    if (ring_->flavor() != Flavor::Rational)
        throw ParameterError("reduce_padic expects a rational-flavor series");
    auto target = CycRing::residue(ring_->conductor(), p, M);
    QExpansion r(target, q_prec());
    for (long n = 0; n <= q_prec(); ++n) r.coeffs_[n] = coeffs_[n].reduce(target);
    r.weight = weight;
    r.level = level;
    r.nebentypus = nebentypus;
    return r;
}

QExpansion QExpansion::truncate_precision(long M2) const {
    if (ring_->flavor() != Flavor::Residue)
        throw ParameterError("truncate_precision expects a residue-flavor series");
    auto target = CycRing::residue(ring_->conductor(), ring_->p(), M2);
    QExpansion r(target, q_prec());
    for (long n = 0; n <= q_prec(); ++n) r.coeffs_[n] = coeffs_[n].truncate_precision(target);
    r.weight = weight;
    r.level = level;
    r.nebentypus = nebentypus;
    return r;
}

long QExpansion::valuation() const {
    long best = ring_->precision();
    for (const auto& c : coeffs_) best = std::min(best, c.valuation());
    return best;
}

bool QExpansion::congruent(const QExpansion& o, long m) const {
    if (!ring_->same_ring(*o.ring_)) throw RingMismatchError("q-expansions over different rings");
    long mx = std::min(q_prec(), o.q_prec());
    for (long n = 0; n <= mx; ++n)
        if (!coeffs_[n].congruent(o.coeffs_[n], m)) return false;
    return true;
}

} // namespace pmf
