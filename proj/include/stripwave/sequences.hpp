#pragma once
// Two-sided cosine coefficient algebra on the quarter lattice.
//
// A function u(x1,x2) = sum_n alpha_n U_n cos(2 pi n1~ x1) cos(2 pi n2~ x2),
// ni~ = ni / (2 di), is stored through its coefficients U_n on the finite box
// {0..n1max} x {0..n2max}.  The weight alpha_n (1/2/4 by how many indices
// vanish) makes the stored quarter-lattice sums match the full Z^2 sums of
// the underlying even expansion; all norms and inner products below carry it.

#include <vector>
#include <string>
#include <utility>
#include <cmath>

#include <Eigen/Core>

#include "stripwave/errors.hpp"
#include "stripwave/interval.hpp"
#include "stripwave/numtraits.hpp"
#include "stripwave/scalar_ops.hpp"

namespace stripwave {

struct IndexBox {
    int n1max = 0, n2max = 0;
    bool operator==(const IndexBox&) const = default;
    bool contains(int n1, int n2) const { return n1 >= 0 && n2 >= 0 && n1 <= n1max && n2 <= n2max; }
    long size() const { return long(n1max + 1) * long(n2max + 1); }
};

inline double alpha_weight(int n1, int n2) {
    return (n1 == 0 ? 1.0 : 2.0) * (n2 == 0 ? 1.0 : 2.0);
}

template <class S>
struct CoeffSeq {
    IndexBox box;
    double d1 = 0, d2 = 0; // half-periods of the domain (-d1,d1) x (-d2,d2)
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> a; // (n1max+1) x (n2max+1)

    CoeffSeq() = default;
    CoeffSeq(IndexBox b, double d1_, double d2_) : box(b), d1(d1_), d2(d2_) {
        if (b.n1max < 0 || b.n2max < 0 || d1_ <= 0 || d2_ <= 0)
            throw ShapeMismatch("bad coefficient box or domain");
        a.setZero(b.n1max + 1, b.n2max + 1);
    }

    S& at(int n1, int n2) { return a(n1, n2); }
    const S& at(int n1, int n2) const { return a(n1, n2); }

    // reflected lookup over Z^2: index |.|, zero outside the box
    S look(long n1, long n2) const {
        long i = n1 < 0 ? -n1 : n1, j = n2 < 0 ? -n2 : n2;
        if (i > box.n1max || j > box.n2max) return S(0.0);
        return a(i, j);
    }

    bool same_domain(const CoeffSeq& o) const { return d1 == o.d1 && d2 == o.d2; }
};

template <class S>
void require_same_domain(const CoeffSeq<S>& u, const CoeffSeq<S>& v) {
    if (!u.same_domain(v)) throw ShapeMismatch("coefficient sequences live on different domains");
}

// e0: the coefficient sequence of the constant function 1
template <class S>
CoeffSeq<S> unit_seq(IndexBox box, double d1, double d2) {
    CoeffSeq<S> e(box, d1, d2);
    e.at(0, 0) = S(1.0);
    return e;
}

template <class S>
CoeffSeq<S> project(const CoeffSeq<S>& u, IndexBox box) {
    CoeffSeq<S> out(box, u.d1, u.d2);
    int i1 = std::min(box.n1max, u.box.n1max), i2 = std::min(box.n2max, u.box.n2max);
    for (int i = 0; i <= i1; ++i)
        for (int j = 0; j <= i2; ++j) out.at(i, j) = u.at(i, j);
    return out;
}

template <class S>
CoeffSeq<S> seq_add(const CoeffSeq<S>& u, const CoeffSeq<S>& v) {
    require_same_domain(u, v);
    IndexBox box{std::max(u.box.n1max, v.box.n1max), std::max(u.box.n2max, v.box.n2max)};
    CoeffSeq<S> out(box, u.d1, u.d2);
    for (int i = 0; i <= box.n1max; ++i)
        for (int j = 0; j <= box.n2max; ++j) out.at(i, j) = u.look(i, j) + v.look(i, j);
    return out;
}

template <class S>
CoeffSeq<S> seq_scale(const CoeffSeq<S>& u, const S& c) {
    CoeffSeq<S> out = u;
    for (int i = 0; i <= u.box.n1max; ++i)
        for (int j = 0; j <= u.box.n2max; ++j) out.at(i, j) = u.at(i, j) * c;
    return out;
}

// ell^1_alpha norm: sum alpha_n |U_n|
template <class S>
S l1_norm(const CoeffSeq<S>& u) {
    S acc(0.0);
    for (int i = 0; i <= u.box.n1max; ++i)
        for (int j = 0; j <= u.box.n2max; ++j)
            acc += S(alpha_weight(i, j)) * scal::abs_val(u.at(i, j));
    return acc;
}

// ell^2_alpha norm: sqrt(sum alpha_n U_n^2)
template <class S>
S l2_norm(const CoeffSeq<S>& u) {
    S acc(0.0);
    for (int i = 0; i <= u.box.n1max; ++i)
        for (int j = 0; j <= u.box.n2max; ++j)
            acc += S(alpha_weight(i, j)) * scal::sqr_val(u.at(i, j));
    return scal::sqrt_val(acc);
}

// alpha-weighted inner product sum alpha_n U_n V_n over the overlap
template <class S>
S dot2(const CoeffSeq<S>& u, const CoeffSeq<S>& v) {
    require_same_domain(u, v);
    int i1 = std::min(u.box.n1max, v.box.n1max), i2 = std::min(u.box.n2max, v.box.n2max);
    S acc(0.0);
    for (int i = 0; i <= i1; ++i)
        for (int j = 0; j <= i2; ++j)
            acc += S(alpha_weight(i, j)) * u.at(i, j) * v.at(i, j);
    return acc;
}

// ell^1_alpha mass of the entries of u lying outside `inner`
template <class S>
S l1_norm_complement(const CoeffSeq<S>& u, IndexBox inner) {
    S acc(0.0);
    for (int i = 0; i <= u.box.n1max; ++i)
        for (int j = 0; j <= u.box.n2max; ++j)
            if (!inner.contains(i, j))
                acc += S(alpha_weight(i, j)) * scal::abs_val(u.at(i, j));
    return acc;
}

template <class S>
S l2_norm_complement(const CoeffSeq<S>& u, IndexBox inner) {
    S acc(0.0);
    for (int i = 0; i <= u.box.n1max; ++i)
        for (int j = 0; j <= u.box.n2max; ++j)
            if (!inner.contains(i, j))
                acc += S(alpha_weight(i, j)) * scal::sqr_val(u.at(i, j));
    return scal::sqrt_val(acc);
}

// nu-weighted ell^1 norm: sum alpha_n |U_n| nu1^n1 nu2^n2 (analyticity test)
template <class S>
S nu_weighted_l1(const CoeffSeq<S>& u, double nu1, double nu2) {
    S acc(0.0);
    S p1(1.0);
    for (int i = 0; i <= u.box.n1max; ++i) {
        S p(p1);
        for (int j = 0; j <= u.box.n2max; ++j) {
            acc += S(alpha_weight(i, j)) * scal::abs_val(u.at(i, j)) * p;
            p = p * S(nu2);
        }
        p1 = p1 * S(nu1);
    }
    return acc;
}

// Discrete convolution of the even expansions:
// (U * V)_n = sum_{m in Z^2} U_|m| V_|n-m|, restricted to `out_box`.
// The natural support is the Minkowski sum of the two boxes.
template <class S>
CoeffSeq<S> convolve(const CoeffSeq<S>& u, const CoeffSeq<S>& v, IndexBox out_box) {
    require_same_domain(u, v);
    CoeffSeq<S> out(out_box, u.d1, u.d2);
    for (int n1 = 0; n1 <= out_box.n1max; ++n1) {
        for (int n2 = 0; n2 <= out_box.n2max; ++n2) {
            S acc(0.0);
            for (int m1 = -u.box.n1max; m1 <= u.box.n1max; ++m1) {
                long k1 = std::labs(long(n1) - m1);
                if (k1 > v.box.n1max) continue;
                for (int m2 = -u.box.n2max; m2 <= u.box.n2max; ++m2) {
                    long k2 = std::labs(long(n2) - m2);
                    if (k2 > v.box.n2max) continue;
                    acc += u.look(m1, m2) * v.at(int(k1), int(k2));
                }
            }
            out.at(n1, n2) = acc;
        }
    }
    return out;
}

template <class S>
CoeffSeq<S> convolve(const CoeffSeq<S>& u, const CoeffSeq<S>& v) {
    return convolve(u, v, IndexBox{u.box.n1max + v.box.n1max, u.box.n2max + v.box.n2max});
}

// Power-series exponential sum U^k / k! truncated adaptively.
//
// Partial products are projected back onto `cap` each round; the projected
// spill and the series tail are both tracked in ell^1_alpha.  In interval
// mode the total ell^1 defect is folded into every entry (|err_n| <= err/alpha_n)
// so the head is a genuine enclosure; the scalar `tail` reports the same
// defect for callers that track function-space norms.
template <class S>
struct SeqExpResult {
    CoeffSeq<S> series;
    S tail; // ell^1_alpha bound on everything the head misses
};

template <class S>
SeqExpResult<S> seq_exp(const CoeffSeq<S>& u, double tol, IndexBox cap, long max_terms = 200) {
    const S norm = l1_norm(u);
    if (!(scal::upper(norm) < std::numeric_limits<double>::infinity()))
        throw NonConvergence("seq_exp: unbounded input norm");

    CoeffSeq<S> acc = unit_seq<S>(cap, u.d1, u.d2);
    CoeffSeq<S> term = acc; // U^k/k! head, k = 0
    S spill_err(0.0);       // ell^1 bound on (exact partial sum) - (computed head sum)
    S term_defect(0.0);     // ell^1 bound on U^k/k! - term
    S kfac_norm(1.0);       // ||U||^k / k!
    long k = 0;
    while (true) {
        ++k;
        if (k > max_terms)
            throw NonConvergence("seq_exp: did not meet tolerance within max_terms");
        CoeffSeq<S> full = convolve(term, u); // lives on term.box + u.box, bounded by cap + u.box
        CoeffSeq<S> head = project(full, cap);
        S spill = l1_norm_complement(full, cap);
        S invk = S(1.0) / S(double(k));
        head = seq_scale(head, invk);
        // defect recursion: ||U^k/k! - head|| <= (defect_{k-1} ||U|| + spill)/k
        term_defect = (term_defect * norm + spill) * invk;
        spill_err += term_defect;
        acc = seq_add(acc, head);
        term = head;
        kfac_norm = kfac_norm * norm * invk;
        // series tail: sum_{j>k} ||U||^j/j! <= ||U||^{k+1}/(k+1)! e^{||U||}
        S tail_bound = kfac_norm * norm * (S(1.0) / S(double(k + 1))) * scal::exp_val(norm);
        if (scal::upper(tail_bound) <= tol) {
            S total = tail_bound + spill_err;
            if constexpr (std::is_same_v<S, IScalar>) {
                double t = total.hi();
                for (int i = 0; i <= cap.n1max; ++i)
                    for (int j = 0; j <= cap.n2max; ++j) {
                        double inflate = t / alpha_weight(i, j);
                        acc.at(i, j) += IScalar(-inflate, inflate);
                    }
            }
            return {acc, total};
        }
    }
}

// Evaluate the cosine expansion at points of the closed fundamental domain.
template <class S>
std::vector<S> eval_grid(const CoeffSeq<S>& u, const std::vector<std::pair<double, double>>& pts) {
    std::vector<S> out;
    out.reserve(pts.size());
    const S pi = scal::pi_val<S>();
    for (auto [x1, x2] : pts) {
        if (std::fabs(x1) > u.d1 * (1 + 1e-12) || std::fabs(x2) > u.d2 * (1 + 1e-12))
            throw PointOutsideDomain("evaluation point outside the fundamental domain");
        S acc(0.0);
        for (int i = 0; i <= u.box.n1max; ++i) {
            // 2 pi n1~ x1 = pi * n1 * x1 / d1
            S a1 = pi * S(double(i)) * S(x1) / S(u.d1);
            S c1 = scal::cos_val(a1);
            for (int j = 0; j <= u.box.n2max; ++j) {
                S a2 = pi * S(double(j)) * S(x2) / S(u.d2);
                acc += S(alpha_weight(i, j)) * u.at(i, j) * c1 * scal::cos_val(a2);
            }
        }
        out.push_back(acc);
    }
    return out;
}

// --- coefficient file container -------------------------------------------
// Self-describing text format, hex-float entries, bit-exact round trips.
// Interval entries store both endpoints on one line.

template <class S>
void save_seq(const std::string& path, const CoeffSeq<S>& u, double c);

// Returns the stored wave speed through `c_out`; throws FormatError when the
// on-disk scalar kind does not match S.
template <class S>
CoeffSeq<S> load_seq(const std::string& path, double& c_out);

std::string seq_kind_on_disk(const std::string& path); // "float" | "interval"

} // namespace stripwave
