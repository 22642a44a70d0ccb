#pragma once
// Dense finite sections pi^{rows} H pi^{cols} of operators on coefficient
// space, in the even (cos cos) or odd (sin cos, n1 >= 1) sector, with the
// alpha-weighted operator 2-norm machinery the certification bounds run on.
//
// Flattening is n1-major.  Operator 2-norms are always meant in the weighted
// l2 metric; they are evaluated after the diagonal similarity by sqrt(w_n),
// which turns the weighted norm into the plain matrix 2-norm.  The sector
// weight w_n coincides with alpha_n in both sectors because odd-sector
// indices always have n1 >= 1.

#include <vector>
#include <type_traits>

#include <Eigen/Core>

#include "stripwave/errors.hpp"
#include "stripwave/interval.hpp"
#include "stripwave/numtraits.hpp"
#include "stripwave/sequences.hpp"
#include "stripwave/symbols.hpp"

namespace stripwave {

enum class Sector { even, odd };

// number of flattened indices of `box` in the sector
inline long sector_size(IndexBox box, Sector s) {
    long rows1 = (s == Sector::even) ? box.n1max + 1 : box.n1max;
    return rows1 * long(box.n2max + 1);
}

inline long sector_flat(IndexBox box, Sector s, int n1, int n2) {
    int base = (s == Sector::even) ? 0 : 1;
    return long(n1 - base) * (box.n2max + 1) + n2;
}

// inverse of sector_flat
inline std::pair<int, int> sector_unflat(IndexBox box, Sector s, long idx) {
    int base = (s == Sector::even) ? 0 : 1;
    return {int(idx / (box.n2max + 1)) + base, int(idx % (box.n2max + 1))};
}

inline double sector_weight(Sector, int n1, int n2) { return alpha_weight(n1, n2); }

template <class S>
struct OperatorBlock {
    IndexBox rows_box, cols_box;
    Sector sector = Sector::even;
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> a;

    OperatorBlock() = default;
    OperatorBlock(IndexBox r, IndexBox c, Sector s) : rows_box(r), cols_box(c), sector(s) {
        long nr = sector_size(r, s), nc = sector_size(c, s);
        if (nr <= 0 || nc <= 0) throw ShapeMismatch("empty operator block");
        a.setZero(nr, nc);
    }

    long rows() const { return a.rows(); }
    long cols() const { return a.cols(); }

    S& at(int rn1, int rn2, int cn1, int cn2) {
        return a(sector_flat(rows_box, sector, rn1, rn2), sector_flat(cols_box, sector, cn1, cn2));
    }
    const S& at(int rn1, int rn2, int cn1, int cn2) const {
        return a(sector_flat(rows_box, sector, rn1, rn2), sector_flat(cols_box, sector, cn1, cn2));
    }
};

template <class S>
OperatorBlock<S> identity_block(IndexBox box, Sector s) {
    OperatorBlock<S> out(box, box, s);
    for (long i = 0; i < out.rows(); ++i) out.a(i, i) = S(1.0);
    return out;
}

inline OperatorBlock<IScalar> to_interval(const OperatorBlock<double>& m) {
    OperatorBlock<IScalar> out(m.rows_box, m.cols_box, m.sector);
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) out.a(i, j) = IScalar(m.a(i, j));
    return out;
}

inline OperatorBlock<double> mid_block(const OperatorBlock<IScalar>& m) {
    OperatorBlock<double> out(m.rows_box, m.cols_box, m.sector);
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) out.a(i, j) = m.a(i, j).mid();
    return out;
}

template <class S>
void require_compatible(const OperatorBlock<S>& a, const OperatorBlock<S>& b) {
    if (a.sector != b.sector) throw ShapeMismatch("operator blocks live in different sectors");
    if (!(a.cols_box == b.rows_box)) throw ShapeMismatch("operator block inner boxes do not match");
}

template <class S>
OperatorBlock<S> block_mul(const OperatorBlock<S>& x, const OperatorBlock<S>& y) {
    require_compatible(x, y);
    OperatorBlock<S> out(x.rows_box, y.cols_box, x.sector);
    if constexpr (std::is_same_v<S, double>) {
        out.a.noalias() = x.a * y.a;
    } else {
        // explicit loop keeps the reduction order fixed (determinism) and
        // avoids Eigen dispatch surprises with the interval scalar
        const long n = x.cols();
        for (long i = 0; i < out.rows(); ++i)
            for (long j = 0; j < out.cols(); ++j) {
                S acc(0.0);
                for (long k = 0; k < n; ++k) acc += x.a(i, k) * y.a(k, j);
                out.a(i, j) = acc;
            }
    }
    return out;
}

template <class S>
OperatorBlock<S> block_sub(const OperatorBlock<S>& x, const OperatorBlock<S>& y) {
    if (x.sector != y.sector || !(x.rows_box == y.rows_box) || !(x.cols_box == y.cols_box))
        throw ShapeMismatch("operator block shapes do not match");
    OperatorBlock<S> out = x;
    out.a -= y.a;
    return out;
}

// Multiplication operator by the even sequence V, sectioned to
// pi^{rows} M_V pi^{cols} in the requested sector.
//
// Even sector: (M_V U)_n = sum_{m in Z^2} V_|n-m| U_|m|, so the entry at
// (n, k) collects V over the alpha_k reflections of k.  Odd sector (sine
// coefficients in x1): the same Z^2 sum with the signed lookup
// sgn(m1) V_|n-m|, which folds to V_{|n1-m1|,.} - V_{n1+m1,.}.
template <class S>
OperatorBlock<S> mult_block(const CoeffSeq<S>& v, IndexBox rows, IndexBox cols, Sector s) {
    OperatorBlock<S> out(rows, cols, s);
    int cbase = (s == Sector::even) ? 0 : 1;
    int rbase = cbase;
    for (int n1 = rbase; n1 <= rows.n1max; ++n1)
        for (int n2 = 0; n2 <= rows.n2max; ++n2) {
            long r = sector_flat(rows, s, n1, n2);
            for (int k1 = cbase; k1 <= cols.n1max; ++k1)
                for (int k2 = 0; k2 <= cols.n2max; ++k2) {
                    S acc(0.0);
                    for (int s2 = 0; s2 < (k2 == 0 ? 1 : 2); ++s2) {
                        long m2 = long(n2) - (s2 == 0 ? k2 : -k2);
                        if (s == Sector::even) {
                            for (int s1 = 0; s1 < (k1 == 0 ? 1 : 2); ++s1) {
                                long m1 = long(n1) - (s1 == 0 ? k1 : -k1);
                                acc += v.look(m1, m2);
                            }
                        } else {
                            acc += v.look(long(n1) - k1, m2) - v.look(long(n1) + k1, m2);
                        }
                    }
                    out.a(r, sector_flat(cols, s, k1, k2)) = acc;
                }
        }
    return out;
}

// diagonal of the linear symbol l(n~) in flat order
template <class S>
std::vector<S> l_diag(IndexBox box, Sector s, double d1, double d2, const S& c) {
    std::vector<S> out(sector_size(box, s));
    int base = (s == Sector::even) ? 0 : 1;
    for (int n1 = base; n1 <= box.n1max; ++n1)
        for (int n2 = 0; n2 <= box.n2max; ++n2)
            out[sector_flat(box, s, n1, n2)] = l_index<S>(n1, n2, d1, d2, c);
    return out;
}

template <class S>
void scale_rows(OperatorBlock<S>& m, const std::vector<S>& d) {
    if (long(d.size()) != m.rows()) throw ShapeMismatch("row scale length mismatch");
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) m.a(i, j) = d[i] * m.a(i, j);
}

template <class S>
void scale_cols(OperatorBlock<S>& m, const std::vector<S>& d) {
    if (long(d.size()) != m.cols()) throw ShapeMismatch("column scale length mismatch");
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) m.a(i, j) = m.a(i, j) * d[j];
}

// apply the section to a coefficient vector (even sector only, since
// CoeffSeq stores cosine data): returns pi^{rows}(M u) for u on cols_box
template <class S>
CoeffSeq<S> block_apply(const OperatorBlock<S>& m, const CoeffSeq<S>& u) {
    if (m.sector != Sector::even) throw ShapeMismatch("block_apply expects the even sector");
    if (!(m.cols_box == u.box)) throw ShapeMismatch("block_apply box mismatch");
    CoeffSeq<S> out(m.rows_box, u.d1, u.d2);
    for (long i = 0; i < m.rows(); ++i) {
        auto [n1, n2] = sector_unflat(m.rows_box, m.sector, i);
        S acc(0.0);
        for (long j = 0; j < m.cols(); ++j) {
            auto [k1, k2] = sector_unflat(m.cols_box, m.sector, j);
            acc += m.a(i, j) * u.at(k1, k2);
        }
        out.at(n1, n2) = acc;
    }
    return out;
}

namespace blocknorm {

// sqrt(w_row / w_col) rounded in the requested direction; weights are the
// exact doubles 1/2/4, so the quotient is an exact power of two
inline double ratio_up(double wr, double wc) { return detail::sqrt_up(wr / wc); }
inline double ratio_down(double wr, double wc) { return detail::sqrt_down(wr / wc); }

inline double entry_mag(double x) { return std::fabs(x); }
inline double entry_mag(const IScalar& x) { return x.mag(); }

template <class S>
std::vector<double> row_weights(const OperatorBlock<S>& m, bool rows) {
    IndexBox box = rows ? m.rows_box : m.cols_box;
    long n = rows ? m.rows() : m.cols();
    std::vector<double> w(n);
    for (long i = 0; i < n; ++i) {
        auto [n1, n2] = sector_unflat(box, m.sector, i);
        w[i] = sector_weight(m.sector, n1, n2);
    }
    return w;
}

} // namespace blocknorm

// Upper bound on the weighted operator 2-norm via the similarity-scaled
// Holder pair: ||M||_2 <= sqrt(||Mt||_1 ||Mt||_inf), Mt = D^{1/2} M D^{-1/2}.
// All accumulation is upward-rounded, so the result is rigorous for interval
// blocks and a true upper bound for float blocks.
template <class S>
IScalar op_norm2_cheap(const OperatorBlock<S>& m) {
    using namespace blocknorm;
    auto wr = row_weights(m, true), wc = row_weights(m, false);
    std::vector<double> rsum(m.rows(), 0.0), csum(m.cols(), 0.0);
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) {
            double e = detail::mul_up(entry_mag(m.a(i, j)), ratio_up(wr[i], wc[j]));
            rsum[i] = detail::add_up(rsum[i], e);
            csum[j] = detail::add_up(csum[j], e);
        }
    double ninf = 0, n1 = 0;
    for (double v : rsum) ninf = std::fmax(ninf, v);
    for (double v : csum) n1 = std::fmax(n1, v);
    return IScalar(0.0, detail::sqrt_up(detail::mul_up(n1, ninf)));
}

// Tighter bound through the Gram matrix: ||M||_2^2 = ||Mt' Mt||_2 <=
// ||Mt' Mt||_inf.  The Gram is taken on the short side (||M|| = ||M'||,
// with the weights swapping to their reciprocals), so the cost is
// min(rows, cols)^2 * max(rows, cols) multiplications.
template <class S>
IScalar op_norm2_gram(const OperatorBlock<S>& m) {
    using namespace blocknorm;
    auto wr = row_weights(m, true), wc = row_weights(m, false);
    const long nr = m.rows(), nc = m.cols();
    const bool wide = nc > nr;
    const long ng = wide ? nr : nc, ni = wide ? nc : nr;
    std::vector<double> rowsum(ng, 0.0);
    for (long p = 0; p < ng; ++p) {
        for (long q = 0; q < ng; ++q) {
            // H_{pq} = sum_r w_r M_{rp} M_{rq}, or the row Gram with 1/w_c
            S acc(0.0);
            if (wide)
                for (long j = 0; j < ni; ++j) acc += S(1.0 / wc[j]) * m.a(p, j) * m.a(q, j);
            else
                for (long r = 0; r < ni; ++r) acc += S(wr[r]) * m.a(r, p) * m.a(r, q);
            double g = wide ? detail::mul_up(entry_mag(acc), ratio_up(wr[p] * wr[q], 1.0))
                            : detail::mul_up(entry_mag(acc), ratio_up(1.0, wc[p] * wc[q]));
            if constexpr (std::is_same_v<S, double>) // cover round-to-nearest accumulation
                g = detail::mul_up(g, 1.0 + double(ni + 2) * 0x1p-50);
            rowsum[p] = detail::add_up(rowsum[p], g);
        }
    }
    double mx = 0;
    for (double v : rowsum) mx = std::fmax(mx, v);
    return IScalar(0.0, detail::sqrt_up(mx));
}

// best available rigorous bound
template <class S>
IScalar op_norm2_bound(const OperatorBlock<S>& m, bool use_gram = true) {
    IScalar cheap = op_norm2_cheap(m);
    if (!use_gram) return cheap;
    IScalar gram = op_norm2_gram(m);
    return IScalar(0.0, std::fmin(cheap.hi(), gram.hi()));
}

} // namespace stripwave
