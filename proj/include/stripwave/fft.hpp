#pragma once
// Radix-2 complex FFT usable with double (fast path) or IScalar (enclosure
// path) scalars.  Twiddle angles 2 pi k/n are exact dyadic multiples of an
// enclosed pi, so the interval transform is a genuine enclosure of the exact
// DFT of the input intervals.

#include <vector>

#include "stripwave/errors.hpp"
#include "stripwave/interval.hpp"
#include "stripwave/scalar_ops.hpp"

namespace stripwave {

template <class S>
struct Cx {
    S re{0.0}, im{0.0};
};

template <class S>
inline Cx<S> cx_add(const Cx<S>& x, const Cx<S>& y) {
    return {x.re + y.re, x.im + y.im};
}
template <class S>
inline Cx<S> cx_sub(const Cx<S>& x, const Cx<S>& y) {
    return {x.re - y.re, x.im - y.im};
}
template <class S>
inline Cx<S> cx_mul(const Cx<S>& x, const Cx<S>& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}

inline bool is_pow2(long n) { return n > 0 && (n & (n - 1)) == 0; }

// twiddles w_k = e^{-2 pi i k / n}, k < n/2
template <class S>
std::vector<Cx<S>> fft_twiddles(long n) {
    std::vector<Cx<S>> tw(n / 2);
    for (long k = 0; k < n / 2; ++k) {
        // 2k/n is exact for power-of-two n
        S ang = scal::pi_val<S>() * S(2.0 * double(k) / double(n));
        tw[k] = {scal::cos_val(ang), S(0.0) - scal::sin_val(ang)};
    }
    return tw;
}

// in-place iterative transform; inverse applies conjugated twiddles and does
// NOT rescale (callers divide by the exact power-of-two length when needed)
template <class S>
void fft_pow2(std::vector<Cx<S>>& a, bool inverse, const std::vector<Cx<S>>& tw) {
    const long n = long(a.size());
    if (!is_pow2(n)) throw ShapeMismatch("fft length must be a power of two");
    if (long(tw.size()) != n / 2) throw ShapeMismatch("twiddle table does not match length");
    for (long i = 1, j = 0; i < n; ++i) { // bit-reversal permutation
        long bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (long len = 2; len <= n; len <<= 1) {
        const long step = n / len;
        for (long i = 0; i < n; i += len) {
            for (long j = 0; j < len / 2; ++j) {
                Cx<S> w = tw[j * step];
                if (inverse) w.im = S(0.0) - w.im;
                Cx<S> u = a[i + j];
                Cx<S> v = cx_mul(a[i + j + len / 2], w);
                a[i + j] = cx_add(u, v);
                a[i + j + len / 2] = cx_sub(u, v);
            }
        }
    }
}

template <class S>
void fft_pow2(std::vector<Cx<S>>& a, bool inverse) {
    fft_pow2(a, inverse, fft_twiddles<S>(long(a.size())));
}

// row-major (rows x cols) two-dimensional transform
template <class S>
void fft2_pow2(std::vector<Cx<S>>& a, long rows, long cols, bool inverse) {
    if (long(a.size()) != rows * cols) throw ShapeMismatch("fft2 buffer size mismatch");
    auto tw_c = fft_twiddles<S>(cols);
    std::vector<Cx<S>> buf;
    for (long r = 0; r < rows; ++r) {
        buf.assign(a.begin() + r * cols, a.begin() + (r + 1) * cols);
        fft_pow2(buf, inverse, tw_c);
        std::copy(buf.begin(), buf.end(), a.begin() + r * cols);
    }
    auto tw_r = fft_twiddles<S>(rows);
    buf.resize(rows);
    for (long c = 0; c < cols; ++c) {
        for (long r = 0; r < rows; ++r) buf[r] = a[r * cols + c];
        fft_pow2(buf, inverse, tw_r);
        for (long r = 0; r < rows; ++r) a[r * cols + c] = buf[r];
    }
}

} // namespace stripwave
