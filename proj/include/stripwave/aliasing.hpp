#pragma once
// Certified Fourier coefficients of e^U for a finitely supported U: sampled
// exponential on a refined grid, transformed back, with the aliasing error
// absorbed through a geometric envelope |(e^U)_n| <= C nu1^{-n1} nu2^{-n2}.

#include <string>

#include "stripwave/sequences.hpp"

namespace stripwave {

struct AnalyticityParams {
    double nu1 = 1.1, nu2 = 1.1; // envelope bases, > 1
    int nfft1 = 256, nfft2 = 256; // grid has 2*nfft_i samples per axis
    IndexBox head{0, 0};          // box carrying entrywise enclosures
    bool strict_fft = true;       // interval transforms; false = float + documented inflation
};

// |entry_n| <= C nu1^{-n1} nu2^{-n2} for all n outside an associated box
struct TailEnvelope {
    IScalar C{0.0};
    double nu1 = 1.0, nu2 = 1.0;
};

struct EnclosedSeq {
    CoeffSeq<IScalar> head;
    TailEnvelope env; // valid outside head.box
    std::string mode; // "fft-interval" | "fft-float-gamma"
};

// exp(nu-weighted l1 norm): |(e^U)_n| <= amplitude * nu1^{-n1} nu2^{-n2}, all n
IScalar nu_amplitude(const CoeffSeq<IScalar>& u, double nu1, double nu2);

// sharper constant valid only outside `box`: optimizes the amplitude over
// steeper trial envelopes and converts back at the box edge
IScalar nu_amplitude_outside(const CoeffSeq<IScalar>& u, double nu1, double nu2, IndexBox box);

// aliasing error factor: |(e^U)_n^{FFT} - (e^U)_n| <= C * epsilon_n
IScalar epsilon_n(double nu1, double nu2, int nfft1, int nfft2, int n1, int n2);

// alpha-weighted l1 mass of the envelope outside `box` (exact geometric sum)
IScalar tail_l1(const TailEnvelope& env, IndexBox box);
// alpha-weighted SQUARED l2 mass of the envelope outside `box`
IScalar tail_l2sq(const TailEnvelope& env, IndexBox box);

EnclosedSeq rigorous_exp(const CoeffSeq<IScalar>& u, const AnalyticityParams& par);

} // namespace stripwave
