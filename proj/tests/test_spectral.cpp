#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "taudit/error.hpp"
#include "taudit/spectral.hpp"

using namespace taudit;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> white(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> y(n);
    for (auto& v : y) {
        v = d(rng);
    }
    return y;
}

WelchConfig cfg_for(std::size_t n, Normalization norm = Normalization::amplitude) {
    WelchConfig c;
    c.nperseg = n / 4;
    c.normalization = norm;
    return c;
}

}  // namespace

TEST(Welch, SegmentationOfPaperLength) {
    const auto y = white(702, 1);
    const auto spec = welch(y, 8.0, cfg_for(702));
    EXPECT_EQ(spec.nperseg, 175u);
    EXPECT_EQ(cfg_for(702).noverlap(), 87u);
    EXPECT_EQ(spec.n_segments, 6u);
    EXPECT_EQ(spec.freqs.size(), 88u);
    EXPECT_DOUBLE_EQ(spec.freqs[0], 0.0);
    EXPECT_NEAR(spec.df, 8.0 / 175.0, 1e-15);
}

TEST(Welch, MatchesDirectDftOracle) {
    for (std::size_t n : {702u, 400u, 257u}) {
        const auto y = white(n, static_cast<unsigned>(n));
        for (auto norm : {Normalization::amplitude, Normalization::variance}) {
            const auto c = cfg_for(n, norm);
            const auto spec = welch(y, 8.0, c);
            const auto ref = oracle::welch(y, 8.0, c.nperseg, c.noverlap(), norm == Normalization::amplitude);
            ASSERT_EQ(spec.power.size(), ref.size());
            for (std::size_t k = 0; k < ref.size(); ++k) {
                EXPECT_NEAR(spec.power[k], ref[k], 1e-12 * (1.0 + ref[k])) << n << " bin " << k;
            }
        }
    }
}

TEST(Welch, OnBinSineHasPowerAmplitudeSquared) {
    const double fs = 8.0;
    const std::size_t n = 800;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = 0.3 * std::sin(2 * kPi * 0.4 * static_cast<double>(i) / fs + 0.7);  // bin 10 of 200
    }
    const auto spec = welch(y, fs, cfg_for(n));
    EXPECT_NEAR(spec.power[10], 0.09, 1e-12);
}

TEST(Welch, VarianceModeIsParsevalConsistent) {
    // With a flat window the one-sided bins would sum to the segment variance;
    // under Hann they sum to the window-weighted variance, which for white
    // noise averages to the ordinary variance.
    double ratio = 0.0;
    for (unsigned s = 0; s < 50; ++s) {
        const auto y = white(702, 100 + s);
        const auto spec = welch(y, 8.0, cfg_for(702, Normalization::variance));
        double sum = 0.0;
        for (double p : spec.power) {
            sum += p;
        }
        ratio += sum;
    }
    EXPECT_NEAR(ratio / 50.0, 1.0, 0.05);
}

TEST(Welch, ScalesQuadraticallyAndIgnoresOffset) {
    const auto y = white(400, 9);
    std::vector<double> z(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        z[i] = 2.0 * y[i] + 5.0;
    }
    const auto a = welch(y, 8.0, cfg_for(400));
    const auto b = welch(z, 8.0, cfg_for(400));
    for (std::size_t k = 0; k < a.power.size(); ++k) {
        EXPECT_NEAR(b.power[k], 4.0 * a.power[k], 1e-10);
    }
}

TEST(Welch, RejectsBadConfig) {
    const auto y = white(100, 2);
    WelchConfig c;
    c.nperseg = 4;
    EXPECT_THROW(welch(y, 8.0, c), std::invalid_argument);
    c.nperseg = 200;
    EXPECT_THROW(welch(y, 8.0, c), std::invalid_argument);
    c.nperseg = 25;
    c.overlap_fraction = 1.0;
    EXPECT_THROW(welch(y, 8.0, c), std::invalid_argument);
}

TEST(Band, IndependentOfThreadCount) {
    const auto y = white(702, 4);
    const auto one = permutation_band(y, 8.0, cfg_for(702), 200, 0.05, 42, 1);
    const auto many = permutation_band(y, 8.0, cfg_for(702), 200, 0.05, 42, 7);
    EXPECT_EQ(one.threshold, many.threshold);
    // Surrogate i uses seed ^ i, so seeds that differ only below the
    // permutation count reuse the same surrogate set.
    EXPECT_EQ(permutation_band(y, 8.0, cfg_for(702), 200, 0.05, 43, 1).threshold, one.threshold);
    const auto other = permutation_band(y, 8.0, cfg_for(702), 200, 0.05, 42 + (1u << 20), 3);
    EXPECT_NE(one.threshold, other.threshold);
}

TEST(Band, NearestRankQuantile) {
    std::vector<double> v{5, 1, 4, 2, 3, 10, 9, 8, 7, 6};
    EXPECT_EQ(nearest_rank_quantile(v, 0.95), 10.0);
    EXPECT_EQ(nearest_rank_quantile(v, 0.9), 9.0);
    EXPECT_EQ(nearest_rank_quantile(v, 0.5), 5.0);
    std::vector<double> h(1000);
    for (std::size_t i = 0; i < h.size(); ++i) {
        h[i] = static_cast<double>(i + 1);
    }
    EXPECT_EQ(nearest_rank_quantile(h, 0.95), 950.0);
}

TEST(Band, RejectsTooFewPermutations) {
    const auto y = white(200, 4);
    EXPECT_THROW(permutation_band(y, 8.0, cfg_for(200), 99, 0.05, 1), std::invalid_argument);
    EXPECT_THROW(permutation_band(y, 8.0, cfg_for(200), 100, 0.0, 1), std::invalid_argument);
}

TEST(Peaks, RunLocalMaximaVersusAllExceeding) {
    Spectrum s;
    s.fs = 8.0;
    s.nperseg = 16;
    s.df = 0.5;
    s.power = {9, 1, 3, 5, 4, 1, 2, 2, 1};
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        s.freqs.push_back(0.5 * static_cast<double>(k));
    }
    SignificanceBand b;
    b.threshold.assign(s.power.size(), 1.5);
    const auto runs = detect_peaks(s, b);
    ASSERT_EQ(runs.size(), 2u);
    EXPECT_EQ(runs[0].bin_index, 3u);  // DC never reported
    EXPECT_EQ(runs[1].bin_index, 6u);  // plateau keeps its first bin
    EXPECT_DOUBLE_EQ(runs[0].amplitude, std::sqrt(5.0));
    const auto all = detect_peaks(s, b, PeakRule::all_exceeding);
    EXPECT_EQ(all.size(), 5u);

    b.threshold.pop_back();
    EXPECT_THROW(detect_peaks(s, b), DataError);
}

TEST(ExplainedVariance, SumsPowersAndClamps) {
    std::vector<PeakInfo> p(2);
    p[0].power = 0.002;
    p[1].power = 0.001;
    const auto e = explained_variance(p, 0.01);
    EXPECT_NEAR(e.fraction, 0.3, 1e-15);
    EXPECT_FALSE(e.clamped);
    const auto c = explained_variance(p, 0.001);
    EXPECT_EQ(c.fraction, 1.0);
    EXPECT_NEAR(c.raw, 3.0, 1e-12);
    EXPECT_TRUE(c.clamped);
    EXPECT_THROW(explained_variance(p, 0.0), std::invalid_argument);
}
