#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace skillcap::features {

/// Number of dictionary codes emitted by LZW over the sequence. The
/// dictionary starts with the distinct symbols of the sequence. Throws
/// std::invalid_argument on an empty sequence.
int lzw_code_count(std::span<const int> seq);

/// Total encoded length in bits under a Huffman code built from the
/// sequence's empirical distribution. Ties merge the subtree containing the
/// smallest symbol first; a single-symbol alphabet costs 1 bit per symbol.
std::int64_t huffman_bits(std::span<const int> seq);

/// Empirical Shannon entropy in bits per symbol.
double shannon_entropy(std::span<const int> seq);

struct SampEnParams {
    int m = 2;          // embedding length
    double r_tol = 0.2; // tolerance as a fraction of the series std-dev
};

/// Sample entropy -ln(A/B) with Chebyshev distance and self-matches
/// excluded; A and B both count pairs among the n-m templates. Returns
/// nullopt when no templates match (instead of +-inf). Throws
/// std::invalid_argument when the series is shorter than m + 2.
std::optional<double> sample_entropy(std::span<const double> series,
                                     SampEnParams p = {});

using Band = std::pair<double, double>; // (lo_hz, hi_hz], half-open at lo

/// Fraction of non-DC spectral power inside each band, for a uniformly
/// sampled series. All-zero result when the series carries no non-DC power.
std::vector<double> dft_band_fractions(std::span<const double> series, double sample_hz,
                                       std::span<const Band> bands);

} // namespace skillcap::features
