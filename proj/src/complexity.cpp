#include "skillcap/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include <unsupported/Eigen/FFT>

namespace skillcap::features {

int lzw_code_count(std::span<const int> seq) {
    if (seq.empty())
        throw std::invalid_argument("lzw_code_count: empty sequence");

    // dictionary entries are (prefix code, next symbol) -> code; singles
    // come from the sequence's alphabet
    std::map<int, int> singles;
    for (int s : seq)
        if (!singles.contains(s)) singles.emplace(s, static_cast<int>(singles.size()));
    std::map<std::pair<int, int>, int> dict;
    int next_code = static_cast<int>(singles.size());

    int emitted = 0;
    int cur = singles.at(seq[0]);
    for (std::size_t i = 1; i < seq.size(); ++i) {
        const int sym = seq[i];
        const auto it = dict.find({cur, sym});
        if (it != dict.end()) {
            cur = it->second;
        } else {
            ++emitted;
            dict.emplace(std::pair{cur, sym}, next_code++);
            cur = singles.at(sym);
        }
    }
    ++emitted; // flush the final string
    return emitted;
}

std::int64_t huffman_bits(std::span<const int> seq) {
    if (seq.empty())
        throw std::invalid_argument("huffman_bits: empty sequence");

    std::map<int, std::int64_t> counts;
    for (int s : seq) counts[s]++;
    if (counts.size() == 1) // degenerate one-symbol code still spends a bit
        return static_cast<std::int64_t>(seq.size());

    struct Node {
        std::int64_t freq;
        int min_symbol; // smallest leaf symbol in the subtree, for tie-breaks
        int left = -1, right = -1;
        std::int64_t leaf_count_times_depth = 0; // unused for internals
    };
    std::vector<Node> nodes;
    nodes.reserve(counts.size() * 2);
    using Key = std::pair<std::pair<std::int64_t, int>, int>; // ((freq, min_sym), index)
    std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
    for (const auto& [sym, freq] : counts) {
        heap.push({{freq, sym}, static_cast<int>(nodes.size())});
        nodes.push_back({freq, sym});
    }
    while (heap.size() > 1) {
        const auto a = heap.top(); heap.pop();
        const auto b = heap.top(); heap.pop();
        Node merged{nodes[a.second].freq + nodes[b.second].freq,
                    std::min(nodes[a.second].min_symbol, nodes[b.second].min_symbol),
                    a.second, b.second};
        heap.push({{merged.freq, merged.min_symbol}, static_cast<int>(nodes.size())});
        nodes.push_back(merged);
    }

    // total bits = sum over leaves of freq * depth
    std::int64_t bits = 0;
    std::vector<std::pair<int, int>> stack{{heap.top().second, 0}};
    while (!stack.empty()) {
        const auto [idx, depth] = stack.back();
        stack.pop_back();
        const Node& n = nodes[static_cast<std::size_t>(idx)];
        if (n.left < 0) {
            bits += n.freq * depth;
        } else {
            stack.push_back({n.left, depth + 1});
            stack.push_back({n.right, depth + 1});
        }
    }
    return bits;
}

double shannon_entropy(std::span<const int> seq) {
    if (seq.empty())
        throw std::invalid_argument("shannon_entropy: empty sequence");
    std::map<int, std::int64_t> counts;
    for (int s : seq) counts[s]++;
    const double n = static_cast<double>(seq.size());
    double h = 0.0;
    for (const auto& [sym, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

std::optional<double> sample_entropy(std::span<const double> series, SampEnParams p) {
    const auto n = static_cast<int>(series.size());
    if (p.m < 1) throw std::invalid_argument("sample_entropy: m must be >= 1");
    if (p.r_tol <= 0.0) throw std::invalid_argument("sample_entropy: r_tol must be > 0");
    if (n < p.m + 2)
        throw std::invalid_argument("sample_entropy: series shorter than m + 2");

    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    const double r = p.r_tol * std::sqrt(var / n); // population std-dev

    // both template lengths use the same n - m start positions
    const int count = n - p.m;
    std::int64_t a = 0, b = 0;
    for (int i = 0; i < count; ++i) {
        for (int j = i + 1; j < count; ++j) {
            double dist_m = 0.0;
            for (int k = 0; k < p.m; ++k)
                dist_m = std::max(dist_m, std::abs(series[i + k] - series[j + k]));
            if (dist_m <= r) {
                ++b;
                const double dist_next = std::abs(series[i + p.m] - series[j + p.m]);
                if (std::max(dist_m, dist_next) <= r) ++a;
            }
        }
    }
    if (a == 0 || b == 0) return std::nullopt;
    return -std::log(static_cast<double>(a) / static_cast<double>(b));
}

std::vector<double> dft_band_fractions(std::span<const double> series, double sample_hz,
                                       std::span<const Band> bands) {
    if (series.size() < 2)
        throw std::invalid_argument("dft_band_fractions: need at least 2 samples");
    if (sample_hz <= 0.0)
        throw std::invalid_argument("dft_band_fractions: sample rate must be positive");

    const auto n = series.size();
    std::vector<double> src(series.begin(), series.end());
    std::vector<std::complex<double>> spectrum;
    Eigen::FFT<double> fft;
    fft.fwd(spectrum, src);

    // one-sided bins k = 1..floor(n/2); DC excluded
    const std::size_t half = n / 2;
    double total = 0.0;
    std::vector<double> out(bands.size(), 0.0);
    for (std::size_t k = 1; k <= half; ++k) {
        const double power = std::norm(spectrum[k]);
        total += power;
        const double f = static_cast<double>(k) * sample_hz / static_cast<double>(n);
        for (std::size_t bi = 0; bi < bands.size(); ++bi)
            if (f > bands[bi].first && f <= bands[bi].second) out[bi] += power;
    }
    if (total <= 0.0) return std::vector<double>(bands.size(), 0.0);
    for (double& v : out) v /= total;
    return out;
}

} // namespace skillcap::features
