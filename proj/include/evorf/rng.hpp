#pragma once

#include <cstdint>
#include <vector>

namespace evorf {

// All randomness in this project flows through one documented generator so
// that results are identical across platforms, thread counts, and runs.
//
//   - Stream keys are derived with the splitmix64 finalizer:
//       derive_key(seed, stream, index) =
//           mix64(mix64(mix64(seed ^ kKeySalt) ^ stream) ^ index)
//   - Keys seed xoshiro256++ (Blackman & Vigna reference algorithm) via four
//     consecutive splitmix64 outputs.
//   - Bounded integers use Lemire's unbiased multiply-shift rejection method.
//   - Doubles take the top 53 bits: (x >> 11) * 2^-53.
//   - Shuffles are backward Fisher-Yates with j = next_below(i + 1).
//
// No std::uniform_*_distribution anywhere: their output is implementation
// defined and would break cross-machine reproducibility.

inline constexpr std::uint64_t kKeySalt = 0x9E3779B97F4A7C15ULL;

// splitmix64 output finalizer (Steele, Lea & Flood). Bijective on uint64.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return mix64(mix64(mix64(seed ^ kKeySalt) ^ stream) ^ index);
}

// Stream tags for derive_key. Values are arbitrary but frozen: changing them
// changes every seeded result in the project.
namespace stream {
inline constexpr std::uint64_t kSplit = 0x01;         // dataset train/test split
inline constexpr std::uint64_t kTree = 0x02;          // per-tree master key
inline constexpr std::uint64_t kBag = 0x03;           // bootstrap draw within a tree
inline constexpr std::uint64_t kNode = 0x04;          // feature draw at a node
inline constexpr std::uint64_t kPermute = 0x05;       // importance column permutation
inline constexpr std::uint64_t kNullLabels = 0x06;    // label permutation for p-values
inline constexpr std::uint64_t kNullForest = 0x07;    // forest seed for a null retrain
inline constexpr std::uint64_t kNullPermute = 0x08;   // importance seed for a null retrain
inline constexpr std::uint64_t kTune = 0x09;          // tuning trial forests
inline constexpr std::uint64_t kTreeCount = 0x0A;     // tree-count sweep forests
}  // namespace stream

class Rng {
public:
    explicit Rng(std::uint64_t key) {
        std::uint64_t sm = key;
        for (auto& word : state_) {
            sm += kKeySalt;
            word = mix64(sm);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Unbiased draw from [0, n). Lemire 2019, with the rare rejection loop.
    std::uint64_t next_below(std::uint64_t n) {
        std::uint64_t x = next();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                x = next();
                m = static_cast<unsigned __int128>(x) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Random permutation of 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        shuffle(p);
        return p;
    }

    // Distinct values from 0..n-1, in draw order (partial Fisher-Yates).
    std::vector<int> sample_without_replacement(std::size_t n, std::size_t k) {
        std::vector<int> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<int>(i);
        std::vector<int> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k && i < n; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(next_below(n - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

}  // namespace evorf
