#include "genldpc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace genldpc {

ChannelKind channel_kind_from_string(const std::string& name) {
    if (name == "awgn") return ChannelKind::BiAwgn;
    if (name == "rayleigh") return ChannelKind::RayleighFullCsi;
    throw std::invalid_argument("unknown channel: " + name);
}

std::string to_string(ChannelKind kind) {
    return kind == ChannelKind::BiAwgn ? "awgn" : "rayleigh";
}

double noise_variance(const ChannelSpec& spec) {
    if (!(spec.rate > 0.0) || spec.rate > 1.0)
        throw std::invalid_argument("channel rate must be in (0, 1]");
    const double snr_linear = std::pow(10.0, spec.ebno_db / 10.0);
    const double sigma2 = 1.0 / (2.0 * spec.rate * snr_linear);
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw std::invalid_argument("nonpositive noise variance");
    return sigma2;
}

LlrFrame transmit(const std::vector<std::uint8_t>& codeword, const ChannelSpec& spec,
                  SplitRng& rng) {
    const double sigma2 = noise_variance(spec);
    const std::size_t n = codeword.size();
    LlrFrame frame;
    frame.llrs.resize(n);
    frame.fading.resize(n);
    frame.truth = codeword;
    const double scale = 2.0 / sigma2;
    const double sigma = std::sqrt(sigma2);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = codeword[i] ? -1.0 : 1.0;
        const double h =
            spec.kind == ChannelKind::RayleighFullCsi ? rng.rayleigh_unit_power() : 1.0;
        const double y = h * x + sigma * rng.gaussian();
        frame.fading[i] = h;
        frame.llrs[i] = scale * h * y;
    }
    return frame;
}

double uncoded_ber(const ChannelSpec& spec, long long num_bits, std::uint64_t seed) {
    if (num_bits < 1) throw std::invalid_argument("num_bits must be positive");
    const double sigma2 = noise_variance(spec);
    const double sigma = std::sqrt(sigma2);
    long long errors = 0;
    constexpr long long kChunk = 1 << 16;
    for (long long base = 0; base < num_bits; base += kChunk) {
        SplitRng rng(seed, 0xBE5ULL, static_cast<std::uint64_t>(base));
        const long long end = std::min(num_bits, base + kChunk);
        for (long long b = base; b < end; ++b) {
            // all-zero transmission, x = +1
            const double h =
                spec.kind == ChannelKind::RayleighFullCsi ? rng.rayleigh_unit_power() : 1.0;
            const double y = h + sigma * rng.gaussian();
            // coherent detection: decide on h*y (sign of y for AWGN)
            if (h * y < 0.0) ++errors;
        }
    }
    return static_cast<double>(errors) / static_cast<double>(num_bits);
}

} // namespace genldpc
