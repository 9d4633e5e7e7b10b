#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genldpc/rng.hpp"

namespace genldpc {

enum class ChannelKind { BiAwgn, RayleighFullCsi };

ChannelKind channel_kind_from_string(const std::string& name);
std::string to_string(ChannelKind kind);

struct ChannelSpec {
    ChannelKind kind = ChannelKind::BiAwgn;
    double ebno_db = 0.0;
    double rate = 1.0;  // R_c used for the Eb/N0 -> sigma^2 conversion

    ChannelSpec with_rate(double r) const { return {kind, ebno_db, r}; }
};

// sigma^2 = 1 / (2 * R_c * 10^(ebno_db/10)) for unit-energy BPSK
double noise_variance(const ChannelSpec& spec);

// Channel observation for one block. fading is all-ones for AWGN. LLR sign
// convention: positive means bit 0 more likely.
struct LlrFrame {
    std::vector<double> llrs;
    std::vector<double> fading;
    std::vector<std::uint8_t> truth;
};

// BPSK x = 1 - 2c. AWGN: y = x + n, L = 2y/sigma^2. Rayleigh with full CSI:
// y = h x + n with E[h^2] = 1 i.i.d. per symbol, L = 2hy/sigma^2.
LlrFrame transmit(const std::vector<std::uint8_t>& codeword, const ChannelSpec& spec,
                  SplitRng& rng);

// Hard-decision BER of uncoded BPSK under the given spec (use rate = 1 to
// interpret ebno_db as Es/N0 per uncoded bit).
double uncoded_ber(const ChannelSpec& spec, long long num_bits, std::uint64_t seed);

} // namespace genldpc
