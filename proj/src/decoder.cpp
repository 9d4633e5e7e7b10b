#include "genldpc/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace genldpc {

std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& H,
                                   const std::vector<std::uint8_t>& bits) {
    if (static_cast<int>(bits.size()) != H.cols())
        throw std::invalid_argument("syndrome: bit vector length mismatch");
    std::vector<std::uint8_t> s(H.rows(), 0);
    for (int j = 0; j < H.rows(); ++j) {
        std::uint8_t parity = 0;
        for (int i : H.row_support(j)) parity ^= (bits[i] & 1u);
        s[j] = parity;
    }
    return s;
}

BpDecoder::BpDecoder(const ParityCheckMatrix& H, DecoderConfig cfg)
    : cfg_(cfg), m_(H.rows()), n_(H.cols()) {
    if (!(cfg_.llr_clamp > 0.0)) throw std::invalid_argument("llr_clamp must be positive");
    if (!(cfg_.tanh_guard > 0.0) || !(cfg_.tanh_guard < 1e-6))
        throw std::invalid_argument("tanh_guard must lie in (0, 1e-6)");
    if (cfg_.max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");

    const int num_edges = static_cast<int>(H.edge_count());
    check_edge_begin_.resize(m_ + 1, 0);
    check_edge_var_.reserve(num_edges);
    for (int j = 0; j < m_; ++j) {
        check_edge_begin_[j] = static_cast<int>(check_edge_var_.size());
        for (int i : H.row_support(j)) check_edge_var_.push_back(i);
    }
    check_edge_begin_[m_] = num_edges;

    // edge id = position in the check-major order above
    std::vector<std::vector<int>> per_var(n_);
    for (int j = 0; j < m_; ++j)
        for (int e = check_edge_begin_[j]; e < check_edge_begin_[j + 1]; ++e)
            per_var[check_edge_var_[e]].push_back(e);
    var_edge_begin_.resize(n_ + 1, 0);
    var_edge_id_.reserve(num_edges);
    for (int i = 0; i < n_; ++i) {
        var_edge_begin_[i] = static_cast<int>(var_edge_id_.size());
        for (int e : per_var[i]) var_edge_id_.push_back(e);
    }
    var_edge_begin_[n_] = num_edges;

    v2c_.resize(num_edges);
    c2v_.resize(num_edges);
    int max_check_degree = 0;
    for (int j = 0; j < m_; ++j)
        max_check_degree = std::max(max_check_degree, check_edge_begin_[j + 1] - check_edge_begin_[j]);
    tanh_buf_.resize(max_check_degree);
    prefix_buf_.resize(max_check_degree + 1);
    hard_.resize(n_);
}

bool BpDecoder::syndrome_ok(const std::vector<std::uint8_t>& bits) const {
    for (int j = 0; j < m_; ++j) {
        std::uint8_t parity = 0;
        for (int e = check_edge_begin_[j]; e < check_edge_begin_[j + 1]; ++e)
            parity ^= bits[check_edge_var_[e]];
        if (parity) return false;
    }
    return true;
}

DecodeOutcome BpDecoder::decode(const LlrFrame& frame) {
    if (static_cast<int>(frame.llrs.size()) != n_)
        throw std::invalid_argument("decode: frame length mismatch");
    for (double l : frame.llrs)
        if (!std::isfinite(l)) throw std::invalid_argument("decode: non-finite channel LLR");

    const double clamp = cfg_.llr_clamp;
    const double tanh_cap = 1.0 - cfg_.tanh_guard;
    const auto clamp_msg = [clamp](double x) { return std::min(clamp, std::max(-clamp, x)); };

    DecodeOutcome out;
    out.total_llr.assign(frame.llrs.begin(), frame.llrs.end());

    // channel hard decisions; ties at exactly 0 decode to bit 0
    for (int i = 0; i < n_; ++i) hard_[i] = frame.llrs[i] < 0.0 ? 1 : 0;
    if (cfg_.early_stop && syndrome_ok(hard_)) {
        out.hard_bits = hard_;
        out.iterations_used = 0;
        out.syndrome_ok = true;
        out.converged_at = 0;
        return out;
    }

    for (int e = 0; e < static_cast<int>(v2c_.size()); ++e) v2c_[e] = 0.0;
    for (int i = 0; i < n_; ++i) {
        const double l = clamp_msg(frame.llrs[i]);
        for (int p = var_edge_begin_[i]; p < var_edge_begin_[i + 1]; ++p)
            v2c_[var_edge_id_[p]] = l;
    }

    int iterations = 0;
    std::optional<int> first_converged;
    for (int it = 1; it <= cfg_.max_iterations; ++it) {
        iterations = it;

        // check-node update: c2v = 2 atanh( prod of tanh(v2c/2) over others )
        for (int j = 0; j < m_; ++j) {
            const int begin = check_edge_begin_[j];
            const int deg = check_edge_begin_[j + 1] - begin;
            for (int d = 0; d < deg; ++d) {
                double t = std::tanh(0.5 * v2c_[begin + d]);
                t = std::min(tanh_cap, std::max(-tanh_cap, t));
                tanh_buf_[d] = t;
            }
            prefix_buf_[0] = 1.0;
            for (int d = 0; d < deg; ++d) prefix_buf_[d + 1] = prefix_buf_[d] * tanh_buf_[d];
            double suffix = 1.0;
            for (int d = deg - 1; d >= 0; --d) {
                double prod = prefix_buf_[d] * suffix;
                prod = std::min(tanh_cap, std::max(-tanh_cap, prod));
                // 2 atanh(x) in log form
                c2v_[begin + d] = clamp_msg(std::log((1.0 + prod) / (1.0 - prod)));
                suffix *= tanh_buf_[d];
            }
        }

        // variable-node update and totals; a degree-1 VN keeps sending its
        // channel LLR
        for (int i = 0; i < n_; ++i) {
            double sum = 0.0;
            for (int p = var_edge_begin_[i]; p < var_edge_begin_[i + 1]; ++p)
                sum += c2v_[var_edge_id_[p]];
            const double total = frame.llrs[i] + sum;
            out.total_llr[i] = total;
            hard_[i] = total < 0.0 ? 1 : 0;
            for (int p = var_edge_begin_[i]; p < var_edge_begin_[i + 1]; ++p) {
                const int e = var_edge_id_[p];
                v2c_[e] = clamp_msg(total - c2v_[e]);
            }
        }

        if (!first_converged && syndrome_ok(hard_)) {
            first_converged = it;
            if (cfg_.early_stop) break;
        }
    }

    out.hard_bits = hard_;
    out.iterations_used = iterations;
    out.syndrome_ok = (first_converged && *first_converged == iterations) || syndrome_ok(hard_);
    out.converged_at = first_converged;
    return out;
}

DecodeOutcome decode(const ParityCheckMatrix& H, const LlrFrame& frame,
                     const DecoderConfig& cfg) {
    BpDecoder decoder(H, cfg);
    return decoder.decode(frame);
}

} // namespace genldpc
