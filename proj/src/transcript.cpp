#include "ppfl/transcript.hpp"

#include <stdexcept>

namespace ppfl {

void Transcript::count_only(const Message& m) {
    const std::uint64_t c = m.logical_count();
    if (c > 0) counts_[m.kind()] += c;
}

void Transcript::observe(const Message& m, std::uint64_t deliver_ns) {
    count_only(m);
    if (!hashing() || std::holds_alternative<EvBoot>(m.body)) return;
    hash_buf_.clear();
    hash_buf_.insert(hash_buf_.end(), running_.begin(), running_.end());
    serialize_message(m, hash_buf_);
    running_ = sha256(std::span<const std::uint8_t>(hash_buf_));
    hash_started_ = true;

    if (!capture_full()) return;
    const std::uint32_t nw = n_weights_hint;
    auto base = [&](MsgKind k) {
        WireRecord r;
        r.time_ns = deliver_ns;
        r.kind = k;
        r.sender = m.sender;
        r.recipient = m.recipient;
        r.round = m.round;
        return r;
    };
    if (const auto* p = std::get_if<EvDhPubkey>(&m.body)) {
        (void)p;
        full_log.push_back(base(MsgKind::DhPubkey));
    } else if (const auto* p = std::get_if<EvNoiseToServer>(&m.body)) {
        for (std::size_t i = 0; i < p->pairs.size(); ++i) {
            WireRecord r = base(MsgKind::NoisePairs);
            r.weight = nw ? static_cast<std::uint32_t>(i % nw) : 0;
            r.value0 = p->pairs[i].e0;
            r.value1 = p->pairs[i].e1;
            full_log.push_back(r);
        }
    } else if (const auto* p = std::get_if<EvNoiseForward>(&m.body)) {
        const std::size_t per_weight = nw ? p->pairs.size() / nw : p->pairs.size();
        for (std::size_t i = 0; i < p->pairs.size(); ++i) {
            WireRecord r = base(MsgKind::NoisePairs);
            r.weight = per_weight ? static_cast<std::uint32_t>(i / per_weight) : 0;
            r.value0 = p->pairs[i].e0;
            r.value1 = p->pairs[i].e1;
            full_log.push_back(r);
        }
    } else if (const auto* p = std::get_if<EvMaskedWeights>(&m.body)) {
        for (std::size_t i = 0; i < p->y.size(); ++i) {
            WireRecord r = base(MsgKind::MaskedWeight);
            r.weight = static_cast<std::uint32_t>(i);
            r.value0 = p->y[i];
            full_log.push_back(r);
        }
    } else if (const auto* p = std::get_if<EvGlobalWeights>(&m.body)) {
        for (std::size_t i = 0; i < p->w.size(); ++i) {
            WireRecord r = base(MsgKind::GlobalWeight);
            r.weight = static_cast<std::uint32_t>(i);
            r.real = p->w[i];
            full_log.push_back(r);
        }
    }
}

std::string Transcript::wire_hash() const {
    return hash_started_ ? hex(running_) : std::string("empty");
}

AttackRoundView& Transcript::round_view(std::uint32_t round) {
    if (rounds.size() <= round) rounds.resize(round + 1);
    AttackRoundView& v = rounds[round];
    if (v.local_weights.empty() && n_clients > 0) {
        v.local_weights.assign(static_cast<std::size_t>(n_clients), 0.0);
        v.pair_d0.assign(static_cast<std::size_t>(n_clients), 0.0);
        v.pair_d1.assign(static_cast<std::size_t>(n_clients), 0.0);
        v.nonobl_shares.assign(static_cast<std::size_t>(n_clients), 0.0);
    }
    return v;
}

}  // namespace ppfl
