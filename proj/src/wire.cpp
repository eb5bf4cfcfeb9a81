#include "ppfl/wire.hpp"

namespace ppfl {

MsgKind Message::kind() const {
    if (std::holds_alternative<EvDhPubkey>(body)) return MsgKind::DhPubkey;
    if (std::holds_alternative<EvNoiseToServer>(body) ||
        std::holds_alternative<EvNoiseForward>(body))
        return MsgKind::NoisePairs;
    if (std::holds_alternative<EvMaskedWeights>(body)) return MsgKind::MaskedWeight;
    return MsgKind::GlobalWeight;
}

std::uint64_t Message::logical_count() const {
    return std::visit(
        [](const auto& b) -> std::uint64_t {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, EvBoot>) return 0;
            if constexpr (std::is_same_v<T, EvDhPubkey>) return 1;
            if constexpr (std::is_same_v<T, EvNoiseToServer>) return b.pairs.size();
            if constexpr (std::is_same_v<T, EvNoiseForward>) return b.pairs.size();
            if constexpr (std::is_same_v<T, EvMaskedWeights>) return b.y.size();
            if constexpr (std::is_same_v<T, EvGlobalWeights>) return b.w.size();
            return 0;
        },
        body);
}

namespace {

void put8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }
void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void header(std::vector<std::uint8_t>& out, MsgKind k, const Message& m, std::uint64_t len) {
    put64(out, len);
    put8(out, static_cast<std::uint8_t>(k));
    put32(out, m.sender);
    put32(out, m.recipient);
    put32(out, m.round);
}

}  // namespace

void serialize_message(const Message& m, std::vector<std::uint8_t>& out) {
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, EvBoot>) {
                // local control event, not a wire record
            } else if constexpr (std::is_same_v<T, EvDhPubkey>) {
                header(out, MsgKind::DhPubkey, m, 13 + b.pub.size());
                out.insert(out.end(), b.pub.begin(), b.pub.end());
            } else if constexpr (std::is_same_v<T, EvNoiseToServer> ||
                                 std::is_same_v<T, EvNoiseForward>) {
                header(out, MsgKind::NoisePairs, m, 13 + 16 * b.pairs.size());
                for (const RingPair& p : b.pairs) {
                    put64(out, p.e0.v);
                    put64(out, p.e1.v);
                }
            } else if constexpr (std::is_same_v<T, EvMaskedWeights>) {
                header(out, MsgKind::MaskedWeight, m, 13 + 8 * b.y.size());
                for (const RingElem e : b.y) put64(out, e.v);
            } else if constexpr (std::is_same_v<T, EvGlobalWeights>) {
                header(out, MsgKind::GlobalWeight, m, 13 + 8 * b.w.size());
                for (const double w : b.w) {
                    std::uint64_t bits;
                    static_assert(sizeof(bits) == sizeof(w));
                    __builtin_memcpy(&bits, &w, 8);
                    put64(out, bits);
                }
            }
        },
        m.body);
}

}  // namespace ppfl
