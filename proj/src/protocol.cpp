#include "ppfl/protocol.hpp"

#include <algorithm>
#include <stdexcept>

#include "ppfl/parallel.hpp"

namespace ppfl {

namespace {

// RNG stream tags; every (party, round, purpose, unit) tuple gets its own
// child stream so parallel loops consume no shared generator state.
constexpr std::uint64_t kTagKeygen = 1;
constexpr std::uint64_t kTagMaskKey = 2;
constexpr std::uint64_t kTagRound = 3;
constexpr std::uint64_t kTagNoise = 4;
constexpr std::uint64_t kTagBits = 5;
constexpr std::uint64_t kTagShare = 6;

inline RingPair masked_pair(RingElem s, double d0, double d1, const FixedPointParams& fp) {
    return RingPair{s + encode(d0, fp), s + encode(d1, fp)};
}

}  // namespace

void maybe_swap(RingPair& p, bool bit) {
    if (bit) std::swap(p.e0, p.e1);
}

void server_forward_noise(std::span<RingPair> block, Rng& rng) {
    for (RingPair& p : block) maybe_swap(p, rng.coin());
    for (std::size_t i = block.size(); i > 1; --i) {  // Fisher-Yates
        const std::size_t j = rng.below(i);
        std::swap(block[i - 1], block[j]);
    }
}

Client::Client(Init init)
    : id_(init.id),
      pc_(*init.pc),
      base_(init.proto_base),
      data_root_(init.data_root),
      data_(init.data),
      train_idx_(init.train_idx),
      tr_(init.transcript),
      fixed_weights_(init.fixed_weights) {
    if (pc_.n < 2) throw std::invalid_argument("protocol: need n >= 2 parties");
    Rng mk = base_.child(kTagMaskKey);
    std::array<std::uint8_t, 32> raw{};
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t v = mk.next_u64();
        for (int b = 0; b < 8; ++b) raw[i * 8 + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
    mask_key_ = sha256(std::span<const std::uint8_t>(raw));
    const std::size_t nw = pc_.n_weights;
    w_start_.assign(nw, 0.0);  // gradient descent starts from the zero model
    w_local_.assign(nw, 0.0);
    noise_add_.assign(nw, RingElem{});
    s_sub_.assign(nw, RingElem{});
    nonobl_.assign(nw, RingElem{});
}

std::string Client::phase() const {
    if (finished_) return "done";
    std::string s = "client" + std::to_string(id_) + " round " + std::to_string(round_);
    if (keys_.size() + 1 < static_cast<std::size_t>(pc_.n))
        return s + " waiting for peer keys (" + std::to_string(keys_.size()) + "/" +
               std::to_string(pc_.n - 1) + ")";
    if (!trained_) return s + " not yet training";
    if (pc_.mode == Mode::Oblivious && !noise_ready_) return s + " waiting for noise pairs";
    if (!emitted_) return s + " masked weight not sent";
    return s + " waiting for global weights";
}

Actions Client::handle(const Message& m) {
    Actions acts;
    acts.round = round_;
    if (std::holds_alternative<EvBoot>(m.body)) {
        Rng kg = base_.child(kTagKeygen);
        dh_ = dh_keygen(pc_.dh, kg);
        acts.ops.dh_keygen = 1;
        Message out;
        out.sender = id_;
        out.recipient = kServerId;
        out.round = 0;
        out.body = EvDhPubkey{dh_serialize(dh_.pub, pc_.dh)};
        acts.out.push_back(std::move(out));
        return acts;
    }
    if (const auto* pk = std::get_if<EvDhPubkey>(&m.body)) {
        if (keys_.count(m.sender)) throw std::runtime_error("protocol: duplicate peer key");
        keys_[m.sender] = dh_shared(dh_.priv, dh_deserialize(pk->pub), pc_.dh);
        acts.ops.dh_shared = 1;
        if (keys_.size() == static_cast<std::size_t>(pc_.n) - 1) begin_round(0, acts);
        return acts;
    }
    if (const auto* nf = std::get_if<EvNoiseForward>(&m.body)) {
        if (m.round != round_) throw std::runtime_error("protocol: noise for wrong round");
        const std::size_t nw = pc_.n_weights;
        const std::size_t per_w = static_cast<std::size_t>(pc_.n) - 1;
        if (nf->pairs.size() != per_w * nw)
            throw std::runtime_error("protocol: missing noise pairs");
        const std::uint32_t r = m.round;
        par::parallel_for(nw, [&](std::size_t w) {
            Rng bits = base_.child(kTagRound, r).child(kTagBits, w);
            RingElem acc{};
            for (std::size_t k = 0; k < per_w; ++k) {
                const RingPair& p = nf->pairs[w * per_w + k];
                acc += bits.coin() ? p.e1 : p.e0;
            }
            noise_add_[w] = acc;
        });
        if (tr_ && tr_->capture_attack() && id_ == tr_->honest) {
            Rng bits = base_.child(kTagRound, r).child(kTagBits, tr_->tracked_weight);
            auto& view = tr_->round_view(r);
            view.honest_bits.clear();
            for (std::size_t k = 0; k < per_w; ++k)
                view.honest_bits.push_back(bits.coin() ? 1 : 0);
        }
        noise_ready_ = true;
        try_emit_round1(r, acts);
        return acts;
    }
    if (const auto* gw = std::get_if<EvGlobalWeights>(&m.body)) {
        if (m.round != round_) throw std::runtime_error("protocol: global weights for wrong round");
        if (gw->w.size() != pc_.n_weights)
            throw std::runtime_error("protocol: global weight count mismatch");
        // Output phase: adopt the shared model, advance every mask label to
        // the next round, drop consumed noise.
        w_start_ = gw->w;
        ++round_;
        trained_ = noise_ready_ = emitted_ = false;
        std::fill(noise_add_.begin(), noise_add_.end(), RingElem{});
        std::fill(s_sub_.begin(), s_sub_.end(), RingElem{});
        std::fill(nonobl_.begin(), nonobl_.end(), RingElem{});
        if (round_ < static_cast<std::uint32_t>(pc_.rounds)) {
            begin_round(round_, acts);
        } else {
            finished_ = true;
        }
        return acts;
    }
    throw std::runtime_error("protocol: unexpected message at client");
}

void Client::begin_round(std::uint32_t r, Actions& acts) {
    acts.round = r;
    const std::size_t nw = pc_.n_weights;
    if (fixed_weights_) {
        w_local_ = *fixed_weights_;
    } else {
        const auto rows = sample_one(train_idx_, pc_.local_size,
                                     data_root_.child(kTagSample, r).child(id_));
        TrainConfig tc = pc_.train;
        w_local_ = local_train(*data_, rows, w_start_, tc);
        acts.ops.train_example_iter +=
            static_cast<std::uint64_t>(rows.size()) * static_cast<std::uint64_t>(tc.iterations);
    }
    trained_ = true;

    AttackRoundView* view = nullptr;
    if (tr_ && tr_->capture_attack()) {
        view = &tr_->round_view(r);
        view->local_weights[id_] = w_local_[tr_->tracked_weight];
    }

    if (pc_.mode == Mode::Oblivious) {
        const std::size_t nrecv = static_cast<std::size_t>(pc_.n) - 1;
        std::vector<RingPair> pairs(nrecv * nw);
        std::vector<RingElem> s_flat(nrecv * nw);
        const double shape_scale = pc_.noise_scale;
        par::parallel_for(nrecv, [&](std::size_t ridx) {
            const std::uint32_t recv =
                static_cast<std::uint32_t>(ridx < id_ ? ridx : ridx + 1);
            Rng nrng = base_.child(kTagRound, r).child(kTagNoise, recv);
            const double shape = 1.0 / static_cast<double>(pc_.n);
            for (std::size_t w = 0; w < nw; ++w) {
                double d0 = 0.0, d1 = 0.0;
                if (!pc_.zero_noise) {
                    d0 = sample_gamma(shape, shape_scale, nrng) -
                         sample_gamma(shape, shape_scale, nrng);
                    d1 = sample_gamma(shape, shape_scale, nrng) -
                         sample_gamma(shape, shape_scale, nrng);
                }
                const RingElem s = derive_mask(
                    mask_key_, MaskLabel::noise_s(r, static_cast<std::uint32_t>(w), id_, recv));
                pairs[ridx * nw + w] = masked_pair(s, d0, d1, pc_.fp);
                s_flat[ridx * nw + w] = s;
                if (view && recv == tr_->honest && w == tr_->tracked_weight) {
                    view->pair_d0[id_] = d0;
                    view->pair_d1[id_] = d1;
                }
            }
        });
        for (std::size_t ridx = 0; ridx < nrecv; ++ridx)
            for (std::size_t w = 0; w < nw; ++w) s_sub_[w] += s_flat[ridx * nw + w];
        acts.ops.noise_pair += nrecv * nw;
        Message out;
        out.sender = id_;
        out.recipient = kServerId;
        out.round = r;
        out.body = EvNoiseToServer{std::move(pairs)};
        acts.out.push_back(std::move(out));
    } else if (pc_.mode == Mode::NonOblivious) {
        par::parallel_for(nw, [&](std::size_t w) {
            Rng srng = base_.child(kTagRound, r).child(kTagShare, w);
            const double share =
                pc_.zero_noise ? 0.0 : local_laplace_share(pc_.noise_scale, pc_.n, srng);
            nonobl_[w] = encode(share, pc_.fp);
            if (view && w == tr_->tracked_weight) view->nonobl_shares[id_] = share;
        });
        acts.ops.laplace_share += nw;
    }
    try_emit_round1(r, acts);
}

RingElem Client::round1_value(std::uint32_t r, std::uint32_t w) const {
    RingElem y = encode(w_local_[w], pc_.fp);
    for (const auto& [peer, key] : keys_) {
        const RingElem mask = derive_mask(key, MaskLabel::pairwise_r(r, w, id_, peer));
        if (id_ < peer)
            y += mask;
        else
            y -= mask;
    }
    if (pc_.mode == Mode::Oblivious) {
        y += noise_add_[w];
        y -= s_sub_[w];
    } else if (pc_.mode == Mode::NonOblivious) {
        y += nonobl_[w];
    }
    return y;
}

void Client::try_emit_round1(std::uint32_t r, Actions& acts) {
    if (!trained_ || emitted_) return;
    if (pc_.mode == Mode::Oblivious && !noise_ready_) return;
    const std::size_t nw = pc_.n_weights;
    std::vector<RingElem> y(nw);
    par::parallel_for(nw, [&](std::size_t w) {
        y[w] = round1_value(r, static_cast<std::uint32_t>(w));
    });
    acts.ops.mask_derive +=
        (static_cast<std::uint64_t>(pc_.n) - 1) * static_cast<std::uint64_t>(nw);
    Message out;
    out.sender = id_;
    out.recipient = kServerId;
    out.round = r;
    out.body = EvMaskedWeights{std::move(y)};
    acts.out.push_back(std::move(out));
    emitted_ = true;
}

Server::Server(const ProtocolConfig& pc, Rng proto_base, Transcript* transcript)
    : pc_(pc), base_(proto_base), tr_(transcript) {}

std::string Server::phase() const {
    std::string s = "server: " + std::to_string(pubs_seen_) + "/" + std::to_string(pc_.n) +
                    " keys";
    for (const auto& [r, st] : rounds_)
        s += "; round " + std::to_string(r) + ": noise " + std::to_string(st.noise_seen) +
             "/" + std::to_string(pc_.n) + ", y " + std::to_string(st.y_seen) + "/" +
             std::to_string(pc_.n);
    return s;
}

Actions Server::handle(const Message& m) {
    Actions acts;
    acts.round = m.round;
    const int n = pc_.n;
    const std::size_t nw = pc_.n_weights;

    if (const auto* pk = std::get_if<EvDhPubkey>(&m.body)) {
        ++pubs_seen_;
        acts.ops.server_relay = static_cast<std::uint64_t>(n) - 1;
        for (int j = 0; j < n; ++j) {
            if (static_cast<std::uint32_t>(j) == m.sender) continue;
            Message out;
            out.sender = m.sender;  // relayed on behalf of the original party
            out.recipient = static_cast<std::uint32_t>(j);
            out.round = 0;
            out.body = EvDhPubkey{pk->pub};
            acts.out.push_back(std::move(out));
        }
        return acts;
    }

    if (auto* np = std::get_if<EvNoiseToServer>(&const_cast<Message&>(m).body)) {
        const std::size_t nrecv = static_cast<std::size_t>(n) - 1;
        if (np->pairs.size() != nrecv * nw)
            throw std::runtime_error("server: bad noise bundle size");
        RoundStage& st = rounds_[m.round];
        if (st.staged.empty()) st.staged.resize(static_cast<std::size_t>(n));
        st.staged[m.sender] = std::move(np->pairs);
        ++st.noise_seen;
        if (st.noise_seen < n) return acts;

        // every sender's pairs staged: permute and forward per receiver
        const std::uint32_t r = m.round;
        std::vector<Message> outs(static_cast<std::size_t>(n));
        par::parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
            Rng srng = base_.child(r, static_cast<std::uint64_t>(j));
            EvNoiseForward fwd;
            fwd.pairs.resize(nrecv * nw);
            for (std::size_t w = 0; w < nw; ++w) {
                std::size_t k = 0;
                for (std::size_t s = 0; s < static_cast<std::size_t>(n); ++s) {
                    if (s == j) continue;
                    const std::size_t ridx = j < s ? j : j - 1;  // j's slot in s's list
                    fwd.pairs[w * nrecv + k] = st.staged[s][ridx * nw + w];
                    ++k;
                }
                server_forward_noise(
                    std::span<RingPair>(fwd.pairs.data() + w * nrecv, nrecv), srng);
            }
            Message out;
            out.sender = kServerId;  // forwarded pairs are anonymized
            out.recipient = static_cast<std::uint32_t>(j);
            out.round = r;
            out.body = std::move(fwd);
            outs[j] = std::move(out);
        });
        acts.ops.server_forward_pair =
            static_cast<std::uint64_t>(n) * nrecv * static_cast<std::uint64_t>(nw);
        for (auto& o : outs) acts.out.push_back(std::move(o));
        st.staged.clear();
        st.staged.shrink_to_fit();
        return acts;
    }

    if (const auto* mw = std::get_if<EvMaskedWeights>(&m.body)) {
        if (mw->y.size() != nw) throw std::runtime_error("server: bad masked weight count");
        RoundStage& st = rounds_[m.round];
        if (st.y_sum.empty()) st.y_sum.assign(nw, RingElem{});
        for (std::size_t w = 0; w < nw; ++w) st.y_sum[w] += mw->y[w];
        ++st.y_seen;
        acts.ops.server_add = nw;
        if (st.y_seen < n) return acts;

        // Round 2: modular sum, centered decode, division by n over rationals
        std::vector<double> wvec(nw);
        for (std::size_t w = 0; w < nw; ++w)
            wvec[w] = decode_sum(st.y_sum[w], pc_.fp) / static_cast<double>(n);
        if (w_history_.size() != m.round)
            throw std::runtime_error("server: out-of-order round completion");
        w_history_.push_back(wvec);
        if (tr_ && tr_->capture_attack())
            tr_->round_view(m.round).global = wvec[tr_->tracked_weight];
        for (int j = 0; j < n; ++j) {
            Message out;
            out.sender = kServerId;
            out.recipient = static_cast<std::uint32_t>(j);
            out.round = m.round;
            out.body = EvGlobalWeights{wvec};
            acts.out.push_back(std::move(out));
        }
        rounds_.erase(m.round);
        return acts;
    }

    throw std::runtime_error("server: unexpected message");
}

}  // namespace ppfl
