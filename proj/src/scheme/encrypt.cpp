#include "lcws/error.hpp"
#include "lcws/scheme.hpp"

namespace lcws {

namespace {

Scalar eval_poly(const std::vector<Scalar>& coeffs, std::uint32_t at) {
    const auto x = Scalar::from_u64(at);
    Scalar acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Scalar take_share(EncryptionState& st, const DescriptorNode& d) {
    auto it = st.pending_shares.find({d.parent, d.index});
    if (it == st.pending_shares.end())
        throw Error(ErrorKind::state, "no pending share for node " + std::to_string(d.id));
    auto s = it->second;
    st.pending_shares.erase(it);
    return s;
}

} // namespace

EncryptionState::EncryptionState(const EncryptionContext& ctx, std::uint32_t n, BlockHeader h, MessageId id)
    : context(ctx), count(n), header(h), message_id(id) {
    if (ctx.q.is_zero()) throw Error(ErrorKind::argument, "encryption context has q = 0");
}

CiphertextBlock encrypt_block(const DataBlock& db, const LevelSlice& slice, const PublicKey& pk,
                              EncryptionState& state, Rng& rng) {
    const auto i = state.next_level;
    if (i > state.count) throw Error(ErrorKind::state, "all levels already encrypted");
    if (db.index != i || slice.level != i)
        throw Error(ErrorKind::state, "block/slice index does not match encryption state level " + std::to_string(i));
    if (db.payload.size() != state.header.block_length) throw Error(ErrorKind::argument, "data block length mismatch");

    if (!state.current_secret) state.current_secret = Scalar::random_nonzero(rng);
    const Scalar s_i = *state.current_secret;
    std::optional<Scalar> s_next;
    if (i < state.count) s_next = Scalar::random_nonzero(rng);

    const auto& g = pk.g;
    const auto q_inv = state.context.q.inverse();
    auto* trace = state.trace;
    if (trace) trace->level_secrets.push_back(s_i);

    CiphertextBlock ctb;
    ctb.message_id = state.message_id;
    ctb.index = i;
    ctb.count = state.count;
    ctb.header = state.header;
    ctb.descriptor = slice.descriptor;

    // Gates before leaves: a single-leaf policy keeps its leaf on the root's
    // level, so the root's child shares must exist before leaves are handled.
    for (const auto& d : slice.descriptor.nodes) {
        if (d.leaf) continue;
        Scalar share;
        if (d.parent == 0) {
            if (i != 1) throw Error(ErrorKind::state, "root gate outside level 1");
            share = s_i;
        } else {
            if (i == 1) throw Error(ErrorKind::state, "non-root gate on level 1");
            share = take_share(state, d);
            ctb.deltas.push_back({d.id, pow_fixed(g, (s_i - share) * q_inv)});
        }
        std::vector<Scalar> coeffs{share};
        for (std::uint32_t k = 1; k < d.threshold; ++k) coeffs.push_back(Scalar::random(rng));
        for (std::uint32_t idx = 1; idx <= d.child_count; ++idx)
            state.pending_shares[{d.id, idx}] = eval_poly(coeffs, idx);
        if (trace) {
            trace->shares[d.id] = share;
            trace->polys[d.id] = std::move(coeffs);
        }
    }
    for (const auto& d : slice.descriptor.nodes) {
        if (!d.leaf) continue;
        const auto share = take_share(state, d);
        ctb.leaves.push_back({d.id, pow_fixed(g, share), pow_fixed(attribute_point(d.attribute), share)});
        if (trace) trace->shares[d.id] = share;
    }

    const G0Element sec_next = s_next ? pow_fixed(g, *s_next * q_inv) : G0Element::identity();
    ctb.c_tilde = db.payload;
    const auto sec_bytes = sec_next.to_bytes();
    ctb.c_tilde.insert(ctb.c_tilde.end(), sec_bytes.begin(), sec_bytes.end());
    apply_kdf_mask(pk.egg_alpha.pow(s_i), ctb.c_tilde);
    ctb.c = pow_fixed(pk.h, s_i);
    if (i == 1) {
        if (!state.commitment) throw Error(ErrorKind::state, "commitment missing for the first block");
        ctb.commitment = state.commitment;
    }

    state.current_secret = s_next;
    ++state.next_level;
    return ctb;
}

BlockEncryptor::BlockEncryptor(const PublicKey& pk, const EncryptionContext& ctx, const AccessTree& tree,
                               ByteView message, Rng& rng, std::optional<MessageId> id, EncryptionTrace* trace)
    : pk_(pk), rng_(rng), partition_(partition_levels(tree)),
      blocks_(partition_message(message, tree.depth())),
      state_(ctx, tree.depth(),
             BlockHeader{message.size(), static_cast<std::uint32_t>(blocks_.front().payload.size())}, MessageId{}) {
    if (message.empty()) throw Error(ErrorKind::argument, "empty message");
    if (blocks_.front().payload.size() > 0xffffffffu) throw Error(ErrorKind::argument, "message too large");
    if (id) {
        state_.message_id = *id;
    } else {
        rng_.fill(state_.message_id);
    }
    state_.commitment = data_verification(message, ctx.k);
    state_.trace = trace;
}

CiphertextBlock BlockEncryptor::next() {
    if (done()) throw Error(ErrorKind::state, "no blocks left to encrypt");
    const auto k = next_++;
    return encrypt_block(blocks_[k], partition_.levels[k], pk_, state_, rng_);
}

std::vector<CiphertextBlock> encrypt_message(const PublicKey& pk, const EncryptionContext& ctx,
                                             const AccessTree& tree, ByteView message, Rng& rng,
                                             EncryptionTrace* trace) {
    BlockEncryptor enc(pk, ctx, tree, message, rng, std::nullopt, trace);
    std::vector<CiphertextBlock> out;
    while (!enc.done()) out.push_back(enc.next());
    return out;
}

} // namespace lcws
