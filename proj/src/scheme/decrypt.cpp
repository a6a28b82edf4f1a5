#include <algorithm>

#include "lcws/error.hpp"
#include "lcws/scheme.hpp"

namespace lcws {

namespace {

const DescriptorNode* find_node(const LevelDescriptor& d, NodeId id) {
    auto it = std::lower_bound(d.nodes.begin(), d.nodes.end(), id,
                               [](const DescriptorNode& n, NodeId v) { return n.id < v; });
    return (it != d.nodes.end() && it->id == id) ? &*it : nullptr;
}

template <typename C>
auto find_component(const std::vector<C>& v, NodeId id) -> const C* {
    auto it = std::lower_bound(v.begin(), v.end(), id, [](const C& c, NodeId x) { return c.node < x; });
    return (it != v.end() && it->node == id) ? &*it : nullptr;
}

} // namespace

std::optional<GTElement> decrypt_leaf(const CiphertextBlock& ctb, const SecretKey& sk, NodeId z) {
    const auto* node = find_node(ctb.descriptor, z);
    if (!node || !node->leaf)
        throw Error(ErrorKind::argument, "node " + std::to_string(z) + " is not a leaf of block " +
                                             std::to_string(ctb.index));
    const auto* key = sk.find(node->attribute);
    if (!key) return std::nullopt;
    const auto* comp = find_component(ctb.leaves, z);
    if (!comp) return std::nullopt;
    return pair(key->d_j, comp->c_hat) / pair(key->d_j_prime, comp->c_hat_prime);
}

std::optional<GTElement> decrypt_interior(const std::map<std::uint32_t, GTElement>& children, std::uint32_t threshold) {
    if (threshold == 0 || children.size() < threshold) return std::nullopt;
    std::vector<std::uint32_t> indices;
    for (auto it = children.begin(); indices.size() < threshold; ++it) indices.push_back(it->first);
    const Scalar zero;
    GTElement acc;
    for (auto idx : indices) acc = acc * children.at(idx).pow(lagrange_coeff(idx, indices, zero));
    return acc;
}

GTElement unlock_value(const CiphertextBlock& ctb, const SecretKey& sk, const Unlock& unlock) {
    if (const auto* gate = std::get_if<GateUnlock>(&unlock)) {
        const auto* delta = find_component(ctb.deltas, gate->node);
        if (!delta)
            throw Error(ErrorKind::argument, "block " + std::to_string(ctb.index) + " has no link element for node " +
                                                 std::to_string(gate->node));
        return gate->value * pair(delta->value, sk.d_hat);
    }
    if (const auto* root = std::get_if<RootUnlock>(&unlock)) {
        if (ctb.index != 1) throw Error(ErrorKind::argument, "root value only unlocks the first block");
        return root->value;
    }
    return pair(std::get<SecUnlock>(unlock).sec, sk.d_hat);
}

GTElement mask_key(const CiphertextBlock& ctb, const SecretKey& sk, const GTElement& a) {
    return pair(ctb.c, sk.d) / a;
}

OpenedBlock decrypt_block(const CiphertextBlock& ctb, const SecretKey& sk, const Unlock& unlock) {
    const auto key = mask_key(ctb, sk, unlock_value(ctb, sk, unlock));
    const auto sec_len = suite().g0_bytes;
    if (ctb.c_tilde.size() != std::size_t{ctb.header.block_length} + sec_len)
        throw Error(ErrorKind::decode, "payload length disagrees with block header");
    Bytes plain = ctb.c_tilde;
    apply_kdf_mask(key, plain);
    OpenedBlock out;
    out.block.index = ctb.index;
    out.block.payload.assign(plain.begin(), plain.begin() + ctb.header.block_length);
    out.next_sec = G0Element::from_bytes(ByteView(plain).subspan(ctb.header.block_length));
    return out;
}

void Decryptor::receive(CiphertextBlock ctb) {
    auto& st = state_;
    if (ctb.count == 0 || ctb.index < 1 || ctb.index > ctb.count)
        throw Error(ErrorKind::argument, "block index out of range");
    if (st.message_id) {
        if (*st.message_id != ctb.message_id) throw Error(ErrorKind::argument, "block belongs to another message");
        if (st.count != ctb.count || *st.header != ctb.header)
            throw Error(ErrorKind::argument, "block header disagrees with earlier blocks");
    } else {
        st.message_id = ctb.message_id;
        st.count = ctb.count;
        st.header = ctb.header;
    }
    if (st.received.count(ctb.index)) throw Error(ErrorKind::state, "duplicate block " + std::to_string(ctb.index));
    if (ctb.descriptor.level != ctb.index) throw Error(ErrorKind::argument, "descriptor level mismatch");

    for (const auto& d : ctb.descriptor.nodes) st.topology[d.id] = d;
    for (const auto& d : ctb.descriptor.nodes) {
        if (!d.leaf) continue;
        if (auto f = decrypt_leaf(ctb, sk_, d.id)) {
            st.node_values[d.id] = *f;
        } else {
            st.failed_nodes.insert(d.id);
        }
    }
    const auto level = ctb.index;
    st.received.insert(level);
    st.unopened.emplace(level, std::move(ctb));
    evaluate_gates();
    open_ready_blocks();
}

void Decryptor::evaluate_gates() {
    auto& st = state_;
    std::map<NodeId, std::vector<const DescriptorNode*>> children;
    for (const auto& [id, d] : st.topology)
        if (d.parent != 0) children[d.parent].push_back(&d);

    // Deeper gates have larger levels; sweeping until nothing changes handles
    // arrival in any order.
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [id, d] : st.topology) {
            if (d.leaf || st.node_values.count(id) || st.failed_nodes.count(id)) continue;
            std::map<std::uint32_t, GTElement> values;
            std::uint32_t failed = 0;
            for (const auto* c : children[id]) {
                if (auto it = st.node_values.find(c->id); it != st.node_values.end()) {
                    values.emplace(c->index, it->second);
                } else if (st.failed_nodes.count(c->id)) {
                    ++failed;
                }
            }
            if (values.size() >= d.threshold) {
                st.node_values[id] = *decrypt_interior(values, d.threshold);
                changed = true;
            } else if (failed > d.child_count - d.threshold) {
                st.failed_nodes.insert(id);
                changed = true;
            }
        }
    }
}

void Decryptor::open(std::uint32_t level, const Unlock& unlock, UnlockPath path) {
    auto& st = state_;
    auto opened = decrypt_block(st.unopened.at(level), sk_, unlock);
    st.blocks[level] = std::move(opened.block);
    if (level < st.count) st.secs[level + 1] = std::move(opened.next_sec);
    st.opened_by[level] = path;
    st.unopened.erase(level);
}

void Decryptor::open_ready_blocks() {
    auto& st = state_;
    for (bool changed = true; changed;) {
        changed = false;
        for (auto it = st.unopened.begin(); it != st.unopened.end(); ++it) {
            const auto level = it->first;
            const auto& ctb = it->second;
            std::optional<std::pair<Unlock, UnlockPath>> how;
            for (const auto& delta : ctb.deltas) {
                if (auto v = st.node_values.find(delta.node); v != st.node_values.end()) {
                    how.emplace(GateUnlock{delta.node, v->second}, UnlockPath::gate);
                    break;
                }
            }
            if (!how && level == 1) {
                for (const auto& d : ctb.descriptor.nodes) {
                    if (d.parent != 0) continue;
                    if (auto v = st.node_values.find(d.id); v != st.node_values.end())
                        how.emplace(RootUnlock{v->second}, UnlockPath::root);
                }
            }
            if (!how) {
                if (auto s = st.secs.find(level); s != st.secs.end()) how.emplace(SecUnlock{s->second}, UnlockPath::sec);
            }
            if (how) {
                open(level, how->first, how->second);
                changed = true;
                break; // iterator invalidated
            }
        }
    }
}

std::optional<Bytes> assemble_message(DecryptionState& st, const SecretKey& sk) {
    if (!st.blocks.count(1) || !st.header) return std::nullopt;
    for (std::uint32_t level = 2; level <= st.count; ++level) {
        if (st.blocks.count(level)) continue;
        auto ctb = st.unopened.find(level);
        auto sec = st.secs.find(level);
        if (ctb == st.unopened.end() || sec == st.secs.end()) return std::nullopt;
        auto opened = decrypt_block(ctb->second, sk, SecUnlock{sec->second});
        st.blocks[level] = std::move(opened.block);
        if (level < st.count) st.secs[level + 1] = std::move(opened.next_sec);
        st.opened_by[level] = UnlockPath::sec;
        st.unopened.erase(ctb);
    }
    std::vector<DataBlock> ordered;
    ordered.reserve(st.count);
    for (const auto& [level, db] : st.blocks) ordered.push_back(db);
    return unchain_blocks(ordered, st.header->message_length);
}

std::optional<Bytes> decrypt_message(std::span<const CiphertextBlock> blocks, const SecretKey& sk) {
    Decryptor dec(sk);
    for (const auto& b : blocks) dec.receive(b);
    if (!dec.complete()) return std::nullopt;
    return assemble_message(dec.state(), sk);
}

} // namespace lcws
