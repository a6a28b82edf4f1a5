#ifndef LCWS_SCHEME_HPP
#define LCWS_SCHEME_HPP

// Level-partitioned CP-ABE: setup, key generation, XOR-chained message
// partition, per-level block encryption, staged decryption and the
// pairing-based integrity check.
//
// Each level i of the access tree encrypts one data block DB_i under a fresh
// level secret s_i. The payload of level i also carries Sec_{i+1} = g^{s_{i+1}/q},
// so opening DB_1 (which requires satisfying the root) unlocks the whole chain,
// while any recovered gate value on level i >= 2 opens DB_i through
// Delta C_{i,j} = g^{(s_i - q_j(0))/q}.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "lcws/algebra.hpp"
#include "lcws/policy.hpp"

namespace lcws {

struct PublicKey {
    G0Element g;
    G0Element h;         // g^beta
    GTElement egg_alpha; // e(g,g)^alpha
};

struct MasterKey {
    Scalar beta;
    G0Element g_alpha;
    Scalar q;
    Scalar k;
};

/// Scalars the TA provisions to a data owner: q for the level links, k for the
/// message commitment. Never part of the public key.
struct EncryptionContext {
    Scalar q;
    Scalar k;
};

EncryptionContext encryption_context(const MasterKey& mk);

struct AttributeKey {
    std::string attribute;
    G0Element d_j;       // g^r * H_att(j)^{r_j}
    G0Element d_j_prime; // g^{r_j}
};

struct SecretKey {
    G0Element d;     // g^{(alpha + r)/beta}
    G0Element d_hat; // g^{r q}
    std::vector<AttributeKey> components; // sorted by attribute, unique

    const AttributeKey* find(std::string_view attribute) const;
    AttributeSet attributes() const;
};

/// Secret values a test harness may capture; never populated in production paths.
struct SetupTrace {
    Scalar alpha;
};

struct KeygenTrace {
    Scalar r;
    std::map<std::string, Scalar> r_j;
};

std::pair<PublicKey, MasterKey> setup(Rng& rng, SetupTrace* trace = nullptr);
SecretKey keygen(const PublicKey& pk, const MasterKey& mk, const AttributeSet& attrs, Rng& rng,
                 KeygenTrace* trace = nullptr);

/// H_att(attribute). Memoized: policies and keys reuse a small attribute
/// universe, and each hash costs a cofactor multiplication.
G0Element attribute_point(std::string_view attribute);

/// C-check = H_v(M)^k.
G0Element data_verification(ByteView message, const Scalar& k);
inline G0Element data_verification(ByteView message, const MasterKey& mk) { return data_verification(message, mk.k); }

struct DataBlock {
    std::uint32_t index = 0; // 1..n
    Bytes payload;
    bool operator==(const DataBlock&) const = default;
};

/// Splits M into n equal segments (the last zero-padded) and chains them:
/// DB_1 = M_1, DB_i = M_{i-1} xor M_i.
std::vector<DataBlock> partition_message(ByteView message, std::uint32_t n);
/// Inverse of partition_message; truncates to `length` bytes.
Bytes unchain_blocks(std::span<const DataBlock> blocks, std::uint64_t length);

using MessageId = std::array<std::uint8_t, 16>;

struct BlockHeader {
    std::uint64_t message_length = 0; // true plaintext length
    std::uint32_t block_length = 0;   // bytes per DB
    bool operator==(const BlockHeader&) const = default;
};

struct DeltaComponent {
    NodeId node = 0;
    G0Element value; // Delta C_{i,j}
};

struct LeafComponent {
    NodeId node = 0;
    G0Element c_hat;       // g^{q_y(0)}
    G0Element c_hat_prime; // H_att(att(y))^{q_y(0)}
};

struct CiphertextBlock {
    MessageId message_id{};
    std::uint32_t index = 0; // level i, 1-based
    std::uint32_t count = 0; // n
    BlockHeader header;
    LevelDescriptor descriptor;
    Bytes c_tilde; // (DB_i || enc(Sec_{i+1})) xor kdf_mask(e(g,g)^{alpha s_i})
    G0Element c;   // h^{s_i}
    std::optional<G0Element> commitment; // present iff index == 1
    std::vector<DeltaComponent> deltas;  // ascending node id; empty iff index == 1
    std::vector<LeafComponent> leaves;   // ascending node id

    bool has_sentinel_sec() const { return index == count; }
};

/// Everything secret the encryptor sampled, for oracle tests.
struct EncryptionTrace {
    std::vector<Scalar> level_secrets;           // s_1..s_n
    std::map<NodeId, Scalar> shares;             // q_x(0) for every node
    std::map<NodeId, std::vector<Scalar>> polys; // gate polynomial coefficients
};

/// Hand-off state between consecutive encrypt_block calls.
struct EncryptionState {
    EncryptionState(const EncryptionContext& ctx, std::uint32_t count, BlockHeader header, MessageId id);

    EncryptionContext context;
    std::uint32_t next_level = 1;
    std::uint32_t count = 0;
    BlockHeader header;
    MessageId message_id{};
    std::optional<Scalar> current_secret; // s_i for next_level
    /// q_parent(index) for children not yet encrypted, keyed by (parent id, sibling index).
    std::map<std::pair<NodeId, std::uint32_t>, Scalar> pending_shares;
    std::optional<G0Element> commitment;
    EncryptionTrace* trace = nullptr;
};

CiphertextBlock encrypt_block(const DataBlock& db, const LevelSlice& slice, const PublicKey& pk,
                              EncryptionState& state, Rng& rng);

/// Produces CTB_1..CTB_n one at a time so the caller can ship each block as
/// soon as it exists.
class BlockEncryptor {
public:
    BlockEncryptor(const PublicKey& pk, const EncryptionContext& ctx, const AccessTree& tree, ByteView message,
                   Rng& rng, std::optional<MessageId> id = std::nullopt, EncryptionTrace* trace = nullptr);

    std::uint32_t block_count() const { return static_cast<std::uint32_t>(blocks_.size()); }
    bool done() const { return next_ >= blocks_.size(); }
    const MessageId& message_id() const { return state_.message_id; }
    CiphertextBlock next();

private:
    const PublicKey& pk_;
    Rng& rng_;
    LevelPartition partition_;
    std::vector<DataBlock> blocks_;
    EncryptionState state_;
    std::size_t next_ = 0;
};

std::vector<CiphertextBlock> encrypt_message(const PublicKey& pk, const EncryptionContext& ctx,
                                             const AccessTree& tree, ByteView message, Rng& rng,
                                             EncryptionTrace* trace = nullptr);

/// F_z = e(D_j, C_hat) / e(D'_j, C_hat') = e(g,g)^{r q_z(0)}, or nullopt when att(z) is not in the key.
std::optional<GTElement> decrypt_leaf(const CiphertextBlock& ctb, const SecretKey& sk, NodeId z);

/// Lagrange-combines the k smallest-index available children; nullopt when fewer than k.
std::optional<GTElement> decrypt_interior(const std::map<std::uint32_t, GTElement>& children, std::uint32_t threshold);

struct GateUnlock {
    NodeId node = 0;
    GTElement value; // F_x for a gate on this block's level
};
struct RootUnlock {
    GTElement value; // F_R, level 1 only
};
struct SecUnlock {
    G0Element sec; // Sec_i = g^{s_i/q}
};
using Unlock = std::variant<GateUnlock, RootUnlock, SecUnlock>;

enum class UnlockPath { gate, root, sec };

struct OpenedBlock {
    DataBlock block;
    G0Element next_sec; // Sec_{i+1}; identity for the last block
};

/// A = e(g,g)^{r s_i}, from F_x * e(Delta C, D_hat), from F_R, or from e(Sec_i, D_hat).
GTElement unlock_value(const CiphertextBlock& ctb, const SecretKey& sk, const Unlock& unlock);
/// e(C_i, D) / A = e(g,g)^{alpha s_i}, the key of the payload mask.
GTElement mask_key(const CiphertextBlock& ctb, const SecretKey& sk, const GTElement& a);

OpenedBlock decrypt_block(const CiphertextBlock& ctb, const SecretKey& sk, const Unlock& unlock);

struct DecryptionState {
    std::optional<MessageId> message_id;
    std::uint32_t count = 0;
    std::optional<BlockHeader> header;
    std::map<std::uint32_t, CiphertextBlock> unopened;  // S_CTB
    std::map<std::uint32_t, DataBlock> blocks;          // S_DB
    std::map<std::uint32_t, G0Element> secs;            // S_Sec, keyed by level
    std::map<NodeId, GTElement> node_values;            // resolved F values
    std::set<NodeId> failed_nodes;                      // nodes known to be unsatisfiable
    std::map<NodeId, DescriptorNode> topology;          // learned from descriptors
    std::map<std::uint32_t, UnlockPath> opened_by;
    std::set<std::uint32_t> received;
};

/// Owns the DecryptionState; feed blocks as they arrive, in any order.
class Decryptor {
public:
    explicit Decryptor(const SecretKey& sk) : sk_(sk) {}

    void receive(CiphertextBlock ctb);
    const DecryptionState& state() const { return state_; }
    DecryptionState& state() { return state_; }
    bool complete() const { return state_.count != 0 && state_.received.size() == state_.count; }

private:
    void evaluate_gates();
    void open_ready_blocks();
    void open(std::uint32_t level, const Unlock& unlock, UnlockPath path);

    const SecretKey& sk_;
    DecryptionState state_;
};

/// Opens the remaining blocks through the Sec chain and reassembles M;
/// nullopt when DB_1 was never recovered or the chain is broken.
std::optional<Bytes> assemble_message(DecryptionState& state, const SecretKey& sk);

std::optional<Bytes> decrypt_message(std::span<const CiphertextBlock> blocks, const SecretKey& sk);

struct VerificationTuple {
    G0Element v1; // H_v(M)^t
    G0Element v2; // g^t
};

VerificationTuple make_challenge(const G0Element& commitment, const MasterKey& mk, Rng& rng,
                                 Scalar* t_out = nullptr);
bool verify_message(ByteView message, const VerificationTuple& v);

} // namespace lcws

#endif
