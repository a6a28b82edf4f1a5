#ifndef LCWS_WIRE_HPP
#define LCWS_WIRE_HPP

// Bit-exact encodings. All integers big-endian; every section carries a
// 4-byte length prefix.
//
// CTB ("LCWS"):
//   magic[4] version:u16 suite:u16 message_id[16] index:u32 count:u32 flags:u8
//   section header      = message_length:u64 block_length:u32
//   section descriptor  = level:u32 node_count:u32 node*
//       node = id:u32 parent:u32 index:u32 kind:u8 (0 gate: threshold:u32 child_count:u32
//                                                   1 leaf: attr_len:u16 attr)
//   section c_tilde
//   section c_i
//   section commitment  (only when flags bit 0 is set)
//   section deltas      = count:u32 (node:u32 element)*
//   section leaves      = count:u32 (node:u32 c_hat c_hat_prime)*
//   flags: bit 0 has_commitment (index == 1), bit 1 has_sentinel_sec (index == count)
//
// Key files: magic[4] version:u16 suite:u16 followed by length-prefixed components.

#include <filesystem>

#include "lcws/scheme.hpp"

namespace lcws {

inline constexpr std::uint16_t kWireVersion = 1;

Bytes serialize_ctb(const CiphertextBlock& ctb);
CiphertextBlock parse_ctb(ByteView data);

Bytes encode_descriptor(const LevelDescriptor& d);
LevelDescriptor decode_descriptor(ByteView data);

Bytes serialize(const PublicKey& pk);
Bytes serialize(const MasterKey& mk);
Bytes serialize(const SecretKey& sk);
Bytes serialize(const EncryptionContext& ctx);
Bytes serialize(const VerificationTuple& v);

PublicKey parse_public_key(ByteView data);
MasterKey parse_master_key(ByteView data);
SecretKey parse_secret_key(ByteView data);
EncryptionContext parse_encryption_context(ByteView data);
VerificationTuple parse_verification_tuple(ByteView data);

Bytes read_file(const std::filesystem::path& path);
/// Write-to-temp then rename. `owner_only` restricts permissions to 0600.
void write_file(const std::filesystem::path& path, ByteView data, bool owner_only = false);

} // namespace lcws

#endif
