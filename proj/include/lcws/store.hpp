#ifndef LCWS_STORE_HPP
#define LCWS_STORE_HPP

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "lcws/scheme.hpp"

namespace lcws {

/// Cloud object key: one CTB per (message, level).
struct ObjectId {
    MessageId message{};
    std::uint32_t index = 0;

    /// "<32 hex digits>-<index>"
    std::string str() const;
    static ObjectId parse(std::string_view s);
    auto operator<=>(const ObjectId&) const = default;
};

struct StoreRecord {
    ObjectId id;
    Bytes data;
    std::chrono::system_clock::time_point uploaded_at;
};

std::string message_id_hex(const MessageId& id);
MessageId parse_message_id(std::string_view hex);

/// Directory-backed object store. Objects are immutable: writing an id twice
/// is rejected, and every write lands atomically.
class ObjectStore {
public:
    explicit ObjectStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    void put(const ObjectId& id, ByteView data);
    bool contains(const ObjectId& id) const;
    Bytes get(const ObjectId& id) const;
    StoreRecord record(const ObjectId& id) const;
    /// All stored blocks of a message, ascending by index.
    std::vector<ObjectId> list(const MessageId& message) const;
    /// Every message id with at least one block, ascending.
    std::vector<MessageId> messages() const;

private:
    std::filesystem::path path_of(const ObjectId& id) const;

    std::filesystem::path root_;
};

} // namespace lcws

#endif
