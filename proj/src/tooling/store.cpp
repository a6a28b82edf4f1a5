#include "lcws/store.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "lcws/error.hpp"
#include "lcws/wire.hpp"

namespace lcws {

namespace fs = std::filesystem;

namespace {
constexpr std::string_view kSuffix = ".ctb";
}

std::string message_id_hex(const MessageId& id) {
    return to_hex(id);
}

MessageId parse_message_id(std::string_view hex) {
    if (hex.size() != 32) throw Error(ErrorKind::argument, "message id must be 32 hex digits");
    Bytes b = from_hex(hex);
    MessageId id{};
    std::copy(b.begin(), b.end(), id.begin());
    return id;
}

std::string ObjectId::str() const {
    return message_id_hex(message) + "-" + std::to_string(index);
}

ObjectId ObjectId::parse(std::string_view s) {
    const auto dash = s.find('-');
    if (dash != 32) throw Error(ErrorKind::argument, "malformed object id: " + std::string(s));
    ObjectId id;
    id.message = parse_message_id(s.substr(0, dash));
    auto digits = s.substr(dash + 1);
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id.index);
    if (ec != std::errc{} || end != digits.data() + digits.size() || id.index == 0 || digits[0] == '0')
        throw Error(ErrorKind::argument, "malformed object id: " + std::string(s));
    return id;
}

ObjectStore::ObjectStore(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_)) throw Error(ErrorKind::io, "cannot use store directory " + root_.string());
}

fs::path ObjectStore::path_of(const ObjectId& id) const {
    return root_ / (id.str() + std::string(kSuffix));
}

void ObjectStore::put(const ObjectId& id, ByteView data) {
    if (id.index == 0) throw Error(ErrorKind::argument, "object index must be positive");
    if (contains(id)) throw Error(ErrorKind::io, "object already stored: " + id.str());
    write_file(path_of(id), data);
}

bool ObjectStore::contains(const ObjectId& id) const {
    return fs::exists(path_of(id));
}

Bytes ObjectStore::get(const ObjectId& id) const {
    auto p = path_of(id);
    if (!fs::exists(p)) throw Error(ErrorKind::not_found, "no such object: " + id.str());
    return read_file(p);
}

StoreRecord ObjectStore::record(const ObjectId& id) const {
    StoreRecord rec{id, get(id), {}};
    auto ft = fs::last_write_time(path_of(id));
    rec.uploaded_at = std::chrono::time_point_cast<std::chrono::system_clock::duration>(
        std::chrono::file_clock::to_sys(ft));
    return rec;
}

std::vector<ObjectId> ObjectStore::list(const MessageId& message) const {
    std::vector<ObjectId> out;
    const auto prefix = message_id_hex(message) + "-";
    for (const auto& entry : fs::directory_iterator(root_)) {
        auto name = entry.path().filename().string();
        if (!name.starts_with(prefix) || !name.ends_with(kSuffix)) continue;
        try {
            out.push_back(ObjectId::parse(std::string_view(name).substr(0, name.size() - kSuffix.size())));
        } catch (const Error&) {
            continue; // stray file
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MessageId> ObjectStore::messages() const {
    std::set<MessageId> ids;
    for (const auto& entry : fs::directory_iterator(root_)) {
        auto name = entry.path().filename().string();
        if (!name.ends_with(kSuffix)) continue;
        try {
            ids.insert(ObjectId::parse(std::string_view(name).substr(0, name.size() - kSuffix.size())).message);
        } catch (const Error&) {
        }
    }
    return {ids.begin(), ids.end()};
}

} // namespace lcws
