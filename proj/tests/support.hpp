#ifndef LCWS_TEST_SUPPORT_HPP
#define LCWS_TEST_SUPPORT_HPP

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "lcws/rng.hpp"
#include "lcws/scheme.hpp"

namespace lcws::test {

/// Authority state with every secret retained, for closed-form checks.
struct Fixture {
    PublicKey pk;
    MasterKey mk;
    SetupTrace trace;
    EncryptionContext ctx;
    GTElement egg; // e(g,g)

    explicit Fixture(std::uint64_t seed);

    /// e(g,g)^x
    GTElement egg_pow(const Scalar& x) const { return egg.pow(x); }
};

Bytes random_bytes(std::mt19937_64& gen, std::size_t n);

struct PolicyShape {
    std::uint32_t max_depth = 6;
    std::uint32_t max_leaves = 40;
    std::uint32_t max_children = 4;
    std::uint32_t attribute_pool = 48;
};

/// Random threshold policy within the shape limits; attributes may repeat.
std::string random_policy(std::mt19937_64& gen, const PolicyShape& shape);

std::vector<std::string> tree_attributes(const AccessTree& tree);

/// A satisfying set obtained by pruning the tree's attributes at random.
AttributeSet random_satisfying_set(std::mt19937_64& gen, const AccessTree& tree);
/// A non-satisfying set, possibly padded with attributes foreign to the tree.
AttributeSet random_failing_set(std::mt19937_64& gen, const AccessTree& tree);

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace lcws::test

#endif
