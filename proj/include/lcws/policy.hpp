#ifndef LCWS_POLICY_HPP
#define LCWS_POLICY_HPP

// Threshold access trees: policy text grammar, satisfaction, per-level
// partitioning and Lagrange coefficients.
//
// Grammar (whitespace-insensitive):
//   expr  := attr | '(' expr ')' | '(' expr (AND expr)+ ')' | '(' expr (OR expr)+ ')'
//          | '(' k 'of' '(' expr (',' expr)* ')' ')'
//   attr  := [A-Za-z0-9_:-]+
// AND is n-of-n, OR is 1-of-n. A policy that is a single attribute is
// wrapped in a 1-of-1 root gate whose leaf lives on the root's level.

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcws/algebra.hpp"

namespace lcws {

using NodeId = std::uint32_t;

struct AccessNode {
    NodeId id = 0;      // 1-based, pre-order in policy text
    NodeId parent = 0;  // 0 for the root
    std::uint32_t index = 0; // 1-based position among siblings; 0 for the root
    std::uint32_t level = 1; // root is level 1
    bool leaf = false;
    std::string attribute;           // leaves only
    std::uint32_t threshold = 0;     // gates only
    std::vector<NodeId> children;    // gates only, sibling order

    bool operator==(const AccessNode&) const = default;
};

class AccessTree {
public:
    /// Takes nodes in id order (nodes[k].id == k + 1, root first). Validates structure.
    explicit AccessTree(std::vector<AccessNode> nodes);

    const AccessNode& root() const { return nodes_.front(); }
    const AccessNode& node(NodeId id) const;
    const std::vector<AccessNode>& nodes() const { return nodes_; }
    std::uint32_t depth() const { return depth_; }
    std::size_t leaf_count() const;

    bool operator==(const AccessTree&) const = default;

private:
    std::vector<AccessNode> nodes_;
    std::uint32_t depth_ = 1;
};

using AttributeSet = std::set<std::string>;

AccessTree parse_policy(std::string_view text);
/// Canonical text; parse_policy(to_policy_string(t)) == t.
std::string to_policy_string(const AccessTree& tree);

bool satisfies(const AccessTree& tree, const AttributeSet& attrs);

/// Public topology of one node as carried in a level descriptor.
struct DescriptorNode {
    NodeId id = 0;
    NodeId parent = 0;
    std::uint32_t index = 0;
    bool leaf = false;
    std::uint32_t threshold = 0;   // gates
    std::uint32_t child_count = 0; // gates
    std::string attribute;         // leaves

    bool operator==(const DescriptorNode&) const = default;
};

/// Enough of one level's topology for a decryptor to evaluate it.
struct LevelDescriptor {
    std::uint32_t level = 0;
    std::vector<DescriptorNode> nodes; // ascending id

    bool operator==(const LevelDescriptor&) const = default;
};

struct LevelSlice {
    std::uint32_t level = 0;
    std::vector<NodeId> gates;  // interior nodes on this level
    std::vector<NodeId> leaves; // leaf set Y of this level
    LevelDescriptor descriptor;
};

struct LevelPartition {
    std::vector<LevelSlice> levels; // levels[i - 1] is level i
};

LevelPartition partition_levels(const AccessTree& tree);

/// Delta_{i,S}(x) = prod_{j in S, j != i} (x - j) / (i - j) mod r.
Scalar lagrange_coeff(std::uint32_t i, std::span<const std::uint32_t> indices, const Scalar& x);

/// Threshold policy text with `levels` levels and `leaves` leaves named
/// attr000, attr001, ...; every gate is a majority threshold.
std::string synthetic_policy(std::uint32_t levels, std::uint32_t leaves);

} // namespace lcws

#endif
