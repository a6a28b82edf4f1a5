#include <algorithm>
#include <cctype>
#include <memory>

#include "lcws/error.hpp"
#include "lcws/policy.hpp"

namespace lcws {

namespace {

struct Token {
    enum Kind { lparen, rparen, comma, word, end } kind;
    std::string text;
    std::size_t pos;
};

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-';
}

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(') {
            out.push_back({Token::lparen, "(", i++});
        } else if (c == ')') {
            out.push_back({Token::rparen, ")", i++});
        } else if (c == ',') {
            out.push_back({Token::comma, ",", i++});
        } else if (word_char(c)) {
            const auto start = i;
            while (i < s.size() && word_char(s[i])) ++i;
            out.push_back({Token::word, std::string(s.substr(start, i - start)), start});
        } else {
            throw PolicySyntaxError(i, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Token::end, "", s.size()});
    return out;
}

bool keyword(const Token& t, std::string_view kw) {
    if (t.kind != Token::word || t.text.size() != kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
    return true;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

struct Parsed {
    bool leaf = false;
    std::string attribute;
    std::uint32_t threshold = 0;
    std::vector<std::unique_ptr<Parsed>> children;
};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    std::unique_ptr<Parsed> parse() {
        auto e = expr();
        if (peek().kind != Token::end) fail("trailing input");
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void fail(const std::string& why) const { throw PolicySyntaxError(peek().pos, why); }
    void expect(Token::Kind k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        next();
    }

    std::unique_ptr<Parsed> expr() {
        const auto& t = peek();
        if (t.kind == Token::word) {
            if (keyword(t, "AND") || keyword(t, "OR")) fail("operator without left operand");
            auto leaf = std::make_unique<Parsed>();
            leaf->leaf = true;
            leaf->attribute = next().text;
            return leaf;
        }
        if (t.kind != Token::lparen) fail("expected attribute or '('");
        next();
        if (peek().kind == Token::word && all_digits(peek().text) && keyword(peek(1), "OF")) return threshold_gate();

        auto first = expr();
        if (peek().kind == Token::rparen) {
            next();
            return first;
        }
        const bool is_and = keyword(peek(), "AND");
        if (!is_and && !keyword(peek(), "OR")) fail("expected AND, OR or ')'");
        auto gate = std::make_unique<Parsed>();
        gate->children.push_back(std::move(first));
        while (peek().kind != Token::rparen) {
            if (is_and ? !keyword(peek(), "AND") : !keyword(peek(), "OR")) {
                if (keyword(peek(), "AND") || keyword(peek(), "OR")) fail("mixed AND/OR needs parentheses");
                fail("expected operator or ')'");
            }
            next();
            gate->children.push_back(expr());
        }
        next();
        gate->threshold = is_and ? static_cast<std::uint32_t>(gate->children.size()) : 1;
        return gate;
    }

    std::unique_ptr<Parsed> threshold_gate() {
        const auto& k_tok = next();
        unsigned long k = 0;
        try {
            k = std::stoul(k_tok.text);
        } catch (const std::exception&) {
            throw PolicySyntaxError(k_tok.pos, "threshold out of range");
        }
        next(); // "of"
        expect(Token::lparen, "'(' after 'of'");
        auto gate = std::make_unique<Parsed>();
        gate->children.push_back(expr());
        while (peek().kind == Token::comma) {
            next();
            gate->children.push_back(expr());
        }
        expect(Token::rparen, "',' or ')'");
        expect(Token::rparen, "')' closing threshold gate");
        if (k < 1 || k > gate->children.size())
            throw PolicySyntaxError(k_tok.pos, "threshold " + std::to_string(k) + " out of range for " +
                                                   std::to_string(gate->children.size()) + " children");
        gate->threshold = static_cast<std::uint32_t>(k);
        return gate;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

void flatten(const Parsed& p, NodeId parent, std::uint32_t index, std::uint32_t level, std::vector<AccessNode>& out) {
    AccessNode n;
    n.id = static_cast<NodeId>(out.size() + 1);
    n.parent = parent;
    n.index = index;
    n.level = level;
    n.leaf = p.leaf;
    n.attribute = p.attribute;
    n.threshold = p.threshold;
    const auto self = n.id;
    out.push_back(std::move(n));
    for (std::size_t k = 0; k < p.children.size(); ++k) {
        out[self - 1].children.push_back(static_cast<NodeId>(out.size() + 1));
        flatten(*p.children[k], self, static_cast<std::uint32_t>(k + 1), level + 1, out);
    }
}

void render(const AccessTree& t, NodeId id, std::string& out) {
    const auto& n = t.node(id);
    if (n.leaf) {
        out += n.attribute;
        return;
    }
    const auto count = n.children.size();
    const char* sep = nullptr;
    if (count >= 2 && n.threshold == count) {
        sep = " AND ";
    } else if (count >= 2 && n.threshold == 1) {
        sep = " OR ";
    }
    if (sep) {
        out += '(';
        for (std::size_t k = 0; k < count; ++k) {
            if (k) out += sep;
            render(t, n.children[k], out);
        }
        out += ')';
        return;
    }
    out += '(' + std::to_string(n.threshold) + " of (";
    for (std::size_t k = 0; k < count; ++k) {
        if (k) out += ", ";
        render(t, n.children[k], out);
    }
    out += "))";
}

} // namespace

AccessTree parse_policy(std::string_view text) {
    auto root = Parser(text).parse();
    const bool single_leaf = root->leaf || (root->threshold == 1 && root->children.size() == 1 &&
                                            root->children.front()->leaf);
    if (single_leaf) {
        const std::string attr = root->leaf ? root->attribute : root->children.front()->attribute;
        AccessNode gate;
        gate.id = 1;
        gate.threshold = 1;
        gate.children = {2};
        AccessNode leaf;
        leaf.id = 2;
        leaf.parent = 1;
        leaf.index = 1;
        leaf.level = 1;
        leaf.leaf = true;
        leaf.attribute = attr;
        return AccessTree({gate, leaf});
    }
    std::vector<AccessNode> nodes;
    flatten(*root, 0, 0, 1, nodes);
    return AccessTree(std::move(nodes));
}

std::string to_policy_string(const AccessTree& tree) {
    const auto& r = tree.root();
    if (r.children.size() == 1 && tree.node(r.children.front()).leaf && tree.node(r.children.front()).level == 1)
        return tree.node(r.children.front()).attribute;
    std::string out;
    render(tree, r.id, out);
    return out;
}

} // namespace lcws
