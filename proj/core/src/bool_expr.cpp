#include "protoscan/bool_expr.hpp"

#include <cctype>
#include <vector>

namespace protoscan {

struct BoolExpr::Node {
    enum class Kind { var, not_op, and_op, or_op } kind;
    std::string name; // var only
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs; // unset for not_op
};

namespace {

using Node = BoolExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Token {
    enum class Kind { ident, kw_and, kw_or, kw_not, lparen, rparen, end } kind;
    std::string text;
    size_t pos;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '(') {
            out.push_back({Token::Kind::lparen, "(", i});
            ++i;
            continue;
        }
        if (c == ')') {
            out.push_back({Token::Kind::rparen, ")", i});
            ++i;
            continue;
        }
        if (ident_char(c)) {
            size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            std::string word(text.substr(i, j - i));
            std::string lw = lower(word);
            Token::Kind k = Token::Kind::ident;
            if (lw == "and") k = Token::Kind::kw_and;
            else if (lw == "or") k = Token::Kind::kw_or;
            else if (lw == "not") k = Token::Kind::kw_not;
            out.push_back({k, std::move(word), i});
            i = j;
            continue;
        }
        throw ExprError("unexpected character '" + std::string(1, c) + "' at position " + std::to_string(i));
    }
    out.push_back({Token::Kind::end, "", text.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    NodePtr parse() {
        NodePtr e = parse_or();
        if (peek().kind != Token::Kind::end) {
            throw ExprError("trailing input at position " + std::to_string(peek().pos));
        }
        return e;
    }

private:
    const Token &peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }

    NodePtr parse_or() {
        NodePtr lhs = parse_and();
        while (peek().kind == Token::Kind::kw_or) {
            take();
            NodePtr rhs = parse_and();
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::or_op;
            n->lhs = lhs;
            n->rhs = rhs;
            lhs = n;
        }
        return lhs;
    }

    NodePtr parse_and() {
        NodePtr lhs = parse_unary();
        while (peek().kind == Token::Kind::kw_and) {
            take();
            NodePtr rhs = parse_unary();
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::and_op;
            n->lhs = lhs;
            n->rhs = rhs;
            lhs = n;
        }
        return lhs;
    }

    NodePtr parse_unary() {
        const Token &t = peek();
        if (t.kind == Token::Kind::kw_not) {
            take();
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::not_op;
            n->lhs = parse_unary();
            return n;
        }
        if (t.kind == Token::Kind::lparen) {
            take();
            NodePtr e = parse_or();
            if (peek().kind != Token::Kind::rparen) {
                throw ExprError("expected ')' at position " + std::to_string(peek().pos));
            }
            take();
            return e;
        }
        if (t.kind == Token::Kind::ident) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::var;
            n->name = take().text;
            return n;
        }
        throw ExprError("expected identifier, NOT or '(' at position " + std::to_string(t.pos));
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
};

bool eval_node(const Node &n, const std::map<std::string, bool> &truth) {
    switch (n.kind) {
    case Node::Kind::var: {
        auto it = truth.find(n.name);
        if (it == truth.end()) throw ExprError("unbound identifier: " + n.name);
        return it->second;
    }
    case Node::Kind::not_op:
        return !eval_node(*n.lhs, truth);
    case Node::Kind::and_op:
        return eval_node(*n.lhs, truth) && eval_node(*n.rhs, truth);
    case Node::Kind::or_op:
        return eval_node(*n.lhs, truth) || eval_node(*n.rhs, truth);
    }
    return false;
}

void collect_vars(const Node &n, std::set<std::string> &out) {
    if (n.kind == Node::Kind::var) {
        out.insert(n.name);
        return;
    }
    if (n.lhs) collect_vars(*n.lhs, out);
    if (n.rhs) collect_vars(*n.rhs, out);
}

void render(const Node &n, std::string &out) {
    switch (n.kind) {
    case Node::Kind::var:
        out += n.name;
        return;
    case Node::Kind::not_op:
        out += "NOT ";
        if (n.lhs->kind == Node::Kind::and_op || n.lhs->kind == Node::Kind::or_op) {
            out.push_back('(');
            render(*n.lhs, out);
            out.push_back(')');
        } else {
            render(*n.lhs, out);
        }
        return;
    case Node::Kind::and_op:
    case Node::Kind::or_op: {
        const char *op = n.kind == Node::Kind::and_op ? " AND " : " OR ";
        auto sub = [&](const Node &child) {
            bool paren = child.kind == Node::Kind::or_op && n.kind == Node::Kind::and_op;
            if (paren) out.push_back('(');
            render(child, out);
            if (paren) out.push_back(')');
        };
        sub(*n.lhs);
        out += op;
        sub(*n.rhs);
        return;
    }
    }
}

} // namespace

BoolExpr BoolExpr::parse(std::string_view text) {
    BoolExpr e;
    e.root_ = Parser(tokenize(text)).parse();
    return e;
}

bool BoolExpr::eval(const std::map<std::string, bool> &truth) const {
    if (!root_) throw ExprError("empty expression");
    return eval_node(*root_, truth);
}

std::set<std::string> BoolExpr::variables() const {
    std::set<std::string> out;
    if (root_) collect_vars(*root_, out);
    return out;
}

std::string BoolExpr::to_string() const {
    std::string out;
    if (root_) render(*root_, out);
    return out;
}

} // namespace protoscan
