#ifndef PROTOSCAN_BOOL_EXPR_HPP
#define PROTOSCAN_BOOL_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace protoscan {

class ExprError : public std::runtime_error {
public:
    explicit ExprError(const std::string &msg) : std::runtime_error(msg) {}
};

// Boolean expressions over identifiers: AND, OR, NOT and parentheses,
// keywords case-insensitive. NOT binds tightest, then AND, then OR.
class BoolExpr {
public:
    BoolExpr() = default;

    static BoolExpr parse(std::string_view text); // throws ExprError

    bool empty() const { return root_ == nullptr; }

    // Throws ExprError when an identifier has no assignment.
    bool eval(const std::map<std::string, bool> &truth) const;

    std::set<std::string> variables() const;
    std::string to_string() const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
};

} // namespace protoscan

#endif
