#pragma once

// Boolean conditions over world states: comparisons of one variable against a
// constant, combined with and/or/not. No arithmetic; derived quantities are
// modelled as variables of their own.

#include <string>
#include <vector>

#include "argdec/core.hpp"
#include "argdec/world.hpp"

namespace argdec {

enum class Comparator { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* comparator_symbol(Comparator c) {
  switch (c) {
    case Comparator::Eq: return "==";
    case Comparator::Ne: return "!=";
    case Comparator::Lt: return "<";
    case Comparator::Le: return "<=";
    case Comparator::Gt: return ">";
    case Comparator::Ge: return ">=";
  }
  return "?";
}

inline std::optional<Comparator> parse_comparator(const std::string& s) {
  if (s == "==") return Comparator::Eq;
  if (s == "!=") return Comparator::Ne;
  if (s == "<") return Comparator::Lt;
  if (s == "<=") return Comparator::Le;
  if (s == ">") return Comparator::Gt;
  if (s == ">=") return Comparator::Ge;
  return std::nullopt;
}

inline bool is_ordered(Comparator c) { return c != Comparator::Eq && c != Comparator::Ne; }

class Condition {
 public:
  enum class Kind { And, Or, Not, Atom };

  /// The empty conjunction.
  Condition() = default;

  static Condition always() { return Condition(); }
  static Condition never() {
    Condition c;
    c.kind_ = Kind::Or;
    return c;
  }
  static Condition atom(std::string variable, Comparator cmp, Value constant) {
    Condition c;
    c.kind_ = Kind::Atom;
    c.variable_ = std::move(variable);
    c.cmp_ = cmp;
    c.constant_ = std::move(constant);
    return c;
  }
  static Condition eq(std::string variable, Value constant) {
    return atom(std::move(variable), Comparator::Eq, std::move(constant));
  }
  static Condition all_of(std::vector<Condition> children) {
    Condition c;
    c.children_ = std::move(children);
    return c;
  }
  static Condition any_of(std::vector<Condition> children) {
    Condition c;
    c.kind_ = Kind::Or;
    c.children_ = std::move(children);
    return c;
  }
  static Condition negate(Condition child) {
    Condition c;
    c.kind_ = Kind::Not;
    c.children_.push_back(std::move(child));
    return c;
  }

  Kind kind() const { return kind_; }
  const std::vector<Condition>& children() const { return children_; }
  const std::string& variable() const { return variable_; }
  Comparator comparator() const { return cmp_; }
  const Value& constant() const { return constant_; }

  bool is_always() const { return kind_ == Kind::And && children_.empty(); }

  /// w |= c
  bool evaluate(const WorldState& w, const VariableSet& vars) const {
    switch (kind_) {
      case Kind::And:
        for (const auto& c : children_)
          if (!c.evaluate(w, vars)) return false;
        return true;
      case Kind::Or:
        for (const auto& c : children_)
          if (c.evaluate(w, vars)) return true;
        return false;
      case Kind::Not:
        return !children_.front().evaluate(w, vars);
      case Kind::Atom:
        return compare(value_of(w, vars, variable_));
    }
    return false;
  }

  /// Checks references and comparator typing; `owner` names the enclosing
  /// object in messages.
  void validate(const VariableSet& vars, const std::string& path,
                const std::string& owner, Report& report) const {
    switch (kind_) {
      case Kind::And:
      case Kind::Or:
        for (std::size_t i = 0; i < children_.size(); ++i)
          children_[i].validate(vars, path + "/" + std::to_string(i + 1), owner, report);
        return;
      case Kind::Not:
        if (children_.size() != 1)
          report.error(path, owner + ": 'not' takes exactly one operand");
        else
          children_.front().validate(vars, path + "/1", owner, report);
        return;
      case Kind::Atom: {
        auto v = vars.find(variable_);
        if (!v) {
          report.error(path + "/1",
                       owner + " references undeclared variable '" + variable_ + "'");
          return;
        }
        const auto& spec = vars[*v];
        if (is_ordered(cmp_)) {
          if (!spec.is_integer() || !constant_.is_int())
            report.error(path, owner + ": ordered comparator '" +
                                   comparator_symbol(cmp_) +
                                   "' needs an integer variable and constant ('" +
                                   variable_ + "')");
        } else if (!spec.index_of(constant_)) {
          report.error(path + "/2", owner + ": value '" + constant_.to_string() +
                                        "' is not in the domain of '" + variable_ + "'");
        }
        return;
      }
    }
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::And:
        if (children_.empty()) return "true";
        return combine(" and ");
      case Kind::Or:
        if (children_.empty()) return "false";
        return combine(" or ");
      case Kind::Not:
        return "not " + wrap(children_.front());
      case Kind::Atom:
        return variable_ + " " + comparator_symbol(cmp_) + " " + constant_.to_string();
    }
    return "";
  }

  friend bool operator==(const Condition&, const Condition&) = default;

 private:
  bool compare(const Value& v) const {
    switch (cmp_) {
      case Comparator::Eq: return v == constant_;
      case Comparator::Ne: return v != constant_;
      default: break;
    }
    if (!v.is_int() || !constant_.is_int())
      throw ModelError("ordered comparison on non-integer variable '" + variable_ + "'");
    const auto a = v.as_int();
    const auto b = constant_.as_int();
    switch (cmp_) {
      case Comparator::Lt: return a < b;
      case Comparator::Le: return a <= b;
      case Comparator::Gt: return a > b;
      case Comparator::Ge: return a >= b;
      default: return false;
    }
  }

  static std::string wrap(const Condition& c) {
    if (c.kind_ == Kind::Atom || c.kind_ == Kind::Not || c.children_.empty())
      return c.to_string();
    return "(" + c.to_string() + ")";
  }

  std::string combine(const std::string& sep) const {
    std::vector<std::string> parts;
    for (const auto& c : children_) parts.push_back(wrap(c));
    return join(parts, sep);
  }

  Kind kind_ = Kind::And;
  std::vector<Condition> children_;
  std::string variable_;
  Comparator cmp_ = Comparator::Eq;
  Value constant_;
};

}  // namespace argdec
