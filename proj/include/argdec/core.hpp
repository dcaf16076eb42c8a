#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace argdec {

/// Absolute tolerance used for probability mass checks and for every argmax.
inline constexpr double kTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Value: a member of a finite variable domain, either an integer or a symbol.
// ---------------------------------------------------------------------------
class Value {
 public:
  Value() = default;
  Value(std::int64_t v) : repr_(v) {}
  Value(int v) : repr_(static_cast<std::int64_t>(v)) {}
  Value(std::string v) : repr_(std::move(v)) {}
  Value(const char* v) : repr_(std::string(v)) {}

  bool is_int() const { return std::holds_alternative<std::int64_t>(repr_); }
  bool is_symbol() const { return std::holds_alternative<std::string>(repr_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(repr_); }
  const std::string& as_symbol() const { return std::get<std::string>(repr_); }

  std::string to_string() const {
    return is_int() ? std::to_string(as_int()) : as_symbol();
  }

  friend bool operator==(const Value&, const Value&) = default;
  friend auto operator<=>(const Value&, const Value&) = default;

 private:
  std::variant<std::int64_t, std::string> repr_{std::int64_t{0}};
};

// ---------------------------------------------------------------------------
// Validation reports. Every issue carries a path into the scenario document
// (JSON-pointer style) so that no failure is anonymous.
// ---------------------------------------------------------------------------
enum class Severity { Warning, Error };

struct Issue {
  Severity severity = Severity::Error;
  std::string path;
  std::string message;

  std::string to_string() const {
    return std::string(severity == Severity::Error ? "error" : "warning") +
           " at " + (path.empty() ? "/" : path) + ": " + message;
  }
};

class Report {
 public:
  void error(std::string path, std::string message) {
    issues_.push_back({Severity::Error, std::move(path), std::move(message)});
  }
  void warning(std::string path, std::string message) {
    issues_.push_back({Severity::Warning, std::move(path), std::move(message)});
  }
  void merge(const Report& other) {
    issues_.insert(issues_.end(), other.issues_.begin(), other.issues_.end());
  }

  const std::vector<Issue>& issues() const { return issues_; }

  std::vector<Issue> errors() const { return filter(Severity::Error); }
  std::vector<Issue> warnings() const { return filter(Severity::Warning); }
  bool has_errors() const {
    for (const auto& i : issues_)
      if (i.severity == Severity::Error) return true;
    return false;
  }
  bool clean() const { return !has_errors(); }

 private:
  std::vector<Issue> filter(Severity s) const {
    std::vector<Issue> out;
    for (const auto& i : issues_)
      if (i.severity == s) out.push_back(i);
    return out;
  }
  std::vector<Issue> issues_;
};

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

/// Bad input: unknown names, out-of-domain values, malformed scenarios.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
  ValidationError(const std::string& what, std::vector<Issue> issues)
      : std::runtime_error(what), issues_(std::move(issues)) {}
  const std::vector<Issue>& issues() const { return issues_; }

 private:
  std::vector<Issue> issues_;
};

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// The scenario's model lacks something a computation needed.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// The top applicable principles permit no common option.
class DilemmaError : public std::runtime_error {
 public:
  DilemmaError(const std::string& what, std::vector<std::string> principles)
      : std::runtime_error(what), principles_(std::move(principles)) {}
  const std::vector<std::string>& principles() const { return principles_; }

 private:
  std::vector<std::string> principles_;
};

// ---------------------------------------------------------------------------
// Decimal formatting. Weights are serialized with 12 significant digits and
// displayed with 4; display goes through the serialized form so that a graph
// re-read from JSON renders exactly like the original.
// ---------------------------------------------------------------------------
inline std::string format_significant(double x, int digits) {
  if (x == 0.0) x = 0.0;  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

inline std::string format_weight(double x) { return format_significant(x, 12); }

inline std::string format_display(double x) {
  return format_significant(std::strtod(format_weight(x).c_str(), nullptr), 4);
}

inline std::string join(const std::vector<std::string>& parts,
                        const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace argdec
