#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qif/error.hpp"

namespace qif {

/// Structured name for a channel input or output.
///
/// A label is an atom, an ordered pair of labels, or a label tagged with a
/// branch index in {1,2}. Pairs arise from parallel composition, tags from
/// visible choice. Equality and ordering are structural, so label sets built
/// independently by two composition routes still match up.
class Label {
 public:
  enum class Kind : std::uint8_t { atom = 0, pair = 1, tag = 2 };

  static Label atom(std::string text) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::atom;
    n->text = std::move(text);
    return Label(std::move(n));
  }

  static Label pair(Label left, Label right) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::pair;
    n->a = std::move(left.node_);
    n->b = std::move(right.node_);
    return Label(std::move(n));
  }

  static Label tag(Label inner, int branch) {
    if (branch != 1 && branch != 2)
      raise(errc::bad_probability, "tag branch must be 1 or 2");
    auto n = std::make_shared<Node>();
    n->kind = Kind::tag;
    n->a = std::move(inner.node_);
    n->branch = branch;
    return Label(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  const std::string& text() const { return node_->text; }
  Label left() const { return Label(node_->a); }
  Label right() const { return Label(node_->b); }
  Label inner() const { return Label(node_->a); }
  int branch() const { return node_->branch; }

  friend bool operator==(const Label& x, const Label& y) { return compare(x, y) == 0; }
  friend bool operator!=(const Label& x, const Label& y) { return compare(x, y) != 0; }
  friend bool operator<(const Label& x, const Label& y) { return compare(x, y) < 0; }

  static int compare(const Label& x, const Label& y) { return cmp(x.node_.get(), y.node_.get()); }

  /// Compact textual form: atoms verbatim, pairs as "(a,b)", tags as "a#1".
  /// Atom text must not contain '(', ')', ',' or '#'.
  std::string str() const {
    std::string out;
    print(node_.get(), out);
    return out;
  }

  static Label parse(std::string_view s) {
    size_t pos = 0;
    Label l = parse_label(s, pos);
    if (pos != s.size()) raise(errc::parse_error, "trailing characters in label '" + std::string(s) + "'");
    return l;
  }

 private:
  struct Node {
    Kind kind = Kind::atom;
    std::string text;
    std::shared_ptr<const Node> a, b;
    int branch = 0;
  };

  explicit Label(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static int cmp(const Node* x, const Node* y) {
    if (x == y) return 0;
    if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
    switch (x->kind) {
      case Kind::atom:
        return x->text.compare(y->text) < 0 ? -1 : (x->text == y->text ? 0 : 1);
      case Kind::pair: {
        int c = cmp(x->a.get(), y->a.get());
        return c != 0 ? c : cmp(x->b.get(), y->b.get());
      }
      case Kind::tag: {
        if (x->branch != y->branch) return x->branch < y->branch ? -1 : 1;
        return cmp(x->a.get(), y->a.get());
      }
    }
    return 0;
  }

  static void print(const Node* n, std::string& out) {
    switch (n->kind) {
      case Kind::atom:
        out += n->text;
        break;
      case Kind::pair:
        out += '(';
        print(n->a.get(), out);
        out += ',';
        print(n->b.get(), out);
        out += ')';
        break;
      case Kind::tag:
        print(n->a.get(), out);
        out += '#';
        out += static_cast<char>('0' + n->branch);
        break;
    }
  }

  static Label parse_label(std::string_view s, size_t& pos) {
    Label base = parse_primary(s, pos);
    while (pos < s.size() && s[pos] == '#') {
      ++pos;
      if (pos >= s.size() || (s[pos] != '1' && s[pos] != '2'))
        raise(errc::parse_error, "tag branch must be 1 or 2 in label");
      base = tag(base, s[pos] - '0');
      ++pos;
    }
    return base;
  }

  static Label parse_primary(std::string_view s, size_t& pos) {
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      Label a = parse_label(s, pos);
      if (pos >= s.size() || s[pos] != ',') raise(errc::parse_error, "expected ',' in pair label");
      ++pos;
      Label b = parse_label(s, pos);
      if (pos >= s.size() || s[pos] != ')') raise(errc::parse_error, "expected ')' in pair label");
      ++pos;
      return pair(std::move(a), std::move(b));
    }
    size_t start = pos;
    while (pos < s.size() && s[pos] != '(' && s[pos] != ')' && s[pos] != ',' && s[pos] != '#') ++pos;
    if (pos == start) raise(errc::parse_error, "empty atom in label");
    return atom(std::string(s.substr(start, pos - start)));
  }

  std::shared_ptr<const Node> node_;
};

inline std::vector<Label> atom_labels(const std::string& prefix, size_t count, size_t first = 1) {
  std::vector<Label> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(Label::atom(prefix + std::to_string(first + i)));
  return out;
}

}  // namespace qif
