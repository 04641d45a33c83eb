#include "ftc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <variant>

namespace ftc {

namespace {

struct Token {
  enum class Kind { ident, number, symbol, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 0, column = 0;
};

class Lexer {
public:
  Lexer(const std::string& text, int line) : text_(text), line_(line) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') { ++line_; col_ = 0; } else ++col_;
      ++pos_;
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.column = col_ + 1;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok_.kind = Token::Kind::ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        tok_.text += text_[pos_++]; ++col_;
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      tok_.kind = Token::Kind::number;
      bool dot = false;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || (text_[pos_] == '.' && !dot))) {
        // '.' only belongs to the number when followed by a digit (else it is .dx)
        if (text_[pos_] == '.') {
          if (pos_ + 1 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))
            break;
          dot = true;
        }
        tok_.text += text_[pos_++]; ++col_;
      }
    } else {
      tok_.kind = Token::Kind::symbol;
      tok_.text = std::string(1, c);
      ++pos_; ++col_;
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_;
  int col_ = 0;
  Token tok_;
};

// Expression tree prior to expansion.
struct Node;
using NodePtr = std::unique_ptr<Node>;
struct FactorRef {
  std::string name;
  int line = 0, column = 0;
  // an index slot is a letter or a fixed 0-based value
  struct Slot { std::string letter; int fixed = -1; };
  std::optional<Slot> component;
  std::vector<Slot> derivatives;
};
struct Node {
  enum class Kind { sum, product, constant, factor, measure } kind;
  std::vector<NodePtr> children;   // sum/product
  std::vector<int> signs;          // sum only
  Rational value{1};               // constant
  FactorRef factor;                // factor
};

class ExprParser {
public:
  ExprParser(const std::string& text, int line) : lex_(text, line) {}

  NodePtr parse() {
    NodePtr e = parse_sum();
    if (lex_.peek().kind != Token::Kind::end) fail(lex_.peek(), "unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.column, msg);
  }

  bool accept_symbol(const char* s) {
    if (lex_.peek().kind == Token::Kind::symbol && lex_.peek().text == s) {
      lex_.next();
      return true;
    }
    return false;
  }

  void expect_symbol(const char* s, const char* what) {
    if (!accept_symbol(s)) fail(lex_.peek(), std::string("expected '") + s + "' " + what);
  }

  NodePtr parse_sum() {
    auto sum = std::make_unique<Node>();
    sum->kind = Node::Kind::sum;
    int sign = 1;
    if (accept_symbol("-")) sign = -1;
    sum->children.push_back(parse_product());
    sum->signs.push_back(sign);
    for (;;) {
      if (accept_symbol("+")) sign = 1;
      else if (accept_symbol("-")) sign = -1;
      else break;
      sum->children.push_back(parse_product());
      sum->signs.push_back(sign);
    }
    if (sum->children.size() == 1 && sum->signs[0] == 1) return std::move(sum->children[0]);
    return sum;
  }

  NodePtr parse_product() {
    auto prod = std::make_unique<Node>();
    prod->kind = Node::Kind::product;
    prod->children.push_back(parse_atom());
    while (accept_symbol("*")) prod->children.push_back(parse_atom());
    if (prod->children.size() == 1) return std::move(prod->children[0]);
    return prod;
  }

  NodePtr parse_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::number) {
      Token num = lex_.next();
      auto node = std::make_unique<Node>();
      node->kind = Node::Kind::constant;
      node->value = Rational::from_decimal(num.text);
      if (accept_symbol("/")) {
        const Token den = lex_.next();
        if (den.kind != Token::Kind::number) fail(den, "expected number after '/'");
        if (den.text.find('.') != std::string::npos)
          fail(den, "fraction denominator must be an integer");
        node->value = Rational(node->value.num(), node->value.den() * std::stoll(den.text));
      }
      return node;
    }
    if (t.kind == Token::Kind::symbol && t.text == "(") {
      lex_.next();
      NodePtr inner = parse_sum();
      expect_symbol(")", "to close parenthesis");
      return parse_postfix_on(std::move(inner));
    }
    if (t.kind == Token::Kind::ident) {
      Token id = lex_.next();
      if (id.text == "dx" && !(lex_.peek().kind == Token::Kind::symbol &&
                               (lex_.peek().text == "[" || lex_.peek().text == "("))) {
        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::measure;
        return node;
      }
      auto node = std::make_unique<Node>();
      node->kind = Node::Kind::factor;
      node->factor.name = id.text;
      node->factor.line = id.line;
      node->factor.column = id.column;
      if (accept_symbol("[")) {
        node->factor.component = parse_slot();
        expect_symbol("]", "to close component index");
      }
      parse_derivatives(node->factor);
      return node;
    }
    fail(t, "expected a factor, constant or parenthesized expression");
  }

  // .dx(i) chains after a factor or parenthesized expression
  NodePtr parse_postfix_on(NodePtr inner) {
    // derivatives of sums are not in the grammar; only factors take .dx
    return inner;
  }

  void parse_derivatives(FactorRef& f) {
    for (;;) {
      if (!(lex_.peek().kind == Token::Kind::symbol && lex_.peek().text == ".")) return;
      lex_.next();
      const Token dx = lex_.next();
      if (dx.kind != Token::Kind::ident || dx.text != "dx") fail(dx, "expected 'dx' after '.'");
      expect_symbol("(", "after dx");
      f.derivatives.push_back(parse_slot());
      expect_symbol(")", "to close dx()");
    }
  }

  FactorRef::Slot parse_slot() {
    const Token t = lex_.next();
    FactorRef::Slot s;
    if (t.kind == Token::Kind::ident) {
      s.letter = t.text;
    } else if (t.kind == Token::Kind::number) {
      if (t.text.find('.') != std::string::npos) fail(t, "index must be a letter or integer");
      s.fixed = std::stoi(t.text);
    } else {
      fail(t, "expected an index letter or integer");
    }
    return s;
  }

  Lexer lex_;
};

// A fully distributed product: constant x factor references x measure count.
struct FlatTerm {
  Rational constant{1};
  std::vector<FactorRef> factors;
  int measures = 0;
  int line = 1, column = 1;
};

void expand(const Node& node, std::vector<FlatTerm>& out) {
  switch (node.kind) {
  case Node::Kind::sum: {
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      std::vector<FlatTerm> sub;
      expand(*node.children[i], sub);
      for (FlatTerm& t : sub) {
        if (node.signs[i] < 0) t.constant = -t.constant;
        out.push_back(std::move(t));
      }
    }
    return;
  }
  case Node::Kind::product: {
    std::vector<FlatTerm> acc = {FlatTerm{}};
    for (const NodePtr& child : node.children) {
      std::vector<FlatTerm> sub;
      expand(*child, sub);
      std::vector<FlatTerm> next;
      next.reserve(acc.size() * sub.size());
      for (const FlatTerm& a : acc)
        for (const FlatTerm& b : sub) {
          FlatTerm t = a;
          t.constant = t.constant * b.constant;
          t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
          t.measures += b.measures;
          next.push_back(std::move(t));
        }
      acc = std::move(next);
    }
    for (FlatTerm& t : acc) out.push_back(std::move(t));
    return;
  }
  case Node::Kind::constant: {
    FlatTerm t;
    t.constant = node.value;
    out.push_back(std::move(t));
    return;
  }
  case Node::Kind::factor: {
    FlatTerm t;
    t.factors.push_back(node.factor);
    t.line = node.factor.line;
    t.column = node.factor.column;
    out.push_back(std::move(t));
    return;
  }
  case Node::Kind::measure: {
    FlatTerm t;
    t.measures = 1;
    out.push_back(std::move(t));
    return;
  }
  }
}

struct HeaderInfo {
  std::optional<CellType> cell;
  int degree = 0;
  int vector_size = 1;
  bool declared_vector = false;
  std::vector<std::string> arguments;
  std::vector<std::string> coefficients;
  std::string form_name = "a";
  std::string expression;
  int expression_line = 1;
};

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_names(const std::string& s, int line) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = strip(item);
    if (item.empty()) throw ParseError(line, 1, "empty name in declaration list");
    for (char c : item)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        throw ParseError(line, 1, "invalid name '" + item + "'");
    out.push_back(item);
  }
  return out;
}

void parse_element_decl(const std::string& rhs, int line, HeaderInfo& h) {
  Lexer lex(rhs, line);
  const Token fam = lex.next();
  if (fam.kind != Token::Kind::ident || fam.text != "Lagrange")
    throw ParseError(line, fam.column, "only the Lagrange family is supported");
  auto expect = [&](const char* sym) {
    const Token t = lex.next();
    if (t.kind != Token::Kind::symbol || t.text != sym)
      throw ParseError(t.line, t.column, std::string("expected '") + sym + "' in element declaration");
  };
  auto number = [&]() {
    const Token t = lex.next();
    if (t.kind != Token::Kind::number) throw ParseError(t.line, t.column, "expected a number");
    return std::stoi(t.text);
  };
  expect("(");
  h.degree = number();
  expect(",");
  const Token cellTok = lex.next();
  if (cellTok.kind != Token::Kind::ident) throw ParseError(line, cellTok.column, "expected a cell name");
  try {
    h.cell = cell_type_from_name(cellTok.text);
  } catch (const std::exception& e) {
    throw ParseError(line, cellTok.column, e.what());
  }
  if (lex.peek().kind == Token::Kind::symbol && lex.peek().text == ",") {
    lex.next();
    h.vector_size = number();
  }
  expect(")");
  h.declared_vector = h.vector_size > 1;
}

HeaderInfo parse_header(const std::string& text) {
  HeaderInfo h;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool in_expression = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    const std::string s = strip(line);
    if (s.empty()) continue;
    if (in_expression) { // expression may continue over several lines
      h.expression += " " + s;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, 1, "expected '<name> = ...'");
    const std::string lhs = strip(s.substr(0, eq));
    const std::string rhs = strip(s.substr(eq + 1));
    if (lhs == "element") {
      parse_element_decl(rhs, lineno, h);
    } else if (lhs == "arguments") {
      h.arguments = split_names(rhs, lineno);
    } else if (lhs == "coefficients") {
      h.coefficients = split_names(rhs, lineno);
    } else {
      h.form_name = lhs;
      h.expression = rhs;
      h.expression_line = lineno;
      in_expression = true;
    }
  }
  if (!h.cell) throw ParseError(lineno, 1, "missing element declaration");
  if (h.arguments.empty()) throw ParseError(lineno, 1, "missing arguments declaration");
  if (h.expression.empty()) throw ParseError(lineno, 1, "missing form expression");
  return h;
}

} // namespace

Form parse_form(const std::string& text, const ElementOverride& override_element) {
  HeaderInfo h = parse_header(text);

  CellType cell = *h.cell;
  int degree = h.degree;
  if (override_element.cell) cell = *override_element.cell;
  if (override_element.degree) degree = *override_element.degree;
  const int dim = cell_dimension(cell);
  const int vector_size = h.declared_vector ? dim : 1;
  if (h.declared_vector && h.vector_size != cell_dimension(*h.cell))
    throw ParseError(1, 1, "vector_size must be 1 or the cell dimension");

  Form form;
  form.name = h.form_name;
  form.element = make_element(cell, degree, vector_size);
  form.argument_names = h.arguments;
  form.coefficient_names = h.coefficients;
  form.arity = static_cast<int>(h.arguments.size());

  ExprParser parser(h.expression, h.expression_line);
  NodePtr root = parser.parse();
  std::vector<FlatTerm> terms;
  expand(*root, terms);

  const int space_dim = form.element->space_dimension();
  for (const FlatTerm& t : terms) {
    if (t.measures != 1)
      throw ParseError(t.line, t.column,
                       t.measures == 0 ? "term is missing the measure factor dx"
                                       : "term has more than one measure factor dx");
    Monomial mono;
    mono.constant = t.constant;

    // primary indices, one per argument, in argument order
    for (int a = 0; a < form.arity; ++a) {
      Index ix;
      ix.id = static_cast<IndexId>(mono.indices.size());
      ix.kind = IndexKind::primary;
      ix.range = space_dim;
      ix.name = "i" + std::to_string(a);
      mono.indices.push_back(ix);
    }

    std::map<std::string, IndexId> letters;
    std::map<IndexId, int> occurrences;
    auto make_slot = [&](const FactorRef::Slot& slot, bool is_component, int line,
                         int column) -> IndexId {
      const int range = is_component ? vector_size : dim;
      if (slot.fixed >= 0) {
        if (slot.fixed >= range)
          throw ParseError(line, column,
                           "fixed index " + std::to_string(slot.fixed) + " out of range [0," +
                               std::to_string(range - 1) + "]");
        Index ix;
        ix.id = static_cast<IndexId>(mono.indices.size());
        ix.kind = IndexKind::fixed;
        ix.range = range;
        ix.fixed_value = slot.fixed;
        mono.indices.push_back(ix);
        return ix.id;
      }
      auto it = letters.find(slot.letter);
      if (it == letters.end()) {
        Index ix;
        ix.id = static_cast<IndexId>(mono.indices.size());
        ix.kind = IndexKind::summation;
        ix.range = range;
        ix.name = slot.letter;
        mono.indices.push_back(ix);
        it = letters.emplace(slot.letter, ix.id).first;
      } else if (mono.indices[static_cast<std::size_t>(it->second)].range != range) {
        throw ParseError(line, column, "index '" + slot.letter + "' used with inconsistent ranges");
      }
      ++occurrences[it->second];
      return it->second;
    };

    std::vector<bool> argument_seen(static_cast<std::size_t>(form.arity), false);
    for (const FactorRef& fr : t.factors) {
      Factor f;
      const auto arg = std::find(h.arguments.begin(), h.arguments.end(), fr.name);
      const auto coef = std::find(h.coefficients.begin(), h.coefficients.end(), fr.name);
      if (arg != h.arguments.end()) {
        f.function = static_cast<int>(arg - h.arguments.begin());
        f.is_coefficient = false;
        if (argument_seen[static_cast<std::size_t>(f.function)])
          throw ParseError(fr.line, fr.column,
                           "argument '" + fr.name + "' appears twice in one term (form is not multilinear)");
        argument_seen[static_cast<std::size_t>(f.function)] = true;
        f.basis_index = f.function; // primary ids come first
      } else if (coef != h.coefficients.end()) {
        f.function = static_cast<int>(coef - h.coefficients.begin());
        f.is_coefficient = true;
        Index dof;
        dof.id = static_cast<IndexId>(mono.indices.size());
        dof.kind = IndexKind::summation;
        dof.range = space_dim;
        mono.indices.push_back(dof);
        f.basis_index = dof.id;
      } else {
        throw ParseError(fr.line, fr.column, "unknown identifier '" + fr.name + "'");
      }
      if (fr.component) {
        if (vector_size == 1)
          throw ParseError(fr.line, fr.column, "component index on a scalar-valued function");
        f.component = make_slot(*fr.component, true, fr.line, fr.column);
      } else if (vector_size > 1) {
        throw ParseError(fr.line, fr.column,
                         "vector-valued function '" + fr.name + "' used without a component index");
      }
      for (const auto& dslot : fr.derivatives)
        f.derivatives.push_back(make_slot(dslot, false, fr.line, fr.column));
      mono.factors.push_back(std::move(f));
    }

    for (int a = 0; a < form.arity; ++a)
      if (!argument_seen[static_cast<std::size_t>(a)])
        throw ParseError(t.line, t.column,
                         "argument '" + h.arguments[static_cast<std::size_t>(a)] +
                             "' does not appear in every term (form is not multilinear)");
    for (const auto& [id, count] : occurrences)
      if (count != 2)
        throw ParseError(t.line, t.column,
                         "index '" + mono.indices[static_cast<std::size_t>(id)].name + "' appears " +
                             std::to_string(count) + " time(s); summation indices must appear exactly twice");
    form.monomials.push_back(std::move(mono));
  }
  return form;
}

} // namespace ftc
