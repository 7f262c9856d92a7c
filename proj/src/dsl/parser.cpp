#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>

#include "modsat/dsl/dsl.hpp"

namespace modsat::dsl {

namespace {

enum class Tok { Ident, Int, Real, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
  std::int64_t ival = 0;
  double rval = 0.0;
};

struct Failure {
  Diagnostic diag;
};

[[noreturn]] void fail(const char* code, std::string msg, SourcePos pos) {
  throw Failure{Diagnostic{code, std::move(msg), pos.line, pos.col}};
}

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.pos = pos_;
      if (i_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      const char ch = src_[i_];
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        const std::size_t start = i_;
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) advance();
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(start, i_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(ch)) ||
                 (ch == '.' && i_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
        lex_number(t);
      } else {
        lex_operator(t);
      }
      out.push_back(std::move(t));
    }
  }

private:
  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
    ++i_;
  }

  void skip_space_and_comments() {
    while (i_ < src_.size()) {
      const char ch = src_[i_];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else if (ch == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (ch == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '*') {
        const SourcePos start = pos_;
        advance();
        advance();
        for (;;) {
          if (i_ >= src_.size()) fail("lex-error", "unterminated block comment", start);
          if (src_[i_] == '*' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        return;
      }
    }
  }

  void lex_number(Token& t) {
    const std::size_t start = i_;
    bool real = false;
    while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
    if (i_ < src_.size() && src_[i_] == '.') {
      real = true;
      advance();
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
    }
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
      if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
        real = true;
        while (i_ < j) advance();
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
      }
    }
    const std::string text(src_.substr(start, i_ - start));
    // Tolerate C float suffixes.
    if (i_ < src_.size() && (src_[i_] == 'f' || src_[i_] == 'F') && real) advance();
    if (i_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
      fail("lex-error", "malformed number '" + text + src_[i_] + "'", t.pos);
    t.text = text;
    if (real) {
      t.kind = Tok::Real;
      t.rval = std::strtod(text.c_str(), nullptr);
    } else {
      t.kind = Tok::Int;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), t.ival);
      if (ec != std::errc()) fail("lex-error", "integer literal out of range: " + text, t.pos);
    }
  }

  void lex_operator(Token& t) {
    static constexpr std::string_view two[] = {"&&", "||", "==", "!=", "<=", ">=", "+=", "-=",
                                               "*=", "/=", "++", "--", "::"};
    static constexpr std::string_view one = "+-*/%<>=!?:()[]{},;&.";
    t.kind = Tok::Op;
    for (std::string_view op : two) {
      if (src_.substr(i_, 2) == op) {
        t.text = std::string(op);
        advance();
        advance();
        return;
      }
    }
    if (one.find(src_[i_]) != std::string_view::npos) {
      t.text = std::string(1, src_[i_]);
      advance();
      return;
    }
    fail("lex-error", std::string("unexpected character '") + src_[i_] + "'", t.pos);
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

std::optional<Type> type_keyword(std::string_view w) {
  if (w == "int" || w == "long" || w == "Var" || w == "unsigned" || w == "size_t") return Type::Int;
  if (w == "double" || w == "float" || w == "real") return Type::Real;
  if (w == "bool") return Type::Bool;
  return std::nullopt;
}

// Solver-style spellings accepted as synonyms so lightly edited C++ still parses.
std::string_view call_alias(std::string_view name) {
  if (name == "progressEstimate") return "progress_estimate";
  if (name == "cancelUntil") return "cancel_until";
  if (name == "reduceDB") return "reduce_db";
  if (name == "rebuildOrderHeap") return "rebuild_order_heap";
  if (name == "drand") return "rand01";
  return name;
}

std::string_view field_call_alias(std::string_view name) {
  if (name == "nVars") return "num_vars";
  if (name == "nClauses") return "num_clauses";
  if (name == "decisionLevel") return "decision_level";
  return {};
}

class Parser {
public:
  Parser(std::vector<Token> toks, HookSlot slot) : toks_(std::move(toks)), slot_(slot) {}

  std::unique_ptr<Program> run() {
    auto p = std::make_unique<Program>();
    p->slot = slot_;
    p->params = default_params(slot_);
    if (looks_like_header()) {
      parse_header(*p);
    } else {
      while (!at_end()) parse_statement(p->body);
    }
    return p;
  }

private:
  const Token& peek(std::size_t k = 0) const {
    const std::size_t j = std::min(i_ + k, toks_.size() - 1);
    return toks_[j];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_op(std::string_view op, std::size_t k = 0) const { return peek(k).kind == Tok::Op && peek(k).text == op; }
  bool is_ident(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == w;
  }
  Token take() { return toks_[std::min(i_++, toks_.size() - 1)]; }

  void expect_op(std::string_view op) {
    if (!is_op(op)) fail("syntax-error", "expected '" + std::string(op) + "' but found " + describe(peek()), peek().pos);
    ++i_;
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  std::string expect_ident() {
    if (peek().kind != Tok::Ident) fail("syntax-error", "expected identifier but found " + describe(peek()), peek().pos);
    return take().text;
  }

  bool looks_like_header() const {
    std::size_t k = 0;
    if (is_ident("inline", k)) ++k;
    if (!(is_ident("bool", k) || is_ident("void", k))) return false;
    ++k;
    if (peek(k).kind != Tok::Ident) return false;
    if (is_op("::", k + 1)) k += 2;
    return peek(k).kind == Tok::Ident && is_op("(", k + 1);
  }

  void parse_header(Program& p) {
    if (is_ident("inline")) ++i_;
    const Token ret = take();
    std::string name = expect_ident();
    if (is_op("::")) {
      ++i_;
      name = expect_ident();
    }
    const auto named = slot_from_name(name);
    if (!named || *named != slot_) fail("signature", "function '" + name + "' does not match slot '" +
                                                         std::string(slot_name(slot_)) + "'",
                                        ret.pos);
    const Type want_ret = slot_return_type(slot_);
    if ((ret.text == "bool") != (want_ret == Type::Bool))
      fail("signature", "slot '" + std::string(slot_name(slot_)) + "' must return " + std::string(type_name(want_ret)),
           ret.pos);
    expect_op("(");
    std::vector<Param> params;
    if (is_ident("void") && is_op(")", 1)) ++i_;
    while (!is_op(")")) {
      if (!params.empty()) expect_op(",");
      if (is_ident("const")) ++i_;
      const Token ty = take();
      Type t;
      if (ty.kind == Tok::Ident && ty.text == "Clause") {
        t = Type::Int;
      } else if (auto k = type_keyword(ty.text); ty.kind == Tok::Ident && k) {
        t = *k;
      } else {
        fail("syntax-error", "expected parameter type but found " + describe(ty), ty.pos);
      }
      if (is_op("&")) ++i_;
      params.push_back({expect_ident(), t});
    }
    expect_op(")");
    const auto expected = default_params(slot_);
    if (params.size() != expected.size())
      fail("signature",
           "slot '" + std::string(slot_name(slot_)) + "' takes " + std::to_string(expected.size()) + " parameter(s)",
           ret.pos);
    for (std::size_t k = 0; k < params.size(); ++k) {
      // A real-valued increment may be declared with any numeric type, the rest must match.
      if (params[k].type != expected[k].type)
        fail("signature", "parameter '" + params[k].name + "' must have type " + std::string(type_name(expected[k].type)),
             ret.pos);
    }
    p.params = std::move(params);
    p.has_header = true;
    expect_op("{");
    while (!is_op("}")) {
      if (at_end()) fail("syntax-error", "expected '}' before end of input", peek().pos);
      parse_statement(p.body);
    }
    expect_op("}");
    if (!at_end()) {
      if (looks_like_header())
        fail("user-function", "only the slot function may be defined; helper functions are not allowed", peek().pos);
      fail("syntax-error", "unexpected " + describe(peek()) + " after function body", peek().pos);
    }
  }

  StmtPtr make_stmt(StmtKind k, SourcePos pos) {
    auto s = std::make_unique<Stmt>();
    s->kind = k;
    s->pos = pos;
    return s;
  }

  StmtPtr parse_single_statement() {
    std::vector<StmtPtr> out;
    const SourcePos pos = peek().pos;
    parse_statement(out);
    if (out.size() == 1) return std::move(out.front());
    auto block = make_stmt(StmtKind::Block, pos);
    block->body = std::move(out);
    return block;
  }

  void parse_statement(std::vector<StmtPtr>& out) {
    const Token& t = peek();
    const SourcePos pos = t.pos;
    if (is_op(";")) {
      ++i_;
      return;
    }
    if (is_op("{")) {
      ++i_;
      auto block = make_stmt(StmtKind::Block, pos);
      while (!is_op("}")) {
        if (at_end()) fail("syntax-error", "expected '}' before end of input", peek().pos);
        parse_statement(block->body);
      }
      ++i_;
      out.push_back(std::move(block));
      return;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "if") return out.push_back(parse_if());
      if (t.text == "else") fail("syntax-error", "'else' without matching 'if'", pos);
      if (t.text == "return") {
        ++i_;
        auto s = make_stmt(StmtKind::Return, pos);
        if (!is_op(";")) s->value = parse_expr();
        expect_op(";");
        return out.push_back(std::move(s));
      }
      if (t.text == "for_each_var" || t.text == "for_each_learnt") {
        ++i_;
        auto s = make_stmt(StmtKind::ForEach, pos);
        s->iter = t.text == "for_each_var" ? IterKind::Vars : IterKind::Learnts;
        expect_op("(");
        s->name = expect_ident();
        expect_op(")");
        s->body.push_back(parse_single_statement());
        return out.push_back(std::move(s));
      }
      if (t.text == "while" || t.text == "for" || t.text == "do" || t.text == "goto")
        fail("syntax-error", "'" + t.text + "' loops are not supported; use for_each_var or for_each_learnt", pos);
      if (is_declaration_start()) return parse_declaration(out);
    }
    if (is_op("++") || is_op("--")) {
      const bool inc = take().text == "++";
      auto target = parse_postfix();
      out.push_back(make_increment(std::move(target), inc, pos));
      expect_op(";");
      return;
    }
    auto lhs = parse_expr();
    if (is_op("=") || is_op("+=") || is_op("-=") || is_op("*=") || is_op("/=")) {
      const std::string op = take().text;
      if (lhs->kind != ExprKind::Name && lhs->kind != ExprKind::Index)
        fail("syntax-error", "left side of '" + op + "' is not assignable", lhs->pos);
      auto s = make_stmt(StmtKind::Assign, pos);
      s->assign_op = op == "=" ? AssignOp::Set
                   : op == "+=" ? AssignOp::Add
                   : op == "-=" ? AssignOp::Sub
                   : op == "*=" ? AssignOp::Mul
                                : AssignOp::Div;
      s->target = std::move(lhs);
      s->value = parse_expr();
      expect_op(";");
      return out.push_back(std::move(s));
    }
    if (is_op("++") || is_op("--")) {
      const bool inc = take().text == "++";
      if (lhs->kind != ExprKind::Name && lhs->kind != ExprKind::Index)
        fail("syntax-error", "operand of increment is not assignable", lhs->pos);
      out.push_back(make_increment(std::move(lhs), inc, pos));
      expect_op(";");
      return;
    }
    if (lhs->kind != ExprKind::Call) fail("syntax-error", "expression statement has no effect", lhs->pos);
    auto s = make_stmt(StmtKind::ExprStmt, pos);
    s->value = std::move(lhs);
    expect_op(";");
    out.push_back(std::move(s));
  }

  StmtPtr make_increment(ExprPtr target, bool inc, SourcePos pos) {
    auto s = make_stmt(StmtKind::Assign, pos);
    s->assign_op = inc ? AssignOp::Add : AssignOp::Sub;
    s->target = std::move(target);
    auto one = std::make_unique<Expr>();
    one->kind = ExprKind::IntLit;
    one->ival = 1;
    one->pos = pos;
    s->value = std::move(one);
    return s;
  }

  bool is_declaration_start() const {
    std::size_t k = 0;
    if (is_ident("const", k) || is_ident("static", k)) ++k;
    const Token& t = peek(k);
    if (t.kind != Tok::Ident) return false;
    if (t.text == "let" || t.text == "auto") return true;
    if (!type_keyword(t.text)) return false;
    // `double(x)` in statement position is a cast expression, not a declaration.
    return peek(k + 1).kind == Tok::Ident;
  }

  void parse_declaration(std::vector<StmtPtr>& out) {
    if (is_ident("static"))
      fail("syntax-error", "static locals are not allowed; persistent state must live in solver fields", peek().pos);
    if (is_ident("const")) ++i_;
    const Token ty = take();
    bool auto_type = ty.text == "let" || ty.text == "auto";
    Type t = auto_type ? Type::Int : *type_keyword(ty.text);
    // Multi-word integer spellings like `long long` or `unsigned int`.
    while (peek().kind == Tok::Ident && type_keyword(peek().text) && peek(1).kind == Tok::Ident) ++i_;
    for (;;) {
      auto s = make_stmt(StmtKind::Decl, peek().pos);
      s->name = expect_ident();
      s->decl_type = t;
      s->auto_type = auto_type;
      if (is_op("=")) {
        ++i_;
        s->value = parse_expr();
      } else if (auto_type) {
        fail("syntax-error", "'" + ty.text + "' declaration requires an initializer", s->pos);
      }
      out.push_back(std::move(s));
      if (is_op(",")) {
        ++i_;
        continue;
      }
      break;
    }
    expect_op(";");
  }

  StmtPtr parse_if() {
    auto s = make_stmt(StmtKind::If, peek().pos);
    ++i_;
    expect_op("(");
    s->value = parse_expr();
    expect_op(")");
    s->then_branch = parse_single_statement();
    if (is_ident("else")) {
      ++i_;
      s->else_branch = parse_single_statement();
    }
    return s;
  }

  // --- expressions ---

  bool starts_expression() const {
    const Token& t = peek();
    if (t.kind == Tok::Ident || t.kind == Tok::Int || t.kind == Tok::Real) return true;
    return t.kind == Tok::Op && (t.text == "(" || t.text == "-" || t.text == "!" || t.text == "+");
  }

  void require_operand(const Token& op) {
    if (!starts_expression()) fail("syntax-error", "expected operand after '" + op.text + "'", op.pos);
  }

  ExprPtr make_expr(ExprKind k, SourcePos pos) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    e->pos = pos;
    return e;
  }

  ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r, SourcePos pos) {
    auto e = make_expr(ExprKind::Binary, pos);
    e->binop = op;
    e->args.push_back(std::move(l));
    e->args.push_back(std::move(r));
    return e;
  }

  ExprPtr parse_expr() {
    if (!starts_expression()) fail("syntax-error", "expected expression but found " + describe(peek()), peek().pos);
    return parse_ternary();
  }

  ExprPtr parse_ternary() {
    auto cond = parse_or();
    if (!is_op("?")) return cond;
    const Token q = take();
    require_operand(q);
    auto a = parse_expr();
    expect_op(":");
    auto b = parse_ternary();
    auto e = make_expr(ExprKind::Ternary, q.pos);
    e->args.push_back(std::move(cond));
    e->args.push_back(std::move(a));
    e->args.push_back(std::move(b));
    return e;
  }

  template <typename Next>
  ExprPtr parse_left_assoc(Next next, std::initializer_list<std::pair<std::string_view, BinOp>> ops) {
    auto lhs = (this->*next)();
    for (;;) {
      const BinOp* matched = nullptr;
      for (const auto& [text, op] : ops)
        if (is_op(text)) matched = &op;
      if (!matched) return lhs;
      const Token op_tok = take();
      require_operand(op_tok);
      auto rhs = (this->*next)();
      lhs = make_binary(*matched, std::move(lhs), std::move(rhs), op_tok.pos);
    }
  }

  ExprPtr parse_or() { return parse_left_assoc(&Parser::parse_and, {{"||", BinOp::Or}}); }
  ExprPtr parse_and() { return parse_left_assoc(&Parser::parse_equality, {{"&&", BinOp::And}}); }
  ExprPtr parse_equality() {
    return parse_left_assoc(&Parser::parse_relational, {{"==", BinOp::Eq}, {"!=", BinOp::Ne}});
  }
  ExprPtr parse_relational() {
    return parse_left_assoc(&Parser::parse_additive,
                            {{"<", BinOp::Lt}, {"<=", BinOp::Le}, {">", BinOp::Gt}, {">=", BinOp::Ge}});
  }
  ExprPtr parse_additive() {
    return parse_left_assoc(&Parser::parse_multiplicative, {{"+", BinOp::Add}, {"-", BinOp::Sub}});
  }
  ExprPtr parse_multiplicative() {
    return parse_left_assoc(&Parser::parse_unary, {{"*", BinOp::Mul}, {"/", BinOp::Div}, {"%", BinOp::Mod}});
  }

  ExprPtr parse_unary() {
    if (is_op("-") || is_op("!")) {
      const Token op = take();
      require_operand(op);
      auto e = make_expr(ExprKind::Unary, op.pos);
      e->unop = op.text == "-" ? UnOp::Neg : UnOp::Not;
      e->args.push_back(parse_unary());
      return e;
    }
    if (is_op("+")) {
      const Token op = take();
      require_operand(op);
      return parse_unary();
    }
    // C-style cast: (double)x
    if (is_op("(") && peek(1).kind == Tok::Ident && type_keyword(peek(1).text) && is_op(")", 2)) {
      const Token open = take();
      const Type t = *type_keyword(take().text);
      ++i_;
      require_operand(open);
      auto e = make_expr(ExprKind::Cast, open.pos);
      e->cast_to = t;
      e->args.push_back(parse_unary());
      return e;
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    const Token t = peek();
    if (t.kind == Tok::Int) {
      ++i_;
      auto e = make_expr(ExprKind::IntLit, t.pos);
      e->ival = t.ival;
      return e;
    }
    if (t.kind == Tok::Real) {
      ++i_;
      auto e = make_expr(ExprKind::RealLit, t.pos);
      e->rval = t.rval;
      return e;
    }
    if (is_op("(")) {
      ++i_;
      auto e = parse_expr();
      expect_op(")");
      return e;
    }
    if (t.kind != Tok::Ident) fail("syntax-error", "expected expression but found " + describe(t), t.pos);
    ++i_;
    if (t.text == "std" && is_op("::")) {
      ++i_;
      Token named = peek();
      if (named.kind != Tok::Ident) fail("syntax-error", "expected a name after 'std::'", named.pos);
      named.pos = t.pos;
      toks_[i_] = named;
      return parse_postfix();
    }
    if (t.text == "true" || t.text == "false") {
      auto e = make_expr(ExprKind::BoolLit, t.pos);
      e->bval = t.text == "true";
      return e;
    }
    if (auto k = type_keyword(t.text); k && is_op("(")) {
      ++i_;
      auto e = make_expr(ExprKind::Cast, t.pos);
      e->cast_to = *k;
      e->args.push_back(parse_expr());
      expect_op(")");
      return e;
    }
    // container.size() spellings: trail.size(), learnts.size()
    if (is_op(".") && is_ident("size", 1) && is_op("(", 2) && is_op(")", 3)) {
      i_ += 4;
      auto e = make_expr(ExprKind::Name, t.pos);
      e->name = t.text + "_size";
      return e;
    }
    if (is_op("(")) {
      ++i_;
      if (auto field = field_call_alias(t.text); !field.empty()) {
        expect_op(")");
        auto e = make_expr(ExprKind::Name, t.pos);
        e->name = std::string(field);
        return e;
      }
      auto e = make_expr(ExprKind::Call, t.pos);
      e->name = std::string(call_alias(t.text));
      while (!is_op(")")) {
        if (!e->args.empty()) expect_op(",");
        e->args.push_back(parse_expr());
      }
      ++i_;
      // drand(random_seed) carries the stream argument in solver sources.
      if (e->name == "rand01" && t.text == "drand") e->args.clear();
      return e;
    }
    if (is_op("[")) {
      ++i_;
      auto e = make_expr(ExprKind::Index, t.pos);
      e->name = t.text;
      e->args.push_back(parse_expr());
      expect_op("]");
      return e;
    }
    auto e = make_expr(ExprKind::Name, t.pos);
    e->name = t.text;
    return e;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  HookSlot slot_;
};

} // namespace

ParseResult parse(std::string_view source, HookSlot slot) {
  ParseResult out;
  try {
    auto toks = Lexer(source).run();
    out.program = Parser(std::move(toks), slot).run();
  } catch (const Failure& f) {
    out.program.reset();
    out.diagnostics.push_back(f.diag);
  }
  return out;
}

DslError::DslError(std::vector<Diagnostic> diags)
    : std::runtime_error(format_diagnostics(diags)), diags_(std::move(diags)) {}

std::shared_ptr<const Program> compile(std::string_view source, HookSlot slot) {
  auto parsed = parse(source, slot);
  if (!parsed.program) throw DslError(std::move(parsed.diagnostics));
  auto diags = check(*parsed.program);
  if (!diags.empty()) throw DslError(std::move(diags));
  return std::shared_ptr<const Program>(std::move(parsed.program));
}

std::optional<std::string> extract_marked(std::string_view text, std::optional<std::string_view> slot) {
  auto find_marker = [&](std::string_view kind, std::size_t from) -> std::pair<std::size_t, std::size_t> {
    std::size_t at = from;
    while ((at = text.find("//", at)) != std::string_view::npos) {
      std::size_t j = at + 2;
      while (j < text.size() && text[j] == ' ') ++j;
      if (text.substr(j, kind.size()) == kind) {
        std::size_t k = j + kind.size();
        std::size_t line_end = text.find('\n', k);
        if (line_end == std::string_view::npos) line_end = text.size();
        std::string_view rest = text.substr(k, line_end - k);
        while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
        while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r' || rest.back() == '\t' || rest.back() == '`' ||
                                 rest.back() == '\''))
          rest.remove_suffix(1);
        bool name_ok = !rest.empty();
        if (slot) name_ok = rest == *slot || slot_from_name(rest) == slot_from_name(*slot);
        if (name_ok) return {at, line_end};
      }
      at += 2;
    }
    return {std::string_view::npos, std::string_view::npos};
  };
  auto [s_begin, s_end] = find_marker("start ", 0);
  if (s_begin == std::string_view::npos) return std::nullopt;
  auto [e_begin, e_end] = find_marker("end ", s_end);
  if (e_begin == std::string_view::npos) return std::nullopt;
  const std::size_t body_begin = s_end < text.size() ? s_end + 1 : s_end;
  if (e_begin < body_begin) return std::string();
  return std::string(text.substr(body_begin, e_begin - body_begin));
}

} // namespace modsat::dsl
