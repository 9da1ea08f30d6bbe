// Copyright 2026 The ffcl-dsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reader for the structural-Verilog subset accepted by the compiler:
//
//   module NAME ( ports );
//     input a, b;  output y;  wire w;
//     assign w = a & b;       // also |, ^
//     assign y = ~(w | a);    // NAND/NOR/XNOR
//     assign v = ~a;  assign u = a;  assign k = 1'b0;
//   endmodule
//
// One gate per assign. Nets are declared before use. Line comments only.

#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ffcl/netlist.hpp"

namespace ffcl {
namespace internal {

enum class TokenKind {
  kIdent,
  kConst0,
  kConst1,
  kLParen,
  kRParen,
  kComma,
  kSemi,
  kAssignEq,
  kAnd,
  kOr,
  kXor,
  kTilde,
  kEnd,
};

struct Token {
  TokenKind kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> Tokenize() {
    std::vector<Token> tokens;
    for (;;) {
      SkipSpaceAndComments();
      const int line = line_, column = column_;
      if (pos_ >= text_.size()) {
        tokens.push_back({TokenKind::kEnd, "<end of file>", line, column});
        return tokens;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string ident;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_')) {
          ident.push_back(text_[pos_]);
          Advance();
        }
        tokens.push_back({TokenKind::kIdent, std::move(ident), line, column});
        continue;
      }
      if (c == '1' && text_.substr(pos_, 4) == "1'b0") {
        Advance(4);
        tokens.push_back({TokenKind::kConst0, "1'b0", line, column});
        continue;
      }
      if (c == '1' && text_.substr(pos_, 4) == "1'b1") {
        Advance(4);
        tokens.push_back({TokenKind::kConst1, "1'b1", line, column});
        continue;
      }
      TokenKind kind;
      switch (c) {
        case '(':
          kind = TokenKind::kLParen;
          break;
        case ')':
          kind = TokenKind::kRParen;
          break;
        case ',':
          kind = TokenKind::kComma;
          break;
        case ';':
          kind = TokenKind::kSemi;
          break;
        case '=':
          kind = TokenKind::kAssignEq;
          break;
        case '&':
          kind = TokenKind::kAnd;
          break;
        case '|':
          kind = TokenKind::kOr;
          break;
        case '^':
          kind = TokenKind::kXor;
          break;
        case '~':
          kind = TokenKind::kTilde;
          break;
        default:
          throw NetlistError(NetlistError::Kind::kSyntax,
                             std::string("unexpected character '") + c + "'",
                             line, column);
      }
      Advance();
      tokens.push_back({kind, std::string(1, c), line, column});
    }
  }

 private:
  void Advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    }
  }

  void SkipSpaceAndComments() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        Advance();
      } else if (text_.substr(pos_, 2) == "//") {
        while (pos_ < text_.size() && text_[pos_] != '\n') Advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class NetlistParser {
 public:
  explicit NetlistParser(std::string_view text)
      : tokens_(Lexer(text).Tokenize()) {}

  GateNetlist Parse() {
    GateNetlist netlist;
    ExpectKeyword("module");
    netlist.name = Expect(TokenKind::kIdent, "module name").text;
    Expect(TokenKind::kLParen, "'('");
    std::vector<Token> ports;
    if (Peek().kind != TokenKind::kRParen) {
      ports.push_back(Expect(TokenKind::kIdent, "port name"));
      while (Peek().kind == TokenKind::kComma) {
        Next();
        ports.push_back(Expect(TokenKind::kIdent, "port name"));
      }
    }
    Expect(TokenKind::kRParen, "')'");
    Expect(TokenKind::kSemi, "';'");

    for (;;) {
      const Token& t = Peek();
      if (t.kind != TokenKind::kIdent) {
        throw Error(t, "expected a declaration, 'assign' or 'endmodule'");
      }
      if (t.text == "endmodule") {
        Next();
        break;
      }
      if (t.text == "input" || t.text == "output" || t.text == "wire") {
        ParseDeclaration(netlist);
      } else if (t.text == "assign") {
        ParseAssign(netlist);
      } else {
        throw Error(t, "expected a declaration, 'assign' or 'endmodule'");
      }
    }
    if (Peek().kind != TokenKind::kEnd) {
      throw Error(Peek(), "unexpected text after 'endmodule'");
    }

    std::unordered_set<std::string> port_set;
    for (const Token& port : ports) {
      if (!inputs_.contains(port.text) && !outputs_.contains(port.text)) {
        throw NetlistError(
            NetlistError::Kind::kUndeclaredNet,
            "port '" + port.text + "' is not declared input or output",
            port.line, port.column);
      }
      port_set.insert(port.text);
    }
    for (const auto* group :
         {&netlist.primary_inputs, &netlist.primary_outputs}) {
      for (const std::string& net : *group) {
        if (!port_set.contains(net)) {
          const Token& at = declared_at_.at(net);
          throw NetlistError(NetlistError::Kind::kSyntax,
                             "'" + net + "' is missing from the port list",
                             at.line, at.column);
        }
      }
    }
    netlist.Validate();
    return netlist;
  }

 private:
  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Next() {
    const Token& t = tokens_[pos_];
    if (t.kind != TokenKind::kEnd) ++pos_;
    return t;
  }

  static NetlistError Error(const Token& t, const std::string& message) {
    return NetlistError(NetlistError::Kind::kSyntax,
                        message + ", found '" + t.text + "'", t.line, t.column);
  }

  const Token& Expect(TokenKind kind, std::string_view what) {
    if (Peek().kind != kind) {
      throw Error(Peek(), "expected " + std::string(what));
    }
    return Next();
  }

  void ExpectKeyword(std::string_view keyword) {
    const Token& t = Peek();
    if (t.kind != TokenKind::kIdent || t.text != keyword) {
      throw Error(t, "expected '" + std::string(keyword) + "'");
    }
    Next();
  }

  void ParseDeclaration(GateNetlist& netlist) {
    const std::string keyword = Next().text;
    for (;;) {
      const Token& name = Expect(TokenKind::kIdent, "net name");
      Declare(keyword, name, netlist);
      if (Peek().kind == TokenKind::kComma) {
        Next();
        continue;
      }
      Expect(TokenKind::kSemi, "',' or ';'");
      return;
    }
  }

  void Declare(const std::string& keyword, const Token& name,
               GateNetlist& netlist) {
    const bool is_input = inputs_.contains(name.text);
    const bool is_output = outputs_.contains(name.text);
    const bool is_wire = wires_.contains(name.text);
    if (keyword == "input") {
      if (is_input) throw Redeclared(name);
      if (is_output) {
        throw NetlistError(NetlistError::Kind::kMultiplyDriven,
                           "'" + name.text + "' declared input and output",
                           name.line, name.column);
      }
      inputs_.insert(name.text);
      netlist.primary_inputs.push_back(name.text);
    } else if (keyword == "output") {
      if (is_output) throw Redeclared(name);
      if (is_input) {
        throw NetlistError(NetlistError::Kind::kMultiplyDriven,
                           "'" + name.text + "' declared input and output",
                           name.line, name.column);
      }
      outputs_.insert(name.text);
      netlist.primary_outputs.push_back(name.text);
    } else {
      if (is_wire) throw Redeclared(name);
      wires_.insert(name.text);
    }
    declared_at_.emplace(name.text, name);
  }

  static NetlistError Redeclared(const Token& name) {
    return NetlistError(NetlistError::Kind::kSyntax,
                        "'" + name.text + "' declared twice", name.line,
                        name.column);
  }

  static bool IsExpressionToken(TokenKind kind) {
    switch (kind) {
      case TokenKind::kIdent:
      case TokenKind::kConst0:
      case TokenKind::kConst1:
      case TokenKind::kLParen:
      case TokenKind::kRParen:
      case TokenKind::kAnd:
      case TokenKind::kOr:
      case TokenKind::kXor:
      case TokenKind::kTilde:
        return true;
      default:
        return false;
    }
  }

  // Raised when a token cannot continue one of the accepted assign shapes.
  NetlistError ShapeError(const Token& t) const {
    if (IsExpressionToken(t.kind)) {
      return NetlistError(NetlistError::Kind::kUnsupportedExpression,
                          "only 'a OP b', '~(a OP b)', '~a', 'a' and "
                          "constants are accepted, found '" +
                              t.text + "'",
                          t.line, t.column);
    }
    return Error(t, "malformed assign expression");
  }

  const Token& ExpectOperand() {
    if (Peek().kind != TokenKind::kIdent) throw ShapeError(Peek());
    const Token& t = Next();
    if (!declared_at_.contains(t.text)) {
      throw NetlistError(NetlistError::Kind::kUndeclaredNet,
                         "net '" + t.text + "' is not declared", t.line,
                         t.column);
    }
    return t;
  }

  static bool IsBinaryOp(TokenKind kind) {
    return kind == TokenKind::kAnd || kind == TokenKind::kOr ||
           kind == TokenKind::kXor;
  }

  static GateOp BinaryOp(TokenKind kind, bool inverted) {
    switch (kind) {
      case TokenKind::kAnd:
        return inverted ? GateOp::kNand : GateOp::kAnd;
      case TokenKind::kOr:
        return inverted ? GateOp::kNor : GateOp::kOr;
      default:
        return inverted ? GateOp::kXnor : GateOp::kXor;
    }
  }

  void ParseAssign(GateNetlist& netlist) {
    Next();  // assign
    const Token& target = Expect(TokenKind::kIdent, "assign target");
    if (!declared_at_.contains(target.text)) {
      throw NetlistError(NetlistError::Kind::kUndeclaredNet,
                         "net '" + target.text + "' is not declared",
                         target.line, target.column);
    }
    if (inputs_.contains(target.text)) {
      throw NetlistError(NetlistError::Kind::kMultiplyDriven,
                         "primary input '" + target.text + "' is assigned",
                         target.line, target.column);
    }
    if (!assigned_.insert(target.text).second) {
      throw NetlistError(NetlistError::Kind::kMultiplyDriven,
                         "net '" + target.text + "' is assigned twice",
                         target.line, target.column);
    }
    Expect(TokenKind::kAssignEq, "'='");

    Gate gate{target.text, GateOp::kBuf, {}};
    const Token& first = Peek();
    if (first.kind == TokenKind::kConst0 || first.kind == TokenKind::kConst1) {
      Next();
      gate.op =
          first.kind == TokenKind::kConst0 ? GateOp::kConst0 : GateOp::kConst1;
    } else if (first.kind == TokenKind::kTilde) {
      Next();
      if (Peek().kind == TokenKind::kLParen) {
        Next();
        gate.operands.push_back(ExpectOperand().text);
        if (!IsBinaryOp(Peek().kind)) throw ShapeError(Peek());
        gate.op = BinaryOp(Next().kind, /*inverted=*/true);
        gate.operands.push_back(ExpectOperand().text);
        if (Peek().kind != TokenKind::kRParen) throw ShapeError(Peek());
        Next();
      } else {
        gate.op = GateOp::kNot;
        gate.operands.push_back(ExpectOperand().text);
      }
    } else {
      gate.operands.push_back(ExpectOperand().text);
      if (IsBinaryOp(Peek().kind)) {
        gate.op = BinaryOp(Next().kind, /*inverted=*/false);
        gate.operands.push_back(ExpectOperand().text);
      }
    }
    if (Peek().kind != TokenKind::kSemi) throw ShapeError(Peek());
    Next();
    netlist.gates.push_back(std::move(gate));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::unordered_set<std::string> inputs_;
  std::unordered_set<std::string> outputs_;
  std::unordered_set<std::string> wires_;
  std::unordered_set<std::string> assigned_;
  std::unordered_map<std::string, Token> declared_at_;
};

}  // namespace internal

// Parses and validates a netlist. Throws NetlistError.
inline GateNetlist ParseNetlist(std::string_view text) {
  return internal::NetlistParser(text).Parse();
}

inline GateNetlist ParseNetlistFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open netlist '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseNetlist(buffer.str());
}

}  // namespace ffcl
