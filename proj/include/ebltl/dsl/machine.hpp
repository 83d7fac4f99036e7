#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "ebltl/dsl/ast.hpp"
#include "ebltl/dsl/parser.hpp"
#include "ebltl/dsl/typecheck.hpp"

namespace ebltl::dsl {

using ConstantOverrides = std::map<std::string, std::int64_t>;

/// Parses and typechecks one machine. `overrides` replaces declared constant
/// values (bounds such as capacity). When `abstract` is given, abstract
/// variables are recognized, and rejected everywhere but the linking clause.
inline MachineAST parse_machine(std::string_view source,
                                const ConstantOverrides& overrides = {},
                                const MachineAST* abstract = nullptr) {
  detail::MachineParser p(source);
  MachineAST m = p.parse_machine();
  detail::Typechecker tc(m, abstract);
  tc.check_declarations(p.take_constants(), overrides);
  tc.check_body();
  return m;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MachineAST load_machine(const std::filesystem::path& path,
                               const ConstantOverrides& overrides = {},
                               const MachineAST* abstract = nullptr) {
  try {
    return parse_machine(read_text_file(path), overrides, abstract);
  } catch (const TypeError& e) {
    throw TypeError(path.filename().string() + ": " + e.message(), e.line(), e.column());
  } catch (const ParseError& e) {
    throw ParseError(path.filename().string() + ": " + e.message(), e.line(), e.column());
  }
}

/// Resolves the machine's own `linking` clause against its abstraction.
inline void bind_linking(MachineAST& concrete, const MachineAST& abstract) {
  detail::Typechecker tc(concrete, &abstract);
  tc.bind_linking(abstract);
}

/// Parses a linking predicate given as text (for example from a chain
/// manifest) over the variables of `concrete` and `abstract`.
inline ExprPtr parse_linking(std::string_view text, MachineAST& concrete,
                             const MachineAST& abstract) {
  detail::MachineParser p(text);
  ExprPtr raw = p.parse_standalone_expr();
  detail::Typechecker tc(concrete, &abstract);
  return tc.resolve_linking_expr(raw);
}

/// Parses a state predicate or expression over the variables of `m`.
inline ExprPtr parse_state_expr(std::string_view text, MachineAST& m) {
  detail::MachineParser p(text);
  ExprPtr raw = p.parse_standalone_expr();
  detail::Typechecker tc(m, nullptr);
  return tc.resolve_state_expr(raw);
}

}  // namespace ebltl::dsl
