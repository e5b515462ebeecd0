#pragma once

#include <string>

#include "skic/term.hpp"

namespace skic {

namespace detail {

inline void print_expr(const Term& t, std::string& out);

inline void print_atom(const Term& t, std::string& out) {
  if (const auto* v = t.as<Var>()) {
    out += v->name;
  } else if (const auto* i = t.as<IntLit>()) {
    out += std::to_string(i->value);
  } else if (const auto* b = t.as<BoolLit>()) {
    out += b->value ? "true" : "false";
  } else if (const auto* p = t.as<Prim>()) {
    out += '#';
    out += prim_name(p->op);
  } else {
    out += '(';
    print_expr(t, out);
    out += ')';
  }
}

inline void print_expr(const Term& t, std::string& out) {
  if (const auto* l = t.as<Lam>()) {
    out += '\\';
    out += l->param;
    out += '.';
    if (!l->body->is<Lam>()) out += ' ';
    print_expr(*l->body, out);
    return;
  }
  if (t.is<App>()) {
    std::vector<const Term*> spine;
    const Term* cur = &t;
    while (const auto* a = cur->as<App>()) {
      spine.push_back(a->arg.get());
      cur = a->fun.get();
    }
    print_atom(*cur, out);
    for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
      out += ' ';
      print_atom(**it, out);
    }
    return;
  }
  print_atom(t, out);
}

}  // namespace detail

// Canonical text: `\x.\y. body`, left-associative application without redundant
// parentheses, single spaces between atoms.
inline std::string pretty_print(const Term& t) {
  std::string out;
  detail::print_expr(t, out);
  return out;
}

inline std::string pretty_print(const Program& p) {
  std::string out;
  for (const auto& d : p.defs) out += d.name + " := " + pretty_print(*d.body) + ";\n";
  if (p.main) out += pretty_print(*p.main) + "\n";
  return out;
}

}  // namespace skic
