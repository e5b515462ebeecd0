#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "skic/errors.hpp"

namespace skic {

enum class PrimOp : std::uint8_t { Add, Sub, Mul, Eq, If, AddZ, AddR };

inline constexpr std::array<PrimOp, 7> kAllPrims = {PrimOp::Add, PrimOp::Sub,  PrimOp::Mul, PrimOp::Eq,
                                                    PrimOp::If,  PrimOp::AddZ, PrimOp::AddR};

inline std::string_view prim_name(PrimOp op) {
  switch (op) {
    case PrimOp::Add: return "add";
    case PrimOp::Sub: return "sub";
    case PrimOp::Mul: return "mul";
    case PrimOp::Eq: return "eq";
    case PrimOp::If: return "if";
    case PrimOp::AddZ: return "addZ";
    case PrimOp::AddR: return "addR";
  }
  return "?";
}

inline std::optional<PrimOp> prim_from_name(std::string_view name) {
  for (PrimOp op : kAllPrims) {
    if (prim_name(op) == name) return op;
  }
  return std::nullopt;
}

// Number of operands a primitive consumes before its delta rule can fire.
inline constexpr std::size_t prim_arity(PrimOp op) { return op == PrimOp::If ? 3 : 2; }

// Number of leading operands that must be literals for the delta rule to fire.
inline constexpr std::size_t prim_strict_operands(PrimOp op) { return op == PrimOp::If ? 1 : 2; }

inline constexpr bool is_arithmetic(PrimOp op) {
  return op == PrimOp::Add || op == PrimOp::Sub || op == PrimOp::Mul || op == PrimOp::AddZ ||
         op == PrimOp::AddR;
}

struct IntLit {
  std::int64_t value;
  friend bool operator==(const IntLit&, const IntLit&) = default;
};

struct BoolLit {
  bool value;
  friend bool operator==(const BoolLit&, const BoolLit&) = default;
};

struct Prim {
  PrimOp op;
  friend bool operator==(const Prim&, const Prim&) = default;
};

using Literal = std::variant<IntLit, BoolLit>;

// What a saturated primitive does once its strict operands are literals:
// produce a literal, select one of its remaining operands (#if), or stay stuck.
struct Delta {
  enum class Kind { Stuck, Value, Select } kind = Kind::Stuck;
  Literal value{IntLit{0}};
  std::size_t operand = 0;
};

inline Delta fire_delta(PrimOp op, std::span<const Literal> strict) {
  Delta out;
  if (op == PrimOp::If) {
    if (const auto* b = std::get_if<BoolLit>(&strict[0])) {
      out.kind = Delta::Kind::Select;
      out.operand = b->value ? 1 : 2;
    }
    return out;
  }
  if (op == PrimOp::Eq) {
    if (strict[0].index() != strict[1].index()) return out;
    out.kind = Delta::Kind::Value;
    out.value = BoolLit{strict[0] == strict[1]};
    return out;
  }
  const auto* a = std::get_if<IntLit>(&strict[0]);
  const auto* b = std::get_if<IntLit>(&strict[1]);
  if (a == nullptr || b == nullptr) return out;
  std::int64_t r = 0;
  bool overflow = false;
  switch (op) {
    case PrimOp::Sub: overflow = __builtin_sub_overflow(a->value, b->value, &r); break;
    case PrimOp::Mul: overflow = __builtin_mul_overflow(a->value, b->value, &r); break;
    default: overflow = __builtin_add_overflow(a->value, b->value, &r); break;
  }
  if (overflow) {
    throw EvalError("integer overflow in #" + std::string(prim_name(op)) + " " +
                    std::to_string(a->value) + " " + std::to_string(b->value));
  }
  out.kind = Delta::Kind::Value;
  out.value = IntLit{r};
  return out;
}

}  // namespace skic
