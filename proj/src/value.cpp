#include "zeroml/value.hpp"

#include <cmath>

#include "zeroml/automl.hpp"
#include "zeroml/dataset.hpp"

namespace zeroml {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double as_double(const LiteralValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::get<double>(v);
}

bool compare(BinaryOp op, auto a, auto b) {
    switch (op) {
        case BinaryOp::Eq: return a == b;
        case BinaryOp::Neq: return a != b;
        case BinaryOp::Lt: return a < b;
        case BinaryOp::Gt: return a > b;
        case BinaryOp::Le: return a <= b;
        case BinaryOp::Ge: return a >= b;
        default: return false;
    }
}

}  // namespace

ZType value_type(const Value& v) {
    return std::visit(overloaded{
                          [](UnitValue) { return ZType::Unit; },
                          [](bool) { return ZType::Bool; },
                          [](std::int64_t) { return ZType::Int; },
                          [](double) { return ZType::Float; },
                          [](const std::string&) { return ZType::Text; },
                          [](RangeValue) { return ZType::Range; },
                          [](const std::shared_ptr<const Dataset>&) { return ZType::Dataset; },
                          [](const std::shared_ptr<const TrainedModel>&) { return ZType::Model; },
                          [](const std::shared_ptr<const Report>&) { return ZType::Report; },
                      },
                      v);
}

Value from_literal(const LiteralValue& v) {
    return std::visit([](const auto& x) -> Value { return x; }, v);
}

LiteralValue evaluate_binary(BinaryOp op, const LiteralValue& lhs, const LiteralValue& rhs) {
    const bool lnum = std::holds_alternative<std::int64_t>(lhs) || std::holds_alternative<double>(lhs);
    const bool rnum = std::holds_alternative<std::int64_t>(rhs) || std::holds_alternative<double>(rhs);
    if (is_comparison(op)) {
        if (lnum && rnum) {
            if (std::holds_alternative<std::int64_t>(lhs) && std::holds_alternative<std::int64_t>(rhs)) {
                return compare(op, std::get<std::int64_t>(lhs), std::get<std::int64_t>(rhs));
            }
            return compare(op, as_double(lhs), as_double(rhs));
        }
        if (lhs.index() != rhs.index()) throw std::logic_error("comparison of mismatched types");
        if (const auto* s = std::get_if<std::string>(&lhs)) return compare(op, *s, std::get<std::string>(rhs));
        if (const auto* b = std::get_if<bool>(&lhs)) return compare(op, *b, std::get<bool>(rhs));
        throw std::logic_error("comparison of non-comparable values");
    }
    if (!lnum || !rnum) throw std::logic_error("arithmetic on non-numeric values");

    if (op == BinaryOp::Div) {
        const double d = as_double(rhs);
        if (d == 0.0) throw ArithmeticFault("division by zero");
        const double q = as_double(lhs) / d;
        if (!std::isfinite(q)) throw ArithmeticFault("floating-point overflow");
        return q;
    }
    if (std::holds_alternative<std::int64_t>(lhs) && std::holds_alternative<std::int64_t>(rhs)) {
        const std::int64_t a = std::get<std::int64_t>(lhs);
        const std::int64_t b = std::get<std::int64_t>(rhs);
        std::int64_t r = 0;
        bool overflow = false;
        switch (op) {
            case BinaryOp::Add: overflow = __builtin_add_overflow(a, b, &r); break;
            case BinaryOp::Sub: overflow = __builtin_sub_overflow(a, b, &r); break;
            case BinaryOp::Mul: overflow = __builtin_mul_overflow(a, b, &r); break;
            default: break;
        }
        if (overflow) throw ArithmeticFault("integer overflow");
        return r;
    }
    const double a = as_double(lhs);
    const double b = as_double(rhs);
    double r = 0.0;
    switch (op) {
        case BinaryOp::Add: r = a + b; break;
        case BinaryOp::Sub: r = a - b; break;
        case BinaryOp::Mul: r = a * b; break;
        default: break;
    }
    if (!std::isfinite(r)) throw ArithmeticFault("floating-point overflow");
    return r;
}

std::string display(const Value& v) {
    return std::visit(
        overloaded{
            [](UnitValue) { return std::string("()"); },
            [](bool b) { return std::string(b ? "true" : "false"); },
            [](std::int64_t i) { return std::to_string(i); },
            [](double d) {
                std::string s = format_number(d);
                if (s.find_first_of(".e") == std::string::npos) s += ".0";
                return s;
            },
            [](const std::string& s) { return s; },
            [](RangeValue r) { return "range(" + std::to_string(r.lo) + ", " + std::to_string(r.hi) + ")"; },
            [](const std::shared_ptr<const Dataset>& d) {
                return "<Dataset " + std::to_string(d->n_rows()) + " rows x " + std::to_string(d->n_cols()) +
                       " cols>";
            },
            [](const std::shared_ptr<const TrainedModel>& m) { return m->summary(); },
            [](const std::shared_ptr<const Report>& r) {
                return "<Report " + std::string(task_name(r->task)) + " " + std::string(metric_name(r->metric)) +
                       " best=" + std::string(model_kind_name(r->best().candidate.kind)) + "(" +
                       r->best().candidate.describe_params() + ") " + std::to_string(r->rows.size()) +
                       " candidates>";
            },
        },
        v);
}

}  // namespace zeroml
