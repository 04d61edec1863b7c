#include "zeroml/vm.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <iostream>
#include <unistd.h>

#include "zeroml/artifact.hpp"
#include "zeroml/builtins.hpp"
#include "zeroml/errors.hpp"
#include "zeroml/server.hpp"
#include "zeroml/value.hpp"

namespace zeroml {

namespace {

using DatasetHandle = std::shared_ptr<const Dataset>;
using ModelHandle = std::shared_ptr<const TrainedModel>;
using ReportHandle = std::shared_ptr<const Report>;

class Machine {
public:
    Machine(const Bytecode& bc, RuntimeEnv& env)
        : bc_(bc), env_(env), out_(env.out ? *env.out : std::cout), slots_(static_cast<std::size_t>(bc.slot_count)) {}

    void run() {
        std::size_t pc = 0;
        for (;;) {
            const Instruction& ins = bc_.code[pc];
            line_ = ins.line;
#ifndef NDEBUG
            if (std::binary_search(bc_.statement_starts.begin(), bc_.statement_starts.end(), pc)) {
                assert(stack_.empty() && "operand stack must be empty at a statement boundary");
            }
#endif
            switch (ins.op) {
                case OpCode::PushConst:
                    stack_.push_back(from_literal(bc_.constants[static_cast<std::size_t>(ins.a)]));
                    break;
                case OpCode::LoadSlot: {
                    const auto& slot = slots_[static_cast<std::size_t>(ins.a)];
                    if (!slot) fault("read of an unassigned slot");
                    stack_.push_back(*slot);
                    break;
                }
                case OpCode::StoreSlot:
                    slots_[static_cast<std::size_t>(ins.a)] = pop();
                    break;
                case OpCode::Add:
                case OpCode::Sub:
                case OpCode::Mul:
                case OpCode::Div:
                case OpCode::CmpEq:
                case OpCode::CmpNe:
                case OpCode::CmpLt:
                case OpCode::CmpGt:
                case OpCode::CmpLe:
                case OpCode::CmpGe:
                    binary(ins.op);
                    break;
                case OpCode::JumpIfFalse:
                    if (!pop_as<bool>()) {
                        pc = static_cast<std::size_t>(ins.a);
                        continue;
                    }
                    break;
                case OpCode::CallBuiltin:
                    call(static_cast<BuiltinId>(ins.a), static_cast<std::size_t>(ins.b), ins.provided);
                    break;
                case OpCode::RangeInit:
                    slots_[static_cast<std::size_t>(ins.a)] = Value{pop_as<RangeValue>()};
                    break;
                case OpCode::RangeNext: {
                    auto& slot = slots_[static_cast<std::size_t>(ins.a)];
                    auto* range = slot ? std::get_if<RangeValue>(&*slot) : nullptr;
                    if (!range) fault("loop iterator slot does not hold a Range");
                    if (range->lo < range->hi) {
                        stack_.push_back(Value{range->lo});
                        ++range->lo;
                        stack_.push_back(Value{true});
                    } else {
                        stack_.push_back(Value{false});
                    }
                    break;
                }
                case OpCode::Pop:
                    pop();
                    break;
                case OpCode::Halt:
                    assert(stack_.empty());
                    return;
                case OpCode::Jump:
                    pc = static_cast<std::size_t>(ins.a);
                    continue;
            }
            ++pc;
        }
    }

private:
    [[noreturn]] void fault(const std::string& message) const {
        throw RuntimeError(line_, RuntimeError::Kind::TypeFault, "internal type fault: " + message);
    }

    Value pop() {
        if (stack_.empty()) fault("operand stack underflow");
        Value v = std::move(stack_.back());
        stack_.pop_back();
        return v;
    }

    template <class T>
    T pop_as() {
        Value v = pop();
        if (auto* x = std::get_if<T>(&v)) return std::move(*x);
        fault("unexpected operand of type " + std::string(type_name(value_type(v))));
    }

    static std::optional<LiteralValue> scalar(const Value& v) {
        if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
        if (const auto* d = std::get_if<double>(&v)) return *d;
        if (const auto* s = std::get_if<std::string>(&v)) return *s;
        if (const auto* b = std::get_if<bool>(&v)) return *b;
        return std::nullopt;
    }

    void binary(OpCode op) {
        static constexpr BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                                           BinaryOp::Eq,  BinaryOp::Neq, BinaryOp::Lt,  BinaryOp::Gt,
                                           BinaryOp::Le,  BinaryOp::Ge};
        const BinaryOp bop = ops[static_cast<int>(op) - static_cast<int>(OpCode::Add)];
        const Value rhs = pop();
        const Value lhs = pop();
        const auto l = scalar(lhs);
        const auto r = scalar(rhs);
        if (!l || !r) fault("operator " + std::string(binary_op_symbol(bop)) + " on non-scalar operands");
        try {
            stack_.push_back(from_literal(evaluate_binary(bop, *l, *r)));
        } catch (const ArithmeticFault& e) {
            throw RuntimeError(line_, RuntimeError::Kind::Arithmetic, e.what());
        } catch (const std::logic_error& e) {
            fault(e.what());
        }
    }

    static double number(const Value& v) {
        if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
        return std::get<double>(v);
    }

    template <class T>
    T arg(std::vector<Value>& args, std::size_t i) {
        if (auto* x = std::get_if<T>(&args[i])) return std::move(*x);
        fault("argument " + std::to_string(i) + " has type " + std::string(type_name(value_type(args[i]))));
    }

    double float_arg(std::vector<Value>& args, std::size_t i) {
        if (!std::holds_alternative<std::int64_t>(args[i]) && !std::holds_alternative<double>(args[i])) {
            fault("argument " + std::to_string(i) + " is not numeric");
        }
        return number(args[i]);
    }

    std::filesystem::path resolve(const std::string& p) const {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : env_.workdir / path;
    }

    void call(BuiltinId id, std::size_t argc, std::uint32_t provided) {
        if (stack_.size() < argc) fault("operand stack underflow in call");
        std::vector<Value> args(std::make_move_iterator(stack_.end() - static_cast<std::ptrdiff_t>(argc)),
                                std::make_move_iterator(stack_.end()));
        stack_.resize(stack_.size() - argc);
        try {
            stack_.push_back(dispatch(id, args, provided));
        } catch (const RuntimeError&) {
            throw;
        } catch (const Error& e) {
            throw RuntimeError(line_, RuntimeError::Kind::Builtin, builtin(id).name + ": " + e.what());
        } catch (const std::bad_alloc&) {
            throw RuntimeError(line_, RuntimeError::Kind::Builtin, builtin(id).name + ": out of memory");
        }
    }

    Value dispatch(BuiltinId id, std::vector<Value>& args, std::uint32_t provided) {
        switch (id) {
            case BuiltinId::Print:
                out_ << display(args[0]) << '\n';
                return UnitValue{};
            case BuiltinId::Range:
                return RangeValue{arg<std::int64_t>(args, 0), arg<std::int64_t>(args, 1)};
            case BuiltinId::Load:
                return DatasetHandle(std::make_shared<const Dataset>(load_csv(resolve(arg<std::string>(args, 0)))));
            case BuiltinId::AutoML:
                return automl(args, provided);
            case BuiltinId::Report: {
                const ModelHandle m = arg<ModelHandle>(args, 0);
                if (!m->report) throw Error("model carries no search report");
                out_ << render_report(*m->report, env_.test_mode);
                return m->report;
            }
            case BuiltinId::Predict: {
                const ModelHandle m = arg<ModelHandle>(args, 0);
                const DatasetHandle d = arg<DatasetHandle>(args, 1);
                return DatasetHandle(std::make_shared<const Dataset>(m->predict_dataset(*d)));
            }
            case BuiltinId::Deploy:
                deploy(arg<ModelHandle>(args, 0), arg<std::string>(args, 1), arg<std::string>(args, 2));
                return UnitValue{};
        }
        fault("unknown builtin");
    }

    Value automl(std::vector<Value>& args, std::uint32_t provided) {
        const DatasetHandle data = arg<DatasetHandle>(args, 0);
        AutomlParams params;
        params.target = arg<std::string>(args, 1);
        params.task = arg<std::string>(args, 2);
        params.preprocess = arg<std::string>(args, 3);
        params.max_time = float_arg(args, 4);
        params.evaluation = arg<std::string>(args, 5);
        const std::int64_t folds = arg<std::int64_t>(args, 6);
        if (folds < 2 || folds > 1000) throw FoldError("folds must be between 2 and 1000");
        params.folds = static_cast<int>(folds);
        params.seed = (provided & (1u << 7)) ? arg<std::int64_t>(args, 7) : env_.seed;

        SearchOptions options;
        options.threads = env_.threads;
        options.roster = env_.roster;
        options.fit_padding = env_.fit_padding;
        SearchOutcome outcome = run_automl(*data, params, options);
        if (env_.test_mode) outcome.report = without_timings(std::move(outcome.report));

        auto report = std::make_shared<const Report>(std::move(outcome.report));
        outcome.model.report = report;
        if (env_.report_out) write_report_file(*report, resolve(env_.report_out->string()));
        return ModelHandle(std::make_shared<const TrainedModel>(std::move(outcome.model)));
    }

    void write_report_file(const Report& r, const std::filesystem::path& path) const {
        nlohmann::json j = report_to_json(r);
        j["rendered"] = render_report(r, env_.test_mode);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write report file '" + path.string() + "'");
        out << j.dump(2) << '\n';
    }

    void deploy(const ModelHandle& m, const std::string& target, const std::string& dest) {
        if (target == "file" || target == "edge") {
            save_artifact(*m, resolve(dest));
            return;
        }
        if (target == "api") {
            const auto [host, port] = parse_endpoint(dest);
            const auto artifact =
                std::filesystem::temp_directory_path() / ("zeroml-api-" + std::to_string(::getpid()) + ".zmodel");
            save_artifact(*m, artifact);
            if (env_.serve_api) {
                env_.serve_api(m, artifact, host, port);
            } else {
                serve(artifact, host, port);
            }
            return;
        }
        if (target == "serverless") throw Error("target 'serverless' not supported in v1");
        throw Error("unknown deploy target '" + target + "' (expected file, edge or api)");
    }

    const Bytecode& bc_;
    RuntimeEnv& env_;
    std::ostream& out_;
    std::vector<std::optional<Value>> slots_;
    std::vector<Value> stack_;
    int line_ = 0;
};

}  // namespace

int execute(const Bytecode& bc, RuntimeEnv& env) {
    Machine(bc, env).run();
    return kExitOk;
}

}  // namespace zeroml
