#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "valor/runtime/value.hpp"
#include "valor/toolprog/ast.hpp"
#include "valor/tools/provider.hpp"

namespace valor::runtime {

struct Budget {
    long max_steps = 100000;
    int max_tool_calls = 64;
    std::chrono::milliseconds max_wall = std::chrono::seconds(120);

    bool valid() const {
        return max_steps > 0 && max_tool_calls > 0 && max_wall.count() > 0;
    }
};

enum class ExecStatus { Completed, HaltedByReturn, Error };

enum class ErrorKind {
    None,
    UndefinedName,
    TypeMismatch,
    DivisionByZero,
    IndexOutOfRange,
    BudgetExceededSteps,
    BudgetExceededToolCalls,
    BudgetExceededWall,
    ToolError,
};

struct ToolInvocation {
    std::string tool;
    nlohmann::ordered_json args;    // positional argument array
    nlohmann::ordered_json result;
    double wall_ms = 0.0;  // in-memory only; serialized traces omit it
};

struct ExecutionResult {
    ExecStatus status = ExecStatus::Completed;
    ErrorKind error = ErrorKind::None;
    std::string error_message;
    std::map<std::string, Value> bindings;  // final top-level environment
    std::vector<ToolInvocation> trace;
    long steps_used = 0;
    int tool_calls_used = 0;
};

const char* error_kind_name(ErrorKind kind);

// Detection thresholds applied when programs call the detection tool.
struct ReasoningThresholds {
    double box = 0.35;
    double text = 0.25;
};

// Tree-walking evaluator. One instance per execution context; the provider
// behind it must tolerate concurrent use across instances.
class Interpreter {
  public:
    Interpreter(tools::ToolProvider& provider, tools::ImageResolver& resolver, Budget budget,
                ReasoningThresholds thresholds = {});

    // Runs with img_pth pre-bound to image_ref.
    ExecutionResult execute(const toolprog::ToolProgram& program, const std::string& image_ref);

  private:
    tools::ToolProvider& provider_;
    tools::ImageResolver& resolver_;
    Budget budget_;
    ReasoningThresholds thresholds_;
};

ExecutionResult execute(const toolprog::ToolProgram& program, tools::ToolProvider& provider,
                        tools::ImageResolver& resolver, Budget budget,
                        const std::string& image_ref = "dry://image",
                        ReasoningThresholds thresholds = {});

struct DryRunResult {
    bool pass = false;
    std::string reason;  // empty on pass
};

// Executes against the dummy tool provider; the executable half of the
// syntax reward.
DryRunResult dry_run(const toolprog::ToolProgram& program, Budget budget);

struct MissingAnswer {};

// final_answer from a completed run; absent or callable counts as missing.
std::optional<Value> extract_final_answer(const ExecutionResult& result);

}  // namespace valor::runtime
