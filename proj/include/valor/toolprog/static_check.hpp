#pragma once

#include <string>
#include <vector>

#include "valor/toolprog/ast.hpp"

namespace valor::toolprog {

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity;
    std::string message;
    Span span;
};

// Names callable in every program: the vision tools plus the interpreter
// builtins. Shared with the runtime so the checker and executor agree.
const std::vector<std::string>& tool_function_names();
const std::vector<std::string>& builtin_function_names();

// Flags unresolvable names, unknown callees, and stray break/continue;
// warns when final_answer is never assigned. Pure function of the tree.
std::vector<Diagnostic> static_check(const ToolProgram& program);

}  // namespace valor::toolprog
