#pragma once

#include <string>

#include "valor/toolprog/ast.hpp"

namespace valor::toolprog {

// Canonical source: 4-space indents, one statement per line, minimal
// parentheses. parse(pretty_print(p)) is structurally equal to p.
std::string pretty_print(const ToolProgram& program);

}  // namespace valor::toolprog
