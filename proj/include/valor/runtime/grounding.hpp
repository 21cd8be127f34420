#pragma once

#include <string>
#include <vector>

#include "valor/toolprog/ast.hpp"

namespace valor::runtime {

struct GroundingCalls {
    std::vector<std::string> prompts;  // literal prompts, source order
    int dynamic_count = 0;             // detection calls with computed prompts
};

// Literal first-text-argument of every detection call in the program.
GroundingCalls collect_grounding_calls(const toolprog::ToolProgram& program);

}  // namespace valor::runtime
