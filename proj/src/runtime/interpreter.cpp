#include "valor/runtime/interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "valor/tools/dummy_provider.hpp"
#include "valor/util/text.hpp"

namespace valor::runtime {

using toolprog::BinaryOp;
using toolprog::BoolOp;
using toolprog::CompareOp;
using toolprog::UnaryOp;

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::None: return "none";
        case ErrorKind::UndefinedName: return "undefined_name";
        case ErrorKind::TypeMismatch: return "type_mismatch";
        case ErrorKind::DivisionByZero: return "division_by_zero";
        case ErrorKind::IndexOutOfRange: return "index_out_of_range";
        case ErrorKind::BudgetExceededSteps: return "budget_exceeded(steps)";
        case ErrorKind::BudgetExceededToolCalls: return "budget_exceeded(tool_calls)";
        case ErrorKind::BudgetExceededWall: return "budget_exceeded(wall)";
        case ErrorKind::ToolError: return "tool_error";
    }
    return "?";
}

struct Closure {
    const toolprog::FuncDef* def;
};

namespace {

struct Fault {
    ErrorKind kind;
    std::string message;
};

struct BreakSignal {};
struct ContinueSignal {};
struct ReturnSignal {
    Value value;
    bool has_value;
};

using Env = std::map<std::string, Value>;

class Executor {
  public:
    Executor(tools::ToolProvider& provider, tools::ImageResolver& resolver, Budget budget,
             ReasoningThresholds thresholds, ExecutionResult& result)
        : provider_(provider),
          resolver_(resolver),
          budget_(budget),
          thresholds_(thresholds),
          result_(result),
          start_(std::chrono::steady_clock::now()) {}

    void run(const toolprog::ToolProgram& program, const std::string& image_ref) {
        globals_["img_pth"] = Value::text(image_ref);
        image_ref_ = image_ref;
        try {
            for (const auto& stmt : program.statements) {
                exec_stmt(*stmt, nullptr);
            }
            result_.status = ExecStatus::Completed;
        } catch (const ReturnSignal&) {
            result_.status = ExecStatus::HaltedByReturn;
        } catch (const BreakSignal&) {
            fail_result(ErrorKind::TypeMismatch, "break outside a loop");
        } catch (const ContinueSignal&) {
            fail_result(ErrorKind::TypeMismatch, "continue outside a loop");
        } catch (const Fault& f) {
            fail_result(f.kind, f.message);
        }
        result_.bindings = std::move(globals_);
        result_.steps_used = steps_;
        result_.tool_calls_used = tool_calls_;
    }

  private:
    void fail_result(ErrorKind kind, const std::string& msg) {
        result_.status = ExecStatus::Error;
        result_.error = kind;
        result_.error_message = msg;
    }

    [[noreturn]] void fault(ErrorKind kind, const std::string& msg) const {
        throw Fault{kind, msg};
    }

    void step() {
        if (++steps_ > budget_.max_steps) {
            throw Fault{ErrorKind::BudgetExceededSteps,
                        "step budget of " + std::to_string(budget_.max_steps) + " exhausted"};
        }
        if ((steps_ & 0xFF) == 0) check_wall();
    }

    void check_wall() const {
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        if (elapsed > budget_.max_wall) {
            throw Fault{ErrorKind::BudgetExceededWall, "wall-clock budget exhausted"};
        }
    }

    // ---- statements ----

    void exec_body(const std::vector<toolprog::StmtPtr>& body, Env* locals) {
        for (const auto& stmt : body) exec_stmt(*stmt, locals);
    }

    void exec_stmt(const toolprog::Stmt& stmt, Env* locals) {
        step();
        std::visit([&](const auto& node) { exec(node, locals); }, stmt.node);
    }

    void exec(const toolprog::Assign& s, Env* locals) {
        Value value = eval(*s.value, locals);
        if (s.targets.size() == 1) {
            bind(s.targets[0], std::move(value), locals);
            return;
        }
        if (!value.is_list()) {
            fault(ErrorKind::TypeMismatch,
                  std::string("cannot unpack ") + value.type_name() + " into " +
                      std::to_string(s.targets.size()) + " names");
        }
        const auto& items = *value.as_list();
        if (items.size() != s.targets.size()) {
            fault(ErrorKind::TypeMismatch,
                  "cannot unpack list of length " + std::to_string(items.size()) + " into " +
                      std::to_string(s.targets.size()) + " names");
        }
        for (std::size_t i = 0; i < s.targets.size(); ++i) {
            bind(s.targets[i], items[i], locals);
        }
    }

    void exec(const toolprog::AugAssign& s, Env* locals) {
        Value current = lookup(s.target, locals);
        Value rhs = eval(*s.value, locals);
        bind(s.target, binary(s.op, current, rhs), locals);
    }

    void exec(const toolprog::ExprStmt& s, Env* locals) { eval(*s.expr, locals); }

    void exec(const toolprog::If& s, Env* locals) {
        for (const auto& arm : s.arms) {
            if (truth(eval(*arm.cond, locals))) {
                exec_body(arm.body, locals);
                return;
            }
        }
        exec_body(s.orelse, locals);
    }

    void exec(const toolprog::For& s, Env* locals) {
        Value iterable = eval(*s.iterable, locals);
        if (!iterable.is_list()) {
            fault(ErrorKind::TypeMismatch,
                  std::string("for loop needs a list, got ") + iterable.type_name());
        }
        // iterate over a snapshot so body mutations cannot invalidate it
        const std::vector<Value> items = *iterable.as_list();
        for (const Value& item : items) {
            if (s.targets.size() == 1) {
                bind(s.targets[0], item, locals);
            } else {
                if (!item.is_list() || item.as_list()->size() != s.targets.size()) {
                    fault(ErrorKind::TypeMismatch, "cannot unpack loop item");
                }
                for (std::size_t i = 0; i < s.targets.size(); ++i) {
                    bind(s.targets[i], (*item.as_list())[i], locals);
                }
            }
            try {
                exec_body(s.body, locals);
            } catch (const BreakSignal&) {
                return;
            } catch (const ContinueSignal&) {
                continue;
            }
        }
    }

    void exec(const toolprog::While& s, Env* locals) {
        while (truth(eval(*s.cond, locals))) {
            try {
                exec_body(s.body, locals);
            } catch (const BreakSignal&) {
                return;
            } catch (const ContinueSignal&) {
                continue;
            }
        }
    }

    void exec(const toolprog::FuncDef& s, Env* locals) {
        bind(s.name, Value::closure(std::make_shared<Closure>(Closure{&s})), locals);
    }

    void exec(const toolprog::Return& s, Env* locals) {
        if (s.value) {
            throw ReturnSignal{eval(*s.value, locals), true};
        }
        throw ReturnSignal{Value::none(), false};
    }

    void exec(const toolprog::Break&, Env*) { throw BreakSignal{}; }
    void exec(const toolprog::Continue&, Env*) { throw ContinueSignal{}; }

    // ---- environment ----

    void bind(const std::string& name, Value value, Env* locals) {
        if (locals != nullptr) {
            (*locals)[name] = std::move(value);
        } else {
            globals_[name] = std::move(value);
        }
    }

    Value lookup(const std::string& name, Env* locals) {
        if (locals != nullptr) {
            const auto it = locals->find(name);
            if (it != locals->end()) return it->second;
        }
        const auto it = globals_.find(name);
        if (it != globals_.end()) return it->second;
        fault(ErrorKind::UndefinedName, "name '" + name + "' is not defined");
    }

    // ---- expressions ----

    Value eval(const toolprog::Expr& e, Env* locals) {
        step();
        return std::visit([&](const auto& node) { return eval_node(node, locals); }, e.node);
    }

    Value eval_node(const toolprog::NumberLit& n, Env*) { return Value::number(n.value); }
    Value eval_node(const toolprog::TextLit& t, Env*) { return Value::text(t.value); }
    Value eval_node(const toolprog::BoolLit& b, Env*) { return Value::boolean(b.value); }
    Value eval_node(const toolprog::NoneLit&, Env*) { return Value::none(); }

    Value eval_node(const toolprog::ListLit& l, Env* locals) {
        std::vector<Value> items;
        items.reserve(l.items.size());
        for (const auto& item : l.items) items.push_back(eval(*item, locals));
        return Value::list(std::move(items));
    }

    Value eval_node(const toolprog::MapLit& m, Env* locals) {
        std::map<std::string, Value> items;
        for (const auto& [k, v] : m.items) {
            Value key = eval(*k, locals);
            if (!key.is_text()) {
                fault(ErrorKind::TypeMismatch,
                      std::string("mapping keys must be text, got ") + key.type_name());
            }
            items[key.as_text()] = eval(*v, locals);
        }
        return Value::mapping(std::move(items));
    }

    Value eval_node(const toolprog::NameRef& n, Env* locals) { return lookup(n.name, locals); }

    Value eval_node(const toolprog::Subscript& s, Env* locals) {
        Value object = eval(*s.object, locals);
        Value index = eval(*s.index, locals);
        if (object.is_list()) {
            const auto& items = *object.as_list();
            return items[list_index(index, items.size())];
        }
        if (object.is_text()) {
            const auto& text = object.as_text();
            return Value::text(std::string(1, text[list_index(index, text.size())]));
        }
        if (object.is_map()) {
            if (!index.is_text()) {
                fault(ErrorKind::TypeMismatch,
                      std::string("mapping keys are text, got ") + index.type_name());
            }
            const auto& map = *object.as_map();
            const auto it = map.find(index.as_text());
            if (it == map.end()) {
                fault(ErrorKind::IndexOutOfRange, "key '" + index.as_text() + "' not found");
            }
            return it->second;
        }
        fault(ErrorKind::TypeMismatch,
              std::string("value of type ") + object.type_name() + " is not subscriptable");
    }

    std::size_t list_index(const Value& index, std::size_t size) {
        if (!index.is_number() || index.as_number() != std::floor(index.as_number())) {
            fault(ErrorKind::TypeMismatch, "index must be a whole number");
        }
        double i = index.as_number();
        if (i < 0) i += static_cast<double>(size);
        if (i < 0 || i >= static_cast<double>(size)) {
            fault(ErrorKind::IndexOutOfRange,
                  "index " + to_display_text(index) + " out of range for length " +
                      std::to_string(size));
        }
        return static_cast<std::size_t>(i);
    }

    Value eval_node(const toolprog::Unary& u, Env* locals) {
        Value operand = eval(*u.operand, locals);
        if (u.op == UnaryOp::Neg) {
            if (!operand.is_number()) {
                fault(ErrorKind::TypeMismatch,
                      std::string("unary minus needs a number, got ") + operand.type_name());
            }
            return Value::number(-operand.as_number());
        }
        if (!operand.is_bool()) {
            fault(ErrorKind::TypeMismatch,
                  std::string("'not' needs a boolean, got ") + operand.type_name());
        }
        return Value::boolean(!operand.as_bool());
    }

    Value eval_node(const toolprog::Binary& b, Env* locals) {
        Value lhs = eval(*b.lhs, locals);
        Value rhs = eval(*b.rhs, locals);
        return binary(b.op, lhs, rhs);
    }

    Value binary(BinaryOp op, const Value& lhs, const Value& rhs) {
        if (op == BinaryOp::Add) {
            if (lhs.is_text() && rhs.is_text()) return Value::text(lhs.as_text() + rhs.as_text());
            if (lhs.is_list() && rhs.is_list()) {
                std::vector<Value> items = *lhs.as_list();
                items.insert(items.end(), rhs.as_list()->begin(), rhs.as_list()->end());
                return Value::list(std::move(items));
            }
        }
        if (!lhs.is_number() || !rhs.is_number()) {
            fault(ErrorKind::TypeMismatch,
                  std::string("arithmetic needs numbers, got ") + lhs.type_name() + " and " +
                      rhs.type_name());
        }
        const double a = lhs.as_number();
        const double b = rhs.as_number();
        switch (op) {
            case BinaryOp::Add: return Value::number(a + b);
            case BinaryOp::Sub: return Value::number(a - b);
            case BinaryOp::Mul: return Value::number(a * b);
            case BinaryOp::Div:
                if (b == 0.0) fault(ErrorKind::DivisionByZero, "division by zero");
                return Value::number(a / b);
            case BinaryOp::FloorDiv:
                if (b == 0.0) fault(ErrorKind::DivisionByZero, "division by zero");
                return Value::number(std::floor(a / b));
            case BinaryOp::Mod: {
                if (b == 0.0) fault(ErrorKind::DivisionByZero, "modulo by zero");
                const double r = a - std::floor(a / b) * b;  // sign follows divisor
                return Value::number(r);
            }
        }
        fault(ErrorKind::TypeMismatch, "unknown operator");
    }

    Value eval_node(const toolprog::BoolExpr& b, Env* locals) {
        const bool lhs = truth(eval(*b.lhs, locals));
        if (b.op == BoolOp::And && !lhs) return Value::boolean(false);
        if (b.op == BoolOp::Or && lhs) return Value::boolean(true);
        return Value::boolean(truth(eval(*b.rhs, locals)));
    }

    Value eval_node(const toolprog::Compare& c, Env* locals) {
        Value lhs = eval(*c.lhs, locals);
        Value rhs = eval(*c.rhs, locals);
        switch (c.op) {
            case CompareOp::Eq: return Value::boolean(deep_equal(lhs, rhs));
            case CompareOp::Ne: return Value::boolean(!deep_equal(lhs, rhs));
            case CompareOp::Is: return Value::boolean(identical(lhs, rhs));
            case CompareOp::IsNot: return Value::boolean(!identical(lhs, rhs));
            case CompareOp::In: return Value::boolean(membership(lhs, rhs));
            case CompareOp::NotIn: return Value::boolean(!membership(lhs, rhs));
            default: break;
        }
        if (lhs.is_number() && rhs.is_number()) {
            return Value::boolean(order(c.op, lhs.as_number(), rhs.as_number()));
        }
        if (lhs.is_text() && rhs.is_text()) {
            return Value::boolean(order(c.op, lhs.as_text(), rhs.as_text()));
        }
        fault(ErrorKind::TypeMismatch,
              std::string("cannot order ") + lhs.type_name() + " against " + rhs.type_name());
    }

    template <typename T>
    static bool order(CompareOp op, const T& a, const T& b) {
        switch (op) {
            case CompareOp::Lt: return a < b;
            case CompareOp::Le: return a <= b;
            case CompareOp::Gt: return a > b;
            case CompareOp::Ge: return a >= b;
            default: return false;
        }
    }

    bool membership(const Value& needle, const Value& haystack) {
        if (haystack.is_text()) {
            if (!needle.is_text()) {
                fault(ErrorKind::TypeMismatch, "'in' on text needs a text needle");
            }
            return haystack.as_text().find(needle.as_text()) != std::string::npos;
        }
        if (haystack.is_list()) {
            for (const auto& item : *haystack.as_list()) {
                if (deep_equal(needle, item)) return true;
            }
            return false;
        }
        if (haystack.is_map()) {
            if (!needle.is_text()) {
                fault(ErrorKind::TypeMismatch, "'in' on a mapping needs a text key");
            }
            return haystack.as_map()->count(needle.as_text()) > 0;
        }
        fault(ErrorKind::TypeMismatch,
              std::string("'in' needs text, list, or mapping, got ") + haystack.type_name());
    }

    bool truth(const Value& v) {
        if (!v.is_bool()) {
            fault(ErrorKind::TypeMismatch,
                  std::string("condition must be a boolean, got ") + v.type_name());
        }
        return v.as_bool();
    }

    Value eval_node(const toolprog::MethodCall& m, Env* locals) {
        Value object = eval(*m.object, locals);
        if (!object.is_text()) {
            fault(ErrorKind::TypeMismatch,
                  std::string("methods exist on text values only, got ") + object.type_name());
        }
        std::vector<Value> args;
        for (const auto& arg : m.args) args.push_back(eval(*arg, locals));
        const std::string& text = object.as_text();

        if (m.method == "lower" || m.method == "upper" || m.method == "strip") {
            if (!args.empty()) {
                fault(ErrorKind::TypeMismatch, "." + m.method + "() takes no arguments");
            }
            if (m.method == "lower") return Value::text(util::to_lower(text));
            if (m.method == "upper") {
                std::string out = text;
                for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                return Value::text(out);
            }
            return Value::text(util::trim(text));
        }
        // split
        if (args.empty()) {
            std::vector<Value> parts;
            std::string cur;
            for (char c : text) {
                if (std::isspace(static_cast<unsigned char>(c))) {
                    if (!cur.empty()) parts.push_back(Value::text(cur));
                    cur.clear();
                } else {
                    cur.push_back(c);
                }
            }
            if (!cur.empty()) parts.push_back(Value::text(cur));
            return Value::list(std::move(parts));
        }
        if (args.size() != 1 || !args[0].is_text() || args[0].as_text().empty()) {
            fault(ErrorKind::TypeMismatch, ".split() takes at most one non-empty text separator");
        }
        const std::string& sep = args[0].as_text();
        std::vector<Value> parts;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = text.find(sep, start);
            if (pos == std::string::npos) {
                parts.push_back(Value::text(text.substr(start)));
                break;
            }
            parts.push_back(Value::text(text.substr(start, pos - start)));
            start = pos + sep.size();
        }
        return Value::list(std::move(parts));
    }

    Value eval_node(const toolprog::Call& c, Env* locals) {
        // user binding first, then tools, then builtins
        Value callee;
        bool have_callee = false;
        if (locals != nullptr) {
            const auto it = locals->find(c.callee);
            if (it != locals->end()) {
                callee = it->second;
                have_callee = true;
            }
        }
        if (!have_callee) {
            const auto it = globals_.find(c.callee);
            if (it != globals_.end()) {
                callee = it->second;
                have_callee = true;
            }
        }
        if (have_callee) {
            if (!callee.is_callable()) {
                fault(ErrorKind::TypeMismatch,
                      "'" + c.callee + "' is a " + callee.type_name() + ", not a function");
            }
            return call_closure(*callee.as_closure(), c, locals);
        }
        if (c.callee == "gd_detect" || c.callee == "depth" || c.callee == "vqa") {
            return call_tool(c, locals);
        }
        return call_builtin(c, locals);
    }

    std::vector<Value> eval_positional(const toolprog::Call& c, Env* locals,
                                       Value* key_fn = nullptr) {
        std::vector<Value> args;
        for (const auto& arg : c.args) {
            if (!arg.keyword.empty()) {
                if (key_fn == nullptr) {
                    fault(ErrorKind::TypeMismatch,
                          "'" + c.callee + "' does not accept keyword arguments");
                }
                *key_fn = eval(*arg.value, locals);
                continue;
            }
            args.push_back(eval(*arg.value, locals));
        }
        return args;
    }

    Value call_closure(const Closure& closure, const toolprog::Call& c, Env* locals) {
        if (++call_depth_ > 200) {
            --call_depth_;
            fault(ErrorKind::BudgetExceededSteps, "recursion depth exceeded");
        }
        const auto& def = *closure.def;
        std::vector<Value> args = eval_positional(c, locals);
        if (args.size() != def.params.size()) {
            --call_depth_;
            fault(ErrorKind::TypeMismatch,
                  def.name + "() takes " + std::to_string(def.params.size()) +
                      " arguments, got " + std::to_string(args.size()));
        }
        Env frame;
        for (std::size_t i = 0; i < args.size(); ++i) {
            frame[def.params[i]] = std::move(args[i]);
        }
        Value out = Value::none();
        try {
            exec_body(def.body, &frame);
        } catch (const ReturnSignal& r) {
            out = r.value;
        } catch (...) {
            --call_depth_;
            throw;
        }
        --call_depth_;
        return out;
    }

    Value call_one_arg_closure(const Value& fn, const Value& arg) {
        if (!fn.is_callable()) {
            fault(ErrorKind::TypeMismatch, "key= must be a function");
        }
        const auto& def = *fn.as_closure()->def;
        if (def.params.size() != 1) {
            fault(ErrorKind::TypeMismatch, "key= function must take exactly one argument");
        }
        if (++call_depth_ > 200) {
            --call_depth_;
            fault(ErrorKind::BudgetExceededSteps, "recursion depth exceeded");
        }
        Env frame;
        frame[def.params[0]] = arg;
        Value out = Value::none();
        try {
            exec_body(def.body, &frame);
        } catch (const ReturnSignal& r) {
            out = r.value;
        } catch (...) {
            --call_depth_;
            throw;
        }
        --call_depth_;
        return out;
    }

    // ---- tools ----

    tools::ImageHandle resolve_image(const Value& ref) {
        if (!ref.is_text()) {
            fault(ErrorKind::TypeMismatch,
                  std::string("image argument must be text, got ") + ref.type_name());
        }
        const auto it = image_cache_.find(ref.as_text());
        if (it != image_cache_.end()) return it->second;
        try {
            tools::ImageHandle img = resolver_.resolve(ref.as_text());
            image_cache_.emplace(ref.as_text(), img);
            return img;
        } catch (const std::exception& e) {
            fault(ErrorKind::ToolError, std::string("image resolution failed: ") + e.what());
        }
    }

    BBox bbox_from_value(const Value& v) {
        if (!v.is_list() || v.as_list()->size() != 4) {
            fault(ErrorKind::TypeMismatch, "bbox must be a list of four numbers");
        }
        double coords[4];
        for (int i = 0; i < 4; ++i) {
            const Value& c = (*v.as_list())[static_cast<std::size_t>(i)];
            if (!c.is_number()) {
                fault(ErrorKind::TypeMismatch, "bbox must be a list of four numbers");
            }
            coords[i] = c.as_number();
        }
        return BBox{coords[0], coords[1], coords[2], coords[3]};
    }

    void charge_tool_call() {
        if (++tool_calls_ > budget_.max_tool_calls) {
            throw Fault{ErrorKind::BudgetExceededToolCalls,
                        "tool-call budget of " + std::to_string(budget_.max_tool_calls) +
                            " exhausted"};
        }
        check_wall();
    }

    Value call_tool(const toolprog::Call& c, Env* locals) {
        std::vector<Value> args = eval_positional(c, locals);
        charge_tool_call();

        const auto started = std::chrono::steady_clock::now();
        nlohmann::ordered_json arg_json = nlohmann::ordered_json::array();
        for (const auto& a : args) arg_json.push_back(value_to_json(a));

        Value out;
        try {
            if (c.callee == "gd_detect") {
                if (args.size() != 2 || !args[1].is_text()) {
                    fault(ErrorKind::TypeMismatch, "gd_detect(img_pth, prompt) takes text arguments");
                }
                const auto image = resolve_image(args[0]);
                const auto dets = provider_.detect(image, args[1].as_text(), thresholds_.box,
                                                   thresholds_.text);
                std::vector<Value> items;
                items.reserve(dets.size());
                for (const auto& det : dets) {
                    std::map<std::string, Value> entry;
                    entry["bbox"] = Value::list({Value::number(det.bbox.x1), Value::number(det.bbox.y1),
                                                 Value::number(det.bbox.x2), Value::number(det.bbox.y2)});
                    entry["label"] = Value::text(det.label);
                    entry["score"] = Value::number(det.score);
                    items.push_back(Value::mapping(std::move(entry)));
                }
                out = Value::list(std::move(items));
            } else if (c.callee == "depth") {
                if (args.size() != 2) {
                    fault(ErrorKind::TypeMismatch, "depth(img_pth, bbox) takes two arguments");
                }
                const auto image = resolve_image(args[0]);
                out = Value::number(provider_.depth_at(image, bbox_from_value(args[1])));
            } else {  // vqa
                if (args.size() != 3 || !args[2].is_text()) {
                    fault(ErrorKind::TypeMismatch, "vqa(img_pth, bbox, question) takes three arguments");
                }
                const auto image = resolve_image(args[0]);
                std::optional<BBox> box;
                if (!args[1].is_none()) box = bbox_from_value(args[1]);
                out = Value::text(provider_.vqa(image, box, args[2].as_text()));
            }
        } catch (const Fault&) {
            throw;
        } catch (const std::exception& e) {
            fault(ErrorKind::ToolError, std::string(c.callee) + ": " + e.what());
        }

        const auto elapsed = std::chrono::steady_clock::now() - started;
        result_.trace.push_back(ToolInvocation{
            c.callee, std::move(arg_json), value_to_json(out),
            std::chrono::duration<double, std::milli>(elapsed).count()});
        return out;
    }

    // ---- builtins ----

    Value call_builtin(const toolprog::Call& c, Env* locals) {
        const std::string& name = c.callee;
        Value key_fn;
        const bool wants_key = (name == "min" || name == "max" || name == "sorted");
        std::vector<Value> args = eval_positional(c, locals, wants_key ? &key_fn : nullptr);

        if (name == "len") {
            need_args(name, args, 1);
            const Value& v = args[0];
            if (v.is_text()) return Value::number(static_cast<double>(v.as_text().size()));
            if (v.is_list()) return Value::number(static_cast<double>(v.as_list()->size()));
            if (v.is_map()) return Value::number(static_cast<double>(v.as_map()->size()));
            fault(ErrorKind::TypeMismatch,
                  std::string("len() needs text, list, or mapping, got ") + v.type_name());
        }
        if (name == "abs") {
            need_args(name, args, 1);
            return Value::number(std::fabs(number_arg(name, args[0])));
        }
        if (name == "float") {
            need_args(name, args, 1);
            if (args[0].is_number()) return args[0];
            if (args[0].is_text()) {
                const auto parsed = util::parse_number(args[0].as_text());
                if (!parsed) {
                    fault(ErrorKind::TypeMismatch,
                          "float() cannot parse '" + args[0].as_text() + "'");
                }
                return Value::number(*parsed);
            }
            if (args[0].is_bool()) return Value::number(args[0].as_bool() ? 1.0 : 0.0);
            fault(ErrorKind::TypeMismatch,
                  std::string("float() needs a number or text, got ") + args[0].type_name());
        }
        if (name == "int") {
            need_args(name, args, 1);
            if (args[0].is_bool()) return Value::number(args[0].as_bool() ? 1.0 : 0.0);
            double v = 0;
            if (args[0].is_number()) {
                v = args[0].as_number();
            } else if (args[0].is_text()) {
                const auto parsed = util::parse_number(args[0].as_text());
                if (!parsed) {
                    fault(ErrorKind::TypeMismatch, "int() cannot parse '" + args[0].as_text() + "'");
                }
                v = *parsed;
            } else {
                fault(ErrorKind::TypeMismatch,
                      std::string("int() needs a number or text, got ") + args[0].type_name());
            }
            return Value::number(std::trunc(v));
        }
        if (name == "round") {
            need_args(name, args, 1);
            return Value::number(std::round(number_arg(name, args[0])));
        }
        if (name == "sum") {
            need_args(name, args, 1);
            if (!args[0].is_list()) {
                fault(ErrorKind::TypeMismatch, "sum() needs a list of numbers");
            }
            double total = 0;
            for (const auto& item : *args[0].as_list()) total += number_arg(name, item);
            return Value::number(total);
        }
        if (name == "str") {
            need_args(name, args, 1);
            return Value::text(to_display_text(args[0]));
        }
        if (name == "range") {
            if (args.empty() || args.size() > 3) {
                fault(ErrorKind::TypeMismatch, "range() takes one to three arguments");
            }
            double start = 0, stop = 0, step_v = 1;
            if (args.size() == 1) {
                stop = whole_arg(name, args[0]);
            } else {
                start = whole_arg(name, args[0]);
                stop = whole_arg(name, args[1]);
                if (args.size() == 3) step_v = whole_arg(name, args[2]);
            }
            if (step_v == 0) fault(ErrorKind::TypeMismatch, "range() step must not be zero");
            std::vector<Value> items;
            if (step_v > 0) {
                for (double v = start; v < stop; v += step_v) {
                    step();
                    items.push_back(Value::number(v));
                }
            } else {
                for (double v = start; v > stop; v += step_v) {
                    step();
                    items.push_back(Value::number(v));
                }
            }
            return Value::list(std::move(items));
        }
        if (name == "enumerate") {
            need_args(name, args, 1);
            if (!args[0].is_list()) {
                fault(ErrorKind::TypeMismatch, "enumerate() needs a list");
            }
            std::vector<Value> items;
            const auto& source = *args[0].as_list();
            items.reserve(source.size());
            for (std::size_t i = 0; i < source.size(); ++i) {
                items.push_back(Value::list({Value::number(static_cast<double>(i)), source[i]}));
            }
            return Value::list(std::move(items));
        }
        if (name == "sorted") {
            need_args(name, args, 1);
            if (!args[0].is_list()) {
                fault(ErrorKind::TypeMismatch, "sorted() needs a list");
            }
            std::vector<Value> items = *args[0].as_list();
            sort_values(items, key_fn);
            return Value::list(std::move(items));
        }
        if (name == "min" || name == "max") {
            std::vector<Value> pool;
            if (args.size() == 1) {
                if (!args[0].is_list()) {
                    fault(ErrorKind::TypeMismatch, name + "() with one argument needs a list");
                }
                pool = *args[0].as_list();
            } else if (args.size() >= 2) {
                pool = args;
            }
            if (pool.empty()) {
                fault(ErrorKind::IndexOutOfRange, name + "() of an empty sequence");
            }
            std::size_t best = 0;
            Value best_key = key_fn.is_none() ? pool[0] : call_one_arg_closure(key_fn, pool[0]);
            for (std::size_t i = 1; i < pool.size(); ++i) {
                step();
                Value k = key_fn.is_none() ? pool[i] : call_one_arg_closure(key_fn, pool[i]);
                const bool less = value_less(k, best_key);
                const bool greater = value_less(best_key, k);
                if ((name == "min" && less) || (name == "max" && greater)) {
                    best = i;
                    best_key = std::move(k);
                }
            }
            return pool[best];
        }
        fault(ErrorKind::UndefinedName, "name '" + name + "' is not defined");
    }

    void need_args(const std::string& name, const std::vector<Value>& args, std::size_t n) {
        if (args.size() != n) {
            fault(ErrorKind::TypeMismatch,
                  name + "() takes " + std::to_string(n) + " argument(s), got " +
                      std::to_string(args.size()));
        }
    }

    double number_arg(const std::string& name, const Value& v) {
        if (!v.is_number()) {
            fault(ErrorKind::TypeMismatch,
                  name + "() needs a number, got " + std::string(v.type_name()));
        }
        return v.as_number();
    }

    double whole_arg(const std::string& name, const Value& v) {
        const double d = number_arg(name, v);
        if (d != std::floor(d)) {
            fault(ErrorKind::TypeMismatch, name + "() needs whole numbers");
        }
        return d;
    }

    bool value_less(const Value& a, const Value& b) {
        if (a.is_number() && b.is_number()) return a.as_number() < b.as_number();
        if (a.is_text() && b.is_text()) return a.as_text() < b.as_text();
        fault(ErrorKind::TypeMismatch,
              std::string("cannot order ") + a.type_name() + " against " + b.type_name());
    }

    void sort_values(std::vector<Value>& items, const Value& key_fn) {
        // insertion sort: stable, and lets the comparator fault safely
        for (std::size_t i = 1; i < items.size(); ++i) {
            step();
            Value item = items[i];
            Value item_key = key_fn.is_none() ? item : call_one_arg_closure(key_fn, item);
            std::size_t j = i;
            while (j > 0) {
                Value prev_key =
                    key_fn.is_none() ? items[j - 1] : call_one_arg_closure(key_fn, items[j - 1]);
                if (!value_less(item_key, prev_key)) break;
                items[j] = std::move(items[j - 1]);
                --j;
            }
            items[j] = std::move(item);
        }
    }

    tools::ToolProvider& provider_;
    tools::ImageResolver& resolver_;
    Budget budget_;
    ReasoningThresholds thresholds_;
    ExecutionResult& result_;
    std::chrono::steady_clock::time_point start_;
    Env globals_;
    std::map<std::string, tools::ImageHandle> image_cache_;
    std::string image_ref_;
    long steps_ = 0;
    int tool_calls_ = 0;
    int call_depth_ = 0;
};

}  // namespace

Interpreter::Interpreter(tools::ToolProvider& provider, tools::ImageResolver& resolver,
                         Budget budget, ReasoningThresholds thresholds)
    : provider_(provider), resolver_(resolver), budget_(budget), thresholds_(thresholds) {}

ExecutionResult Interpreter::execute(const toolprog::ToolProgram& program,
                                     const std::string& image_ref) {
    ExecutionResult result;
    Executor exec(provider_, resolver_, budget_, thresholds_, result);
    exec.run(program, image_ref);
    return result;
}

ExecutionResult execute(const toolprog::ToolProgram& program, tools::ToolProvider& provider,
                        tools::ImageResolver& resolver, Budget budget,
                        const std::string& image_ref, ReasoningThresholds thresholds) {
    return Interpreter(provider, resolver, budget, thresholds).execute(program, image_ref);
}

DryRunResult dry_run(const toolprog::ToolProgram& program, Budget budget) {
    tools::DummyToolProvider provider;
    tools::SyntheticResolver resolver;
    const ExecutionResult result = execute(program, provider, resolver, budget, "dry://image");
    if (result.status == ExecStatus::Error) {
        return {false, std::string(error_kind_name(result.error)) + ": " + result.error_message};
    }
    return {true, ""};
}

std::optional<Value> extract_final_answer(const ExecutionResult& result) {
    const auto it = result.bindings.find("final_answer");
    if (it == result.bindings.end() || it->second.is_callable()) return std::nullopt;
    return it->second;
}

}  // namespace valor::runtime
