#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace valor::toolprog {
struct FuncDef;
}

namespace valor::runtime {

struct Value;
using ValueList = std::shared_ptr<std::vector<Value>>;
using ValueMap = std::shared_ptr<std::map<std::string, Value>>;

struct Closure;
using ClosurePtr = std::shared_ptr<Closure>;

struct None {};

// Single numeric tower: every number is a double, whole-valued where an
// integer would be expected. Mappings have text keys only.
struct Value {
    std::variant<None, bool, double, std::string, ValueList, ValueMap, ClosurePtr> v;

    Value() : v(None{}) {}

    static Value none() { return Value(); }
    static Value boolean(bool b);
    static Value number(double d);
    static Value text(std::string s);
    static Value list(std::vector<Value> items);
    static Value mapping(std::map<std::string, Value> items);
    static Value closure(ClosurePtr fn);

    bool is_none() const { return std::holds_alternative<None>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_text() const { return std::holds_alternative<std::string>(v); }
    bool is_list() const { return std::holds_alternative<ValueList>(v); }
    bool is_map() const { return std::holds_alternative<ValueMap>(v); }
    bool is_callable() const { return std::holds_alternative<ClosurePtr>(v); }

    bool as_bool() const { return std::get<bool>(v); }
    double as_number() const { return std::get<double>(v); }
    const std::string& as_text() const { return std::get<std::string>(v); }
    const ValueList& as_list() const { return std::get<ValueList>(v); }
    const ValueMap& as_map() const { return std::get<ValueMap>(v); }
    const ClosurePtr& as_closure() const { return std::get<ClosurePtr>(v); }

    const char* type_name() const;
};

// Deep equality for scalars/containers; callables compare by identity.
bool deep_equal(const Value& a, const Value& b);

// `is` semantics: none-and-none, same scalar, or same container object.
bool identical(const Value& a, const Value& b);

std::string to_display_text(const Value& v);

nlohmann::ordered_json value_to_json(const Value& v);
Value value_from_json(const nlohmann::ordered_json& j);

}  // namespace valor::runtime
