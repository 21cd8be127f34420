#include "valor/runtime/value.hpp"

#include <charconv>
#include <cmath>

namespace valor::runtime {

Value Value::boolean(bool b) {
    Value v;
    v.v = b;
    return v;
}
Value Value::number(double d) {
    Value v;
    v.v = d;
    return v;
}
Value Value::text(std::string s) {
    Value v;
    v.v = std::move(s);
    return v;
}
Value Value::list(std::vector<Value> items) {
    Value v;
    v.v = std::make_shared<std::vector<Value>>(std::move(items));
    return v;
}
Value Value::mapping(std::map<std::string, Value> items) {
    Value v;
    v.v = std::make_shared<std::map<std::string, Value>>(std::move(items));
    return v;
}
Value Value::closure(ClosurePtr fn) {
    Value v;
    v.v = std::move(fn);
    return v;
}

const char* Value::type_name() const {
    switch (v.index()) {
        case 0: return "none";
        case 1: return "boolean";
        case 2: return "number";
        case 3: return "text";
        case 4: return "list";
        case 5: return "mapping";
        case 6: return "function";
    }
    return "?";
}

bool deep_equal(const Value& a, const Value& b) {
    if (a.is_none() && b.is_none()) return true;
    if (a.is_bool() && b.is_bool()) return a.as_bool() == b.as_bool();
    if (a.is_number() && b.is_number()) return a.as_number() == b.as_number();
    if (a.is_text() && b.is_text()) return a.as_text() == b.as_text();
    if (a.is_list() && b.is_list()) {
        const auto& la = *a.as_list();
        const auto& lb = *b.as_list();
        if (la.size() != lb.size()) return false;
        for (std::size_t i = 0; i < la.size(); ++i) {
            if (!deep_equal(la[i], lb[i])) return false;
        }
        return true;
    }
    if (a.is_map() && b.is_map()) {
        const auto& ma = *a.as_map();
        const auto& mb = *b.as_map();
        if (ma.size() != mb.size()) return false;
        for (auto ia = ma.begin(), ib = mb.begin(); ia != ma.end(); ++ia, ++ib) {
            if (ia->first != ib->first || !deep_equal(ia->second, ib->second)) return false;
        }
        return true;
    }
    if (a.is_callable() && b.is_callable()) return a.as_closure() == b.as_closure();
    return false;
}

bool identical(const Value& a, const Value& b) {
    if (a.is_none() && b.is_none()) return true;
    if (a.is_bool() && b.is_bool()) return a.as_bool() == b.as_bool();
    if (a.is_number() && b.is_number()) return a.as_number() == b.as_number();
    if (a.is_text() && b.is_text()) return a.as_text() == b.as_text();
    if (a.is_list() && b.is_list()) return a.as_list() == b.as_list();
    if (a.is_map() && b.is_map()) return a.as_map() == b.as_map();
    if (a.is_callable() && b.is_callable()) return a.as_closure() == b.as_closure();
    return false;
}

static std::string number_text(double d) {
    if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 1e15) {
        const long long i = static_cast<long long>(d);
        return std::to_string(i);
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

std::string to_display_text(const Value& v) {
    if (v.is_none()) return "None";
    if (v.is_bool()) return v.as_bool() ? "True" : "False";
    if (v.is_number()) return number_text(v.as_number());
    if (v.is_text()) return v.as_text();
    if (v.is_list()) {
        std::string out = "[";
        const auto& items = *v.as_list();
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) out += ", ";
            out += items[i].is_text() ? "\"" + items[i].as_text() + "\""
                                      : to_display_text(items[i]);
        }
        return out + "]";
    }
    if (v.is_map()) {
        std::string out = "{";
        bool first = true;
        for (const auto& [k, item] : *v.as_map()) {
            if (!first) out += ", ";
            first = false;
            out += "\"" + k + "\": ";
            out += item.is_text() ? "\"" + item.as_text() + "\"" : to_display_text(item);
        }
        return out + "}";
    }
    return "<function>";
}

nlohmann::ordered_json value_to_json(const Value& v) {
    using oj = nlohmann::ordered_json;
    if (v.is_none()) return nullptr;
    if (v.is_bool()) return v.as_bool();
    if (v.is_number()) return v.as_number();
    if (v.is_text()) return v.as_text();
    if (v.is_list()) {
        oj arr = oj::array();
        for (const auto& item : *v.as_list()) arr.push_back(value_to_json(item));
        return arr;
    }
    if (v.is_map()) {
        oj obj = oj::object();
        for (const auto& [k, item] : *v.as_map()) obj[k] = value_to_json(item);
        return obj;
    }
    return "<function>";
}

Value value_from_json(const nlohmann::ordered_json& j) {
    using vt = nlohmann::ordered_json::value_t;
    switch (j.type()) {
        case vt::null: return Value::none();
        case vt::boolean: return Value::boolean(j.get<bool>());
        case vt::number_integer:
        case vt::number_unsigned:
        case vt::number_float: return Value::number(j.get<double>());
        case vt::string: return Value::text(j.get<std::string>());
        case vt::array: {
            std::vector<Value> items;
            for (const auto& item : j) items.push_back(value_from_json(item));
            return Value::list(std::move(items));
        }
        case vt::object: {
            std::map<std::string, Value> items;
            for (auto it = j.begin(); it != j.end(); ++it) {
                items[it.key()] = value_from_json(it.value());
            }
            return Value::mapping(std::move(items));
        }
        default: return Value::none();
    }
}

}  // namespace valor::runtime
