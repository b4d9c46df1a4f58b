// Minimal strict TOML-subset reader for scenario configs.
//
// Supported: [table] and [table.sub] headers, bare keys, string / integer /
// float / boolean scalars, flat arrays of scalars, comments, blank lines.
// Unsupported constructs fail loudly with line numbers.  The Document tracks
// which keys were consumed so configs with unknown keys are rejected.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pmcf/errors.hpp"

namespace pmcf::toml {

struct Value {
    std::variant<bool, std::int64_t, double, std::string, std::vector<Value>> v;
    int line = 0;

    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
    bool is_float() const { return is_int() || std::holds_alternative<double>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_array() const { return std::holds_alternative<std::vector<Value>>(v); }

    bool as_bool() const;
    std::int64_t as_int() const;
    double as_float() const;  // accepts integers
    const std::string& as_string() const;
    const std::vector<Value>& as_array() const;
};

class Document {
public:
    // Dotted keys ("flow.cfl") -> values, in file order.
    static Document parse_file(const std::string& path);
    static Document parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    const Value& at(const std::string& key) const;  // marks the key consumed

    // Typed getters; throw ValidationError naming the key on type mismatch.
    bool get_bool(const std::string& key, bool fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_float(const std::string& key, double fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_float_array(const std::string& key) const;  // empty if absent

    // Keys present in the file but never consumed; used for unknown-key
    // rejection after a config has been read.
    std::vector<std::string> unconsumed() const;
    const std::string& origin() const { return origin_; }
    int line_of(const std::string& key) const;

private:
    std::map<std::string, Value> values_;
    std::vector<std::string> order_;
    mutable std::map<std::string, bool> consumed_;
    std::string origin_;
};

} // namespace pmcf::toml
