// Strict TOML-subset parser.  Anything outside the documented subset is a
// ParseError carrying the offending line number.
#include "pmcf/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pmcf::toml {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw ParseError(os.str());
}

bool is_bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Strips a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    const std::string& origin;
    int line;

    bool done() const { return pos >= text.size(); }
    char peek() const { return done() ? '\0' : text[pos]; }
    void skip_ws() {
        while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
};

Value parse_scalar(Cursor& cur);

Value parse_string_literal(Cursor& cur) {
    // cur.peek() == '"'
    ++cur.pos;
    std::string out;
    while (true) {
        if (cur.done()) fail(cur.origin, cur.line, "unterminated string");
        char c = cur.text[cur.pos++];
        if (c == '"') break;
        if (c == '\\') {
            if (cur.done()) fail(cur.origin, cur.line, "dangling escape in string");
            char e = cur.text[cur.pos++];
            switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default:
                    fail(cur.origin, cur.line, std::string("unsupported escape \\") + e);
            }
        } else {
            out += c;
        }
    }
    Value v;
    v.v = out;
    v.line = cur.line;
    return v;
}

Value parse_array(Cursor& cur) {
    // cur.peek() == '['
    ++cur.pos;
    std::vector<Value> items;
    cur.skip_ws();
    if (cur.peek() == ']') {
        ++cur.pos;
    } else {
        while (true) {
            cur.skip_ws();
            if (cur.peek() == '[')
                fail(cur.origin, cur.line, "nested arrays are not supported");
            items.push_back(parse_scalar(cur));
            cur.skip_ws();
            char c = cur.peek();
            if (c == ',') {
                ++cur.pos;
                cur.skip_ws();
                if (cur.peek() == ']') {  // trailing comma
                    ++cur.pos;
                    break;
                }
                continue;
            }
            if (c == ']') {
                ++cur.pos;
                break;
            }
            fail(cur.origin, cur.line, "expected ',' or ']' in array");
        }
    }
    Value v;
    v.v = items;
    v.line = cur.line;
    return v;
}

Value parse_scalar(Cursor& cur) {
    cur.skip_ws();
    if (cur.done()) fail(cur.origin, cur.line, "missing value");
    char c = cur.peek();
    if (c == '"') return parse_string_literal(cur);
    if (c == '[') return parse_array(cur);
    if (c == '\'') fail(cur.origin, cur.line, "single-quoted strings are not supported");

    // Bare token: bool / int / float.
    std::size_t start = cur.pos;
    while (!cur.done()) {
        char t = cur.text[cur.pos];
        if (t == ',' || t == ']' || t == ' ' || t == '\t') break;
        ++cur.pos;
    }
    std::string tok = cur.text.substr(start, cur.pos - start);
    if (tok.empty()) fail(cur.origin, cur.line, "missing value");

    Value v;
    v.line = cur.line;
    if (tok == "true") {
        v.v = true;
        return v;
    }
    if (tok == "false") {
        v.v = false;
        return v;
    }

    const bool has_float_marker = tok.find_first_of(".eE") != std::string::npos ||
                                  tok.find("inf") != std::string::npos ||
                                  tok.find("nan") != std::string::npos;
    errno = 0;
    char* end = nullptr;
    if (!has_float_marker) {
        long long iv = std::strtoll(tok.c_str(), &end, 10);
        if (end == tok.c_str() + tok.size() && errno == 0) {
            v.v = static_cast<std::int64_t>(iv);
            return v;
        }
    }
    errno = 0;
    double dv = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() + tok.size() && errno == 0) {
        v.v = dv;
        return v;
    }
    fail(cur.origin, cur.line, "cannot parse value '" + tok + "'");
}

std::string parse_table_header(const std::string& body, const std::string& origin, int line) {
    // body excludes the surrounding brackets.
    std::string name = trim(body);
    if (name.empty()) fail(origin, line, "empty table name");
    if (name.front() == '[') fail(origin, line, "arrays of tables are not supported");
    for (std::size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (c == '.') {
            if (i == 0 || i + 1 == name.size() || name[i - 1] == '.')
                fail(origin, line, "malformed dotted table name '" + name + "'");
            continue;
        }
        if (!is_bare_char(c))
            fail(origin, line, std::string("invalid character '") + c + "' in table name");
    }
    return name;
}

} // namespace

bool Value::as_bool() const {
    if (!is_bool()) throw ValidationError("TOML value is not a boolean");
    return std::get<bool>(v);
}

std::int64_t Value::as_int() const {
    if (!is_int()) throw ValidationError("TOML value is not an integer");
    return std::get<std::int64_t>(v);
}

double Value::as_float() const {
    if (is_int()) return static_cast<double>(std::get<std::int64_t>(v));
    if (!std::holds_alternative<double>(v)) throw ValidationError("TOML value is not a number");
    return std::get<double>(v);
}

const std::string& Value::as_string() const {
    if (!is_string()) throw ValidationError("TOML value is not a string");
    return std::get<std::string>(v);
}

const std::vector<Value>& Value::as_array() const {
    if (!is_array()) throw ValidationError("TOML value is not an array");
    return std::get<std::vector<Value>>(v);
}

Document Document::parse_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_string(buf.str(), path);
}

Document Document::parse_string(const std::string& text, const std::string& origin) {
    Document doc;
    doc.origin_ = origin;

    std::istringstream is(text);
    std::string raw;
    std::string prefix;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                fail(origin, line_no, "table header does not end with ']'");
            prefix = parse_table_header(line.substr(1, line.size() - 2), origin, line_no);
            continue;
        }

        std::size_t eq = std::string::npos;
        {
            bool in_string = false;
            for (std::size_t i = 0; i < line.size(); ++i) {
                char c = line[i];
                if (in_string) {
                    if (c == '\\')
                        ++i;
                    else if (c == '"')
                        in_string = false;
                } else if (c == '"') {
                    in_string = true;
                } else if (c == '=') {
                    eq = i;
                    break;
                }
            }
        }
        if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");

        std::string key = trim(line.substr(0, eq));
        if (key.empty()) fail(origin, line_no, "empty key");
        if (key.front() == '"' || key.front() == '\'')
            fail(origin, line_no, "quoted keys are not supported");
        for (char c : key) {
            if (c == '.')
                fail(origin, line_no, "dotted keys are not supported; use a [table] header");
            if (!is_bare_char(c))
                fail(origin, line_no, std::string("invalid character '") + c + "' in key");
        }

        std::string rhs = trim(line.substr(eq + 1));
        if (rhs.empty()) fail(origin, line_no, "missing value for key '" + key + "'");
        Cursor cur{rhs, 0, origin, line_no};
        Value val = parse_scalar(cur);
        cur.skip_ws();
        if (!cur.done())
            fail(origin, line_no, "trailing characters after value for key '" + key + "'");

        std::string full = prefix.empty() ? key : prefix + "." + key;
        if (doc.values_.count(full)) fail(origin, line_no, "duplicate key '" + full + "'");
        val.line = line_no;
        doc.values_.emplace(full, std::move(val));
        doc.order_.push_back(full);
    }
    return doc;
}

bool Document::has(const std::string& key) const { return values_.count(key) != 0; }

const Value& Document::at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ValidationError("missing config key '" + key + "'");
    consumed_[key] = true;
    return it->second;
}

bool Document::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    if (!v.is_bool()) throw ValidationError("config key '" + key + "' must be a boolean");
    return v.as_bool();
}

std::int64_t Document::get_int(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    if (!v.is_int()) throw ValidationError("config key '" + key + "' must be an integer");
    return v.as_int();
}

double Document::get_float(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    if (!v.is_float()) throw ValidationError("config key '" + key + "' must be a number");
    return v.as_float();
}

std::string Document::get_string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    if (!v.is_string()) throw ValidationError("config key '" + key + "' must be a string");
    return v.as_string();
}

std::vector<double> Document::get_float_array(const std::string& key) const {
    if (!has(key)) return {};
    const Value& v = at(key);
    if (!v.is_array()) throw ValidationError("config key '" + key + "' must be an array");
    std::vector<double> out;
    for (const Value& item : v.as_array()) {
        if (!item.is_float())
            throw ValidationError("config key '" + key + "' must hold numbers only");
        out.push_back(item.as_float());
    }
    return out;
}

std::vector<std::string> Document::unconsumed() const {
    std::vector<std::string> out;
    for (const std::string& key : order_) {
        auto it = consumed_.find(key);
        if (it == consumed_.end() || !it->second) out.push_back(key);
    }
    return out;
}

int Document::line_of(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? 0 : it->second.line;
}

} // namespace pmcf::toml
