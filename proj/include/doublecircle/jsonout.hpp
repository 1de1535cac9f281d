#pragma once
/** \file jsonout.hpp
    Minimal deterministic JSON emitter for the report files.

    Objects keep insertion order and reals are rendered at 17 significant
    digits, so a report built from the same values is byte-identical across
    runs. Only the value kinds the reports need are supported.
*/
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "doublecircle/numfmt.hpp"

namespace jsonout {

/// An ordered JSON value (null, bool, integer, real, string, array, object).
class Value {
public:
    Value() : kind_(Kind::Null) {}
    Value(bool b) : kind_(Kind::Bool), bool_(b) {}
    Value(double d) : kind_(Kind::Real), real_(d) {}
    Value(int i) : kind_(Kind::Int), int_(i) {}
    Value(long long i) : kind_(Kind::Int), int_(i) {}
    Value(unsigned long long u) : kind_(Kind::Int), int_(static_cast<long long>(u)) {}
    Value(const char* s) : kind_(Kind::String), str_(s) {}
    Value(std::string s) : kind_(Kind::String), str_(std::move(s)) {}

    static Value array() { Value v; v.kind_ = Kind::Array; return v; }
    static Value object() { Value v; v.kind_ = Kind::Object; return v; }

    /// Appends an element (arrays only).
    Value& push_back(Value v) {
        items_.emplace_back(std::string(), std::move(v));
        return *this;
    }

    /// Sets a field, preserving insertion order (objects only).
    Value& set(std::string key, Value v) {
        items_.emplace_back(std::move(key), std::move(v));
        return *this;
    }

    /// Serializes; pretty = 2-space indentation, otherwise compact.
    std::string dump(bool pretty = false) const {
        std::string out;
        write(out, pretty, 0);
        if (pretty) out += '\n';
        return out;
    }

private:
    enum class Kind { Null, Bool, Int, Real, String, Array, Object };

    static void write_escaped(std::string& out, const std::string& s) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    void write(std::string& out, bool pretty, int depth) const {
        switch (kind_) {
            case Kind::Null: out += "null"; break;
            case Kind::Bool: out += bool_ ? "true" : "false"; break;
            case Kind::Int: out += std::to_string(int_); break;
            case Kind::Real:
                // JSON has no representation for non-finite reals.
                out += std::isfinite(real_) ? numfmt::real17(real_) : "null";
                break;
            case Kind::String: write_escaped(out, str_); break;
            case Kind::Array:
            case Kind::Object: {
                const bool obj = kind_ == Kind::Object;
                out += obj ? '{' : '[';
                for (std::size_t i = 0; i < items_.size(); ++i) {
                    if (i) out += ',';
                    if (pretty) {
                        out += '\n';
                        out.append(2 * (depth + 1), ' ');
                    }
                    if (obj) {
                        write_escaped(out, items_[i].first);
                        out += pretty ? ": " : ":";
                    }
                    items_[i].second.write(out, pretty, depth + 1);
                }
                if (pretty && !items_.empty()) {
                    out += '\n';
                    out.append(2 * depth, ' ');
                }
                out += obj ? '}' : ']';
                break;
            }
        }
    }

    Kind kind_;
    bool bool_ = false;
    long long int_ = 0;
    double real_ = 0.0;
    std::string str_;
    std::vector<std::pair<std::string, Value>> items_;
};

}  // namespace jsonout
