#include "laplace/json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "laplace/errors.hpp"

namespace laplace {

namespace detail {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string format_double_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

void Json::push_back(Json v) {
    auto* arr = std::get_if<Array>(&v_);
    if (!arr) throw Error("Json::push_back on a non-array value");
    arr->push_back(std::move(v));
}

Json& Json::operator[](const std::string& key) {
    auto* obj = std::get_if<Object>(&v_);
    if (!obj) throw Error("Json::operator[] on a non-object value");
    for (auto& [k, v] : *obj) {
        if (k == key) return v;
    }
    obj->emplace_back(key, Json());
    return obj->back().second;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
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
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void indent(std::string& out, int depth) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

}  // namespace

void Json::write(std::string& out, int depth) const {
    if (std::holds_alternative<std::nullptr_t>(v_)) {
        out += "null";
    } else if (const auto* b = std::get_if<bool>(&v_)) {
        out += *b ? "true" : "false";
    } else if (const auto* i = std::get_if<long long>(&v_)) {
        out += std::to_string(*i);
    } else if (const auto* d = std::get_if<double>(&v_)) {
        if (std::isnan(*d)) {
            out += "\"nan\"";
        } else if (std::isinf(*d)) {
            out += *d > 0 ? "\"inf\"" : "\"-inf\"";
        } else {
            out += detail::format_double_full(*d);
        }
    } else if (const auto* s = std::get_if<std::string>(&v_)) {
        write_escaped(out, *s);
    } else if (const auto* arr = std::get_if<Array>(&v_)) {
        if (arr->empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < arr->size(); ++i) {
            indent(out, depth + 1);
            (*arr)[i].write(out, depth + 1);
            if (i + 1 < arr->size()) out += ',';
            out += '\n';
        }
        indent(out, depth);
        out += ']';
    } else if (const auto* obj = std::get_if<Object>(&v_)) {
        if (obj->empty()) {
            out += "{}";
            return;
        }
        std::vector<const std::pair<std::string, Json>*> members;
        members.reserve(obj->size());
        for (const auto& kv : *obj) members.push_back(&kv);
        std::sort(members.begin(), members.end(),
                  [](const auto* a, const auto* b) { return a->first < b->first; });
        out += "{\n";
        for (std::size_t i = 0; i < members.size(); ++i) {
            indent(out, depth + 1);
            write_escaped(out, members[i]->first);
            out += ": ";
            members[i]->second.write(out, depth + 1);
            if (i + 1 < members.size()) out += ',';
            out += '\n';
        }
        indent(out, depth);
        out += '}';
    }
}

std::string Json::dump() const {
    std::string out;
    write(out, 0);
    return out;
}

}  // namespace laplace
