#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace laplace {

// Minimal JSON document builder with deterministic output: object keys are
// emitted in sorted order and doubles are printed with 17 significant
// digits, so identical inputs produce byte-identical text. Non-finite
// doubles are emitted as the quoted strings "inf", "-inf" and "nan".
class Json {
public:
    Json() : v_(nullptr) {}
    Json(std::nullptr_t) : v_(nullptr) {}
    Json(bool b) : v_(b) {}
    Json(int i) : v_(static_cast<long long>(i)) {}
    Json(long long i) : v_(i) {}
    Json(double d) : v_(d) {}
    Json(const char* s) : v_(std::string(s)) {}
    Json(std::string s) : v_(std::move(s)) {}

    static Json array() {
        Json j;
        j.v_ = Array{};
        return j;
    }

    static Json object() {
        Json j;
        j.v_ = Object{};
        return j;
    }

    // Array append; the value must have been created with array().
    void push_back(Json v);

    // Object field access, inserting a null member if absent; the value
    // must have been created with object().
    Json& operator[](const std::string& key);

    std::string dump() const;

private:
    using Array = std::vector<Json>;
    using Object = std::vector<std::pair<std::string, Json>>;

    void write(std::string& out, int depth) const;

    std::variant<std::nullptr_t, bool, long long, double, std::string, Array, Object> v_;
};

namespace detail {
// %.17g, round-trip exact for doubles.
std::string format_double_full(double v);
}

}  // namespace laplace
