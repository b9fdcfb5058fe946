#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace plexus {

// Formats `v` with exactly `decimals` fractional digits ("0.800000").
// Negative zero prints as zero.
std::string format_fixed(double v, int decimals);

// Compact streaming JSON writer. Exists because wire numbers need fixed
// decimal formatting, which nlohmann::json cannot emit.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();

    JsonWriter& key(std::string_view k);

    JsonWriter& value(std::string_view s);
    JsonWriter& value(const char* s) { return value(std::string_view(s)); }
    JsonWriter& value(const std::string& s) { return value(std::string_view(s)); }
    JsonWriter& value(std::int64_t n);
    JsonWriter& value(int n) { return value(static_cast<std::int64_t>(n)); }
    JsonWriter& value(std::size_t n) { return value(static_cast<std::int64_t>(n)); }
    JsonWriter& value(bool b);
    JsonWriter& fixed(double v, int decimals);
    // Splices an already-serialized JSON value.
    JsonWriter& raw(std::string_view json);

    const std::string& str() const noexcept { return out_; }
    std::string take() { return std::move(out_); }

private:
    void before_value();

    std::string out_;
    std::vector<bool> first_;  // per open container: no element written yet
    bool after_key_ = false;
};

std::string json_quote(std::string_view s);

}  // namespace plexus
