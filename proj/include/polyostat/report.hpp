#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace polyostat {

// Shortest-round-trip style is locale and library dependent; a fixed
// 12-significant-digit rendering keeps repeated invocations byte-identical.
std::string fmt12(double v);

// Flat ordered JSON object writer. Field order is insertion order, so the
// same call sequence always produces the same bytes.
class JsonWriter {
  public:
    explicit JsonWriter(std::ostream& os) : os_(os) {}
    void begin();
    void field(std::string_view key, double v);
    void field(std::string_view key, long long v);
    void field(std::string_view key, std::uint64_t v);
    void field(std::string_view key, bool v);
    void field(std::string_view key, std::string_view v);
    // Caller-assembled JSON fragment (array or nested object).
    void field_raw(std::string_view key, std::string_view raw);
    void end();

  private:
    void key(std::string_view k);
    std::ostream& os_;
    bool first_ = true;
};

}  // namespace polyostat
