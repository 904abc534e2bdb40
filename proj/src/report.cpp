#include "polyostat/report.hpp"

#include <cstdio>

namespace polyostat {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void JsonWriter::begin() {
    os_ << "{\n";
    first_ = true;
}

void JsonWriter::key(std::string_view k) {
    if (!first_) os_ << ",\n";
    first_ = false;
    os_ << "  \"" << k << "\": ";
}

void JsonWriter::field(std::string_view k, double v) {
    key(k);
    os_ << fmt12(v);
}

void JsonWriter::field(std::string_view k, long long v) {
    key(k);
    os_ << v;
}

void JsonWriter::field(std::string_view k, std::uint64_t v) {
    key(k);
    os_ << v;
}

void JsonWriter::field(std::string_view k, bool v) {
    key(k);
    os_ << (v ? "true" : "false");
}

void JsonWriter::field(std::string_view k, std::string_view v) {
    key(k);
    os_ << '"' << v << '"';  // values here never need escaping
}

void JsonWriter::field_raw(std::string_view k, std::string_view raw) {
    key(k);
    os_ << raw;
}

void JsonWriter::end() { os_ << "\n}\n"; }

}  // namespace polyostat
