#include "gkesn/store/text.hpp"

#include <charconv>
#include <system_error>

#include "gkesn/errors.hpp"

namespace gkesn::store {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_u64(std::uint64_t v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

template <typename T>
T parse_or_throw(std::string_view text, const char* what) {
    const std::string_view t = trim(text);
    T value{};
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty()) {
        throw ValidationError(std::string("cannot parse ") + what + " from '" +
                              std::string(text) + "'");
    }
    return value;
}

}  // namespace

double parse_double(std::string_view text) { return parse_or_throw<double>(text, "number"); }

std::uint64_t parse_u64(std::string_view text) {
    return parse_or_throw<std::uint64_t>(text, "unsigned integer");
}

std::int64_t parse_i64(std::string_view text) {
    return parse_or_throw<std::int64_t>(text, "integer");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                          s.front() == '\n')) {
        s.remove_prefix(1);
    }
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
        s.remove_suffix(1);
    }
    return s;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest_hex(std::string_view bytes) {
    static const char* hex = "0123456789abcdef";
    const std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) {
        out[15 - i] = hex[(h >> (4 * i)) & 0xF];
    }
    return out;
}

}  // namespace gkesn::store
