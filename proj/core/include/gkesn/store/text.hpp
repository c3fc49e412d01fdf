#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gkesn::store {

/// Shortest round-trip decimal form of a double (std::to_chars). Used for
/// every number that lands in a text artifact, so identical values always
/// serialise to identical bytes.
std::string format_double(double v);

std::string format_u64(std::uint64_t v);

/// Strict parsers: the whole trimmed token must be consumed.
/// Throw ValidationError with the offending text otherwise.
double parse_double(std::string_view text);
std::uint64_t parse_u64(std::string_view text);
std::int64_t parse_i64(std::string_view text);

std::string_view trim(std::string_view s);

/// FNV-1a 64-bit hash; digests of canonical parameter strings identify runs
/// and artifacts in provenance metadata.
std::uint64_t fnv1a64(std::string_view bytes);

/// fnv1a64 rendered as 16 lowercase hex digits.
std::string digest_hex(std::string_view bytes);

}  // namespace gkesn::store
