#ifndef IFL_BASE_CODEC_H_
#define IFL_BASE_CODEC_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

// Byte encodings and stable hashing shared by dumps, wire formats and
// fingerprints. Backed by libsodium.
namespace ifl::codec {

std::string Base64Encode(std::string_view bytes);
std::optional<std::string> Base64Decode(std::string_view text);

std::string HexEncode(std::string_view bytes);

// Unkeyed BLAKE2b digest, |digest_bytes| in [16, 64].
std::string Blake2b(std::string_view message, size_t digest_bytes);

// Decodes every %XX escape. Malformed escapes are kept verbatim.
std::string PercentDecode(std::string_view text);
// Escapes everything outside [A-Za-z0-9-._~/:].
std::string PercentEncode(std::string_view text);

}  // namespace ifl::codec

#endif  // IFL_BASE_CODEC_H_
