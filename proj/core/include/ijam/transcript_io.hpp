#ifndef IJAM_TRANSCRIPT_IO_HPP
#define IJAM_TRANSCRIPT_IO_HPP

#include <string>

#include "ijam/protocol.hpp"

namespace ijam::io {

// Versioned JSON form of a transcript. Sample sequences are base64 blobs of
// little-endian float64 interleaved re/im pairs.
std::string transcript_to_json(const proto::Transcript& tr);
proto::Transcript transcript_from_json(const std::string& text);

void save_transcript(const proto::Transcript& tr, const std::string& path);
proto::Transcript load_transcript(const std::string& path);

std::string base64_encode(const std::vector<uint8_t>& data);
std::vector<uint8_t> base64_decode(const std::string& text);

}  // namespace ijam::io

#endif
