// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "uqx/image.hpp"

namespace uqx::proto {

// Length-prefixed binary frames over a stream socket or stdio:
//   [u32 LE frame length] [magic "UQX1"] [code u8] [height u32 LE]
//   [width u32 LE] [count u32 LE] [payload]
// Requests carry an opcode (1 = denoise, 2 = sample); responses carry a
// status (0 = ok, 1 = error). Ok payloads are f32 LE row-major images;
// error payloads are a UTF-8 message.
inline constexpr std::uint8_t kOpDenoise = 1;
inline constexpr std::uint8_t kOpSample = 2;
inline constexpr std::uint8_t kStatusOk = 0;
inline constexpr std::uint8_t kStatusError = 1;
inline constexpr std::size_t kHeaderBytes = 4 + 1 + 4 + 4 + 4;
inline constexpr std::uint32_t kMaxFrameBytes = 1u << 28;  // 256 MiB cap

struct Frame {
  std::uint8_t code = 0;  // opcode or status
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t count = 0;
  std::vector<std::uint8_t> payload;

  std::vector<float> payload_floats() const;
  void set_payload_floats(const std::vector<float>& values);
  std::string payload_text() const;
};

/// Frame body (everything after the length prefix).
std::vector<std::uint8_t> encode_body(const Frame& f);
/// Parses a frame body; throws ProtocolError on bad magic or short input.
Frame decode_body(const std::uint8_t* data, std::size_t len);

/// Full wire bytes including the length prefix.
std::vector<std::uint8_t> encode_frame(const Frame& f);

std::vector<float> image_to_floats(const Image& img);
Image floats_to_image(const float* data, int height, int width);

/// Blocking frame I/O on file descriptors.
class FrameStream {
 public:
  FrameStream(int fd_in, int fd_out) : fd_in_(fd_in), fd_out_(fd_out) {}
  void write(const Frame& f);
  /// Throws TransportError on EOF/short read, ProtocolError on bad frames.
  Frame read();

  int fd_in() const { return fd_in_; }
  int fd_out() const { return fd_out_; }

 private:
  int fd_in_;
  int fd_out_;
};

using DenoiseFn = std::function<Image(const Image&)>;
using SampleFn = std::function<std::vector<Image>(const Image&, std::uint32_t)>;

/// Serves denoise/sample requests until EOF. Malformed frames that keep the
/// outer framing intact get an error response; unrecoverable framing damage
/// ends the loop.
void serve(FrameStream& stream, const DenoiseFn& denoise, const SampleFn& sample);

/// Client for external denoisers/samplers. Endpoints:
///   "tcp:HOST:PORT"  connect to a protocol server
///   "cmd:COMMAND"    spawn COMMAND and speak the protocol on its stdio
class Client {
 public:
  static std::unique_ptr<Client> connect(const std::string& endpoint);
  ~Client();
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  Image denoise(const Image& x);
  std::vector<Image> sample(const Image& observation, std::uint32_t count);

 private:
  Client(int fd_in, int fd_out, int child_pid);
  FrameStream stream_;
  int fd_in_;
  int fd_out_;
  int child_pid_;
};

}  // namespace uqx::proto
