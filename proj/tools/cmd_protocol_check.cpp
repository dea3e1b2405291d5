// SPDX-License-Identifier: Apache-2.0
#include <sys/socket.h>
#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <thread>

#include "cli_common.hpp"
#include "uqx/errors.hpp"
#include "uqx/protocol.hpp"
#include "uqx/rng.hpp"

namespace uqx::cli {

namespace {

using proto::Frame;
using proto::FrameStream;

struct Loopback {
  int client_fd = -1;
  std::thread server;

  explicit Loopback() {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0)
      throw TransportError("socketpair failed");
    client_fd = fds[0];
    const int server_fd = fds[1];
    server = std::thread([server_fd]() {
      FrameStream stream(server_fd, server_fd);
      proto::serve(
          stream, [](const Image& x) { return x; },  // identity denoiser
          [](const Image& y, std::uint32_t count) {
            return std::vector<Image>(count, y);
          });
      ::close(server_fd);
    });
  }
  ~Loopback() {
    if (client_fd >= 0) ::close(client_fd);
    if (server.joinable()) server.join();
  }
};

std::vector<float> random_payload(RngStream& rng, std::size_t n) {
  std::vector<float> out(n);
  for (auto& v : out) v = static_cast<float>(rng.uniform() * 4.0 - 2.0);
  return out;
}

bool roundtrip_ok(FrameStream& stream, RngStream& rng) {
  Frame req;
  req.code = proto::kOpDenoise;
  req.height = 1 + static_cast<std::uint32_t>(rng.uniform_below(32));
  req.width = 1 + static_cast<std::uint32_t>(rng.uniform_below(32));
  req.count = 1;
  const auto payload = random_payload(rng, std::size_t(req.height) * req.width);
  req.set_payload_floats(payload);
  stream.write(req);
  const Frame resp = stream.read();
  if (resp.code != proto::kStatusOk) return false;
  if (resp.height != req.height || resp.width != req.width || resp.count != 1)
    return false;
  return resp.payload == req.payload;  // bit-exact echo
}

// Structurally valid framing with invalid content; the server must answer
// with an error frame.
std::vector<std::uint8_t> make_malformed(RngStream& rng, bool& expect_close) {
  Frame f;
  f.code = proto::kOpDenoise;
  f.height = 4;
  f.width = 4;
  f.count = 1;
  f.set_payload_floats(random_payload(rng, 16));
  auto bytes = proto::encode_frame(f);
  expect_close = false;
  switch (rng.uniform_below(6)) {
    case 0:  // corrupt magic
      bytes[4] = 'X';
      break;
    case 1: {  // truncated payload: length says header only
      Frame g = f;
      g.payload.clear();
      g.height = 4;
      g.width = 4;
      bytes = proto::encode_frame(g);
      break;
    }
    case 2:  // payload size inconsistent with h*w
      bytes = proto::encode_frame(f);
      bytes[5 + 4] = 9;  // height -> 9 while payload stays 4x4
      break;
    case 3:  // unknown opcode
      bytes[8] = 250;
      break;
    case 4: {  // zero dimensions
      Frame g = f;
      g.height = 0;
      bytes = proto::encode_frame(g);
      break;
    }
    case 5: {  // oversized declared length; stream desyncs, server closes
      bytes[0] = 0xff;
      bytes[1] = 0xff;
      bytes[2] = 0xff;
      bytes[3] = 0x7f;
      expect_close = true;
      break;
    }
  }
  return bytes;
}

void write_all_fd(int fd, const std::vector<std::uint8_t>& bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t r = ::write(fd, bytes.data() + sent, bytes.size() - sent);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError("write failed");
    }
    sent += static_cast<std::size_t>(r);
  }
}

}  // namespace

int run_protocol_check_cmd(int n_frames, int n_fuzz, std::uint64_t seed) {
  RngStream rng(seed);
  int bad = 0;

  {
    Loopback loop;
    FrameStream stream(loop.client_fd, loop.client_fd);
    for (int i = 0; i < n_frames; ++i)
      if (!roundtrip_ok(stream, rng)) ++bad;
  }
  std::printf("round-trip: %d/%d frames bit-exact\n", n_frames - bad, n_frames);

  int rejected = 0;
  for (int i = 0; i < n_fuzz; ++i) {
    // Fresh connection per malformed frame; some categories close the stream.
    Loopback loop;
    bool expect_close = false;
    const auto bytes = make_malformed(rng, expect_close);
    try {
      write_all_fd(loop.client_fd, bytes);
      FrameStream stream(loop.client_fd, loop.client_fd);
      const Frame resp = stream.read();
      if (resp.code == proto::kStatusError) ++rejected;
    } catch (const Error&) {
      // No readable error frame; only acceptable if the category desyncs
      // the stream entirely (not the case for our categories, all of which
      // leave the server able to respond).
    }
  }
  std::printf("fuzz: %d/%d malformed frames rejected with error status\n", rejected,
              n_fuzz);

  const bool ok = bad == 0 && rejected == n_fuzz;
  std::printf("%s\n", ok ? "protocol-check: ok" : "protocol-check: FAILED");
  return ok ? 0 : 1;
}

}  // namespace uqx::cli
