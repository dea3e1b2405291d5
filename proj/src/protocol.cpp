// SPDX-License-Identifier: Apache-2.0
#include "uqx/protocol.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <bit>
#include <cmath>
#include <cstring>

#include "uqx/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "the wire protocol code assumes a little-endian host");

namespace uqx::proto {

namespace {

constexpr char kMagic[4] = {'U', 'Q', 'X', '1'};

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 24));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

void read_exact(int fd, void* buf, std::size_t len, const char* what) {
  auto* p = static_cast<std::uint8_t*>(buf);
  std::size_t got = 0;
  while (got < len) {
    const ssize_t r = ::read(fd, p + got, len - got);
    if (r == 0)
      throw TransportError(std::string("connection closed while reading ") + what);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("read error on ") + what + ": " +
                           std::strerror(errno));
    }
    got += static_cast<std::size_t>(r);
  }
}

void write_all(int fd, const void* buf, std::size_t len) {
  const auto* p = static_cast<const std::uint8_t*>(buf);
  std::size_t sent = 0;
  while (sent < len) {
    const ssize_t r = ::write(fd, p + sent, len - sent);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("write error: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(r);
  }
}

}  // namespace

std::vector<float> Frame::payload_floats() const {
  if (payload.size() % 4 != 0)
    throw ProtocolError("frame payload is not a whole number of f32 values");
  std::vector<float> out(payload.size() / 4);
  std::memcpy(out.data(), payload.data(), payload.size());
  return out;
}

void Frame::set_payload_floats(const std::vector<float>& values) {
  payload.resize(values.size() * 4);
  std::memcpy(payload.data(), values.data(), payload.size());
}

std::string Frame::payload_text() const {
  return std::string(payload.begin(), payload.end());
}

std::vector<std::uint8_t> encode_body(const Frame& f) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + f.payload.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(f.code);
  put_u32le(out, f.height);
  put_u32le(out, f.width);
  put_u32le(out, f.count);
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  return out;
}

Frame decode_body(const std::uint8_t* data, std::size_t len) {
  if (len < kHeaderBytes) throw ProtocolError("frame shorter than its header");
  if (std::memcmp(data, kMagic, 4) != 0) throw ProtocolError("bad frame magic");
  Frame f;
  f.code = data[4];
  f.height = get_u32le(data + 5);
  f.width = get_u32le(data + 9);
  f.count = get_u32le(data + 13);
  f.payload.assign(data + kHeaderBytes, data + len);
  return f;
}

std::vector<std::uint8_t> encode_frame(const Frame& f) {
  const auto body = encode_body(f);
  std::vector<std::uint8_t> out;
  out.reserve(4 + body.size());
  put_u32le(out, static_cast<std::uint32_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::vector<float> image_to_floats(const Image& img) {
  std::vector<float> out(static_cast<std::size_t>(img.size()));
  for (int i = 0; i < img.size(); ++i) out[i] = static_cast<float>(img.pixels[i]);
  return out;
}

Image floats_to_image(const float* data, int height, int width) {
  Image out(height, width);
  for (int i = 0; i < out.size(); ++i) {
    out.pixels[i] = static_cast<double>(data[i]);
    if (!std::isfinite(out.pixels[i]))
      throw ProtocolError("non-finite pixel value in frame payload");
  }
  return out;
}

void FrameStream::write(const Frame& f) {
  const auto bytes = encode_frame(f);
  write_all(fd_out_, bytes.data(), bytes.size());
}

Frame FrameStream::read() {
  std::uint8_t lenbuf[4];
  read_exact(fd_in_, lenbuf, 4, "frame length");
  const std::uint32_t len = get_u32le(lenbuf);
  if (len > kMaxFrameBytes)
    throw ProtocolError("frame length " + std::to_string(len) + " exceeds the cap");
  if (len < kHeaderBytes) throw ProtocolError("frame length shorter than the header");
  std::vector<std::uint8_t> body(len);
  read_exact(fd_in_, body.data(), len, "frame body");
  return decode_body(body.data(), body.size());
}

namespace {

Frame error_frame(const std::string& message) {
  Frame f;
  f.code = kStatusError;
  f.payload.assign(message.begin(), message.end());
  return f;
}

// Validates a request and runs it; returns the response frame.
Frame handle_request(const Frame& req, const DenoiseFn& denoise, const SampleFn& sample) {
  if (req.height == 0 || req.width == 0) return error_frame("zero image dimensions");
  if (req.height > 1u << 15 || req.width > 1u << 15)
    return error_frame("image dimensions exceed the supported range");
  const std::size_t pixels = std::size_t(req.height) * req.width;
  if (req.payload.size() != pixels * 4)
    return error_frame("payload size does not match one h*w f32 image");

  if (req.code == kOpDenoise) {
    if (req.count != 1) return error_frame("denoise requests require count = 1");
    if (!denoise) return error_frame("denoise is not supported by this server");
    const auto floats = req.payload_floats();
    Image out;
    try {
      out = denoise(floats_to_image(floats.data(), int(req.height), int(req.width)));
    } catch (const Error& e) {
      return error_frame(std::string("denoiser failure: ") + e.what());
    }
    if (out.height != int(req.height) || out.width != int(req.width))
      return error_frame("denoiser changed image dimensions");
    Frame resp;
    resp.code = kStatusOk;
    resp.height = req.height;
    resp.width = req.width;
    resp.count = 1;
    resp.set_payload_floats(image_to_floats(out));
    return resp;
  }
  if (req.code == kOpSample) {
    if (req.count < 1) return error_frame("sample requests require count >= 1");
    if (req.count > 1u << 20) return error_frame("requested sample count is too large");
    if (!sample) return error_frame("sample is not supported by this server");
    const auto floats = req.payload_floats();
    std::vector<Image> draws;
    try {
      draws = sample(floats_to_image(floats.data(), int(req.height), int(req.width)),
                     req.count);
    } catch (const Error& e) {
      return error_frame(std::string("sampler failure: ") + e.what());
    }
    if (draws.size() != req.count) return error_frame("sampler returned a wrong count");
    Frame resp;
    resp.code = kStatusOk;
    resp.height = req.height;
    resp.width = req.width;
    resp.count = req.count;
    resp.payload.reserve(std::size_t(req.count) * pixels * 4);
    for (const auto& img : draws) {
      if (img.height != int(req.height) || img.width != int(req.width))
        return error_frame("sampler changed image dimensions");
      const auto f32 = image_to_floats(img);
      const auto* bytes = reinterpret_cast<const std::uint8_t*>(f32.data());
      resp.payload.insert(resp.payload.end(), bytes, bytes + f32.size() * 4);
    }
    return resp;
  }
  return error_frame("unknown opcode " + std::to_string(int(req.code)));
}

}  // namespace

void serve(FrameStream& stream, const DenoiseFn& denoise, const SampleFn& sample) {
  const int fd = stream.fd_in();
  for (;;) {
    // Clean EOF before a frame starts ends the session.
    std::uint8_t lenbuf[4];
    const ssize_t first = ::read(fd, lenbuf, 1);
    if (first == 0) return;
    if (first < 0) {
      if (errno == EINTR) continue;
      return;
    }
    try {
      read_exact(fd, lenbuf + 1, 3, "frame length");
    } catch (const TransportError&) {
      return;
    }
    const std::uint32_t len = get_u32le(lenbuf);
    if (len > kMaxFrameBytes) {
      // The announced body cannot be skipped; the stream is desynchronised.
      try {
        stream.write(error_frame("frame length exceeds the cap"));
      } catch (const TransportError&) {
      }
      return;
    }
    std::vector<std::uint8_t> body(len);
    try {
      read_exact(fd, body.data(), len, "frame body");
    } catch (const TransportError&) {
      return;  // truncated mid-frame: peer is gone or lying about the length
    }
    Frame req;
    try {
      req = decode_body(body.data(), body.size());
    } catch (const ProtocolError& e) {
      // Bad magic or short header with intact framing: reject and carry on.
      try {
        stream.write(error_frame(e.what()));
        continue;
      } catch (const TransportError&) {
        return;
      }
    }
    try {
      stream.write(handle_request(req, denoise, sample));
    } catch (const TransportError&) {
      return;
    }
  }
}

Client::Client(int fd_in, int fd_out, int child_pid)
    : stream_(fd_in, fd_out), fd_in_(fd_in), fd_out_(fd_out), child_pid_(child_pid) {}

Client::~Client() {
  if (fd_out_ >= 0 && fd_out_ != fd_in_) ::close(fd_out_);
  if (fd_in_ >= 0) ::close(fd_in_);
  if (child_pid_ > 0) {
    int status = 0;
    ::waitpid(child_pid_, &status, 0);
  }
}

std::unique_ptr<Client> Client::connect(const std::string& endpoint) {
  if (endpoint.rfind("tcp:", 0) == 0) {
    const std::string rest = endpoint.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos)
      throw InvalidArgument("endpoint must be tcp:HOST:PORT, got " + endpoint);
    const std::string host = rest.substr(0, colon);
    const std::string port = rest.substr(colon + 1);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0 || !res)
      throw TransportError("cannot resolve " + host + ":" + port);
    int fd = -1;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
      fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
      ::close(fd);
      fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw TransportError("cannot connect to " + host + ":" + port);
    return std::unique_ptr<Client>(new Client(fd, fd, -1));
  }
  if (endpoint.rfind("cmd:", 0) == 0) {
    const std::string command = endpoint.substr(4);
    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
      throw TransportError("pipe creation failed");
    const pid_t pid = ::fork();
    if (pid < 0) throw TransportError("fork failed");
    if (pid == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    return std::unique_ptr<Client>(new Client(from_child[0], to_child[1], pid));
  }
  throw InvalidArgument("unknown endpoint scheme (want tcp: or cmd:): " + endpoint);
}

Image Client::denoise(const Image& x) {
  Frame req;
  req.code = kOpDenoise;
  req.height = static_cast<std::uint32_t>(x.height);
  req.width = static_cast<std::uint32_t>(x.width);
  req.count = 1;
  req.set_payload_floats(image_to_floats(x));
  stream_.write(req);
  const Frame resp = stream_.read();
  if (resp.code != kStatusOk)
    throw TransportError("external denoiser error: " + resp.payload_text());
  if (resp.height != req.height || resp.width != req.width || resp.count != 1 ||
      resp.payload.size() != std::size_t(x.size()) * 4)
    throw ProtocolError("external denoiser returned a mismatched frame");
  const auto floats = resp.payload_floats();
  return floats_to_image(floats.data(), x.height, x.width);
}

std::vector<Image> Client::sample(const Image& observation, std::uint32_t count) {
  Frame req;
  req.code = kOpSample;
  req.height = static_cast<std::uint32_t>(observation.height);
  req.width = static_cast<std::uint32_t>(observation.width);
  req.count = count;
  req.set_payload_floats(image_to_floats(observation));
  stream_.write(req);
  const Frame resp = stream_.read();
  if (resp.code != kStatusOk)
    throw TransportError("external sampler error: " + resp.payload_text());
  const std::size_t pixels = std::size_t(observation.size());
  if (resp.height != req.height || resp.width != req.width || resp.count != count ||
      resp.payload.size() != pixels * 4 * count)
    throw ProtocolError("external sampler returned a mismatched frame");
  const auto floats = resp.payload_floats();
  std::vector<Image> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i)
    out.push_back(floats_to_image(floats.data() + std::size_t(i) * pixels,
                                  observation.height, observation.width));
  return out;
}

}  // namespace uqx::proto
