// SPDX-License-Identifier: Apache-2.0
#include "uqx/image_io.hpp"

#include <zlib.h>

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "uqx/errors.hpp"

namespace uqx {
namespace {

constexpr double kLumaR = 0.2126;
constexpr double kLumaG = 0.7152;
constexpr double kLumaB = 0.0722;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (!in.good() && !in.eof()) throw IoError("read failure: " + path.string());
  return bytes;
}

std::uint32_t be32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

const std::uint8_t kPngSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};

std::vector<std::uint8_t> zlib_inflate(const std::vector<std::uint8_t>& in,
                                       std::size_t expected_out) {
  std::vector<std::uint8_t> out(expected_out);
  z_stream zs;
  std::memset(&zs, 0, sizeof(zs));
  if (inflateInit(&zs) != Z_OK) throw IoError("png: inflateInit failed");
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.avail_out != 0)
    throw IoError("png: corrupt or truncated compressed data");
  return out;
}

std::vector<std::uint8_t> zlib_deflate(const std::vector<std::uint8_t>& in) {
  uLongf bound = compressBound(static_cast<uLong>(in.size()));
  std::vector<std::uint8_t> out(bound);
  if (compress2(out.data(), &bound, in.data(), static_cast<uLong>(in.size()), 6) != Z_OK)
    throw IoError("png: deflate failed");
  out.resize(bound);
  return out;
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

void unfilter(std::vector<std::uint8_t>& raw, int height, std::size_t rowbytes, int bpp) {
  std::vector<std::uint8_t> prev(rowbytes, 0);
  for (int r = 0; r < height; ++r) {
    std::uint8_t* row = raw.data() + static_cast<std::size_t>(r) * (rowbytes + 1);
    const int ftype = row[0];
    std::uint8_t* cur = row + 1;
    for (std::size_t i = 0; i < rowbytes; ++i) {
      const int left = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
      const int up = prev[i];
      const int ul = i >= static_cast<std::size_t>(bpp) ? prev[i - bpp] : 0;
      int v = cur[i];
      switch (ftype) {
        case 0: break;
        case 1: v += left; break;
        case 2: v += up; break;
        case 3: v += (left + up) / 2; break;
        case 4: v += paeth(left, up, ul); break;
        default: throw IoError("png: unknown filter type " + std::to_string(ftype));
      }
      cur[i] = std::uint8_t(v);
    }
    std::memcpy(prev.data(), cur, rowbytes);
  }
}

}  // namespace

Image decode_png(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSig, 8) != 0)
    throw IoError("png: bad signature");
  std::size_t pos = 8;
  std::uint32_t width = 0, height = 0;
  int bitdepth = 0, colortype = 0;
  bool have_ihdr = false;
  std::vector<std::uint8_t> idat;
  std::vector<std::uint8_t> plte;
  while (pos + 12 <= bytes.size()) {
    const std::uint32_t len = be32(&bytes[pos]);
    if (pos + 12 + len > bytes.size()) throw IoError("png: truncated chunk");
    const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
    const std::uint8_t* data = &bytes[pos + 8];
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw IoError("png: bad IHDR");
      width = be32(data);
      height = be32(data + 4);
      bitdepth = data[8];
      colortype = data[9];
      if (data[10] != 0 || data[11] != 0) throw IoError("png: unsupported compression/filter");
      if (data[12] != 0) throw IoError("png: interlaced images are unsupported");
      have_ihdr = true;
    } else if (std::memcmp(type, "PLTE", 4) == 0) {
      plte.assign(data, data + len);
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (!have_ihdr || idat.empty()) throw IoError("png: missing IHDR or IDAT");
  if (width == 0 || height == 0) throw IoError("png: zero dimensions");
  if (bitdepth != 8 && bitdepth != 16)
    throw IoError("png: only 8-bit and 16-bit depths are supported");

  int channels;
  switch (colortype) {
    case 0: channels = 1; break;
    case 2: channels = 3; break;
    case 3: channels = 1; break;
    case 4: channels = 2; break;
    case 6: channels = 4; break;
    default: throw IoError("png: unknown colour type " + std::to_string(colortype));
  }
  if (colortype == 3 && bitdepth != 8) throw IoError("png: palette requires 8-bit depth");
  if (colortype == 3 && plte.size() % 3 != 0) throw IoError("png: bad palette");

  const int bytes_per_sample = bitdepth / 8;
  const std::size_t rowbytes = std::size_t(width) * channels * bytes_per_sample;
  auto raw = zlib_inflate(idat, std::size_t(height) * (rowbytes + 1));
  unfilter(raw, static_cast<int>(height), rowbytes, channels * bytes_per_sample);

  Image out(static_cast<int>(height), static_cast<int>(width));
  const double maxv = bitdepth == 8 ? 255.0 : 65535.0;
  for (std::uint32_t r = 0; r < height; ++r) {
    const std::uint8_t* row = raw.data() + std::size_t(r) * (rowbytes + 1) + 1;
    for (std::uint32_t c = 0; c < width; ++c) {
      const std::uint8_t* px = row + std::size_t(c) * channels * bytes_per_sample;
      double samples[4] = {0, 0, 0, 0};
      for (int ch = 0; ch < channels; ++ch) {
        if (bytes_per_sample == 1)
          samples[ch] = px[ch];
        else
          samples[ch] = (std::uint32_t(px[2 * ch]) << 8) | px[2 * ch + 1];
      }
      double gray;
      if (colortype == 3) {
        const std::size_t idx = static_cast<std::size_t>(samples[0]) * 3;
        if (idx + 2 >= plte.size()) throw IoError("png: palette index out of range");
        gray = (kLumaR * plte[idx] + kLumaG * plte[idx + 1] + kLumaB * plte[idx + 2]) / 255.0;
      } else if (channels >= 3) {
        gray = (kLumaR * samples[0] + kLumaG * samples[1] + kLumaB * samples[2]) / maxv;
      } else {
        gray = samples[0] / maxv;  // alpha, if present, is ignored
      }
      out.at(static_cast<int>(r), static_cast<int>(c)) = gray;
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_png16(const Image& img) {
  const std::size_t rowbytes = std::size_t(img.width) * 2;
  std::vector<std::uint8_t> raw;
  raw.reserve(std::size_t(img.height) * (rowbytes + 1));
  for (int r = 0; r < img.height; ++r) {
    raw.push_back(0);  // filter: none
    for (int c = 0; c < img.width; ++c) {
      double v = img.at(r, c);
      v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
      const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
      raw.push_back(std::uint8_t(q >> 8));
      raw.push_back(std::uint8_t(q & 0xff));
    }
  }
  const auto compressed = zlib_deflate(raw);

  std::vector<std::uint8_t> out(kPngSig, kPngSig + 8);
  auto chunk = [&out](const char* type, const std::vector<std::uint8_t>& data) {
    put_be32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
    put_be32(out, static_cast<std::uint32_t>(crc));
  };
  std::vector<std::uint8_t> ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(img.width));
  put_be32(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.push_back(16);  // bit depth
  ihdr.push_back(0);   // grayscale
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  chunk("IHDR", ihdr);
  chunk("IDAT", compressed);
  chunk("IEND", {});
  return out;
}

void write_png16(const std::filesystem::path& path, const Image& img) {
  const auto bytes = encode_png16(img);
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw IoError("cannot open for writing: " + path.string());
  outf.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
  if (!outf.good()) throw IoError("write failure: " + path.string());
}

namespace {

// Reads one PNM token, skipping whitespace and '#' comments.
std::string pnm_token(const std::vector<std::uint8_t>& b, std::size_t& pos) {
  while (pos < b.size()) {
    if (std::isspace(b[pos])) {
      ++pos;
    } else if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  std::string tok;
  while (pos < b.size() && !std::isspace(b[pos])) tok.push_back(char(b[pos++]));
  if (tok.empty()) throw IoError("pgm: truncated header");
  return tok;
}

long pnm_int(const std::vector<std::uint8_t>& b, std::size_t& pos) {
  const std::string tok = pnm_token(b, pos);
  try {
    return std::stol(tok);
  } catch (const std::exception&) {
    throw IoError("pgm: expected integer, got '" + tok + "'");
  }
}

}  // namespace

Image decode_pgm(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw IoError("pgm: bad magic");
  const bool binary = bytes[1] == '5';
  std::size_t pos = 2;
  const long w = pnm_int(bytes, pos);
  const long h = pnm_int(bytes, pos);
  const long maxval = pnm_int(bytes, pos);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) throw IoError("pgm: bad header");
  Image out(static_cast<int>(h), static_cast<int>(w));
  if (binary) {
    ++pos;  // single whitespace after maxval
    const int bps = maxval > 255 ? 2 : 1;
    const std::size_t need = std::size_t(w) * h * bps;
    if (bytes.size() - pos < need) throw IoError("pgm: truncated pixel data");
    for (long i = 0; i < w * h; ++i) {
      long v;
      if (bps == 1)
        v = bytes[pos + i];
      else
        v = (long(bytes[pos + 2 * i]) << 8) | bytes[pos + 2 * i + 1];
      out.pixels[i] = double(v) / maxval;
    }
  } else {
    for (long i = 0; i < w * h; ++i) {
      const long v = pnm_int(bytes, pos);
      if (v < 0 || v > maxval) throw IoError("pgm: sample out of range");
      out.pixels[i] = double(v) / maxval;
    }
  }
  return out;
}

void write_pgm16(const std::filesystem::path& path, const Image& img) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw IoError("cannot open for writing: " + path.string());
  outf << "P5\n" << img.width << " " << img.height << "\n65535\n";
  for (double vv : img.pixels) {
    double v = vv < 0.0 ? 0.0 : (vv > 1.0 ? 1.0 : vv);
    const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
    outf.put(char(q >> 8));
    outf.put(char(q & 0xff));
  }
  if (!outf.good()) throw IoError("write failure: " + path.string());
}

Image read_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSig, 8) == 0)
    return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'))
    return decode_pgm(bytes);
  throw IoError("unsupported image format: " + path.string());
}

}  // namespace uqx
