// Copyright (c) 2026, The alphakit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "alphakit/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include <png.h>

#include "alphakit/jpeg_codec.hpp"

namespace alphakit {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw InputError("cannot open '" + path.string() + "'");
  return f;
}

struct PngError {
  std::jmp_buf jump;
  std::string message;
};

void png_on_error(png_structp png, png_const_charp msg) {
  auto* err = static_cast<PngError*>(png_get_error_ptr(png));
  err->message = msg;
  std::longjmp(err->jump, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

bool has_png_signature(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

bool has_jpeg_signature(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct MemoryReader {
  const std::vector<std::uint8_t>* bytes;
  std::size_t offset;
};

void png_read_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (reader->offset + length > reader->bytes->size()) {
    png_error(png, "truncated PNG stream");
  }
  std::copy_n(reader->bytes->data() + reader->offset, length, out);
  reader->offset += length;
}

// Decodes into `out`; returns an empty string on success or the libpng
// diagnostic. Kept free of C++ objects with non-trivial destructors between
// setjmp and the last libpng call.
std::string decode_png(const std::vector<std::uint8_t>& bytes, PixelBuffer& out,
                       std::vector<std::uint8_t>& raw) {
  PngError err;
  MemoryReader reader{&bytes, 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err,
                                           png_on_error, png_on_warning);
  if (!png) return "png_create_read_struct failed";
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return "png_create_info_struct failed";
  }
  if (setjmp(err.jump)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return err.message.empty() ? std::string("malformed PNG") : err.message;
  }
  png_set_read_fn(png, &reader, png_read_memory);
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (depth == 16) png_set_swap(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info) == 16 ? 16 : 8;
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  raw.resize(row_bytes * static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) {
    png_read_row(png, raw.data() + row_bytes * static_cast<std::size_t>(y), nullptr);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return {};
}

std::string encode_png(const std::filesystem::path& path, int width, int height,
                       int channels, int bit_depth,
                       const std::vector<std::uint8_t>& raw) {
  FilePtr file = open_file(path, "wb");
  PngError err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err,
                                            png_on_error, png_on_warning);
  if (!png) return "png_create_write_struct failed";
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return "png_create_info_struct failed";
  }
  if (setjmp(err.jump)) {
    png_destroy_write_struct(&png, &info);
    return err.message;
  }
  png_init_io(png, file.get());
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  const std::size_t row_bytes =
      static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, raw.data() + row_bytes * static_cast<std::size_t>(y));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return {};
}

void write_png(const std::filesystem::path& path, int width, int height,
               int channels, int bit_depth,
               const std::vector<std::uint16_t>& samples) {
  std::vector<std::uint8_t> raw;
  if (bit_depth == 16) {
    raw.resize(samples.size() * 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      raw[2 * i] = static_cast<std::uint8_t>(samples[i] & 0xFF);
      raw[2 * i + 1] = static_cast<std::uint8_t>(samples[i] >> 8);
    }
  } else {
    raw.assign(samples.begin(), samples.end());
  }
  const std::string error = encode_png(path, width, height, channels, bit_depth, raw);
  if (!error.empty()) {
    throw InputError("cannot write '" + path.string() + "': " + error);
  }
}

}  // namespace

std::uint16_t quantize(float value, int max_code) {
  const float v = std::clamp(value, 0.0f, 1.0f);
  return static_cast<std::uint16_t>(std::lround(v * static_cast<float>(max_code)));
}

float dequantize(std::uint16_t code, int max_code) {
  return static_cast<float>(static_cast<double>(code) / max_code);
}

PixelBuffer read_pixels(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = slurp(path);
  PixelBuffer out;
  if (has_png_signature(bytes)) {
    std::vector<std::uint8_t> raw;
    const std::string error = decode_png(bytes, out, raw);
    if (!error.empty()) throw InputError("'" + path.string() + "': " + error);
    if (out.bit_depth == 16) {
      out.samples.resize(raw.size() / 2);
      for (std::size_t i = 0; i < out.samples.size(); ++i) {
        out.samples[i] = static_cast<std::uint16_t>(raw[2 * i] | (raw[2 * i + 1] << 8));
      }
    } else {
      out.samples.assign(raw.begin(), raw.end());
    }
    return out;
  }
  if (has_jpeg_signature(bytes)) {
    JpegImage jpeg;
    try {
      jpeg = decode_jpeg(bytes);
    } catch (const InputError& e) {
      throw InputError("'" + path.string() + "': " + e.what());
    }
    out.width = jpeg.width;
    out.height = jpeg.height;
    out.channels = jpeg.components;
    out.bit_depth = 8;
    out.samples.assign(jpeg.pixels.begin(), jpeg.pixels.end());
    return out;
  }
  throw InputError("'" + path.string() + "': not a PNG or JPEG file");
}

RasterImage read_image(const std::filesystem::path& path) {
  const PixelBuffer px = read_pixels(path);
  RasterImage image(px.width, px.height);
  const int max_code = static_cast<int>(px.max_code());
  auto dst = image.values();
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const std::uint16_t* src = px.samples.data() + i * px.channels;
    for (int c = 0; c < 3; ++c) {
      const int ch = px.channels >= 3 ? c : 0;
      dst[i * 3 + c] = dequantize(src[ch], max_code);
    }
  }
  return image;
}

AlphaMatte read_alpha(const std::filesystem::path& path) {
  const PixelBuffer px = read_pixels(path);
  AlphaMatte alpha(px.width, px.height);
  const int max_code = static_cast<int>(px.max_code());
  auto dst = alpha.values();
  for (std::size_t i = 0; i < alpha.pixel_count(); ++i) {
    dst[i] = dequantize(px.samples[i * px.channels], max_code);
  }
  return alpha;
}

Trimap read_trimap(const std::filesystem::path& path) {
  const PixelBuffer px = read_pixels(path);
  Trimap trimap(px.width, px.height);
  const std::uint16_t top = px.bit_depth == 16 ? 65535 : 255;
  auto dst = trimap.labels();
  for (std::size_t i = 0; i < trimap.pixel_count(); ++i) {
    const std::uint16_t code = px.samples[i * px.channels];
    dst[i] = code == 0     ? TrimapLabel::kBackground
             : code == top ? TrimapLabel::kForeground
                           : TrimapLabel::kUnknown;
  }
  return trimap;
}

void write_image_png(const std::filesystem::path& path, const RasterImage& image) {
  std::vector<std::uint16_t> samples(image.values().size());
  std::transform(image.values().begin(), image.values().end(), samples.begin(),
                 [](float v) { return quantize(v, 255); });
  write_png(path, image.width(), image.height(), 3, 8, samples);
}

void write_alpha_png(const std::filesystem::path& path, const AlphaMatte& alpha,
                     int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw InputError("write_alpha_png: bit depth must be 8 or 16");
  }
  const int max_code = bit_depth == 16 ? 65535 : 255;
  std::vector<std::uint16_t> samples(alpha.values().size());
  std::transform(alpha.values().begin(), alpha.values().end(), samples.begin(),
                 [max_code](float v) { return quantize(v, max_code); });
  write_png(path, alpha.width(), alpha.height(), 1, bit_depth, samples);
}

void write_trimap_png(const std::filesystem::path& path, const Trimap& trimap) {
  std::vector<std::uint16_t> samples(trimap.pixel_count());
  std::transform(trimap.labels().begin(), trimap.labels().end(), samples.begin(),
                 [](TrimapLabel l) { return static_cast<std::uint16_t>(l); });
  write_png(path, trimap.width(), trimap.height(), 1, 8, samples);
}

}  // namespace alphakit
