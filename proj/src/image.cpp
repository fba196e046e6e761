#include "pmlda/image.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pmlda/errors.hpp"

namespace pmlda {

GrayImage::GrayImage(int h, int w, std::uint8_t fill)
    : height(h), width(w), pixels(static_cast<std::size_t>(h) * w, fill) {}

RgbImage::RgbImage(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w * 3, 0) {}

Plane::Plane(int h, int w, double fill) : height(h), width(w), v(static_cast<std::size_t>(h) * w, fill) {}

FeatureImage::FeatureImage(int h, int w, int d)
    : height(h), width(w), dim(d), values(static_cast<std::size_t>(h) * w * d, 0.0) {}

void FeatureImage::set_channel(int ch, const Plane& plane) {
  require(plane.height == height && plane.width == width, "set_channel: size mismatch");
  require(ch >= 0 && ch < dim, "set_channel: channel out of range");
  for (std::size_t p = 0; p < plane.v.size(); ++p) values[p * dim + ch] = plane.v[p];
}

Plane FeatureImage::channel(int ch) const {
  require(ch >= 0 && ch < dim, "channel: out of range");
  Plane out(height, width);
  for (std::size_t p = 0; p < out.v.size(); ++p) out.v[p] = values[p * dim + ch];
  return out;
}

void FeatureImage::validate() const {
  require(height > 0 && width > 0 && dim >= 1, "feature image must be non-empty with dim >= 1");
  require(values.size() == static_cast<std::size_t>(height) * width * dim, "feature image size mismatch");
  for (double v : values) require(std::isfinite(v), "feature image contains non-finite values");
}

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

struct PnmHeader {
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 0;
};

PnmHeader read_header(std::istream& in, const std::filesystem::path& path) {
  PnmHeader h;
  h.magic = next_token(in);
  try {
    h.width = std::stoi(next_token(in));
    h.height = std::stoi(next_token(in));
    h.maxval = std::stoi(next_token(in));
  } catch (const std::exception&) {
    throw InputError("malformed PNM header in " + path.string());
  }
  // next_token consumed exactly one whitespace byte after maxval
  if (h.width <= 0 || h.height <= 0) throw InputError("invalid PNM dimensions in " + path.string());
  if (h.maxval <= 0 || h.maxval > 255) throw InputError("only 8-bit PNM is supported: " + path.string());
  return h;
}

std::vector<std::uint8_t> read_raster(std::istream& in, std::size_t bytes, const std::filesystem::path& path) {
  std::vector<std::uint8_t> buf(bytes);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) throw InputError("truncated PNM raster in " + path.string());
  return buf;
}

std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  auto in = open_binary(path);
  const PnmHeader h = read_header(in, path);
  if (h.magic != "P5") throw InputError("expected binary PGM (P5): " + path.string());
  GrayImage img;
  img.height = h.height;
  img.width = h.width;
  img.pixels = read_raster(in, static_cast<std::size_t>(h.width) * h.height, path);
  return img;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  auto in = open_binary(path);
  const PnmHeader h = read_header(in, path);
  if (h.magic != "P6") throw InputError("expected binary PPM (P6): " + path.string());
  RgbImage img;
  img.height = h.height;
  img.width = h.width;
  img.data = read_raster(in, static_cast<std::size_t>(h.width) * h.height * 3, path);
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
}

LabelMap read_label_map(const std::filesystem::path& path) {
  LabelMap map;
  if (path.extension() == ".pgm") {
    const GrayImage img = read_pgm(path);
    map.height = img.height;
    map.width = img.width;
    map.labels.assign(img.pixels.begin(), img.pixels.end());
    return map;
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        map.labels.push_back(std::stoi(cell));
      } catch (const std::exception&) {
        throw InputError("non-integer label '" + cell + "' in " + path.string());
      }
      ++cols;
    }
    if (map.height == 0) map.width = cols;
    if (cols != map.width) throw InputError("ragged label CSV " + path.string());
    ++map.height;
  }
  if (map.height == 0 || map.width == 0) throw InputError("empty label map " + path.string());
  return map;
}

GrayImage to_gray(const RgbImage& img) {
  GrayImage out(img.height, img.width);
  for (std::size_t p = 0; p < out.pixels.size(); ++p) {
    const int sum = img.data[p * 3] + img.data[p * 3 + 1] + img.data[p * 3 + 2];
    out.pixels[p] = static_cast<std::uint8_t>((sum + 1) / 3);
  }
  return out;
}

}  // namespace pmlda
