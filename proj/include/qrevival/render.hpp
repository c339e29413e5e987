#pragma once

// Grayscale rendering of carpets, snapshots and nodal lines, plus PPM/PNG
// writers. Every pixel is computed independently and written to its own
// slot, so output bytes do not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <png.h>

#include "wave.hpp"

namespace qrevival {

struct ImageGray {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;  // row-major, top row first, values in [0,1]

  ImageGray() = default;
  ImageGray(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h, 0.0) {
    if (w == 0 || h == 0) throw std::invalid_argument("ImageGray: dimensions must be positive");
  }

  double& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }

  friend bool operator==(const ImageGray&, const ImageGray&) = default;
};

/// Round-half-up quantization of 255·v, v clamped to [0,1].
inline std::uint8_t quantize(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(255.0 * c + 0.5));
}

inline std::vector<std::uint8_t> quantized(const ImageGray& img) {
  std::vector<std::uint8_t> out(img.pixels.size());
  std::transform(img.pixels.begin(), img.pixels.end(), out.begin(), quantize);
  return out;
}

/// Worker count: `requested` if nonzero, else $THREADS, else hardware concurrency.
inline unsigned render_threads(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

/// Runs fn(row) for every row, rows striped across workers.
template <typename Fn>
void parallel_rows(std::size_t rows, unsigned threads, Fn&& fn) {
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), rows));
  if (n <= 1) {
    for (std::size_t r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n);
  for (unsigned w = 0; w < n; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t r = w; r < rows; r += n) fn(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline void normalize(std::vector<ImageGray*> images, double vis_exponent) {
  double mx = 0.0;
  for (const auto* img : images) {
    for (double v : img->pixels) mx = std::max(mx, v);
  }
  if (mx == 0.0) return;
  for (auto* img : images) {
    for (double& v : img->pixels) {
      v /= mx;
      if (vis_exponent != 1.0) v = std::pow(v, vis_exponent);
    }
  }
}

}  // namespace detail

enum class TimeSampling {
  centers,    // θ = (j + 1/2)/width
  endpoints,  // θ = j/(width - 1), first and last column at 0 and T_rev
};

struct CarpetOptions {
  double vis_exponent = 1.0;
  TimeSampling sampling = TimeSampling::centers;
  unsigned threads = 0;
};

/// |Φ(φ2, t)| with t across columns over one revival period and φ2 down the
/// rows from π (top) to -π (bottom).
inline ImageGray carpet_1d(const State& s, std::size_t width, std::size_t height, const CarpetOptions& opt = {}) {
  if (s.params().dimension != 1) throw std::invalid_argument("carpet_1d: state must be one-dimensional");
  ImageGray img(width, height);
  const auto w = static_cast<std::int64_t>(width);
  auto theta_of = [&](std::size_t j) -> Turn {
    const auto jj = static_cast<std::int64_t>(j);
    if (opt.sampling == TimeSampling::centers) return {2 * jj + 1, 2 * w};
    if (width == 1) return {0, 1};
    return {jj, w - 1};
  };
  // Columns are the natural unit of work: one time residue table each.
  detail::parallel_rows(width, render_threads(opt.threads), [&](std::size_t j) {
    detail::ExactPhases ph(s, {0, 1}, grid_turn(0, height, {1, 2}), theta_of(j));
    for (std::size_t i = 0; i < height; ++i) {
      ph.at({0, 1}, grid_turn(height - 1 - i, height, {1, 2}));
      img.at(j, i) = std::sqrt(evaluate_exact(s, ph).norm_sq());
    }
  });
  detail::normalize({&img}, opt.vis_exponent);
  return img;
}

struct SnapshotOptions {
  double vis_exponent = 1.0;
  unsigned threads = 0;
};

/// |Φ(φ1, φ2, θ T_rev)| for each θ; φ1 left to right, φ2 from π (top) to -π.
/// One normalization is shared by the whole list.
inline std::vector<ImageGray> snapshots_2d(const State& s, const std::vector<Rational>& times, std::size_t width,
                                           std::size_t height, const SnapshotOptions& opt = {}) {
  if (s.params().dimension != 2) throw std::invalid_argument("snapshots_2d: state must be two-dimensional");
  std::vector<ImageGray> out;
  for (const Rational& theta : times) {
    ImageGray img(width, height);
    const Turn th = Turn::from(theta);
    detail::parallel_rows(height, render_threads(opt.threads), [&](std::size_t i) {
      const Turn p2 = grid_turn(height - 1 - i, height, {1, 2});
      detail::ExactPhases ph(s, grid_turn(0, width, {1, 2}), p2, th);
      for (std::size_t j = 0; j < width; ++j) {
        ph.at(grid_turn(j, width, {1, 2}), p2);
        img.at(j, i) = std::sqrt(evaluate_exact(s, ph).norm_sq());
      }
    });
    out.push_back(std::move(img));
  }
  std::vector<ImageGray*> ptrs;
  for (auto& img : out) ptrs.push_back(&img);
  detail::normalize(ptrs, opt.vis_exponent);
  return out;
}

enum class SpinorComponent { upper, lower };

struct NodalOptions {
  SpinorComponent component = SpinorComponent::lower;
  Turn half_window{1, 4};  // φ ∈ [-π/2, π/2]
  Rational theta{0};
  unsigned threads = 0;
};

struct NodalResult {
  ImageGray image;          // 1 on nodal pixels, 0 elsewhere
  bool degenerate = false;  // component vanishes identically; image left empty
};

/// Pixels where Re(component) changes sign against a 4-neighbor.
///
/// Term contributions are summed in a canonical order (sorted by |value|,
/// then value) in extended precision, so a grid symmetric under φ1 ↔ φ2
/// gives an exactly symmetric image for a symmetric state.
inline NodalResult nodal_lines(const State& s, std::size_t width, std::size_t height, const NodalOptions& opt = {}) {
  if (s.params().dimension != 2) throw std::invalid_argument("nodal_lines: state must be two-dimensional");
  NodalResult res{ImageGray(width, height), false};
  std::vector<double> field(width * height);
  const Turn th = Turn::from(opt.theta);
  double coeff_sum = 0.0;
  for (const auto& pr : s.prepared()) {
    coeff_sum += std::abs(opt.component == SpinorComponent::upper ? pr.upper_amp : pr.lower_amp);
  }

  detail::parallel_rows(height, render_threads(opt.threads), [&](std::size_t i) {
    const Turn p2 = grid_turn(height - 1 - i, height, opt.half_window);
    detail::ExactPhases ph(s, grid_turn(0, width, opt.half_window), p2, th);
    std::vector<double> addends;
    for (std::size_t j = 0; j < width; ++j) {
      ph.at(grid_turn(j, width, opt.half_window), p2);
      addends.clear();
      for (const auto& c : term_contributions(s, ph)) {
        addends.push_back((opt.component == SpinorComponent::upper ? c.upper : c.lower).real());
      }
      std::sort(addends.begin(), addends.end(), [](double a, double b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
      });
      long double acc = 0.0L;
      for (double a : addends) acc += a;
      field[i * width + j] = static_cast<double>(acc);
    }
  });

  double mx = 0.0;
  for (double v : field) mx = std::max(mx, std::abs(v));
  if (mx <= 1e-12 * coeff_sum || coeff_sum == 0.0) {
    res.degenerate = true;
    return res;
  }
  auto sign = [](double v) { return (v > 0) - (v < 0); };
  for (std::size_t i = 0; i < height; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      const int sv = sign(field[i * width + j]);
      bool edge = false;
      auto check = [&](std::size_t y, std::size_t x) {
        const int sn = sign(field[y * width + x]);
        if (sv != sn) edge = true;
      };
      if (j > 0) check(i, j - 1);
      if (j + 1 < width) check(i, j + 1);
      if (i > 0) check(i - 1, j);
      if (i + 1 < height) check(i + 1, j);
      res.image.at(j, i) = edge ? 1.0 : 0.0;
    }
  }
  return res;
}

// ---- writers

enum class ImageFormat { ppm, png };

inline ImageFormat format_from_path(const std::string& path) {
  auto ends_with = [&](const char* ext) {
    const std::string e(ext);
    if (path.size() < e.size()) return false;
    std::string tail = path.substr(path.size() - e.size());
    std::transform(tail.begin(), tail.end(), tail.begin(), [](unsigned char c) { return std::tolower(c); });
    return tail == e;
  };
  if (ends_with(".png")) return ImageFormat::png;
  if (ends_with(".ppm") || ends_with(".pgm")) return ImageFormat::ppm;
  throw std::invalid_argument("cannot infer image format from '" + path + "' (use .ppm or .png)");
}

inline std::string ppm_bytes(const ImageGray& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  const auto q = quantized(img);
  out.append(q.begin(), q.end());
  return out;
}

inline void write_ppm(const ImageGray& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  const std::string bytes = ppm_bytes(img);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

inline void write_png(const ImageGray& img, const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw std::runtime_error("cannot open '" + path + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("libpng init failed for '" + path + "'");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng init failed for '" + path + "'");
  }
  const auto q = quantized(img);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("PNG encoding failed for '" + path + "'");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < img.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(q.data() + y * img.width));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

inline void write_image(const ImageGray& img, const std::string& path, ImageFormat format) {
  if (format == ImageFormat::png) {
    write_png(img, path);
  } else {
    write_ppm(img, path);
  }
}

inline void write_image(const ImageGray& img, const std::string& path) { write_image(img, path, format_from_path(path)); }

}  // namespace qrevival
