#include "layoutgen/saliency.hpp"

#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

#include "layoutgen/error.hpp"

namespace layoutgen {

namespace {

using Complex = std::complex<double>;
using ComplexGrid =
    Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void fft2(ComplexGrid& grid, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in, out;
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    in.assign(grid.row(r).begin(), grid.row(r).end());
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    for (Eigen::Index c = 0; c < grid.cols(); ++c) grid(r, c) = out[static_cast<std::size_t>(c)];
  }
  for (Eigen::Index c = 0; c < grid.cols(); ++c) {
    in.resize(static_cast<std::size_t>(grid.rows()));
    for (Eigen::Index r = 0; r < grid.rows(); ++r) in[static_cast<std::size_t>(r)] = grid(r, c);
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    for (Eigen::Index r = 0; r < grid.rows(); ++r) grid(r, c) = out[static_cast<std::size_t>(r)];
  }
}

/// Separable correlation with a 1-D kernel, replicate borders.
GrayImage filter_separable(const GrayImage& src, const std::vector<double>& kernel) {
  const auto rows = src.rows();
  const auto cols = src.cols();
  const auto radius = static_cast<Eigen::Index>(kernel.size() / 2);
  GrayImage tmp(rows, cols), out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (Eigen::Index k = -radius; k <= radius; ++k) {
        const auto cc = std::clamp<Eigen::Index>(c + k, 0, cols - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] * src(r, cc);
      }
      tmp(r, c) = acc;
    }
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (Eigen::Index k = -radius; k <= radius; ++k) {
        const auto rr = std::clamp<Eigen::Index>(r + k, 0, rows - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] * tmp(rr, c);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& image, int rows, int cols) {
  if (image.size() == 0 || rows <= 0 || cols <= 0) {
    throw Error(ErrorKind::InvalidInput, "cannot resize an empty image");
  }
  GrayImage out(rows, cols);
  const double sy = static_cast<double>(image.rows()) / rows;
  const double sx = static_cast<double>(image.cols()) / cols;
  const auto max_r = static_cast<double>(image.rows() - 1);
  const auto max_c = static_cast<double>(image.cols() - 1);
  for (int r = 0; r < rows; ++r) {
    const double y = std::clamp((r + 0.5) * sy - 0.5, 0.0, max_r);
    const auto y0 = static_cast<Eigen::Index>(std::floor(y));
    const auto y1 = std::min<Eigen::Index>(y0 + 1, image.rows() - 1);
    const double fy = y - static_cast<double>(y0);
    for (int c = 0; c < cols; ++c) {
      const double x = std::clamp((c + 0.5) * sx - 0.5, 0.0, max_c);
      const auto x0 = static_cast<Eigen::Index>(std::floor(x));
      const auto x1 = std::min<Eigen::Index>(x0 + 1, image.cols() - 1);
      const double fx = x - static_cast<double>(x0);
      out(r, c) = (1 - fy) * ((1 - fx) * image(y0, x0) + fx * image(y0, x1)) +
                  fy * ((1 - fx) * image(y1, x0) + fx * image(y1, x1));
    }
  }
  return out;
}

SaliencyMap spectral_residual_saliency(const GrayImage& image,
                                       const SaliencyParams& params) {
  if (image.rows() == 0 || image.cols() == 0) {
    throw Error(ErrorKind::InvalidInput, "saliency input image is empty");
  }
  if (!image.allFinite()) {
    throw Error(ErrorKind::InvalidInput, "saliency input image has non-finite pixels");
  }
  const int n = params.working_size;
  const GrayImage small = resize_bilinear(image, n, n);
  if (small.maxCoeff() - small.minCoeff() <= 1e-12) {
    return SaliencyMap::Zero(n, n);
  }

  ComplexGrid spectrum = small.cast<Complex>();
  fft2(spectrum, false);

  // Zero-amplitude bins are floored so the log stays finite.
  const GrayImage amplitude = spectrum.abs();
  const double floor_amp = 1e-12 * std::max(1.0, amplitude.maxCoeff());
  const GrayImage log_amp = amplitude.max(floor_amp).log();
  const GrayImage phase = spectrum.arg();

  const std::vector<double> box(static_cast<std::size_t>(params.box_filter),
                                1.0 / params.box_filter);
  const GrayImage residual = log_amp - filter_separable(log_amp, box);

  ComplexGrid rebuilt(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      rebuilt(r, c) = std::exp(Complex(residual(r, c), phase(r, c)));
    }
  }
  fft2(rebuilt, true);

  const GrayImage energy = rebuilt.abs2();
  GrayImage blurred = filter_separable(energy, gaussian_kernel(params.blur_sigma));

  const double lo = blurred.minCoeff();
  const double hi = blurred.maxCoeff();
  if (!(hi - lo > 0.0)) return SaliencyMap::Zero(n, n);
  return ((blurred - lo) / (hi - lo)).max(0.0).min(1.0);
}

std::optional<BoundingBox> rectify(const SaliencyMap& map, double threshold,
                                   const CanvasSpec& canvas) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "saliency threshold must lie in [0, 1]");
  }
  if (map.size() == 0 || canvas.width <= 0 || canvas.height <= 0) {
    throw Error(ErrorKind::InvalidInput, "rectify needs a non-empty map and canvas");
  }
  Eigen::Index r0 = map.rows(), r1 = -1, c0 = map.cols(), c1 = -1;
  for (Eigen::Index r = 0; r < map.rows(); ++r) {
    for (Eigen::Index c = 0; c < map.cols(); ++c) {
      if (map(r, c) > threshold) {
        r0 = std::min(r0, r);
        r1 = std::max(r1, r);
        c0 = std::min(c0, c);
        c1 = std::max(c1, c);
      }
    }
  }
  if (r1 < 0) return std::nullopt;

  const auto mw = static_cast<std::int64_t>(map.cols());
  const auto mh = static_cast<std::int64_t>(map.rows());
  const std::int64_t W = canvas.width;
  const std::int64_t H = canvas.height;
  const auto left = static_cast<int>(c0 * W / mw);
  const auto top = static_cast<int>(r0 * H / mh);
  const auto right = static_cast<int>(((c1 + 1) * W + mw - 1) / mw);
  const auto bottom = static_cast<int>(((r1 + 1) * H + mh - 1) / mh);
  BoundingBox box{left, top, right - left, bottom - top};
  clamp_to_canvas(box, canvas);
  return box;
}

BoundingBox center_fallback_box(const CanvasSpec& canvas) {
  return {canvas.width / 2, canvas.height / 2, 0, 0};
}

namespace {

/// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  char ch;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string discard;
      std::getline(in, discard);
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(ch);
  }
  return tok;
}

int pgm_int(std::istream& in, const char* what) {
  const std::string tok = pgm_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used == tok.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::DataError, std::string("bad PGM ") + what);
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::DataError, "cannot open image " + path.string());
  const std::string magic = pgm_token(in);
  if (magic != "P5" && magic != "P2") {
    throw Error(ErrorKind::DataError, "unsupported image format in " + path.string());
  }
  const int width = pgm_int(in, "width");
  const int height = pgm_int(in, "height");
  const int maxval = pgm_int(in, "maxval");
  if (maxval > 255) {
    throw Error(ErrorKind::DataError, "only 8-bit PGM images are supported");
  }
  GrayImage img(height, width);
  if (magic == "P5") {
    std::vector<unsigned char> buf(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
      throw Error(ErrorKind::DataError, "truncated PGM " + path.string());
    }
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        img(r, c) = buf[static_cast<std::size_t>(r) * width + c];
      }
    }
  } else {
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        int v = 0;
        if (!(in >> v)) throw Error(ErrorKind::DataError, "truncated PGM " + path.string());
        img(r, c) = v;
      }
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::DataError, "cannot write " + path.string());
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(std::round(image(r, c)), 0.0, 255.0);
      out.put(static_cast<char>(static_cast<unsigned char>(v)));
    }
  }
}

}  // namespace layoutgen
