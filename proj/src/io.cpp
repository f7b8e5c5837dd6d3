#include "tomolearn/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tomolearn {
namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ifstream in(path, mode);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  if (std::isfinite(v)) {
    for (int prec = 1; prec <= 17; ++prec) {
      std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
      if (std::strtod(buf, nullptr) == v) break;
    }
  } else {
    std::snprintf(buf, sizeof(buf), "%g", v);
  }
  return buf;
}

void write_image_csv(const std::filesystem::path& path, const Image& img) {
  auto out = open_out(path);
  for (int r = 0; r < img.side(); ++r) {
    for (int c = 0; c < img.side(); ++c) {
      if (c) out << ',';
      out << format_double(img(r, c));
    }
    out << '\n';
  }
}

Image read_image_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<double> values;
  std::string line;
  Eigen::Index rows = 0, cols = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Eigen::Index this_cols = 0;
    while (std::getline(ss, cell, ',')) {
      size_t pos = 0;
      double v;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw std::runtime_error("bad CSV number '" + cell + "' in " + path.string());
      }
      values.push_back(v);
      ++this_cols;
    }
    if (cols < 0)
      cols = this_cols;
    else if (cols != this_cols)
      throw std::runtime_error("ragged CSV rows in " + path.string());
    ++rows;
  }
  if (rows == 0 || rows != cols)
    throw std::runtime_error("image CSV must be square, got " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " in " + path.string());
  return Image(Eigen::Map<Vector>(values.data(), Eigen::Index(values.size())), int(rows));
}

void write_sinogram_csv(const std::filesystem::path& path, const SinogramBlock& sino) {
  auto out = open_out(path);
  for (int k = 0; k < sino.n_angles(); ++k) {
    for (int j = 0; j < sino.n_dtc(); ++j) {
      if (j) out << ',';
      out << format_double(sino.data()[Eigen::Index(k) * sino.n_dtc() + j]);
    }
    out << '\n';
  }
}

void write_image_pgm16(const std::filesystem::path& path, const Image& img) {
  auto out = open_out(path, std::ios::binary);
  const double lo = img.data().minCoeff(), hi = img.data().maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  out << "P5\n" << img.side() << ' ' << img.side() << "\n65535\n";
  for (Eigen::Index i = 0; i < img.data().size(); ++i) {
    const auto v = static_cast<unsigned>(std::lround((img.data()[i] - lo) / span * 65535.0));
    const unsigned char bytes[2] = {static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v & 0xff)};
    out.write(reinterpret_cast<const char*>(bytes), 2);
  }
}

Image read_image_pgm(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  auto next_token = [&in, &path]() -> std::string {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        while (in.get(c) && c != '\n') {
        }
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok += c;
    }
    if (tok.empty()) throw std::runtime_error("truncated PGM header in " + path.string());
    return tok;
  };
  if (next_token() != "P5") throw std::runtime_error("not a binary PGM (P5): " + path.string());
  const int w = std::stoi(next_token());
  const int h = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (w != h) throw std::runtime_error("PGM image must be square: " + path.string());
  if (w <= 0 || maxval <= 0 || maxval > 65535)
    throw std::runtime_error("bad PGM dimensions in " + path.string());
  const int bytes = maxval > 255 ? 2 : 1;
  Vector data(Eigen::Index(w) * h);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    unsigned char raw[2] = {0, 0};
    in.read(reinterpret_cast<char*>(raw), bytes);
    if (!in) throw std::runtime_error("truncated PGM pixel data in " + path.string());
    const unsigned v = bytes == 2 ? (unsigned(raw[0]) << 8) | raw[1] : raw[0];
    data[i] = double(v) / maxval;
  }
  return Image(std::move(data), w);
}

void write_raw_records_csv(const std::filesystem::path& path,
                           const std::vector<RealizationRecord>& records) {
  auto out = open_out(path);
  out << "p,regime,N,realization,seed,delta,alpha,bregman,objective,iterations,converged\n";
  for (const auto& r : records) {
    out << format_double(r.p) << ',' << regime_name(r.regime) << ',' << r.n << ','
        << r.realization << ',' << r.seed << ',' << format_double(r.delta) << ','
        << format_double(r.alpha) << ',' << format_double(r.bregman) << ','
        << format_double(r.objective) << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
        << '\n';
  }
}

void write_summary_csv(const std::filesystem::path& path, const SweepResult& sweep) {
  auto out = open_out(path);
  out << "N,mean_bregman,stddev,fit_c,fit_beta,r_squared\n";
  for (size_t i = 0; i < sweep.n_values.size(); ++i) {
    out << sweep.n_values[i] << ',' << format_double(sweep.fit.per_n_means[Eigen::Index(i)])
        << ',' << format_double(sweep.fit.per_n_stddevs[Eigen::Index(i)]) << ','
        << format_double(sweep.fit.c) << ',' << format_double(sweep.fit.beta) << ','
        << format_double(sweep.fit.r_squared) << '\n';
  }
}

void write_rate_plot_svg(const std::filesystem::path& path, const SweepResult& sweep,
                         const std::string& title) {
  const int width = 720, height = 540;
  const double left = 80, right = width - 25, top = 50, bottom = height - 70;
  const auto& ns = sweep.n_values;
  const auto& means = sweep.fit.per_n_means;
  const auto& sds = sweep.fit.per_n_stddevs;

  double x_lo = std::log10(double(ns.front())), x_hi = std::log10(double(ns.back()));
  double y_lo = 1e300, y_hi = -1e300;
  for (Eigen::Index i = 0; i < means.size(); ++i) {
    const double lo_val = means[i] - sds[i] > 0.0 ? means[i] - sds[i] : means[i];
    y_lo = std::min(y_lo, std::log10(lo_val));
    y_hi = std::max(y_hi, std::log10(means[i] + sds[i]));
  }
  for (int n : {ns.front(), ns.back()}) {
    const double fit_v = sweep.fit.c * std::pow(double(n), sweep.fit.beta);
    y_lo = std::min(y_lo, std::log10(fit_v));
    y_hi = std::max(y_hi, std::log10(fit_v));
  }
  const double x_pad = 0.02 * (x_hi - x_lo), y_pad = 0.06 * std::max(y_hi - y_lo, 1e-3);
  x_lo -= x_pad;
  x_hi += x_pad;
  y_lo -= y_pad;
  y_hi += y_pad;

  auto px = [&](double n) {
    return left + (std::log10(n) - x_lo) / (x_hi - x_lo) * (right - left);
  };
  auto py = [&](double v) {
    return bottom - (std::log10(v) - y_lo) / (y_hi - y_lo) * (bottom - top);
  };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  // frame and gridlines
  out << "<rect x=\"" << svg_num(left) << "\" y=\"" << svg_num(top) << "\" width=\""
      << svg_num(right - left) << "\" height=\"" << svg_num(bottom - top)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int n : ns) {
    const double x = px(n);
    out << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(top) << "\" x2=\"" << svg_num(x)
        << "\" y2=\"" << svg_num(bottom) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << svg_num(x) << "\" y=\"" << svg_num(bottom + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << n
        << "</text>\n";
  }
  for (int dec = int(std::ceil(y_lo)); dec <= int(std::floor(y_hi)); ++dec) {
    const double y = py(std::pow(10.0, dec));
    out << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(y) << "\" x2=\""
        << svg_num(right) << "\" y2=\"" << svg_num(y) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << svg_num(left - 8) << "\" y=\"" << svg_num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" << dec
        << "</text>\n";
  }
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 20
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">N (sampled "
         "angles)</text>\n"
      << "<text x=\"22\" y=\"" << (top + bottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 22 "
      << (top + bottom) / 2 << ")\">mean symmetric Bregman distance</text>\n";

  // stddev whiskers
  for (Eigen::Index i = 0; i < means.size(); ++i) {
    if (sds[i] <= 0.0) continue;
    const double x = px(double(ns[size_t(i)]));
    const double hi_y = py(means[i] + sds[i]);
    const double lo_val = means[i] - sds[i];
    const double lo_y = lo_val > 0.0 ? py(lo_val) : bottom;
    out << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(lo_y) << "\" x2=\"" << svg_num(x)
        << "\" y2=\"" << svg_num(hi_y) << "\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n";
  }

  // mean polyline + markers
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (Eigen::Index i = 0; i < means.size(); ++i)
    out << svg_num(px(double(ns[size_t(i)]))) << ',' << svg_num(py(means[i])) << ' ';
  out << "\"/>\n";
  for (Eigen::Index i = 0; i < means.size(); ++i)
    out << "<circle cx=\"" << svg_num(px(double(ns[size_t(i)]))) << "\" cy=\""
        << svg_num(py(means[i])) << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";

  // fitted monomial, straight in log-log
  out << "<line x1=\"" << svg_num(px(double(ns.front()))) << "\" y1=\""
      << svg_num(py(sweep.fit.c * std::pow(double(ns.front()), sweep.fit.beta))) << "\" x2=\""
      << svg_num(px(double(ns.back()))) << "\" y2=\""
      << svg_num(py(sweep.fit.c * std::pow(double(ns.back()), sweep.fit.beta)))
      << "\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"7,5\"/>\n";

  char beta_buf[64];
  std::snprintf(beta_buf, sizeof(beta_buf), "fit c N^beta, beta = %.4f", sweep.fit.beta);
  out << "<line x1=\"" << svg_num(right - 190) << "\" y1=\"" << svg_num(top + 16) << "\" x2=\""
      << svg_num(right - 160) << "\" y2=\"" << svg_num(top + 16)
      << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << svg_num(right - 152) << "\" y=\"" << svg_num(top + 20)
      << "\" font-family=\"sans-serif\" font-size=\"12\">mean over realizations</text>\n"
      << "<line x1=\"" << svg_num(right - 190) << "\" y1=\"" << svg_num(top + 34) << "\" x2=\""
      << svg_num(right - 160) << "\" y2=\"" << svg_num(top + 34)
      << "\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"7,5\"/>\n"
      << "<text x=\"" << svg_num(right - 152) << "\" y=\"" << svg_num(top + 38)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << beta_buf << "</text>\n";
  out << "</svg>\n";
}

}  // namespace tomolearn
