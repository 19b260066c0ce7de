// Copyright 2026 The v1saliency Authors
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

#include "v1sal/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cmath>

#include "v1sal/error.hpp"

namespace v1sal {

namespace {

cv::Mat load(const std::string& path, int flags) {
  cv::Mat m;
  try {
    m = cv::imread(path, flags);
  } catch (const cv::Exception& e) {
    throw IoError("cannot decode '" + path + "': " + e.what());
  }
  if (m.empty()) throw IoError("cannot read image '" + path + "'");
  return m;
}

double scale_of(const cv::Mat& m) {
  switch (m.depth()) {
    case CV_8U: return 1.0 / 255.0;
    case CV_16U: return 1.0 / 65535.0;
    case CV_32F:
    case CV_64F: return 1.0;
    default: throw IoError("unsupported image sample type");
  }
}

void store(const cv::Mat& m, const std::string& path) {
  bool ok = false;
  try {
    ok = cv::imwrite(path, m);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write '" + path + "': " + e.what());
  }
  if (!ok) throw IoError("cannot write '" + path + "'");
}

unsigned char quantize(double v) {
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

RgbImage read_rgb(const std::string& path) {
  cv::Mat m = load(path, cv::IMREAD_ANYDEPTH | cv::IMREAD_COLOR);
  const double k = scale_of(m);
  cv::Mat d;
  m.convertTo(d, CV_64FC3, k);
  RgbImage img(d.cols, d.rows);
  for (int y = 0; y < d.rows; ++y) {
    const auto* row = d.ptr<cv::Vec3d>(y);
    for (int x = 0; x < d.cols; ++x) {
      img.b(x, y) = row[x][0];  // BGR order
      img.g(x, y) = row[x][1];
      img.r(x, y) = row[x][2];
    }
  }
  validate(img);
  return img;
}

Plane read_gray(const std::string& path) {
  cv::Mat m = load(path, cv::IMREAD_ANYDEPTH | cv::IMREAD_GRAYSCALE);
  cv::Mat d;
  m.convertTo(d, CV_64F, scale_of(m));
  Plane p(d.cols, d.rows);
  for (int y = 0; y < d.rows; ++y) std::copy_n(d.ptr<double>(y), d.cols, p.row(y));
  return p;
}

void write_rgb_png(const RgbImage& img, const std::string& path) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = m.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width(); ++x) {
      row[x] = cv::Vec3b(quantize(img.b(x, y)), quantize(img.g(x, y)), quantize(img.r(x, y)));
    }
  }
  store(m, path);
}

void write_gray_png(const Plane& p, const std::string& path) {
  cv::Mat m(p.height(), p.width(), CV_8UC1);
  for (int y = 0; y < p.height(); ++y) {
    auto* row = m.ptr<unsigned char>(y);
    for (int x = 0; x < p.width(); ++x) row[x] = quantize(p(x, y));
  }
  store(m, path);
}

void write_display_png(const Plane& p, const std::string& path) {
  const double lo = min_value(p), hi = max_value(p);
  Plane s(p.width(), p.height());
  if (hi > lo) {
    for (std::size_t i = 0; i < p.size(); ++i) s[i] = (p[i] - lo) / (hi - lo);
  }
  write_gray_png(s, path);
}

FixationSet fixations_from_png(const std::string& path, const std::string& image_id) {
  const Plane p = read_gray(path);
  FixationSet f{image_id, p.width(), p.height(), {}};
  for (int y = 0; y < p.height(); ++y)
    for (int x = 0; x < p.width(); ++x)
      if (p(x, y) > 0.0) f.points.push_back({x, y});
  return f;
}

}  // namespace v1sal
