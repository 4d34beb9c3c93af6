#pragma once
// Shared fixtures for the unit tests: literal vector construction, the four
// education-survey probability columns, and a scratch-directory guard.

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include "ordineq/measures.hpp"

namespace testutil {

inline ordineq::Vec vec(std::initializer_list<double> values) {
  ordineq::Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Posterior-mean category proportions of the education fixtures shipped in
// data/. The 2014 column sums to 0.9999 as published; callers that need a
// unit sum renormalize.
inline ordineq::Vec edu_column(int year) {
  switch (year) {
    case 2001: return vec({0.5876, 0.1141, 0.1871, 0.0325, 0.0532, 0.0182, 0.0073});
    case 2006: return vec({0.5401, 0.1599, 0.2097, 0.0170, 0.0525, 0.0146, 0.0062});
    case 2014: return vec({0.4904, 0.1639, 0.2342, 0.0308, 0.0557, 0.0112, 0.0137});
    case 2017: return vec({0.4034, 0.1875, 0.2748, 0.0484, 0.0448, 0.0182, 0.0229});
  }
  throw std::logic_error("no such fixture year");
}

// Creates a fresh directory under the system temp dir and removes it on
// destruction, so tests can write files without polluting the tree.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("ordineq_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto file = path_ / name;
    std::ofstream out(file);
    out << content;
    return file;
  }

private:
  std::filesystem::path path_;
};

}  // namespace testutil
