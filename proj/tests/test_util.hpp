#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace insole::testing {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("insole_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string pressure_header_line() {
  std::string h = "t_ms";
  char buf[8];
  for (char side : {'L', 'R'}) {
    for (int i = 0; i < 18; ++i) {
      std::snprintf(buf, sizeof buf, ",%c%02d", side, i);
      h += buf;
    }
  }
  return h + "\n";
}

/// A pressure CSV row with every channel at `fill` except channel `hot`.
inline std::string pressure_row(long t, double fill, int hot = -1, double hot_value = 0.0) {
  std::string row = std::to_string(t);
  for (int c = 0; c < 36; ++c) row += "," + std::to_string(c == hot ? hot_value : fill);
  return row + "\n";
}

}  // namespace insole::testing
