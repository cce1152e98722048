#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zmix/matrix.hpp"

namespace zmix::io {

/// Malformed or truncated input. `offset()` is the byte position the problem was found at.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

enum class DType { f32, f64 };

/// Self-describing tensor: one JSON header line
///   {"dtype":"f32"|"f64","shape":[...],"order":"row-major","endian":"little"}\n
/// followed by the raw little-endian elements in row-major order.
struct Tensor {
  std::vector<std::size_t> shape;
  std::variant<std::vector<float>, std::vector<double>> data;

  DType dtype() const noexcept { return data.index() == 0 ? DType::f32 : DType::f64; }
  std::size_t element_count() const noexcept;

  template <typename T>
  static Tensor from_matrix(const Matrix<T>& m);

  /// First axis becomes rows, remaining axes are flattened into columns.
  /// Elements are converted to T if the stored dtype differs.
  template <typename T>
  Matrix<T> to_matrix() const;
};

std::string encode_tensor(const Tensor& t);
Tensor decode_tensor(std::string_view bytes);

void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

template <typename T>
void write_tensor(const std::filesystem::path& path, const Matrix<T>& m) {
  write_tensor(path, Tensor::from_matrix(m));
}

/// One non-negative integer per line, optional "label" header line.
std::vector<std::size_t> parse_labels(std::string_view text);
std::vector<std::size_t> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const std::vector<std::size_t>& labels);

/// Writes to a temporary sibling file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace zmix::io
