#include "zmix/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include <unistd.h>

#include "json.hpp"

namespace zmix::io {

namespace {

template <typename T>
void append_le(std::string& out, const std::vector<T>& values) {
  const std::size_t start = out.size();
  out.resize(start + values.size() * sizeof(T));
  std::memcpy(out.data() + start, values.data(), values.size() * sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::reverse(out.begin() + start + i * sizeof(T), out.begin() + start + (i + 1) * sizeof(T));
    }
  }
}

template <typename T>
std::vector<T> read_le(std::string_view payload, std::size_t count) {
  std::vector<T> values(count);
  std::memcpy(values.data(), payload.data(), count * sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* bytes = reinterpret_cast<unsigned char*>(values.data());
    for (std::size_t i = 0; i < count; ++i) std::reverse(bytes + i * sizeof(T), bytes + (i + 1) * sizeof(T));
  }
  return values;
}

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (const auto s : shape) n *= s;
  return n;
}

// Element count times element size, or nullopt on overflow.
std::optional<std::size_t> checked_bytes(const std::vector<std::size_t>& shape, std::size_t elem) {
  std::size_t n = elem;
  for (const auto s : shape) {
    if (__builtin_mul_overflow(n, s, &n)) return std::nullopt;
  }
  return n;
}

}  // namespace

std::size_t Tensor::element_count() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, data);
}

template <typename T>
Tensor Tensor::from_matrix(const Matrix<T>& m) {
  return Tensor{{m.rows(), m.cols()}, m.values()};
}

template <typename T>
Matrix<T> Tensor::to_matrix() const {
  if (shape.empty()) throw std::invalid_argument("scalar tensor has no rows");
  const std::size_t rows = shape.front();
  std::size_t cols = 1;
  for (std::size_t i = 1; i < shape.size(); ++i) cols *= shape[i];
  return std::visit(
      [&](const auto& v) {
        std::vector<T> out(v.begin(), v.end());
        return Matrix<T>(rows, cols, std::move(out));
      },
      data);
}

template Tensor Tensor::from_matrix<float>(const Matrix<float>&);
template Tensor Tensor::from_matrix<double>(const Matrix<double>&);
template Matrix<float> Tensor::to_matrix<float>() const;
template Matrix<double> Tensor::to_matrix<double>() const;

std::string encode_tensor(const Tensor& t) {
  if (product(t.shape) != t.element_count()) {
    throw std::invalid_argument("tensor shape does not match its element count");
  }
  nlohmann::ordered_json header;
  header["dtype"] = t.dtype() == DType::f32 ? "f32" : "f64";
  header["shape"] = t.shape;
  header["order"] = "row-major";
  header["endian"] = "little";
  std::string out = header.dump();
  out.push_back('\n');
  std::visit([&](const auto& v) { append_le(out, v); }, t.data);
  return out;
}

Tensor decode_tensor(std::string_view bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string_view::npos) {
    throw FormatError("tensor header is not terminated by a newline", bytes.size());
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, newline));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed tensor header: ") + e.what(),
                      e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!header.is_object()) throw FormatError("tensor header is not a JSON object", 0);

  auto field = [&](const char* key) -> const nlohmann::json& {
    const auto it = header.find(key);
    if (it == header.end()) throw FormatError(std::string("tensor header lacks \"") + key + "\"", 0);
    return *it;
  };
  const auto& dtype = field("dtype");
  const auto& shape_json = field("shape");
  const auto& order = field("order");
  const auto& endian = field("endian");
  if (!dtype.is_string() || (dtype != "f32" && dtype != "f64")) {
    throw FormatError("unsupported dtype " + dtype.dump(), 0);
  }
  if (order != "row-major") throw FormatError("unsupported order " + order.dump(), 0);
  if (endian != "little") throw FormatError("unsupported endian " + endian.dump(), 0);
  if (!shape_json.is_array()) throw FormatError("shape must be an array", 0);

  Tensor t;
  for (const auto& s : shape_json) {
    if (!s.is_number_unsigned()) throw FormatError("shape entries must be non-negative integers", 0);
    t.shape.push_back(s.get<std::size_t>());
  }

  const std::size_t elem = dtype == "f32" ? sizeof(float) : sizeof(double);
  const auto total = checked_bytes(t.shape, elem);
  if (!total) throw FormatError("tensor shape overflows the addressable size", 0);
  const std::size_t count = product(t.shape);
  const std::size_t payload_start = newline + 1;
  const std::size_t expected = *total;
  const std::size_t actual = bytes.size() - payload_start;
  if (actual != expected) {
    throw FormatError("payload length mismatch: expected " + std::to_string(expected) +
                          " bytes, got " + std::to_string(actual),
                      payload_start + std::min(actual, expected));
  }
  const auto payload = bytes.substr(payload_start);
  if (elem == sizeof(float)) {
    t.data = read_le<float>(payload, count);
  } else {
    t.data = read_le<double>(payload, count);
  }
  return t;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                             ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  write_file_atomic(path, encode_tensor(t));
}

Tensor read_tensor(const std::filesystem::path& path) { return decode_tensor(read_file(path)); }

std::vector<std::size_t> parse_labels(std::string_view text) {
  std::vector<std::size_t> labels;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (first && line == "label") {
      first = false;
      pos = end + 1;
      continue;
    }
    first = false;
    if (!line.empty()) {
      std::size_t value = 0;
      const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
      if (ec != std::errc{} || ptr != line.data() + line.size()) {
        throw FormatError("label line is not a non-negative integer: '" + std::string(line) + "'",
                          pos);
      }
      labels.push_back(value);
    }
    pos = end + 1;
  }
  return labels;
}

std::vector<std::size_t> read_labels(const std::filesystem::path& path) {
  return parse_labels(read_file(path));
}

void write_labels(const std::filesystem::path& path, const std::vector<std::size_t>& labels) {
  std::string text = "label\n";
  for (const auto l : labels) {
    text += std::to_string(l);
    text.push_back('\n');
  }
  write_file_atomic(path, text);
}

}  // namespace zmix::io
