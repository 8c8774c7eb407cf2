/*
 * Copyright 2026 The semibal Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SEMIBAL_DATASET_IO_HPP
#define SEMIBAL_DATASET_IO_HPP

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "semibal/dataset.hpp"
#include "semibal/errors.hpp"

namespace semibal {

enum class Format { kCsv, kRawF32 };

inline Format format_from_string(std::string_view s) {
  if (s == "csv") return Format::kCsv;
  if (s == "raw-f32") return Format::kRawF32;
  throw UsageError("unknown format '" + std::string(s) +
                   "' (expected csv or raw-f32)");
}

inline std::string_view to_string(Format f) {
  return f == Format::kCsv ? "csv" : "raw-f32";
}

/// CSV layout: [id,] x0..x{d-1} [,label]. The label column is present exactly
/// for labeled roles. With a header row, a first column named "id" marks an
/// id column.
struct CsvOptions {
  bool header = false;
  bool id_column = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string row_error(std::size_t row, const std::string& what) {
  return "row " + std::to_string(row) + ": " + what;
}

inline double parse_real(std::string_view field, std::size_t row) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError(row_error(row, "cannot parse '" + std::string(field) + "' as a number"));
  }
  if (!std::isfinite(v)) throw DataError(row_error(row, "non-finite value"));
  return v;
}

inline long long parse_int(std::string_view field, std::size_t row) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError(row_error(row, "cannot parse '" + std::string(field) + "' as an integer"));
  }
  return v;
}

// Shortest text that parses back to exactly `v`.
inline void append_real(std::string& out, double v) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), r.ptr);
}

inline std::filesystem::path sidecar(const std::filesystem::path& p, const char* ext) {
  return std::filesystem::path(p.string() + ext);
}

template <class T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

inline std::vector<char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return std::vector<char>(std::istreambuf_iterator<char>(in), {});
}

inline VectorDataset load_csv(const std::filesystem::path& path, Role role,
                              std::size_t dimension, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  const bool labeled = is_labeled(role);
  bool id_column = opts.id_column;
  bool header_pending = opts.header;
  std::vector<EmbeddedSample> samples;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (header_pending) {
      header_pending = false;
      if (!fields.empty() && fields.front() == "id") id_column = true;
      continue;
    }
    const std::size_t expected = dimension + (labeled ? 1 : 0) + (id_column ? 1 : 0);
    if (fields.size() != expected) {
      throw DataError(row_error(row, "expected " + std::to_string(expected) +
                                         " columns (dimension " + std::to_string(dimension) +
                                         "), found " + std::to_string(fields.size())));
    }
    EmbeddedSample s;
    std::size_t col = 0;
    s.id = id_column ? parse_int(fields[col++], row) : static_cast<SampleId>(row);
    s.vector.reserve(dimension);
    for (std::size_t j = 0; j < dimension; ++j) s.vector.push_back(parse_real(fields[col++], row));
    if (labeled) {
      const long long l = parse_int(fields[col], row);
      if (l != 0 && l != 1) {
        throw DataError(row_error(row, "label must be 0 or 1, got " + std::to_string(l)));
      }
      s.label = static_cast<Label>(l);
    }
    samples.push_back(std::move(s));
    ++row;
  }
  return VectorDataset(dimension, role, std::move(samples));
}

inline VectorDataset load_raw_f32(const std::filesystem::path& path, Role role,
                                  std::size_t dimension) {
  const auto meta_path = sidecar(path, ".json");
  nlohmann::json meta;
  {
    std::ifstream in(meta_path);
    if (!in) throw DataError("missing metadata file " + meta_path.string());
    try {
      in >> meta;
    } catch (const nlohmann::json::exception& e) {
      throw DataError("bad metadata " + meta_path.string() + ": " + e.what());
    }
  }
  std::size_t count = 0;
  try {
    const auto meta_dim = meta.at("dimension").get<std::size_t>();
    if (meta_dim != dimension) {
      throw DataError("metadata declares dimension " + std::to_string(meta_dim) +
                      ", expected " + std::to_string(dimension));
    }
    count = meta.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad metadata " + meta_path.string() + ": " + e.what());
  }
  const auto base = meta_path.parent_path();
  const auto bytes = read_all(path);
  if (bytes.size() != count * dimension * sizeof(float)) {
    throw DataError(path.string() + ": expected " + std::to_string(count * dimension * 4) +
                    " bytes, found " + std::to_string(bytes.size()));
  }
  std::vector<char> labels;
  if (is_labeled(role)) {
    if (!meta.contains("labels")) {
      throw DataError(meta_path.string() + ": labeled role requires a label file");
    }
    labels = read_all(base / meta["labels"].get<std::string>());
    if (labels.size() != count) {
      throw DataError("label file holds " + std::to_string(labels.size()) + " labels for " +
                      std::to_string(count) + " samples");
    }
  }
  std::vector<SampleId> ids;
  if (meta.contains("ids")) {
    const auto raw = read_all(base / meta["ids"].get<std::string>());
    if (raw.size() != count * sizeof(std::int64_t)) throw DataError("id file size mismatch");
    ids.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::int64_t v;
      std::memcpy(&v, raw.data() + i * sizeof(v), sizeof(v));
      ids[i] = to_little_endian(v);
    }
  }
  const SampleId offset = meta.value("id_offset", SampleId{0});

  std::vector<EmbeddedSample> samples(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& s = samples[i];
    s.id = ids.empty() ? offset + static_cast<SampleId>(i) : ids[i];
    s.vector.resize(dimension);
    for (std::size_t j = 0; j < dimension; ++j) {
      float f;
      std::memcpy(&f, bytes.data() + (i * dimension + j) * sizeof(float), sizeof(float));
      f = to_little_endian(f);
      if (!std::isfinite(f)) throw DataError(row_error(i, "non-finite value"));
      s.vector[j] = f;
    }
    if (is_labeled(role)) {
      const auto l = static_cast<unsigned char>(labels[i]);
      if (l > 1) throw DataError(row_error(i, "label must be 0 or 1, got " + std::to_string(l)));
      s.label = static_cast<Label>(l);
    }
  }
  return VectorDataset(dimension, role, std::move(samples));
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace detail

/// Reads a dataset. Row order is preserved; ids are 0..n-1 in file order
/// unless the file carries ids. Errors name the offending row (0-based,
/// header excluded).
inline VectorDataset load_dataset(const std::filesystem::path& path, Format format, Role role,
                                  std::size_t dimension, const CsvOptions& csv = {}) {
  if (dimension == 0) throw UsageError("dimension must be positive");
  return format == Format::kCsv ? detail::load_csv(path, role, dimension, csv)
                                : detail::load_raw_f32(path, role, dimension);
}

/// Writes a dataset. raw-f32 stores single precision and writes
/// `<path>.json` metadata plus `<path>.labels` for labeled roles and
/// `<path>.ids` when ids are not a contiguous range.
inline void save_dataset(const VectorDataset& ds, const std::filesystem::path& path,
                         Format format, const CsvOptions& csv = {}) {
  const bool labeled = is_labeled(ds.role());
  if (format == Format::kCsv) {
    std::string out;
    if (csv.header) {
      if (csv.id_column) out += "id,";
      for (std::size_t j = 0; j < ds.dimension(); ++j) {
        if (j) out += ',';
        out += 'x' + std::to_string(j);
      }
      if (labeled) out += ",label";
      out += '\n';
    }
    for (const auto& s : ds) {
      if (csv.id_column) out += std::to_string(s.id) + ',';
      for (std::size_t j = 0; j < s.vector.size(); ++j) {
        if (j) out += ',';
        detail::append_real(out, s.vector[j]);
      }
      if (labeled) out += ',' + std::to_string(label_value(*s.label));
      out += '\n';
    }
    detail::write_file(path, out);
    return;
  }

  std::string data;
  data.reserve(ds.size() * ds.dimension() * sizeof(float));
  for (const auto& s : ds) {
    for (double v : s.vector) {
      const float f = detail::to_little_endian(static_cast<float>(v));
      data.append(reinterpret_cast<const char*>(&f), sizeof(f));
    }
  }
  detail::write_file(path, data);

  nlohmann::json meta;
  meta["dimension"] = ds.dimension();
  meta["count"] = ds.size();
  meta["role"] = std::string(to_string(ds.role()));
  if (labeled) {
    std::string labels;
    for (const auto& s : ds) labels.push_back(static_cast<char>(label_value(*s.label)));
    const auto label_path = detail::sidecar(path, ".labels");
    detail::write_file(label_path, labels);
    meta["labels"] = label_path.filename().string();
  }
  bool contiguous = true;
  const SampleId first = ds.empty() ? 0 : ds[0].id;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i].id != first + static_cast<SampleId>(i)) contiguous = false;
  }
  if (contiguous) {
    if (first != 0) meta["id_offset"] = first;
  } else {
    std::string ids;
    for (const auto& s : ds) {
      const std::int64_t v = detail::to_little_endian(static_cast<std::int64_t>(s.id));
      ids.append(reinterpret_cast<const char*>(&v), sizeof(v));
    }
    const auto id_path = detail::sidecar(path, ".ids");
    detail::write_file(id_path, ids);
    meta["ids"] = id_path.filename().string();
  }
  detail::write_file(detail::sidecar(path, ".json"), meta.dump(2) + "\n");
}

}  // namespace semibal

#endif  // SEMIBAL_DATASET_IO_HPP
