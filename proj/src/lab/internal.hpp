#pragma once

#include "phlab/lab/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace phlab {

/// Independent stream seed for one experiment of a scenario (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using nlohmann::json;

// Typed field access on one JSON object; every key must be consumed.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "must be an object");
  }

  /// Rejects keys that were never read.
  void done() const {
    for (const auto& [k, v] : obj_.items())
      if (!used_.count(k)) fail(path_ + "." + k, "unknown field");
  }

  bool has(const std::string& k) const { return obj_.contains(k); }

  const json& get(const std::string& k) {
    if (!obj_.contains(k)) fail(path_ + "." + k, "missing required field");
    used_.insert(k);
    return obj_.at(k);
  }

  std::string where(const std::string& k) const { return path_ + "." + k; }

  double real(const std::string& k, double lo, double hi) {
    const json& v = get(k);
    if (!v.is_number()) fail(where(k), "must be a number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi)) range(k, lo, hi);
    return x;
  }
  double real(const std::string& k, double lo, double hi, double fallback) {
    return has(k) ? real(k, lo, hi) : fallback;
  }

  long long integer(const std::string& k, long long lo, long long hi) {
    const json& v = get(k);
    if (!v.is_number_integer()) fail(where(k), "must be an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi) range(k, static_cast<double>(lo), static_cast<double>(hi));
    return x;
  }
  long long integer(const std::string& k, long long lo, long long hi, long long fallback) {
    return has(k) ? integer(k, lo, hi) : fallback;
  }

  std::uint64_t seed(const std::string& k) {
    const json& v = get(k);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      fail(where(k), "must be a non-negative 64-bit integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& k, bool fallback) {
    if (!has(k)) return fallback;
    const json& v = get(k);
    if (!v.is_boolean()) fail(where(k), "must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& k, const std::string& fallback) {
    if (!has(k)) return fallback;
    const json& v = get(k);
    if (!v.is_string()) fail(where(k), "must be a string");
    return v.get<std::string>();
  }

  std::vector<double> reals(const std::string& k, double lo, double hi, std::size_t min_len, std::size_t max_len) {
    const json& v = get(k);
    if (!v.is_array() || v.size() < min_len || v.size() > max_len)
      fail(where(k), "must be an array of " + std::to_string(min_len) + ".." + std::to_string(max_len) + " numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(where(k), "entries must be numbers");
      const double x = e.get<double>();
      if (!(x >= lo && x <= hi)) range(k, lo, hi);
      out.push_back(x);
    }
    return out;
  }

  std::vector<int> ints(const std::string& k, int lo, int hi, std::size_t min_len, std::size_t max_len) {
    const json& v = get(k);
    if (!v.is_array() || v.size() < min_len || v.size() > max_len)
      fail(where(k), "must be an array of " + std::to_string(min_len) + ".." + std::to_string(max_len) + " integers");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) fail(where(k), "entries must be integers");
      const long long x = e.get<long long>();
      if (x < lo || x > hi) range(k, lo, hi);
      out.push_back(static_cast<int>(x));
    }
    return out;
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ScenarioError(where + ": " + what);
  }

 private:
  [[noreturn]] void range(const std::string& k, double lo, double hi) const {
    std::ostringstream os;
    os << "out of range [" << lo << ", " << hi << "]";
    fail(where(k), os.str());
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

/// Strict parse of an entropy parameter block for a state of the given dimension.
EntropyParams parse_entropy_params(const json& v, int state_dim, const std::string& path);

/// "jittered grid 64x64x64, shuffled".
std::string sampling_label(const std::vector<int>& grid);

/// Six-significant-digit rendering for verdict names ("0.005", "1.7").
std::string short_number(double x);

}  // namespace phlab
