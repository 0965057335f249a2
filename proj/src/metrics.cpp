#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dagopt/harness.hpp"

namespace dagopt {

std::vector<double> delta_sol(std::span<const double> objectives) {
  double best = std::numeric_limits<double>::infinity();
  for (double f : objectives) {
    if (std::isfinite(f)) best = std::min(best, f);
  }
  if (!std::isfinite(best)) throw std::invalid_argument("delta_sol: no finite objective");
  std::vector<double> out;
  out.reserve(objectives.size());
  for (double f : objectives) {
    if (!std::isfinite(f)) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    } else if (best == 0.0) {
      out.push_back(100.0 * (f - best));
    } else {
      out.push_back(100.0 * (f - best) / best);
    }
  }
  return out;
}

TruePositive true_positive(const BinaryAdjacency& z_hat, const BinaryAdjacency& z_true) {
  if (z_hat.size() != z_true.size()) throw DimensionError("true_positive: size mismatch");
  const auto arcs = z_true.arcs();
  if (arcs.empty()) throw std::invalid_argument("true_positive: empty true arc set");
  std::size_t directed = 0;
  std::size_t undirected = 0;
  for (const auto& [j, k] : arcs) {
    if (z_hat(j, k)) ++directed;
    if (z_hat(j, k) || z_hat(k, j)) ++undirected;
  }
  const double total = static_cast<double>(arcs.size());
  return {static_cast<double>(directed) / total, static_cast<double>(undirected) / total};
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kGd: return "GD";
    case Method::kIr: return "IR";
    case Method::kGd10: return "GD10";
    case Method::kIr10: return "IR10";
    case Method::kExact: return "EXACT";
    case Method::kMipTo: return "MIPto-export";
    case Method::kMipIn: return "MIPin-export";
    case Method::kMipCp: return "MIPcp-export";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t.size() > 7 && t.ends_with("-export")) t.resize(t.size() - 7);
  if (t == "gd") return Method::kGd;
  if (t == "ir") return Method::kIr;
  if (t == "gd10") return Method::kGd10;
  if (t == "ir10") return Method::kIr10;
  if (t == "exact") return Method::kExact;
  if (t == "mipto") return Method::kMipTo;
  if (t == "mipin") return Method::kMipIn;
  if (t == "mipcp") return Method::kMipCp;
  throw std::invalid_argument("unknown method: " + text);
}

bool is_mip(Method method) {
  return method == Method::kMipTo || method == Method::kMipIn || method == Method::kMipCp;
}

std::vector<std::uint64_t> method_seeds(Method method, std::uint64_t seed) {
  if (method == Method::kGd10 || method == Method::kIr10) return derive_seeds(seed, 10);
  return {seed};
}

}  // namespace dagopt
