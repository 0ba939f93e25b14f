#include "steiner/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>

namespace steiner {

double log_sum(std::span<const double> log_terms) {
  double mx = neg_inf;
  for (double t : log_terms) mx = std::max(mx, t);
  if (mx == neg_inf) return neg_inf;
  double s = 0.0;
  for (double t : log_terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

namespace logging {

Level level() {
  static const Level lv = [] {
    const char* e = std::getenv("STEINER_LOG_LEVEL");
    if (!e) return Level::warn;
    const std::string s(e);
    if (s == "error") return Level::error;
    if (s == "warn") return Level::warn;
    if (s == "info") return Level::info;
    if (s == "debug") return Level::debug;
    return Level::warn;
  }();
  return lv;
}

void emit(Level lv, const std::string& msg) {
  if (lv > level()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[" << names[static_cast<int>(lv)] << "] " << msg << "\n";
}

}  // namespace logging

}  // namespace steiner
