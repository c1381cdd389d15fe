#include "cluerag/vector/embedding.hpp"

#include <cmath>
#include <string>

#include "cluerag/error.hpp"

namespace cluerag {

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) {
    throw InvariantError("cosine dimension mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  return cosine_similarity(a.data(), b.data(), a.size());
}

double cosine_similarity(const float* a, const float* b, std::size_t n) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a[i];
    const double y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) {
    return 0.0;
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

void subtract_in_place(Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) {
    throw InvariantError("subtract dimension mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] -= b[i];
  }
}

double l2_norm(const Embedding& v) {
  double s = 0.0;
  for (const float x : v) {
    s += static_cast<double>(x) * static_cast<double>(x);
  }
  return std::sqrt(s);
}

}  // namespace cluerag
