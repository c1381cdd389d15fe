#pragma once

#include <cstddef>
#include <vector>

namespace cluerag {

using Embedding = std::vector<float>;

// Cosine similarity with double accumulation. Either vector having zero
// norm gives 0.0. Dimension mismatch is an error.
double cosine_similarity(const Embedding& a, const Embedding& b);

// Same computation over raw rows of a flat matrix; both overloads share one
// accumulation order so their results are bit-identical.
double cosine_similarity(const float* a, const float* b, std::size_t n);

// Subtracts b from a in place (residual query updates).
void subtract_in_place(Embedding& a, const Embedding& b);

double l2_norm(const Embedding& v);

}  // namespace cluerag
