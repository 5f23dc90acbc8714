#pragma once

#include "fostat/core.hpp"

namespace fostat {

/// Undirected graphs: {adj/2 symmetric}.
Signature graph_signature();

/// Rooted graphs/trees: {adj/2 symmetric, R/1 root mark}.
Signature rooted_signature();

/// Peeled rooted forests: {adj/2 symmetric, R/1, P/1 principal mark}.
Signature peeled_signature();

/// Rooted forests with oriented edges: {arc/2 directed, R/1 root mark}.
Signature rooted_forest_signature();

}  // namespace fostat
