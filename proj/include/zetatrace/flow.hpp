#pragma once

namespace zetatrace {

/// Traversal direction of a closed orbit of the scaling flow. Minus carries
/// the dissymmetric transversal factor q^{-k d}; Plus carries factor 1.
enum class FlowDirection { Plus, Minus };

}  // namespace zetatrace
