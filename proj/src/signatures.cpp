#include "fostat/signatures.hpp"

namespace fostat {

Signature graph_signature() { return {{{"adj", 2, true}}}; }

Signature rooted_signature() { return {{{"adj", 2, true}, {"R", 1, false}}}; }

Signature peeled_signature() {
  return {{{"adj", 2, true}, {"R", 1, false}, {"P", 1, false}}};
}

Signature rooted_forest_signature() { return {{{"arc", 2, false}, {"R", 1, false}}}; }

}  // namespace fostat
