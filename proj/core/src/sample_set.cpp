#include "selsample/sample_set.hpp"

namespace selsample {

bool contains_point(SampleView z, const Point& x) {
  for (const LabeledSample& s : z) {
    if (s.point == x) return true;
  }
  return false;
}

}  // namespace selsample
