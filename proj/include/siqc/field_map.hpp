#pragma once

#include <vector>

#include <Eigen/Core>

namespace siqc {

struct FieldSample {
  Eigen::Vector3d point;
  double Bz;     // T
  double dBzdz;  // T/m
};

using FieldMap = std::vector<FieldSample>;

}  // namespace siqc
