#ifndef LOOGP_DATASET_HPP
#define LOOGP_DATASET_HPP

#include <Eigen/Dense>
#include <string>

namespace loogp {

/// Design points X (n rows, d columns) and observations Z (length n).
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd Z;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index d() const { return X.cols(); }

  /// Throws InvalidInputError on shape mismatch or non-finite entries.
  void validate() const;
};

/// Reads a dataset from CSV with header x1,...,xd,z. No missing values.
Dataset load_dataset_csv(const std::string& path);

/// Writes the x1,...,xd,z CSV format read by load_dataset_csv.
void save_dataset_csv(const Dataset& data, const std::string& path);

}  // namespace loogp

#endif  // LOOGP_DATASET_HPP
