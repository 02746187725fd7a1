#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "loogp/dataset.hpp"
#include "loogp/errors.hpp"

using namespace loogp;

TEST_CASE("dataset: CSV round trip is exact") {
  SplitMix64 rng(701);
  Dataset data;
  data.X.resize(7, 3);
  data.Z.resize(7);
  for (Eigen::Index i = 0; i < 7; ++i) {
    for (Eigen::Index m = 0; m < 3; ++m) data.X(i, m) = standard_normal(rng);
    data.Z[i] = standard_normal(rng) * 1e-7;  // exercise exponent formatting
  }

  const std::string path = "/tmp/loogp_dataset_rt.csv";
  save_dataset_csv(data, path);
  const Dataset back = load_dataset_csv(path);
  CHECK(back.X == data.X);
  CHECK(back.Z == data.Z);
}

TEST_CASE("dataset: header and shape validation") {
  const std::string path = "/tmp/loogp_dataset_bad.csv";
  {
    std::ofstream out(path);
    out << "a,z\n0.1,1.0\n";
  }
  CHECK_THROWS_AS(load_dataset_csv(path), InvalidInputError);
  {
    std::ofstream out(path);
    out << "x1,x2,z\n0.1,0.2,1.0\n0.3,4.0\n";  // ragged row
  }
  CHECK_THROWS_AS(load_dataset_csv(path), InvalidInputError);
  {
    std::ofstream out(path);
    out << "x1,z\n0.1,nope\n";
  }
  CHECK_THROWS_AS(load_dataset_csv(path), InvalidInputError);
  CHECK_THROWS_AS(load_dataset_csv("/tmp/loogp_no_such_file.csv"), InvalidInputError);
}

TEST_CASE("dataset: non-finite entries rejected") {
  Dataset data;
  data.X.resize(2, 1);
  data.X << 0.0, 1.0;
  data.Z.resize(2);
  data.Z << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(data.validate(), InvalidInputError);
  data.Z[1] = 0.5;
  CHECK_NOTHROW(data.validate());
  data.Z.resize(3);
  CHECK_THROWS_AS(data.validate(), InvalidInputError);
}
