#pragma once

#include <stdexcept>
#include <string>

namespace causalnet {

// bad invocation or configuration (CLI exit code 1)
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// invalid or inconsistent input data (CLI exit code 2)
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// model fitting failed (CLI exit code 3)
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a graph statistic has no value on this graph (e.g. reciprocity of an
// empty graph); CUG machinery catches this to record a missing draw
struct stat_undefined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace causalnet
