#pragma once

#include <stdexcept>
#include <string>

namespace circkde {

//! Malformed or unusable input data (files, columns, samples).
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! A numerical procedure could not deliver a result at the requested
//! accuracy (overflow, suspected divergence, insufficient truncation).
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace circkde
