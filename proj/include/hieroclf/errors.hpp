#pragma once

#include <stdexcept>
#include <string>

namespace hieroclf {

/// File could not be opened or read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A corpus record could not be turned into a data point.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& cause)
      : std::runtime_error("line " + std::to_string(line) + ": " + cause),
        line_(line),
        cause_(cause) {}

  std::size_t line() const { return line_; }
  const std::string& cause() const { return cause_; }

 private:
  std::size_t line_;
  std::string cause_;
};

/// A token id outside the vocabulary was decoded.
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Prediction and gold label vectors disagree in length.
class LengthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model tensors or loss left the finite range (e.g. diverging learning rate).
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor shapes disagree with the model configuration.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hieroclf
