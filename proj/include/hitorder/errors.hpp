#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hitorder {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

class RowSumError : public Error {
  public:
    RowSumError(std::size_t row, const std::string& sum)
        : Error("row " + std::to_string(row) + " sums to " + sum + ", expected 1"), row(row), sum(sum) {}
    std::size_t row;
    std::string sum;
};

class NegativeEntry : public Error {
  public:
    NegativeEntry(std::size_t i, std::size_t j)
        : Error("entry (" + std::to_string(i) + "," + std::to_string(j) + ") is outside [0,1]"), row(i), col(j) {}
    std::size_t row, col;
};

class IndexError : public Error {
  public:
    using Error::Error;
};

class TabooDegenerate : public Error {
  public:
    explicit TabooDegenerate(std::size_t row)
        : Error("row " + std::to_string(row) + " moves to the taboo state with probability 1"), row(row) {}
    std::size_t row;
};

class LengthMismatch : public Error {
  public:
    using Error::Error;
};

class SizeMismatch : public Error {
  public:
    using Error::Error;
};

class NotCoprime : public Error {
  public:
    using Error::Error;
};

/// `which` names the offending argument ("fast", "slow", ...).
class NotAbsorbing : public Error {
  public:
    explicit NotAbsorbing(std::string which)
        : Error("target state is not absorbing in the " + which + " matrix"), which(std::move(which)) {}
    std::string which;
};

class NotSkipFree : public Error {
  public:
    explicit NotSkipFree(std::string which)
        : Error("the " + which + " matrix is not skip-free"), which(std::move(which)) {}
    std::string which;
};

class Divergent : public Error {
  public:
    using Error::Error;
};

class EigenFailure : public Error {
  public:
    using Error::Error;
};

class DegenerateTail : public Error {
  public:
    using Error::Error;
};

class AlphabetTooSmall : public Error {
  public:
    using Error::Error;
};

class AlphabetMismatch : public Error {
  public:
    using Error::Error;
};

class WitnessInvalid : public Error {
  public:
    using Error::Error;
};

class NonTermination : public Error {
  public:
    using Error::Error;
};

}  // namespace hitorder
