#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sfsgrp {

  // Base of every exception thrown by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  class InvalidArgument : public Error {
   public:
    using Error::Error;
  };

  // A configured search or enumeration limit was hit before the computation
  // finished. Never used to signal a mathematical negative.
  class BudgetExceeded : public Error {
   public:
    using Error::Error;
  };

  class ParseError : public Error {
   public:
    ParseError(std::string const& msg, std::size_t line, std::size_t column)
        : Error(msg + " at line " + std::to_string(line) + ", column "
                + std::to_string(column)),
          _line(line),
          _column(column) {}

    std::size_t line() const noexcept {
      return _line;
    }
    std::size_t column() const noexcept {
      return _column;
    }

   private:
    std::size_t _line;
    std::size_t _column;
  };

}  // namespace sfsgrp
