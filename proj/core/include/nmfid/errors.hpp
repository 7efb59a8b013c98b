// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <stdexcept>
#include <string>

namespace nmfid {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class ZeroColumn : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class ResidualAboveTolerance : public Error {
 public:
  using Error::Error;
};

class CycleGuardExceeded : public Error {
 public:
  using Error::Error;
};

class ExplosionGuard : public Error {
 public:
  using Error::Error;
};

class UnsupportedRank : public Error {
 public:
  using Error::Error;
};

class InitSingular : public Error {
 public:
  using Error::Error;
};

class LpFailure : public Error {
 public:
  using Error::Error;
};

class NegativeData : public Error {
 public:
  using Error::Error;
};

class CertifyBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nmfid
