#pragma once

#include <stdexcept>
#include <string>

namespace cowsettle {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed decimal text, lost precision or overflow of the fixed-point range.
class DecimalError : public Error {
 public:
  using Error::Error;
};

/// Invalid asset symbol or order tuple.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Price file parse failures, non-positive prices, duplicates and unpriced lookups.
class PriceError : public Error {
 public:
  enum class Kind { parse, non_positive, duplicate, unpriced, io };

  PriceError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A partial-fill target that exceeds the USD capacity of some leg.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Order sequences that violate the cyclic (or path) closure predicate.
class CycleError : public Error {
 public:
  using Error::Error;
};

class BridgeError : public Error {
 public:
  enum class Kind { no_bridge_needed, unclosable, non_cancelling };

  BridgeError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class SettlementError : public Error {
 public:
  enum class Kind { insufficient_liquidity, not_closed, stale_plan, io };

  SettlementError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// CSV ingestion failures (malformed rows, bad timestamps, strict-mode rejects).
class IngestError : public Error {
 public:
  using Error::Error;
};

}  // namespace cowsettle
