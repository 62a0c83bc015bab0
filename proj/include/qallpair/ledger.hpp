#pragma once

#include <cstdint>

namespace qap {

/// Per-run accounting of consumed quantum resources. Counters only grow.
/// A ledger is owned by one run and passed explicitly; concurrent runs use
/// separate ledgers.
struct ResourceLedger {
  std::uint64_t grover_iterations = 0;
  std::uint64_t oracle_queries = 0;
  std::uint64_t measurement_shots = 0;
  std::uint64_t qpe_qubits_used = 0;

  ResourceLedger& operator+=(const ResourceLedger& other) {
    grover_iterations += other.grover_iterations;
    oracle_queries += other.oracle_queries;
    measurement_shots += other.measurement_shots;
    qpe_qubits_used += other.qpe_qubits_used;
    return *this;
  }
};

}  // namespace qap
