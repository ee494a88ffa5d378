#pragma once

#include "pmarket/ledger.hpp"

#include <filesystem>

namespace pmarket::io {

/// Canonical snapshot text (stable key order, 2-space indent, LF, trailing
/// newline). load(save(x)) == x and save(load(s)) == s byte for byte.
std::string snapshot_text(const Ledger& ledger);
void save_snapshot(const Ledger& ledger, const std::filesystem::path& path);
Ledger load_snapshot(const std::filesystem::path& path);

/// Script files drive the ledger with named-argument operations. Events and
/// vector specs may be declared once under "events" / "specs" and referenced
/// by alias anywhere an op takes an event or spec.
Ledger run_script(const nlohmann::json& script);
Ledger run_script_file(const std::filesystem::path& path);

/// Applies one operation (script or tx-log form) to the ledger.
void apply_op(Ledger& ledger, const nlohmann::json& op,
              const std::map<std::string, EventId>& event_aliases = {},
              const std::map<std::string, VectorSpec>& spec_aliases = {});

/// Rebuilds a ledger from genesis endowments and a transaction log; the
/// result must equal the live ledger that produced the log.
Ledger replay(const std::map<Address, Rational>& genesis, const std::vector<nlohmann::json>& tx_log);

} // namespace pmarket::io
