#pragma once

#include "pmarket/ledger.hpp"

#include <string>
#include <vector>

namespace pmarket::scenarios {

/// Replay of one of the worked market episodes against the ledger, with the
/// paper's quoted trade prices as exogenous market inputs.
struct ScenarioResult {
    std::string name;
    std::vector<std::string> trace;
    std::string headline_label;
    Rational headline;
    Rational expected;
    Rational tolerance;
    bool match = false;
    Ledger ledger;

    AuditReport audit() const { return ledger.check_invariants(); }
};

/// Names: s1, s2, s3, idol, vector-cfd. Throws DomainError on anything else.
ScenarioResult run_scenario(const std::string& name);

std::vector<std::string> scenario_names();

/// A delimiter-separated dataset with a header row; rendering is
/// deterministic byte-for-byte for identical parameters.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const; // comma separated, LF endings, header first
};

struct Fig2Params {
    long n = 100;
    Rational p = Rational(0);
    long m_min = 1;
    long m_max = 100;
};

struct Fig4Params {
    long n = 100;
    long m_min = 1;
    long m_max = 100;
    Rational p_min = Rational(0);
    Rational p_max = Rational(1);
    Rational p_step = Rational(1, 10);
};

struct Fig6Params {
    Rational lower = Rational(20);
    Rational upper = Rational(40);
    Rational step = Rational(1);
};

/// Total value kept by the hidden whale after burning down to m "+" shares.
Table fig2_dataset(const Fig2Params& params);
/// The same value over a (p, m) grid.
Table fig4_dataset(const Fig4Params& params);
/// Capped CFD prices over a price grid.
Table fig6_dataset(const Fig6Params& params);

} // namespace pmarket::scenarios
