"""The derived-vs-printed audit must reproduce the known defect map of the
source text: which displays are algebraically consistent and which are not.
"""

import numpy as np
import pytest

from rabi_spectra import validate_params, normalize_params
from rabi_spectra.audit import (
    audit_appendix,
    audit_asymmetric_tables,
    audit_bcf_tables,
    audit_fourth_order_operator,
    audit_general_table,
    audit_recurrences,
    audit_two_photon_table,
    diagnose_report,
    residual_suite,
)

P_ASYM = validate_params(1.0, 0.4, 0.15, 0.6, 0.0)
P_GEN = validate_params(1.0, 0.3, 0.1, 0.2, 0.1)


@pytest.fixture(scope="module")
def rec_entries():
    return {e["name"]: e for e in audit_recurrences(P_ASYM, -0.1, P_GEN, 0.2)}


def test_recurrence_match_map(rec_entries):
    expected = {
        "che-series-origin": False,   # missing factor n in the printed weight
        "che-series-one": True,
        "five-term-series": True,     # composed B2 = 0 hides the misplacement
        "nine-term-series": True,     # subscript normalized per the audit note
        "bcf-series-origin": False,   # sign of beta2 term and of n(n-1)
        "bcf-series-one": True,       # alpha2-for-alpha1 typo multiplies zero
        "bch-series": True,
    }
    assert {k: v["match"] for k, v in rec_entries.items()} == expected


def test_mismatches_logged_with_both_forms(rec_entries):
    for name in ("che-series-origin", "bcf-series-origin"):
        bad = [it for it in rec_entries[name]["items"] if not it["match"]]
        assert bad, name
        for it in bad:
            assert it["derived"] and it["printed"]
            assert it["derived"] != it["printed"]


def test_che_origin_discrepancy_is_the_missing_n(rec_entries):
    # derived a_n weight has a linear term, printed has none
    entry = rec_entries["che-series-origin"]
    bad = {it["lag"]: it for it in entry["items"] if not it["match"]}
    assert set(bad) == {"a[n]"}
    assert "*n " in bad["a[n]"]["derived"] or "*n" in bad["a[n]"]["derived"]
    assert "*n " not in bad["a[n]"]["printed"].replace("*n^2", "")


def test_operator_audit_detects_missing_product_rule_terms():
    entry = audit_fourth_order_operator(P_GEN, 0.2)
    assert not entry["match"]
    bad = {it["lag"] for it in entry["items"] if not it["match"]}
    assert bad == {"phi^(1)", "phi^(2)"}


def test_general_table_audit():
    entry = audit_general_table(P_GEN, 0.17)
    bad = {it["lag"] for it in entry["items"] if not it["match"]}
    assert bad == {"B1", "B2", "B3", "C1", "C2", "C3", "C4", "D1"}


def test_two_photon_table_audit_detects_delta_sign_and_lambda_power():
    entry = audit_two_photon_table(P_GEN, 0.2)
    bad = {it["lag"] for it in entry["items"] if not it["match"]}
    assert "C1" in bad     # the delta^2 sign
    assert "C2" in bad     # the lambda power
    assert "delta^2" in entry["note"]


def test_asymmetric_table_audit():
    entry = audit_asymmetric_tables(P_ASYM, -0.1)
    bad = {it["lag"] for it in entry["items"] if not it["match"]}
    assert bad == {"A1", "A3", "k_plus", "k_minus"}


def test_bcf_table_audit():
    entry = audit_bcf_tables(P_GEN, 0.2)
    by = {it["lag"]: it["match"] for it in entry["items"]}
    assert by["B2"] and by["B3"]          # these printed entries are correct
    assert not by["q^2"]
    assert not by["B1"]                   # delta^2 sign
    assert not by["beta1(beta+)"]         # missing /q on the odd part


def test_appendix_audit():
    nb = normalize_params(P_GEN, 0.2)
    entries = {e["name"]: e for e in audit_appendix(nb)}
    assert not entries["appendix-exact-c"]["match"]
    bad = {it["lag"] for it in entries["appendix-exact-c"]["items"]
           if not it["match"]}
    assert bad == {"c4"}
    pf = entries["appendix-partial-fractions"]
    by = {it["lag"]: it["match"] for it in pf["items"]}
    assert by["alpha1"] and by["alpha2"] and by["beta1"] and by["beta2"]
    assert by["gamma1"] and by["gamma2"]
    assert not by["gamma3"] and not by["delta1"] and not by["delta2"]
    nf = entries["appendix-normal-form"]
    assert not nf["match"]

    nb0 = normalize_params(validate_params(1.0, 0.3, 0.1, 0.0, 0.1), 0.2)
    entries0 = {e["name"]: e for e in audit_appendix(nb0)}
    assert not entries0["appendix-bch-g0"]["match"]


def test_residual_suite_green_and_corruptible():
    rows = residual_suite(n_draws=3, seed=12)
    assert rows and all(r["ok"] for r in rows)
    bad = residual_suite(n_draws=1, seed=12, corrupt=True)
    assert any(not r["ok"] for r in bad)


def test_diagnose_report_shape():
    rep = diagnose_report(P_GEN, n_draws=2)
    assert rep["residuals_ok"]
    assert "che-series-origin" in rep["mismatched_entries"]
    assert "bcf-series-origin" in rep["mismatched_entries"]
    assert len(rep["oracle_convergence"]["deltas"]) == 10
    names = {e["name"] for e in rep["audit"]}
    assert {"five-term-series", "nine-term-series",
            "general-coefficient-table"} <= names
