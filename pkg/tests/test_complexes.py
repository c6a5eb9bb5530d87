import json

import pytest

from feforms.complexes import (
    Certificate,
    ComplexSpec,
    certificates_to_jsonl,
    chain_degrees,
    check_complex,
    check_direct_sum,
    check_exactness,
    check_homotopy,
    check_origin_independence,
    check_S_properties,
    check_S_vector_proxies,
    summary_tsv,
)
from feforms.forms import PolyForm, exterior_derivative, koszul
from feforms.spaces import basis_H


def test_chain_degrees():
    assert chain_degrees("Pminus", 2, 3) == [2, 2, 2, 2]
    assert chain_degrees("P", 2, 3) == [2, 1, 0, None]
    assert chain_degrees("S", 2, 3) == [2, 1, None, None]
    assert chain_degrees("Qminus", 1, 2) == [1, 1, 1]


def test_complex_spec():
    spec = ComplexSpec("Qminus", 2, 1)
    assert spec.element == "box"
    assert spec.degrees == [1, 1, 1]
    assert check_complex(spec).passed
    assert check_exactness(ComplexSpec("Pminus", 2, 2)).passed
    with pytest.raises(ValueError):
        ComplexSpec("S", 2, 0)
    with pytest.raises(ValueError):
        ComplexSpec("P", 2, 2, "box")


def test_check_complex_families():
    assert check_complex("Pminus", 3, 2).passed
    assert check_complex("P", 2, 3).passed
    assert check_complex("S", 3, 3).passed
    assert check_complex("Qminus", 3, 2).passed


def test_exactness_pdr():
    cert = check_exactness("P", 2, 3)
    assert cert.passed
    assert cert.witness["dims"] == [10, 12, 3]
    assert cert.witness["ranks"] == [9, 3, 0]
    assert cert.witness["nullities"] == [1, 9, 3]


def test_exactness_pmdr_and_koszul():
    assert check_exactness("Pminus", 3, 2).passed
    assert check_exactness("koszul", 2, 3).passed
    cert = check_exactness("koszul", 3, 2)
    assert cert.passed
    assert cert.witness["conditions"]["injective_at_top"]


def test_homotopy_trivial_cases():
    # constants: factor 0
    assert check_homotopy(2, 0, 0).passed
    # r=0, k=1: (contract d + d contract) acts as the identity
    cert = check_homotopy(2, 0, 1)
    assert cert.passed and cert.witness["factor"] == 1
    # hand check: x2 dx1 maps to 2 x2 dx1
    w = PolyForm.monomial(2, (0, 1), (1,))
    lhs = koszul(exterior_derivative(w)) + exterior_derivative(koszul(w))
    assert lhs == 2 * w


def test_homotopy_full_range_small():
    for n in (1, 2, 3):
        for r in (0, 1, 2, 3):
            for k in range(n + 1):
                assert check_homotopy(n, r, k).passed


def test_homotopy_with_trials():
    cert = check_homotopy(3, 2, 1, trials=5)
    assert cert.passed


def test_direct_sum():
    cert = check_direct_sum(2, 1, 1)
    assert cert.passed
    assert cert.witness == {"dim": 4, "rank_kappa": 1, "rank_d": 3,
                            "rank_union": 4}
    # k = 0: no derivative part, contraction hits everything
    cert = check_direct_sum(3, 2, 0)
    assert cert.passed and cert.witness["rank_d"] == 0
    # k = n: no contraction part
    cert = check_direct_sum(2, 2, 2)
    assert cert.passed and cert.witness["rank_kappa"] == 0
    assert cert.witness["rank_d"] == basis_H(2, 2, 2).dim


def test_S_properties():
    for n in (1, 2, 3):
        for r in (1, 2):
            cert = check_S_properties(n, r)
            assert cert.passed, cert.witness
    cert = check_S_properties(2, 3)
    assert cert.witness["sdeg_characterizes_0forms"]
    assert cert.witness["top_forms_equal_P"]


def test_S_vector_proxies():
    for r in (1, 2):
        assert check_S_vector_proxies(r).passed


def test_origin_independence():
    assert check_origin_independence("Pminus", 2, 2, 1).passed
    assert check_origin_independence("S", 3, 1, 1).passed


def test_certificate_serialization():
    cert = Certificate("demo", {"n": 2}, "pass", {"x": 1})
    doc = json.loads(cert.to_json())
    assert doc == {"claim": "demo", "params": {"n": 2}, "verdict": "pass",
                   "witness": {"x": 1}}
    text = certificates_to_jsonl([cert, cert])
    assert text.count("\n") == 2
    tsv = summary_tsv([cert])
    assert tsv.splitlines()[0] == "claim\tparams\tverdict"
    assert "demo" in tsv


def test_certificates_deterministic():
    a = check_exactness("Pminus", 2, 2)
    b = check_exactness("Pminus", 2, 2)
    assert a.to_json() == b.to_json()
