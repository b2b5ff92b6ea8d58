from __future__ import annotations

import hashlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idnrobust import CaseClass, GenSpec, Side, classify, generate, serialize_idn, validate
from idnrobust.generator import GeneratorError

GOLDEN_SMALL = """# idn-format 1
A: a1 a2 a3
B: b1 b2 b3

a1 <- b1
a2 <- b1 b2 b3 + b2 + b1
a3 <- b2 + b1 b2 b3
b1 <- a1 a2 a3
b3 <- a1 a2 a3 + a1 a3
"""
GOLDEN_29_19_SHA256 = "925d13421118a276ccc304902c43396aafcb55ccff083de3290586e047a7fa63"


def test_frozen_output():
    assert serialize_idn(generate(GenSpec(CaseClass.CaseIV, 3, 3, seed=42))) == GOLDEN_SMALL
    text = serialize_idn(generate(GenSpec(CaseClass.CaseIV, 29, 19, seed=0)))
    assert hashlib.sha256(text.encode()).hexdigest() == GOLDEN_29_19_SHA256


def test_seed_changes_instance():
    one = generate(GenSpec(CaseClass.CaseIV, 8, 8, seed=1))
    assert one == generate(GenSpec(CaseClass.CaseIV, 8, 8, seed=1))
    assert one != generate(GenSpec(CaseClass.CaseIV, 8, 8, seed=2))


def test_probability_extremes():
    assert generate(GenSpec(CaseClass.CaseIV, 4, 4, idr_probability=0.0)).idrs == {}
    assert len(generate(GenSpec(CaseClass.CaseIV, 4, 4, idr_probability=1.0)).idrs) == 8


def test_case_string_is_accepted():
    assert GenSpec("CaseII", 2, 2).case is CaseClass.CaseII


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(size_a=0),
        dict(idr_probability=1.5),
        dict(max_minterms=0),
        dict(max_minterm_size=0),
        dict(seed=2**64),
    ],
)
def test_bad_specs(kwargs):
    base = dict(case=CaseClass.CaseIV, size_a=2, size_b=2)
    base.update(kwargs)
    with pytest.raises(GeneratorError):
        generate(GenSpec(**base))


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from(list(CaseClass)),
    st.integers(1, 8),
    st.integers(1, 8),
    st.booleans(),
    st.integers(0, 2**32),
)
def test_output_is_valid_and_in_class(case, size_a, size_b, cross_only, seed):
    idn = generate(GenSpec(case, size_a, size_b, cross_only=cross_only, seed=seed))
    report = validate(idn)
    assert report.ok
    assert not cross_only or report.notes == []
    # the requested class is an upper bound on the shape
    got = classify(idn)
    order = list(CaseClass)
    if case is CaseClass.CaseII:
        assert got in (CaseClass.CaseI, CaseClass.CaseII)
    elif case is CaseClass.CaseIII:
        assert got in (CaseClass.CaseI, CaseClass.CaseIII)
    else:
        assert order.index(got) <= order.index(case)
    assert [e.name for e in idn.entities if e.side is Side.A] == [f"a{i}" for i in range(1, size_a + 1)]
