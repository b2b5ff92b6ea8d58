from __future__ import annotations

import pytest

from idnrobust import (
    IDN,
    IDR,
    CaseClass,
    EntityId,
    InvalidInstanceError,
    Side,
    UnknownEntityError,
    classify,
    make_idn,
    validate,
)
from idnrobust.model import require_valid

A1 = EntityId(Side.A, "a1")
B1 = EntityId(Side.B, "b1")


def codes(idn):
    return sorted(v.code for v in validate(idn).violations)


class TestEntityAndIdr:
    def test_side_is_coerced(self):
        assert EntityId("A", "x").side is Side.A

    @pytest.mark.parametrize("name", ["", "a-1", "a b", "ä"])
    def test_bad_names_rejected(self, name):
        with pytest.raises(ValueError):
            EntityId(Side.A, name)

    def test_canonical_order_puts_a_side_first(self):
        assert sorted([EntityId(Side.B, "a"), EntityId(Side.A, "z")])[0].side is Side.A

    def test_idr_needs_minterms(self):
        with pytest.raises(ValueError):
            IDR(A1, ())
        with pytest.raises(ValueError):
            IDR(A1, (frozenset(),))

    def test_idr_text(self):
        idr = IDR(A1, (frozenset({B1}), frozenset({EntityId(Side.B, "b3"), EntityId(Side.B, "b2")})))
        assert str(idr) == "a1 <- b1 + b2 b3"


class TestIdn:
    def test_accessors(self, sample):
        assert [e.name for e in sample.entities_a] == ["a1", "a2", "a3"]
        assert len(sample) == 7
        assert sample.idr("b4").minterms == (frozenset({EntityId(Side.A, "a2")}),)
        assert sample.idr("a1") is not None

    def test_resolve(self, sample):
        assert sample.resolve("b3") == EntityId(Side.B, "b3")
        assert sample.resolve(EntityId(Side.A, "a2")).name == "a2"
        with pytest.raises(UnknownEntityError):
            sample.resolve("zz")
        with pytest.raises(UnknownEntityError):
            sample.resolve(EntityId(Side.B, "a1"))

    def test_idr_lookup_of_entity_without_relation(self, no_deps):
        assert no_deps.idr("a1") is None

    def test_idrs_is_a_copy(self, sample):
        sample.idrs.clear()
        assert len(sample.idrs) == 7

    def test_structural_equality_ignores_declaration_order(self):
        x = make_idn(["a1", "a2"], ["b1"], {"a1": [["b1"]]})
        y = make_idn(["a2", "a1"], ["b1"], {"a1": [["b1"]]})
        assert x == y and hash(x) == hash(y)
        assert x != make_idn(["a1", "a2"], ["b1"])

    def test_two_idrs_for_one_target_rejected(self):
        with pytest.raises(ValueError):
            IDN([A1], [B1], [IDR(A1, ({B1},)), IDR(A1, ({B1},))])

    def test_minterms_listed_in_canonical_owner_order(self, sample):
        owners = [o.name for o, _, _ in sample.minterms()]
        assert owners == sorted(owners, key=lambda n: (n[0], n))
        assert len(sample.minterms()) == 11

    def test_make_idn_unknown_name(self):
        with pytest.raises(UnknownEntityError):
            make_idn(["a1"], ["b1"], {"a1": [["b9"]]})


class TestValidate:
    def test_sample_is_valid(self, sample):
        report = validate(sample)
        assert report.ok and len(report) == 0 and report.notes == []

    def test_unknown_and_self(self):
        b9 = EntityId(Side.B, "b9")
        idn = IDN([A1], [B1], [IDR(A1, ({A1},)), IDR(B1, ({b9},))])
        assert codes(idn) == ["self-dependency", "unknown-entity"]
        with pytest.raises(InvalidInstanceError):
            require_valid(idn)

    def test_unknown_target(self):
        idn = IDN([A1], [B1], [IDR(EntityId(Side.A, "a9"), ({B1},))])
        assert codes(idn) == ["unknown-entity"]

    def test_duplicates(self):
        idn = IDN(["x", "x"], ["x"], [])
        assert codes(idn) == ["ambiguous-name", "duplicate-entity"]

    def test_duplicate_minterm(self):
        idn = IDN([A1], [B1], [IDR(A1, ({B1}, {B1}))])
        assert codes(idn) == ["duplicate-minterm"]

    def test_same_side_is_only_a_note(self):
        idn = make_idn(["a1", "a2"], ["b1"], {"a1": [["a2"]]})
        report = validate(idn)
        assert report.ok
        assert [v.code for v in report.notes] == ["same-side"]

    def test_all_violations_are_collected(self):
        b9 = EntityId(Side.B, "b9")
        idn = IDN(["a1", "a1"], [B1], [IDR(A1, ({A1, b9}, {A1, b9}))])
        assert len(validate(idn)) == 6


class TestClassify:
    @pytest.mark.parametrize(
        "rel, expected",
        [
            ({}, CaseClass.CaseI),
            ({"a1": [["b1"]], "b1": [["a2"]]}, CaseClass.CaseI),
            ({"a1": [["b1", "b2"]]}, CaseClass.CaseII),
            ({"a1": [["b1"], ["b2"]]}, CaseClass.CaseIII),
            ({"a1": [["b1", "b2"], ["b1"]]}, CaseClass.CaseIV),
            ({"a1": [["b1", "b2"]], "b1": [["a1"], ["a2"]]}, CaseClass.CaseIV),
        ],
    )
    def test_shapes(self, rel, expected):
        assert classify(make_idn(["a1", "a2"], ["b1", "b2"], rel)) is expected

    def test_sample_is_general(self, sample):
        assert classify(sample) is CaseClass.CaseIV

    def test_invalid_instance_raises(self):
        with pytest.raises(InvalidInstanceError):
            classify(IDN([A1], [B1], [IDR(A1, ({A1},))]))
