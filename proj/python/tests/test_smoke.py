import json

import pytest

import cubicbsd


def test_omega():
    assert cubicbsd.omega(128).startswith("3.059908")


def test_family():
    assert cubicbsd.family_primes(3, 100) == [5, 11, 23, 29, 41, 47, 59, 83]
    assert cubicbsd.is_family_prime(113)
    assert not cubicbsd.is_family_prime(7)


def test_symbol():
    # 5 + 6w has norm 31 and 2 is a cube mod 31
    assert cubicbsd.cubic_residue_symbol(2, 0, 5, 6) == 0
    assert cubicbsd.cubic_residue_symbol(3, 0, 5, 6) in (1, 2)
    assert cubicbsd.cubic_residue_symbol(0, 0, 5, 6) is None


def test_congruence_p5():
    r = cubicbsd.congruence(5)
    assert r["all_pass"]
    assert r["algebraic_parts"][10] == 3
    assert r["max_error_bound"] < 1e-6


def test_lvalue_matches_oracle():
    v = cubicbsd.lvalue(5, 10)
    o = cubicbsd.oracle_lvalue(10)
    assert v["algebraic_part"] == 3
    assert abs(v["value"] - o["value"]) < 1e-8 * abs(o["value"])


def test_class_group_113():
    cg = cubicbsd.class_group(113)
    assert cg["divisors"] == [2, 2]
    assert cg["certificate"] == "proved-by-enumeration"
    assert cg["relations_verified"] == cg["relations"]
    s = cubicbsd.selmer(113)
    assert (s["k"], s["sel2_dim"], s["sha2_dim"]) == (2, 3, 2)


def test_record_roundtrip():
    line = cubicbsd.record_line(11, 256, 20)
    assert cubicbsd.roundtrip(line) == line
    rec = cubicbsd.record(11, congruence_max=0)
    assert rec["schema_version"] == cubicbsd.SCHEMA_VERSION
    assert "congruence" not in rec


def test_errors():
    with pytest.raises(cubicbsd.UnsupportedPrime):
        cubicbsd.class_group(7)
    with pytest.raises(cubicbsd.ParseError):
        cubicbsd.roundtrip("{broken")
    with pytest.raises(cubicbsd.Error):
        cubicbsd.congruence(13)
