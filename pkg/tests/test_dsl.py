import random
import string
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from normid import (
    ParseError,
    SignedIdentity,
    SignedTerm,
    frechet,
    mask_of,
    parallelogram,
    parse,
    plain_as_signed,
    serialize,
)

from helpers import random_signed


# ---------------------------------------------------------------------------
# parsing


def test_parse_parallelogram_text():
    n, sid = parse("N{1,2} + N{1,-2} - 2*N{1} - 2*N{2} = 0")
    assert n == 2
    assert sid == parallelogram()


def test_parse_header_overrides_inferred_n():
    n, sid = parse("n = 5; N{1,2,3}")
    assert n == 5
    assert sid.n == 5
    assert sid.coefficients() == {(mask_of([1, 2, 3]), 0): Fraction(1)}


def test_parse_without_header_infers_max_index():
    n, sid = parse("N{2,7}")
    assert n == 7


def test_parse_signed_atom():
    _, sid = parse("N{1,-2,3}")
    assert sid.coefficients() == {(mask_of([1, 3]), mask_of([2])): Fraction(1)}


def test_parse_coefficients():
    _, sid = parse("1/2*N{1} - 3*N{2} + -2/3*N{3}")
    assert sid.coefficients() == {
        (mask_of([1]), 0): Fraction(1, 2),
        (mask_of([2]), 0): Fraction(-3),
        (mask_of([3]), 0): Fraction(-2, 3),
    }


def test_parse_zero_coefficient_counts_for_n_but_not_terms():
    n, sid = parse("0*N{4} + N{1}")
    assert n == 4
    assert sid.coefficients() == {(mask_of([1]), 0): Fraction(1)}


def test_parse_is_whitespace_insensitive():
    a = parse("N{1,2}+N{1,-2}-2*N{1}-2*N{2}=0")
    b = parse("  N{ 1 , 2 }\n + N{ 1 , - 2 }\n - 2 * N{1} - 2*N{2}\n = 0\n")
    assert a == b


@pytest.mark.parametrize(
    "text,line,column,needle",
    [
        ("N{1,1}", 1, 5, "duplicate"),
        ("1/2*N{1,1}", 1, 9, "duplicate"),
        ("N{1,-1}", 1, 5, "duplicate"),
        ("N{0}", 1, 3, "positive"),
        ("N{1,2", 1, 6, "expected"),
        ("Q{1}", 1, 1, "expected 'N'"),
        ("", 1, 1, "expected 'N'"),
        ("N{1} = 5", 1, 8, "must be 0"),
        ("N{1} junk", 1, 6, "end of input"),
        ("1/0*N{1}", 1, 3, "zero denominator"),
        ("n = 2; N{1,3}", 1, 12, "exceeds declared"),
        ("n = 0; N{1}", 1, 5, "header"),
        ("n 5; N{1}", 1, 3, "expected '='"),
        ("N{64}", 1, 3, "exceeds"),
        ("-N{1}", 1, 2, "digit"),
        ("N{1} +", 1, 7, "expected 'N'"),
    ],
)
def test_parse_errors_carry_positions(text, line, column, needle):
    with pytest.raises(ParseError) as excinfo:
        parse(text)
    err = excinfo.value
    assert (err.line, err.column) == (line, column)
    assert needle in err.message


def test_parse_error_positions_span_lines():
    with pytest.raises(ParseError) as excinfo:
        parse("N{1,2}\n+ Q{1}")
    assert (excinfo.value.line, excinfo.value.column) == (2, 3)


def test_parse_error_reports_provenance():
    with pytest.raises(ParseError) as excinfo:
        parse("N{0}", source="bad.nid")
    assert str(excinfo.value).startswith("bad.nid:1:3:")


# ---------------------------------------------------------------------------
# serialization


def test_serialize_frechet_golden():
    text = serialize(3, plain_as_signed(frechet()))
    assert text == "N{1,2,3} - N{1,2} - N{1,3} - N{2,3} + N{1} + N{2} + N{3} = 0"


def test_serialize_parallelogram_golden():
    assert (
        serialize(2, parallelogram())
        == "N{1,2} + N{1,-2} - 2*N{1} - 2*N{2} = 0"
    )


def test_serialize_emits_header_only_when_needed():
    sid = SignedIdentity(4, [SignedTerm(mask_of([1]), 0, 1)])
    assert serialize(4, sid) == "n = 4; N{1} = 0"
    sid2 = SignedIdentity(1, [SignedTerm(mask_of([1]), 0, 1)])
    assert serialize(1, sid2) == "N{1} = 0"


def test_serialize_leading_negative_coefficient():
    sid = SignedIdentity(1, [SignedTerm(mask_of([1]), 0, -1)])
    assert serialize(1, sid) == "-1*N{1} = 0"
    n, parsed = parse(serialize(1, sid))
    assert parsed == sid


def test_serialize_empty_identity_round_trips():
    sid = SignedIdentity(3, [])
    text = serialize(3, sid)
    n, parsed = parse(text)
    assert n == 3
    assert parsed.coefficients() == {}


def test_serialize_latex():
    text = serialize(2, parallelogram(), "latex")
    assert r"\left\lVert x_{1} - x_{2} \right\rVert^2" in text
    assert text.endswith("= 0")


def test_serialize_json_matches_identity_schema():
    import json

    import jsonschema
    from importlib import resources

    schema = json.loads(
        resources.files("normid").joinpath("run_report.schema.json").read_text()
    )
    payload = json.loads(serialize(2, parallelogram(), "json"))
    identity_schema = dict(schema["$defs"]["identity"])
    identity_schema["$defs"] = schema["$defs"]
    jsonschema.validate(payload, identity_schema)
    assert payload["n"] == 2
    assert payload["terms"][0] == {"coeff": "1", "plus": [1, 2], "minus": []}


def test_serialize_rejects_unknown_format():
    with pytest.raises(ValueError):
        serialize(2, parallelogram(), "yaml")


def test_serialize_order_is_deterministic():
    # Construction order must not leak into the text.
    terms = [
        SignedTerm(mask_of([2]), 0, 2),
        SignedTerm(mask_of([1, 2]), 0, 1),
        SignedTerm(mask_of([1]), 0, 2),
    ]
    a = serialize(2, SignedIdentity(2, terms))
    b = serialize(2, SignedIdentity(2, list(reversed(terms))))
    assert a == b == "N{1,2} + 2*N{1} + 2*N{2} = 0"


# ---------------------------------------------------------------------------
# round trips and fuzz


def test_round_trip_seeded_random_identities():
    rng = random.Random(83)
    for _ in range(200):
        sid = random_signed(rng, max_n=6, max_terms=8)
        text = serialize(sid.n, sid)
        n, parsed = parse(text)
        assert (n, parsed) == (sid.n, sid), text


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_round_trip_hypothesis(data):
    n = data.draw(st.integers(1, 8))
    n_terms = data.draw(st.integers(1, 8))
    terms = []
    for _ in range(n_terms):
        support = data.draw(st.integers(1, (1 << n) - 1))
        plus = data.draw(st.integers(0, (1 << n) - 1)) & support
        coeff = Fraction(
            data.draw(st.integers(-99, 99)), data.draw(st.integers(1, 99))
        )
        terms.append(SignedTerm(plus, support & ~plus, coeff))
    sid = SignedIdentity(n, terms)
    round_tripped = parse(serialize(n, sid))
    assert round_tripped == (n, sid)


def _mutate(rng: random.Random, text: str) -> str:
    choice = rng.randrange(5)
    if choice == 0 and text:
        cut = rng.randrange(len(text))
        return text[:cut]
    if choice == 1:
        pos = rng.randrange(len(text) + 1)
        junk = rng.choice(string.printable)
        return text[:pos] + junk + text[pos:]
    if choice == 2 and text:
        pos = rng.randrange(len(text))
        return text[:pos] + rng.choice("+-*/{},=N0123456789") + text[pos + 1 :]
    if choice == 3 and len(text) > 2:
        i, j = sorted(rng.randrange(len(text)) for _ in range(2))
        return text[:i] + text[j:]
    return text + rng.choice(["+", "N{", "= 0 = 0", "}"])


def test_fuzzed_inputs_never_crash():
    rng = random.Random(89)
    seeds = [
        serialize(sid.n, sid)
        for sid in (random_signed(rng, max_n=5, max_terms=5) for _ in range(40))
    ]
    for _ in range(1000):
        text = rng.choice(seeds)
        for _ in range(rng.randint(1, 4)):
            text = _mutate(rng, text)
        try:
            parse(text)
        except ParseError as err:
            assert err.line >= 1 and err.column >= 1
