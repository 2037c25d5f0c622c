"""Playbook parsing, validation, serialization, and queries."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from redblue.playbook import (
    AuthorizationLevel,
    Intensity,
    Play,
    Playbook,
    SideHint,
    StratagemBlock,
    StratagemId,
    UnknownStratagemError,
    load_playbook,
    parse_playbook,
    query_plays,
    resolve_stratagem,
    serialize,
    validate,
)
from redblue.playbook.model import EffectKind, EffectSpec, ParamKind, PlayParam


# -- parsing -------------------------------------------------------------------


def test_default_playbook_parses_clean(default_playbook_text):
    result = load_playbook(default_playbook_text)
    assert result.ok
    assert len(result.playbook.blocks) >= 20
    assert len(result.playbook.plays) >= 10


def test_sub_stratagem_parent_resolves(default_playbook):
    chaff = resolve_stratagem(default_playbook, StratagemId.parse("Deceive.Chaff"))
    parent = resolve_stratagem(default_playbook, chaff.id.parent)
    assert str(parent.id) == "Deceive"


def test_empty_source_is_empty_playbook():
    result = parse_playbook("")
    assert result.ok
    assert result.playbook.blocks == ()
    assert result.playbook.plays == ()
    assert result.diagnostics == []


def test_duplicate_block_single_diagnostic():
    source = (
        'playbook "t" version "1"\n'
        'stratagem Dodge { description: "one" }\n'
        'stratagem Dodge { description: "two" }\n'
    )
    result = parse_playbook(source)
    errors = [d for d in result.diagnostics if d.is_error]
    assert len(errors) == 1
    assert errors[0].code == "E-DUP-001"
    assert errors[0].line == 3  # at the second definition
    # first definition wins
    assert result.playbook.blocks[0].description == "one"


@pytest.mark.parametrize(
    "source,code",
    [
        ('playbook "t" version "1"\nstratagem A { bogus: "x" }', "E-SYN-003"),
        ('playbook "t" version "1"\nstratagem A { description: "unterminated', "E-SYN-002"),
        ('playbook "t" version "1"\nstratagem A { description: "bad \\n esc" }', "E-SYN-005"),
        ('playbook "t" version "1"\nstratagem A { description: "x"', "E-SYN-002"),
        ('playbook "t" version "1"\nplay "p" { effects: [Explode(Low, "x")] }', "E-SYN-004"),
        ('playbook "t" version "1"\nplay "p" { auth: "Emperor" }', "E-SYN-004"),
        ("playbook", "E-SYN-002"),
        ("@", "E-SYN-001"),
    ],
)
def test_syntax_errors(source, code):
    result = parse_playbook(source)
    assert any(d.code == code for d in result.diagnostics), [
        d.render() for d in result.diagnostics
    ]


def test_diagnostics_have_line_and_column():
    result = parse_playbook('playbook "t" version "1"\n\nstratagem A { bogus: "x" }')
    diag = result.diagnostics[0]
    assert diag.line == 3
    assert diag.column > 0


def test_diagnostic_rendering_is_deterministic():
    source = (
        'playbook "t" version "1"\n'
        'stratagem Monitor.Watch { description: "d" }\n'
        'play "p" { stratagems: ["Ghost"] }\n'
    )
    first = [d.render() for d in load_playbook(source).diagnostics]
    second = [d.render() for d in load_playbook(source).diagnostics]
    assert first == second


# -- validation ----------------------------------------------------------------


def test_unresolved_parent_flagged():
    source = 'playbook "t" version "1"\nstratagem Monitor.Eavesdrop { description: "d" }'
    result = load_playbook(source)
    errors = [d for d in result.diagnostics if d.is_error]
    assert [d.code for d in errors] == ["E-TAX-001"]
    assert "Monitor" in errors[0].message


def test_resolving_counter_reference_is_clean(default_playbook):
    # fortify-posture counters Block.Cutoff, which exists: no E-PLY-002.
    diags = validate(default_playbook)
    assert not any(d.code == "E-PLY-002" for d in diags)


def test_missing_auth_flagged():
    source = (
        'playbook "t" version "1"\n'
        'stratagem Fortify { description: "d" }\n'
        'play "p" { name: "P" stratagems: ["Fortify"] tags: ["standing"] }\n'
    )
    result = load_playbook(source)
    assert any(d.code == "E-PLY-003" and d.is_error for d in result.diagnostics)


def test_injected_violations_counted_exactly():
    base = (
        'playbook "t" version "1"\n'
        'stratagem Fortify { description: "d" }\n'
        'stratagem Monitor { description: "d" }\n'
        'play "ok" { name: "Ok" stratagems: ["Fortify"] tags: ["standing"] auth: "Operator" }\n'
    )
    injections = [
        'stratagem Ghost.Child { description: "orphan" }\n',  # E-TAX-001
        'play "bad-ref" { name: "B" stratagems: ["Nnn"] tags: ["t"] auth: "Operator" }\n',  # E-PLY-001
        'play "bad-counter" { name: "C" stratagems: ["Fortify"] tags: ["t"] auth: "Operator" counters: ["Zzz"] }\n',  # E-PLY-002
        'play "no-auth" { name: "D" stratagems: ["Monitor"] tags: ["t"] }\n',  # E-PLY-003
        'play "no-strat" { name: "E" tags: ["t"] auth: "Operator" }\n',  # E-PLY-004
    ]
    rng = random.Random(7)
    for _ in range(25):
        k = rng.randint(1, len(injections))
        chosen = rng.sample(injections, k)
        source = base + "".join(chosen)
        result = load_playbook(source)
        errors = [d for d in result.diagnostics if d.is_error]
        assert len(errors) == k, (k, [d.render() for d in errors])


def test_duplicate_injections_counted_exactly():
    base = 'playbook "t" version "1"\nstratagem Fortify { description: "d" }\n'
    for k in (1, 2, 3):
        source = base + 'stratagem Fortify { description: "dup" }\n' * k
        result = load_playbook(source)
        errors = [d for d in result.diagnostics if d.is_error]
        assert len(errors) == k
        assert all(d.code == "E-DUP-001" for d in errors)


# -- serialization --------------------------------------------------------------


def test_default_round_trip_fixpoint(default_playbook, default_playbook_text):
    canon = serialize(default_playbook)
    reparsed = parse_playbook(canon)
    assert reparsed.ok
    assert reparsed.playbook == default_playbook
    assert serialize(reparsed.playbook) == canon


def test_shuffled_fields_canonicalize():
    shuffled = (
        'playbook "t" version "1"\n'
        "stratagem Dodge {\n"
        '  red_use: "r"\n'
        '  description: "desc"\n'
        '  tactical: ["t1"]\n'
        "}\n"
    )
    canonical = (
        'playbook "t" version "1"\n'
        "\n"
        "stratagem Dodge {\n"
        '  description: "desc"\n'
        '  tactical: ["t1"]\n'
        '  red_use: "r"\n'
        "}\n"
    )
    result = parse_playbook(shuffled)
    assert result.ok
    assert serialize(result.playbook) == canonical


def test_empty_playbook_serializes_to_header_only():
    text = serialize(Playbook(name="x", version="2"))
    assert text == 'playbook "x" version "2"\n'


_FIELD_TEXT = st.text(
    alphabet=st.characters(min_codepoint=0x20, max_codepoint=0x7E), max_size=40
)
_SEGMENT = st.from_regex(r"[A-Z][a-z0-9]{0,6}", fullmatch=True)


@st.composite
def playbooks(draw):
    n_blocks = draw(st.integers(1, 5))
    roots = []
    blocks = []
    for i in range(n_blocks):
        seg = draw(_SEGMENT) + str(i)
        roots.append(seg)
        blocks.append(
            StratagemBlock(
                id=StratagemId.parse(seg),
                description=draw(_FIELD_TEXT.filter(bool)),
                tactical_implementations=tuple(draw(st.lists(_FIELD_TEXT, max_size=2))),
                limitations_assumptions=draw(_FIELD_TEXT),
            )
        )
    # a couple of children to exercise the taxonomy
    for i in range(draw(st.integers(0, 2))):
        parent = draw(st.sampled_from(roots))
        child = f"{parent}.{draw(_SEGMENT)}{i}"
        blocks.append(
            StratagemBlock(id=StratagemId.parse(child), description=draw(_FIELD_TEXT.filter(bool)))
        )
    plays = []
    for i in range(draw(st.integers(0, 4))):
        effects = tuple(
            EffectSpec(
                kind=draw(st.sampled_from(list(EffectKind))),
                magnitude=draw(st.sampled_from(list(Intensity))),
                target_selector=draw(_FIELD_TEXT),
            )
            for _ in range(draw(st.integers(0, 2)))
        )
        plays.append(
            Play(
                id=f"play-{i}",
                name=draw(_FIELD_TEXT),
                side_hint=draw(st.sampled_from(list(SideHint))),
                stratagems=(StratagemId.parse(draw(st.sampled_from(roots))),),
                parameters=tuple(
                    PlayParam(name=f"p{j}", kind=draw(st.sampled_from(list(ParamKind))))
                    for j in range(draw(st.integers(0, 2)))
                ),
                situation_tags=tuple(draw(st.lists(st.sampled_from(["standing", "under-attack", "x-tag"]), max_size=2, unique=True))),
                required_authorization=draw(st.sampled_from(list(AuthorizationLevel))),
                base_duration_hours=draw(st.integers(1, 200)),
                duration_jitter_hours=draw(st.integers(0, 10)),
                effects=effects,
                counters=(),
            )
        )
    return Playbook(
        name=draw(_FIELD_TEXT), version=draw(_FIELD_TEXT), blocks=tuple(blocks), plays=tuple(plays)
    )


@settings(max_examples=60, deadline=None)
@given(playbooks())
def test_round_trip_property(pb):
    canon = serialize(pb)
    reparsed = parse_playbook(canon)
    assert reparsed.playbook is not None
    assert not any(d.is_error for d in reparsed.diagnostics)
    assert reparsed.playbook == pb
    assert serialize(reparsed.playbook) == canon


# -- queries ---------------------------------------------------------------------


def test_query_monitor_increase_includes_expected_plays(default_playbook):
    plays = query_plays(
        default_playbook, ["adversary-monitor-increase"], AuthorizationLevel.NATIONAL
    )
    names = {p.name for p in plays}
    assert "Raise Monitor.Watch" in names
    assert "Fortify to Medium" in names


def test_query_empty_tags_empty_result(default_playbook):
    assert query_plays(default_playbook, [], AuthorizationLevel.NATIONAL) == []


def test_query_lower_auth_is_subset(default_playbook):
    tags = ["adversary-monitor-increase", "standing", "under-attack"]
    national = {p.id for p in query_plays(default_playbook, tags, AuthorizationLevel.NATIONAL)}
    operator = {p.id for p in query_plays(default_playbook, tags, AuthorizationLevel.OPERATOR)}
    assert operator <= national


@settings(max_examples=50, deadline=None)
@given(
    playbooks(),
    st.lists(st.sampled_from(["standing", "under-attack", "x-tag"]), max_size=3),
    st.sampled_from(list(AuthorizationLevel)),
    st.sampled_from(list(AuthorizationLevel)),
)
def test_query_auth_monotonicity_property(pb, tags, a, b):
    lo, hi = min(a, b), max(a, b)
    low_ids = {p.id for p in query_plays(pb, tags, lo)}
    high_ids = {p.id for p in query_plays(pb, tags, hi)}
    assert low_ids <= high_ids


def test_query_ordering_by_matches_then_id():
    blocks = (StratagemBlock(id=StratagemId.parse("Fortify"), description="d"),)
    mk = lambda pid, tags: Play(
        id=pid,
        name=pid,
        stratagems=(StratagemId.parse("Fortify"),),
        situation_tags=tags,
        required_authorization=AuthorizationLevel.OPERATOR,
    )
    pb = Playbook(
        name="t",
        version="1",
        blocks=blocks,
        plays=(
            mk("zz-two-tags", ("a", "b")),
            mk("aa-one-tag", ("a",)),
            mk("mm-two-tags", ("a", "b")),
        ),
    )
    result = [p.id for p in query_plays(pb, ["a", "b"], AuthorizationLevel.NATIONAL)]
    assert result == ["mm-two-tags", "zz-two-tags", "aa-one-tag"]


def test_resolve_dodge_tactical_text(default_playbook):
    block = resolve_stratagem(default_playbook, StratagemId.parse("Dodge"))
    assert any(
        "Change IP address of target host" in t for t in block.tactical_implementations
    )


def test_resolve_unknown_raises(default_playbook):
    with pytest.raises(UnknownStratagemError):
        resolve_stratagem(default_playbook, StratagemId.parse("Nonexistent"))
