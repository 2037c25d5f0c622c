"""Parser for the playbook text format.

Grammar (UTF-8, LF newlines, `#` comments to end of line):

    file      := metadata? block*
    metadata  := "playbook" STRING "version" STRING
    block     := "stratagem" ID "{" field* "}"
               | "play" STRING "{" playfield* "}"
    field     := FIELDNAME ":" value
    value     := STRING | NUMBER | "[" entry ("," entry)* "]" | "[" "]"
    entry     := STRING | KIND "(" INTENSITY "," STRING ")"

IDs are dot-separated name segments. Strings are double-quoted with `\\"`
and `\\\\` escapes. Numbers are nonnegative integers.

Error codes:
    E-SYN-001 unexpected token        E-SYN-002 unexpected end of input
    E-SYN-003 unknown field name      E-SYN-004 invalid value
    E-SYN-005 bad string escape       E-DUP-001 duplicate id
    E-DUP-002 duplicate field
"""

from __future__ import annotations

from dataclasses import dataclass

from redblue.playbook.model import (
    AuthorizationLevel,
    Diagnostic,
    EffectKind,
    EffectSpec,
    Intensity,
    ParamKind,
    Play,
    PlayParam,
    Playbook,
    Severity,
    SideHint,
    StratagemBlock,
    StratagemId,
    is_valid_stratagem_text,
    sort_diagnostics,
)
from redblue.playbook.queries import validate

BLOCK_FIELDS = (
    "description",
    "tactical",
    "infrastructure",
    "requires",
    "goals",
    "adversary",
    "effects_on_adversary",
    "limits",
    "implications",
    "red_use",
    "blue_counter",
)

PLAY_FIELDS = (
    "name",
    "side",
    "stratagems",
    "params",
    "tags",
    "auth",
    "duration",
    "jitter",
    "effects",
    "counters",
)

_LIST_BLOCK_FIELDS = {"tactical", "goals"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "string" | "number" | punctuation | "eof"
    text: str
    line: int
    column: int


class _LexError(Exception):
    def __init__(self, diag: Diagnostic):
        super().__init__(diag.message)
        self.diag = diag


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch in "{}[](),:":
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            buf: list[str] = []
            while True:
                if i >= n or source[i] == "\n":
                    raise _LexError(
                        Diagnostic(
                            "E-SYN-002",
                            Severity.ERROR,
                            start_line,
                            start_col,
                            "unterminated string",
                        )
                    )
                c = source[i]
                if c == "\\":
                    if i + 1 >= n or source[i + 1] not in '"\\':
                        raise _LexError(
                            Diagnostic(
                                "E-SYN-005",
                                Severity.ERROR,
                                line,
                                col,
                                "bad string escape (only \\\" and \\\\ allowed)",
                            )
                        )
                    buf.append(source[i + 1])
                    i += 2
                    col += 2
                    continue
                if c == '"':
                    i += 1
                    col += 1
                    break
                buf.append(c)
                i += 1
                col += 1
            tokens.append(_Token("string", "".join(buf), start_line, start_col))
            continue
        if ch.isdigit():
            start_col = col
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(_Token("number", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            start_col = col
            j = i
            while j < n and (source[j].isalnum() or source[j] in "._-"):
                j += 1
            tokens.append(_Token("ident", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        raise _LexError(
            Diagnostic(
                "E-SYN-001", Severity.ERROR, line, col, f"unexpected character {ch!r}"
            )
        )
    tokens.append(_Token("eof", "", line, col))
    return tokens


@dataclass
class ParseResult:
    """Outcome of parsing: a playbook when structure was recoverable, plus
    any diagnostics. `ok` means no Error-severity diagnostics."""

    playbook: Playbook | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.playbook is not None and not any(
            d.is_error for d in self.diagnostics
        )


class _RecoverySkip(Exception):
    """Raised to abandon the current block and resync at the next one."""


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.diags: list[Diagnostic] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, code: str, tok: _Token, message: str) -> None:
        self.diags.append(Diagnostic(code, Severity.ERROR, tok.line, tok.column, message))

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            if tok.kind == "eof":
                self.error("E-SYN-002", tok, f"unexpected end of input, expected {what}")
            else:
                self.error("E-SYN-001", tok, f"expected {what}, got {tok.text!r}")
            raise _RecoverySkip()
        return self.advance()

    def resync(self) -> None:
        # Skip to the next top-level block keyword or EOF.
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return
            if tok.kind == "{":
                depth += 1
            elif tok.kind == "}":
                if depth > 0:
                    depth -= 1
                    self.advance()
                    return
            elif depth == 0 and tok.kind == "ident" and tok.text in ("stratagem", "play"):
                return
            self.advance()

    # -- file ---------------------------------------------------------------

    def parse_file(self) -> Playbook:
        name, version = "", ""
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "playbook":
            self.advance()
            try:
                name = self.expect("string", "playbook name string").text
                kw = self.expect("ident", '"version"')
                if kw.text != "version":
                    self.error("E-SYN-001", kw, f'expected "version", got {kw.text!r}')
                    raise _RecoverySkip()
                version = self.expect("string", "version string").text
            except _RecoverySkip:
                self.resync()

        blocks: list[StratagemBlock] = []
        plays: list[Play] = []
        seen_blocks: dict[str, StratagemBlock] = {}
        seen_plays: dict[str, Play] = {}
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                break
            if tok.kind != "ident" or tok.text not in ("stratagem", "play"):
                self.error(
                    "E-SYN-001", tok, f"expected 'stratagem' or 'play', got {tok.text!r}"
                )
                self.advance()
                self.resync()
                continue
            try:
                if tok.text == "stratagem":
                    block = self.parse_stratagem()
                    if block is not None:
                        key = str(block.id)
                        if key in seen_blocks:
                            self.diags.append(
                                Diagnostic(
                                    "E-DUP-001",
                                    Severity.ERROR,
                                    block.line,
                                    block.column,
                                    f"duplicate stratagem id {key}",
                                )
                            )
                        else:
                            seen_blocks[key] = block
                            blocks.append(block)
                else:
                    play = self.parse_play()
                    if play is not None:
                        if play.id in seen_plays:
                            self.diags.append(
                                Diagnostic(
                                    "E-DUP-001",
                                    Severity.ERROR,
                                    play.line,
                                    play.column,
                                    f"duplicate play id {play.id}",
                                )
                            )
                        else:
                            seen_plays[play.id] = play
                            plays.append(play)
            except _RecoverySkip:
                self.resync()
        return Playbook(name=name, version=version, blocks=tuple(blocks), plays=tuple(plays))

    # -- stratagem blocks ---------------------------------------------------

    def parse_stratagem(self) -> StratagemBlock | None:
        kw = self.advance()  # "stratagem"
        id_tok = self.expect("ident", "stratagem id")
        if not is_valid_stratagem_text(id_tok.text):
            self.error("E-SYN-004", id_tok, f"invalid stratagem id {id_tok.text!r}")
            raise _RecoverySkip()
        sid = StratagemId.parse(id_tok.text)
        self.expect("{", "'{'")
        fields: dict[str, object] = {}
        while True:
            tok = self.peek()
            if tok.kind == "}":
                self.advance()
                break
            if tok.kind == "eof":
                self.error("E-SYN-002", tok, "unclosed stratagem block")
                raise _RecoverySkip()
            fname_tok = self.expect("ident", "field name")
            self.expect(":", "':'")
            if fname_tok.text not in BLOCK_FIELDS:
                self.error(
                    "E-SYN-003", fname_tok, f"unknown stratagem field {fname_tok.text!r}"
                )
                self.skip_value()
                continue
            value = self.parse_text_value(list_ok=True)
            if fname_tok.text in fields:
                self.error(
                    "E-DUP-002", fname_tok, f"duplicate field {fname_tok.text!r}"
                )
                continue
            fields[fname_tok.text] = value

        def text(fname: str) -> str:
            v = fields.get(fname, "")
            if isinstance(v, tuple):
                return " ".join(v)
            return v  # type: ignore[return-value]

        def texts(fname: str) -> tuple[str, ...]:
            v = fields.get(fname, ())
            if isinstance(v, str):
                return (v,) if v else ()
            return v  # type: ignore[return-value]

        return StratagemBlock(
            id=sid,
            description=text("description"),
            tactical_implementations=texts("tactical"),
            infrastructure_properties=text("infrastructure"),
            technological_requirements=text("requires"),
            goals_satisfied=texts("goals"),
            adversary_properties=text("adversary"),
            effects_on_adversary=text("effects_on_adversary"),
            limitations_assumptions=text("limits"),
            implications=text("implications"),
            example_red_use=text("red_use"),
            example_blue_countermeasure=text("blue_counter"),
            line=kw.line,
            column=kw.column,
        )

    def parse_text_value(self, list_ok: bool) -> str | tuple[str, ...]:
        tok = self.peek()
        if tok.kind == "string":
            return self.advance().text
        if tok.kind == "[" and list_ok:
            return tuple(self.parse_string_list())
        self.error("E-SYN-004", tok, "expected string or string list")
        raise _RecoverySkip()

    def parse_string_list(self) -> list[str]:
        self.expect("[", "'['")
        items: list[str] = []
        if self.peek().kind == "]":
            self.advance()
            return items
        while True:
            items.append(self.expect("string", "string").text)
            tok = self.peek()
            if tok.kind == ",":
                self.advance()
                continue
            self.expect("]", "']' or ','")
            return items

    def skip_value(self) -> None:
        tok = self.peek()
        if tok.kind == "[":
            depth = 0
            while True:
                t = self.advance()
                if t.kind == "[":
                    depth += 1
                elif t.kind == "]":
                    depth -= 1
                    if depth == 0:
                        return
                elif t.kind == "eof":
                    return
        elif tok.kind in ("string", "number", "ident"):
            self.advance()

    # -- plays ----------------------------------------------------------------

    def parse_play(self) -> Play | None:
        kw = self.advance()  # "play"
        id_tok = self.expect("string", "play id string")
        self.expect("{", "'{'")
        raw: dict[str, object] = {}
        while True:
            tok = self.peek()
            if tok.kind == "}":
                self.advance()
                break
            if tok.kind == "eof":
                self.error("E-SYN-002", tok, "unclosed play block")
                raise _RecoverySkip()
            fname_tok = self.expect("ident", "field name")
            self.expect(":", "':'")
            fname = fname_tok.text
            if fname not in PLAY_FIELDS:
                self.error("E-SYN-003", fname_tok, f"unknown play field {fname!r}")
                self.skip_value()
                continue
            if fname in raw:
                self.error("E-DUP-002", fname_tok, f"duplicate field {fname!r}")
                self.skip_value()
                continue
            raw[fname] = self.parse_play_value(fname, fname_tok)

        return self.build_play(id_tok, kw, raw)

    def parse_play_value(self, fname: str, fname_tok: _Token) -> object:
        if fname == "name":
            return self.expect("string", "string").text
        if fname == "side":
            tok = self.expect("string", "side string")
            try:
                return SideHint(tok.text)
            except ValueError:
                self.error("E-SYN-004", tok, f"invalid side {tok.text!r}")
                raise _RecoverySkip()
        if fname == "auth":
            tok = self.expect("string", "authorization string")
            try:
                return AuthorizationLevel.from_label(tok.text)
            except ValueError:
                self.error("E-SYN-004", tok, f"invalid authorization level {tok.text!r}")
                raise _RecoverySkip()
        if fname in ("duration", "jitter"):
            tok = self.expect("number", "nonnegative integer")
            return int(tok.text)
        if fname == "effects":
            return tuple(self.parse_effect_list())
        if fname in ("stratagems", "tags", "counters", "params"):
            tok = self.peek()
            items = self.parse_string_list() if tok.kind == "[" else [self.expect("string", "string").text]
            if fname == "params":
                return tuple(self.parse_param(p, fname_tok) for p in items)
            if fname == "tags":
                return tuple(items)
            out = []
            for item in items:
                if not is_valid_stratagem_text(item):
                    self.error("E-SYN-004", fname_tok, f"invalid stratagem id {item!r}")
                    continue
                out.append(StratagemId.parse(item))
            return tuple(out)
        raise AssertionError(fname)

    def parse_param(self, text: str, at: _Token) -> PlayParam:
        name, sep, kind_text = text.partition(":")
        kind = None
        if sep:
            try:
                kind = ParamKind(kind_text)
            except ValueError:
                kind = None
        if not name or kind is None:
            self.error("E-SYN-004", at, f"invalid parameter spec {text!r}")
            raise _RecoverySkip()
        return PlayParam(name=name, kind=kind)

    def parse_effect_list(self) -> list[EffectSpec]:
        self.expect("[", "'['")
        effects: list[EffectSpec] = []
        if self.peek().kind == "]":
            self.advance()
            return effects
        while True:
            kind_tok = self.expect("ident", "effect kind")
            try:
                kind = EffectKind(kind_tok.text)
            except ValueError:
                self.error("E-SYN-004", kind_tok, f"unknown effect kind {kind_tok.text!r}")
                raise _RecoverySkip()
            self.expect("(", "'('")
            mag_tok = self.expect("ident", "intensity")
            try:
                magnitude = Intensity.from_label(mag_tok.text)
            except ValueError:
                self.error("E-SYN-004", mag_tok, f"invalid intensity {mag_tok.text!r}")
                raise _RecoverySkip()
            self.expect(",", "','")
            selector = self.expect("string", "target selector string").text
            self.expect(")", "')'")
            effects.append(EffectSpec(kind=kind, magnitude=magnitude, target_selector=selector))
            tok = self.peek()
            if tok.kind == ",":
                self.advance()
                continue
            self.expect("]", "']' or ','")
            return effects

    def build_play(self, id_tok: _Token, kw: _Token, raw: dict[str, object]) -> Play:
        return Play(
            id=id_tok.text,
            name=raw.get("name", ""),  # type: ignore[arg-type]
            side_hint=raw.get("side", SideHint.EITHER),  # type: ignore[arg-type]
            stratagems=raw.get("stratagems", ()),  # type: ignore[arg-type]
            parameters=raw.get("params", ()),  # type: ignore[arg-type]
            situation_tags=raw.get("tags", ()),  # type: ignore[arg-type]
            required_authorization=raw.get("auth"),  # type: ignore[arg-type]
            base_duration_hours=raw.get("duration", 1),  # type: ignore[arg-type]
            duration_jitter_hours=raw.get("jitter", 0),  # type: ignore[arg-type]
            effects=raw.get("effects", ()),  # type: ignore[arg-type]
            counters=raw.get("counters", ()),  # type: ignore[arg-type]
            line=kw.line,
            column=kw.column,
        )


def parse_playbook(source: str) -> ParseResult:
    """Parse playbook text.

    Returns a result whose playbook is structurally complete whenever the
    source was recoverable; duplicate definitions keep the first occurrence
    and produce an E-DUP-001 diagnostic at the second. Field values are
    preserved byte-for-byte (string escapes resolved).
    """
    try:
        tokens = _lex(source)
    except _LexError as exc:
        return ParseResult(playbook=None, diagnostics=[exc.diag])
    parser = _Parser(tokens)
    pb = parser.parse_file()
    # The playbook is kept even when diagnostics exist (first definition wins
    # on duplicates, damaged blocks are dropped) so tooling can keep working.
    return ParseResult(playbook=pb, diagnostics=sort_diagnostics(parser.diags))


def load_playbook(source: str) -> ParseResult:
    """Parse then semantically validate; the one-call pipeline used by the
    CLI and the service. Diagnostics from both stages are merged."""
    result = parse_playbook(source)
    if result.playbook is None:
        return result
    diags = list(result.diagnostics)
    diags.extend(validate(result.playbook))
    return ParseResult(playbook=result.playbook, diagnostics=sort_diagnostics(diags))
